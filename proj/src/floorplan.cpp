// Copyright 2026 The floorloc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "floorloc/floorplan.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "floorloc/error.hpp"

namespace floorloc {

bool FloorPlan::is_traversable(const Vec2& p) const {
  const Cell c = traversable.cell_of(p);
  return traversable.contains(c) && traversable.at(c) > 0.5;
}

SegmentSet FloorPlan::closed_walls() const {
  SegmentSet out = walls;
  out.segments.insert(out.segments.end(), doors.begin(), doors.end());
  return out;
}

Raster2D flood_fill(const Raster2D& blocked, const Cell& seed) {
  Raster2D filled = Raster2D::like(blocked, 0.0);
  if (!blocked.contains(seed) || blocked.at(seed) > 0.5) return filled;
  std::deque<Cell> queue{seed};
  filled.at(seed) = 1.0;
  constexpr int kDc[4] = {1, -1, 0, 0};
  constexpr int kDr[4] = {0, 0, 1, -1};
  while (!queue.empty()) {
    const Cell c = queue.front();
    queue.pop_front();
    for (int k = 0; k < 4; ++k) {
      const Cell n{c.col + kDc[k], c.row + kDr[k]};
      if (!blocked.contains(n) || filled.at(n) > 0.5 || blocked.at(n) > 0.5) continue;
      filled.at(n) = 1.0;
      queue.push_back(n);
    }
  }
  return filled;
}

FloorPlan build_floorplan(SegmentSet walls, std::vector<Segment2> doors, double resolution,
                          const Vec2& seed, int padding_cells) {
  if (walls.empty()) throw InputError("floor plan: at least one wall segment is required");
  if (!(resolution > 0.0)) throw InputError("floor plan: resolution must be positive");
  walls.frame = SegmentFrame::kFloorPlan;

  Vec2 lo = walls.segments.front().a;
  Vec2 hi = lo;
  auto extend = [&](const Segment2& s) {
    lo = lo.cwiseMin(s.a).cwiseMin(s.b);
    hi = hi.cwiseMax(s.a).cwiseMax(s.b);
  };
  for (const auto& s : walls.segments) extend(s);
  for (const auto& s : doors) extend(s);

  const Vec2 origin = lo - Vec2::Constant(padding_cells * resolution);
  const int width = static_cast<int>(std::ceil((hi.x() - origin.x()) / resolution)) + padding_cells + 1;
  const int height = static_cast<int>(std::ceil((hi.y() - origin.y()) / resolution)) + padding_cells + 1;

  FloorPlan plan;
  plan.walls = std::move(walls);
  plan.doors = std::move(doors);
  plan.seed = seed;
  plan.barrier = Raster2D(width, height, resolution, origin);
  for (const auto& s : plan.walls.segments) draw_segment(plan.barrier, s);
  plan.raster = plan.barrier;
  for (const auto& s : plan.doors) draw_segment(plan.raster, s);

  const Cell seed_cell = plan.barrier.cell_of(seed);
  if (!plan.barrier.contains(seed_cell)) throw InputError("floor plan: seed point outside the plan");
  if (plan.barrier.at(seed_cell) > 0.5) throw InputError("floor plan: seed point lies on a wall");
  plan.traversable = flood_fill(plan.barrier, seed_cell);
  return plan;
}

}  // namespace floorloc
