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

#pragma once

#include <vector>

#include "floorloc/raster.hpp"

namespace floorloc {

inline constexpr double kDefaultPlanResolution = 0.1;

/// Vector floor plan plus its rasterizations.
struct FloorPlan {
  SegmentSet walls;              // frame kFloorPlan, meters
  std::vector<Segment2> doors;   // closed for matching, open for traversal
  Vec2 seed = Vec2::Zero();      // interior point for the flood fill
  Raster2D raster;               // 1 on wall and door cells
  Raster2D barrier;              // 1 on wall cells only
  Raster2D traversable;          // 1 on free cells reachable from the seed

  double resolution() const { return raster.resolution; }
  bool is_traversable(const Vec2& p) const;
  /// Wall segments with door openings closed.
  SegmentSet closed_walls() const;
};

/// Rasterizes the plan at `resolution` over the segment bounding box padded
/// by `padding_cells`, then flood-fills (4-connected) free space from
/// `seed`. Throws InputError if there are no walls or the seed is not a
/// free in-bounds cell.
FloorPlan build_floorplan(SegmentSet walls, std::vector<Segment2> doors, double resolution,
                          const Vec2& seed, int padding_cells = 2);

/// 4-connected flood fill over cells with `blocked == 0`.
Raster2D flood_fill(const Raster2D& blocked, const Cell& seed);

}  // namespace floorloc
