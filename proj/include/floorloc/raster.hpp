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

#include <cmath>
#include <cstddef>
#include <vector>

#include "floorloc/geometry.hpp"

namespace floorloc {

/// Integer cell coordinate; `col` runs along +X, `row` along +Y.
struct Cell {
  int col = 0;
  int row = 0;
  bool operator==(const Cell&) const = default;
};

/// Row-major grid of scalars anchored in metric space. `origin` is the
/// world position of the centre of cell (0, 0).
struct Raster2D {
  int width = 0;
  int height = 0;
  double resolution = 1.0;
  Vec2 origin = Vec2::Zero();
  std::vector<double> values;

  Raster2D() = default;
  Raster2D(int w, int h, double res, Vec2 org, double fill = 0.0);

  /// Same geometry, fresh values.
  static Raster2D like(const Raster2D& other, double fill = 0.0);

  std::size_t size() const { return values.size(); }
  bool empty() const { return values.empty(); }
  std::size_t index(int col, int row) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(width) + static_cast<std::size_t>(col);
  }
  bool contains(int col, int row) const { return col >= 0 && row >= 0 && col < width && row < height; }
  bool contains(const Cell& c) const { return contains(c.col, c.row); }
  double at(int col, int row) const { return values[index(col, row)]; }
  double& at(int col, int row) { return values[index(col, row)]; }
  double at(const Cell& c) const { return at(c.col, c.row); }
  double& at(const Cell& c) { return at(c.col, c.row); }

  Vec2 cell_center(int col, int row) const {
    return origin + Vec2(col * resolution, row * resolution);
  }
  Vec2 cell_center(const Cell& c) const { return cell_center(c.col, c.row); }
  /// Cell whose centre is nearest to `p` (may be out of bounds).
  Cell cell_of(const Vec2& p) const {
    return {static_cast<int>(std::floor((p.x() - origin.x()) / resolution + 0.5)),
            static_cast<int>(std::floor((p.y() - origin.y()) / resolution + 0.5))};
  }
  bool same_geometry(const Raster2D& other) const;
  /// World-space extents of the grid including the outer half cells.
  Vec2 min_corner() const { return origin - Vec2::Constant(0.5 * resolution); }
  Vec2 max_corner() const {
    return origin + Vec2((width - 0.5) * resolution, (height - 0.5) * resolution);
  }
  double sum() const;
  double max_value() const;
};

struct Segment2 {
  Vec2 a = Vec2::Zero();
  Vec2 b = Vec2::Zero();

  double length() const { return (b - a).norm(); }
  /// Direction angle folded into [-pi/2, pi/2).
  double orientation() const;
};

enum class SegmentFrame { kObservation, kFloorPlan };

struct SegmentSet {
  std::vector<Segment2> segments;
  SegmentFrame frame = SegmentFrame::kObservation;

  std::size_t size() const { return segments.size(); }
  bool empty() const { return segments.empty(); }
};

/// Marks every cell touched by the segment (dense sampling, so the trace is
/// at least 8-connected) with `value` via max().
void draw_segment(Raster2D& raster, const Segment2& segment, double value = 1.0);

/// Calls `visit(cell)` for each cell traversed by the segment, in order,
/// without duplicates in a row.
template <typename Visit>
void trace_segment(const Raster2D& raster, const Vec2& a, const Vec2& b, Visit&& visit) {
  const double len = (b - a).norm();
  const int steps = std::max(1, static_cast<int>(std::ceil(len / (0.25 * raster.resolution))));
  Cell last{-1 << 30, -1 << 30};
  for (int i = 0; i <= steps; ++i) {
    const double t = static_cast<double>(i) / steps;
    const Cell c = raster.cell_of(a + t * (b - a));
    if (c == last) continue;
    last = c;
    if (!visit(c)) return;
  }
}

/// Rotates a 2D point counter-clockwise by `theta`.
inline Vec2 rotate2d(const Vec2& p, double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {c * p.x() - s * p.y(), s * p.x() + c * p.y()};
}

SegmentSet transform_segments(const SegmentSet& set, double theta, const Vec2& translation,
                              double scale = 1.0);

}  // namespace floorloc
