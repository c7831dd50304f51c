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

#include <limits>
#include <optional>
#include <vector>

#include "floorloc/floorplan.hpp"
#include "floorloc/layout_matching.hpp"
#include "floorloc/raster.hpp"

namespace floorloc {

inline constexpr double kNoHit = std::numeric_limits<double>::infinity();

/// Distance along a ray to the nearest segment, or nothing.
std::optional<double> intersect_ray_segment(const Vec2& origin, const Vec2& direction,
                                            const Segment2& segment);

/// Uniform bucket grid over segments for fast nearest-hit ray queries.
class SegmentIndex {
 public:
  SegmentIndex(std::vector<Segment2> segments, double cell_size = 1.0);

  /// Range to the first hit within `max_range`, else kNoHit. `direction`
  /// must be a unit vector.
  double cast(const Vec2& origin, const Vec2& direction, double max_range) const;

  const std::vector<Segment2>& segments() const { return segments_; }

 private:
  std::vector<Segment2> segments_;
  double cell_;
  Vec2 origin_;
  int cols_ = 0;
  int rows_ = 0;
  std::vector<std::vector<int>> buckets_;
};

/// Equiangular range scan.
struct RayScan {
  Vec2 origin = Vec2::Zero();
  std::vector<double> angles;  // plan frame, radians
  std::vector<double> ranges;  // kNoHit when nothing within max range
  double max_range = 10.0;
};

/// Casts `n_rays` rays starting at `pose.theta` against the plan walls with
/// doors closed. Throws InputError when the pose is not traversable.
RayScan ray_cast(const FloorPlan& plan, const PoseEstimate& pose, int n_rays, double max_range);

/// Portions of the closed plan walls visible from `pose` within
/// `max_range`, by exact angular-sweep clipping, expressed in the
/// observation frame (pose at the origin, heading along +X).
SegmentSet perfect_segments(const FloorPlan& plan, const PoseEstimate& pose, double max_range);

/// Visible pieces in the plan frame (before the observation transform).
std::vector<Segment2> visible_pieces(const std::vector<Segment2>& walls, const Vec2& origin,
                                     double max_range);

/// Per-cell, per-direction range to the nearest closed wall, for the ray
/// matching baseline. Directions are 2 pi k / directions.
struct DistanceField {
  Raster2D valid;  // traversable cells
  int directions = 0;
  double max_range = 10.0;
  std::vector<float> ranges;  // cell-major; negative marks "no hit"

  float at(std::size_t cell, int dir) const { return ranges[cell * directions + dir]; }
};

DistanceField compute_distance_field(const FloorPlan& plan, int directions, double max_range);

/// Scores every cell and orientation by the negative mean absolute
/// difference between observed and field ranges, over rays finite on both
/// sides. Orientations are snapped to the field's angular grid.
HeatmapStack ray_match(const DistanceField& field, const RayScan& scan,
                       const std::vector<double>& thetas);

/// `count` orientations evenly spaced over [0, 2pi).
std::vector<double> uniform_orientations(int count);

}  // namespace floorloc
