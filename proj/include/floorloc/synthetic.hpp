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

#include <cstdint>
#include <optional>
#include <vector>

#include "floorloc/floorplan.hpp"
#include "floorloc/geometry.hpp"
#include "floorloc/layout_matching.hpp"
#include "floorloc/particle_filter.hpp"

namespace floorloc {

/// Building generator parameters. With corridors = 1 the rooms are split
/// into a row above and a row below a straight corridor; corridors = 0
/// yields a single closed room.
struct GenSpec {
  int rooms = 6;
  int corridors = 1;
  double room_width = 0.0;  // 0 draws from [width_min, width_max]
  double room_depth = 0.0;
  double width_min = 3.5;
  double width_max = 5.0;
  bool uniform_rooms = true;  // one module size for every room
  double corridor_width = 2.0;
  double door_width = 0.9;
  int pilasters_per_room = 2;
  int corridor_pilasters = 2;
  double chamfer = 0.8;  // oblique cut at one corridor end; 0 disables
  double resolution = kDefaultPlanResolution;

  void validate() const;
};

FloorPlan gen_floorplan(std::uint64_t seed, const GenSpec& spec = {});

/// Uniform poses over traversable space at least `clearance` from any wall.
std::vector<PoseEstimate> sample_poses(const FloorPlan& plan, std::size_t count, std::uint64_t seed,
                                       double clearance = 0.3);

struct ScanSpec {
  int views = 6;
  int width = 320;
  int height = 240;
  double hfov_deg = 90.0;
  double pitch_down_deg = 25.0;
  double camera_height = 1.5;
  double ceiling_height = 2.8;
  double max_depth = 15.0;
  double scale_min = 1.0;  // per-view depth corruption range
  double scale_max = 1.0;
  int tables = 0;          // horizontal table tops near the camera
  double table_height = 0.75;
  double table_length = 1.4;
  double table_depth = 0.8;
  int windows = 0;         // views with see-through depth artifacts
  bool emit_mask = true;   // mark artifact pixels in the mask
};

struct SyntheticScan {
  ObservationBundle bundle;
  PoseEstimate truth;
  std::vector<double> corruptions;  // depth multiplier per view
};

SyntheticScan render_scan(const FloorPlan& plan, const PoseEstimate& pose, const ScanSpec& spec,
                          std::uint64_t seed);

struct TrajectorySpec {
  std::size_t steps = 120;
  double step_length = 0.5;
  double clearance = 0.3;
  double forward_noise = 0.0;  // odometry corruption, fraction of step
  double heading_noise = 0.0;  // radians per step
};

struct SyntheticTrajectory {
  PoseEstimate start;
  std::vector<PoseEstimate> truth;  // pose after each step
  std::vector<OdometryStep> odometry;
};

/// With `start`, the walk begins at the admissible cell nearest to it and
/// the first step turns from its heading.
SyntheticTrajectory gen_trajectory(const FloorPlan& plan, const TrajectorySpec& spec,
                                   std::uint64_t seed,
                                   const std::optional<PoseEstimate>& start = std::nullopt);

}  // namespace floorloc
