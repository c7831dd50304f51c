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
#include <numbers>
#include <optional>
#include <vector>

#include "floorloc/floorplan.hpp"
#include "floorloc/layout_matching.hpp"

namespace floorloc {

struct Particle {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
  double weight = 0.0;
};

using ParticleSet = std::vector<Particle>;

inline constexpr double kMaxOdometryStep = 5.0;  // meters

struct OdometryStep {
  double delta_forward = 0.0;  // meters along the updated heading
  double delta_heading = 0.0;  // radians

  /// Throws InputError when |delta_forward| fails the sanity gate.
  void validate() const;
};

struct MotionNoise {
  double forward_fraction = 0.10;
  double heading = std::numbers::pi / 90.0;  // 2 degrees
};

struct FilterConfig {
  std::size_t particles = 5000;
  MotionNoise noise;
  double ess_threshold = 0.5;
  double recovery_noise_factor = 3.0;
  std::uint64_t seed = 0;
};

struct TrajectoryMetrics {
  double rmse_last10 = 0.0;
  double final_error = 0.0;
};

double effective_sample_size(const ParticleSet& particles);

void normalize_weights(ParticleSet& particles);

ParticleSet init_from_heatmap(const HeatmapStack& pdf, std::size_t n, std::uint64_t seed);

/// `step_index` and `stream` select independent noise draws.
ParticleSet predict(const ParticleSet& particles, const OdometryStep& step, const MotionNoise& noise,
                    std::uint64_t seed, std::uint64_t step_index = 0, std::uint64_t stream = 0);

struct ConstraintResult {
  std::size_t killed = 0;
  bool total_kill = false;  // set was restored from `previous`
};

/// Zeroes particles whose motion since `previous` crosses a wall or leaves
/// traversable space. `previous` must be index-aligned with `particles`.
ConstraintResult apply_constraints(ParticleSet& particles, const FloorPlan& plan,
                                   const ParticleSet& previous);

/// Systematic resampling when ESS < threshold * n. Returns true if it fired.
bool resample(ParticleSet& particles, double threshold, std::uint64_t seed,
              std::uint64_t step_index = 0);

PoseEstimate estimate(const ParticleSet& particles);

TrajectoryMetrics trajectory_metrics(const std::vector<PoseEstimate>& estimates,
                                     const std::vector<PoseEstimate>& truth);

struct TrackResult {
  std::vector<PoseEstimate> estimates;  // one per odometry step
  std::optional<TrajectoryMetrics> metrics;
  std::size_t resamples = 0;
  std::size_t recoveries = 0;        // retries with inflated noise
  std::size_t reinitializations = 0;  // restarts from the prior
  std::vector<std::size_t> recovery_steps;
};

/// `truth`, when given, holds the pose after each step.
TrackResult run_trajectory(const HeatmapStack& pdf, const std::vector<OdometryStep>& steps,
                           const FloorPlan& plan, const FilterConfig& config,
                           const std::optional<std::vector<PoseEstimate>>& truth = std::nullopt);

}  // namespace floorloc
