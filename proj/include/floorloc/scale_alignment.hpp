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
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "floorloc/geometry.hpp"
#include "floorloc/kdtree.hpp"

namespace floorloc {

enum class AlignmentMode { kNone, kGround, kFull };

std::string to_string(AlignmentMode mode);
/// Parses "none", "ground" or "full"; throws InputError otherwise.
AlignmentMode parse_alignment_mode(const std::string& text);

struct RansacConfig {
  int iterations = 500;
  double inlier_threshold = 0.05;     // meters
  double min_inlier_fraction = 0.15;
  double max_tilt_deg = 20.0;         // normal vs. gravity axis
};

struct ScaleAlignmentConfig {
  double lower_bound = 0.25;
  double upper_bound = 4.0;
  double finite_difference_step = 1e-3;
  int max_iterations = 100;
  double tolerance = 1e-6;
  std::size_t max_points_per_view = 5000;
  double wrap_span_deg = 300.0;
  double canonical_height = 1.5;
  RansacConfig ransac;
  std::uint64_t seed = 0;
};

/// Robust mean nearest-neighbour distance from P to Q. Each raw distance is
/// divided by (its min-max normalized value + 1); when all raw distances are
/// equal the normalized values are taken as 0.
double nn_distance(const PointCloud& p, const PointCloud& q);

/// One overlap term d(lambda_first * P, lambda_second * Q) of the joint
/// objective. Q is indexed once; scaled queries reuse the unscaled index.
class PairTerm {
 public:
  PairTerm(std::size_t first, std::size_t second, PointCloud p, PointCloud q,
           std::size_t max_points);

  std::size_t first() const { return first_; }
  std::size_t second() const { return second_; }
  bool empty() const { return p_.empty() || q_.empty(); }

  double evaluate(double lambda_first, double lambda_second) const;

 private:
  std::size_t first_;
  std::size_t second_;
  PointCloud p_;
  PointCloud q_;
  KdTree3 q_index_;
  mutable std::vector<double> scratch_;
};

struct ScaleSolution {
  std::vector<double> lambdas;  // lambdas[0] == 1
  double objective = 0.0;
  double initial_objective = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Jointly optimizes lambdas[1..N-1] (lambdas[0] fixed to 1) over the given
/// overlap terms with the bounded L-BFGS solver and finite-difference
/// gradients.
ScaleSolution optimize_scales(std::size_t view_count, std::span<const PairTerm> terms,
                              const ScaleAlignmentConfig& config = {});

/// Convenience overload scoring whole clouds against each other.
ScaleSolution optimize_scales(std::span<const PointCloud> clouds,
                              std::span<const std::pair<std::size_t, std::size_t>> pairs,
                              const ScaleAlignmentConfig& config = {});

/// Sum of pair terms at the given lambdas.
double scale_objective(std::span<const PairTerm> terms, std::span<const double> lambdas);

struct GroundPlane {
  Plane3 plane;  // normal oriented toward +y (down)
  std::size_t inliers = 0;
};

/// RANSAC search for a near-horizontal plane, refined by least squares on
/// its inliers. With `camera_origin` set, only planes below the camera are
/// admissible. Throws InputError for fewer than 3 points.
std::optional<GroundPlane> detect_ground_plane(const PointCloud& cloud, std::uint64_t seed,
                                               const RansacConfig& config = {},
                                               std::optional<Vec3> camera_origin = std::nullopt);

/// canonical_height / distance(camera_origin, plane).
double global_scale_from_ground(const Plane3& plane, const Vec3& camera_origin,
                                double canonical_height);

/// One view of a stationary scan expressed in the scan (tracking) frame.
struct ViewCloud {
  PointCloud cloud;
  Vec3 camera_origin = Vec3::Zero();
  std::optional<Pose3> pose;              // enables frustum overlap and span checks
  std::optional<Intrinsics> intrinsics;
};

struct ScaleReport {
  AlignmentMode mode = AlignmentMode::kNone;
  Vec3 scan_origin = Vec3::Zero();          // subtracted from every point
  std::vector<double> relative_scales;      // per input view
  std::vector<double> applied_scales;       // final per-view factor
  std::vector<bool> retained;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  double global_scale = 1.0;
  std::optional<Plane3> ground;             // in the merged frame, after scaling
  std::vector<double> camera_heights;       // per retained view, above its ground
  std::optional<ScaleSolution> solution;
};

struct AlignedScan {
  PointCloud merged;  // scan frame re-centered on the scan origin
  ScaleReport report;
};

/// Merges the views of a scan, applying the requested scale alignment.
///   None   - plain union.
///   Ground - each view scaled about its own camera so the camera sits at
///            canonical height above that view's ground plane; views
///            without a ground plane are dropped.
///   Full   - joint overlap scale optimization over consecutive views, then
///            one global scale from the merged cloud's ground plane.
/// Throws DegenerateGeometryError when Ground/Full find no ground plane.
AlignedScan align_and_merge(std::span<const ViewCloud> views, AlignmentMode mode,
                            const ScaleAlignmentConfig& config = {});

/// Consecutive view pairs, plus the wrap-around pair when the camera yaw
/// sweeps at least `wrap_span_deg`.
std::vector<std::pair<std::size_t, std::size_t>> consecutive_pairs(
    std::span<const ViewCloud> views, double wrap_span_deg);

/// One overlap term per pair. Views carrying pose and intrinsics are cropped
/// to each other's frustum first.
std::vector<PairTerm> overlap_terms(std::span<const ViewCloud> views,
                                   std::span<const std::pair<std::size_t, std::size_t>> pairs,
                                   std::size_t max_points);

/// Points of `cloud` that fall inside the image of a camera at `pose`.
PointCloud frustum_crop(const PointCloud& cloud, const Pose3& pose, const Intrinsics& k);

}  // namespace floorloc
