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

#include "floorloc/scale_alignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "floorloc/bounded_lbfgs.hpp"
#include "floorloc/error.hpp"

namespace floorloc {
namespace {

constexpr std::size_t kRansacMaxPoints = 20000;

double robust_mean(std::span<const double> raw) {
  if (raw.empty()) return 0.0;
  const auto [lo_it, hi_it] = std::minmax_element(raw.begin(), raw.end());
  const double lo = *lo_it;
  const double range = *hi_it - lo;
  double acc = 0.0;
  for (double d : raw) {
    const double normalized = range > 0.0 ? (d - lo) / range : 0.0;
    acc += d / (normalized + 1.0);
  }
  return acc / static_cast<double>(raw.size());
}

Plane3 plane_through(const Vec3& a, const Vec3& b, const Vec3& c, bool& ok) {
  Vec3 n = (b - a).cross(c - a);
  const double norm = n.norm();
  ok = norm > 1e-12;
  Plane3 plane;
  if (!ok) return plane;
  n /= norm;
  if (n.y() < 0.0) n = -n;
  plane.normal = n;
  plane.offset = n.dot(a);
  return plane;
}

bool admissible(const Plane3& plane, double min_cos, const std::optional<Vec3>& camera) {
  if (std::abs(plane.normal.y()) < min_cos) return false;
  if (camera && !(plane.signed_distance(*camera) < 0.0)) return false;
  return true;
}

std::optional<Plane3> refit(const PointCloud& cloud, const Plane3& plane, double threshold) {
  Vec3 centroid = Vec3::Zero();
  std::size_t count = 0;
  for (const auto& p : cloud.points) {
    if (std::abs(plane.signed_distance(p)) <= threshold) {
      centroid += p;
      ++count;
    }
  }
  if (count < 3) return std::nullopt;
  centroid /= static_cast<double>(count);
  Mat3 cov = Mat3::Zero();
  for (const auto& p : cloud.points) {
    if (std::abs(plane.signed_distance(p)) <= threshold) {
      const Vec3 d = p - centroid;
      cov += d * d.transpose();
    }
  }
  Eigen::SelfAdjointEigenSolver<Mat3> solver(cov);
  Vec3 n = solver.eigenvectors().col(0).normalized();
  if (n.y() < 0.0) n = -n;
  Plane3 out;
  out.normal = n;
  out.offset = n.dot(centroid);
  return out;
}

std::size_t count_inliers(const PointCloud& cloud, const Plane3& plane, double threshold) {
  std::size_t count = 0;
  for (const auto& p : cloud.points) {
    if (std::abs(plane.signed_distance(p)) <= threshold) ++count;
  }
  return count;
}

double camera_yaw(const Pose3& pose) {
  const Vec3 forward = pose.rotation * Vec3::UnitZ();
  const Vec2 f2 = to_plan2d(forward);
  return std::atan2(f2.y(), f2.x());
}

}  // namespace

std::string to_string(AlignmentMode mode) {
  switch (mode) {
    case AlignmentMode::kNone:
      return "none";
    case AlignmentMode::kGround:
      return "ground";
    case AlignmentMode::kFull:
      return "full";
  }
  return "none";
}

AlignmentMode parse_alignment_mode(const std::string& text) {
  if (text == "none") return AlignmentMode::kNone;
  if (text == "ground") return AlignmentMode::kGround;
  if (text == "full") return AlignmentMode::kFull;
  throw InputError("unknown alignment mode '" + text + "' (expected none, ground or full)");
}

double nn_distance(const PointCloud& p, const PointCloud& q) {
  if (p.empty() || q.empty()) throw InputError("nn_distance: point clouds must be non-empty");
  const PairTerm term(0, 1, p, q, ScaleAlignmentConfig{}.max_points_per_view);
  return term.evaluate(1.0, 1.0);
}

PairTerm::PairTerm(std::size_t first, std::size_t second, PointCloud p, PointCloud q,
                   std::size_t max_points)
    : first_(first),
      second_(second),
      p_(stride_subsample(p, max_points)),
      q_(stride_subsample(q, max_points)),
      q_index_(q_.points) {
  scratch_.resize(p_.size());
}

double PairTerm::evaluate(double lambda_first, double lambda_second) const {
  if (empty()) return 0.0;
  // NN of a*p in b*Q is b * NN_Q((a/b) p), at distance b * |(a/b) p - NN_Q|.
  const double ratio = lambda_first / lambda_second;
  for (std::size_t i = 0; i < p_.size(); ++i) {
    scratch_[i] = lambda_second * q_index_.nearest(ratio * p_.points[i]).distance;
  }
  return robust_mean(scratch_);
}

double scale_objective(std::span<const PairTerm> terms, std::span<const double> lambdas) {
  double total = 0.0;
  for (const auto& t : terms) total += t.evaluate(lambdas[t.first()], lambdas[t.second()]);
  return total;
}

ScaleSolution optimize_scales(std::size_t view_count, std::span<const PairTerm> terms,
                              const ScaleAlignmentConfig& config) {
  if (view_count == 0) throw InputError("optimize_scales: no views");
  if (!(config.lower_bound > 0.0 && config.lower_bound < 1.0 && config.upper_bound > 1.0)) {
    throw InputError("optimize_scales: bounds must satisfy 0 < lo < 1 < hi");
  }
  for (const auto& t : terms) {
    if (t.first() >= view_count || t.second() >= view_count) {
      throw InputError("optimize_scales: pair index out of range");
    }
  }

  ScaleSolution solution;
  std::vector<double> lambdas(view_count, 1.0);
  solution.initial_objective = scale_objective(terms, lambdas);
  if (view_count == 1) {
    solution.lambdas = lambdas;
    solution.objective = solution.initial_objective;
    solution.converged = true;
    return solution;
  }

  // Variables are lambdas[1..N-1]; lambdas[0] stays 1.
  const std::size_t n = view_count - 1;
  auto expand = [&](const std::vector<double>& x) {
    std::vector<double> full(view_count, 1.0);
    std::copy(x.begin(), x.end(), full.begin() + 1);
    return full;
  };
  ObjectiveFn objective = [&](const std::vector<double>& x) {
    const auto full = expand(x);
    return scale_objective(terms, full);
  };

  std::vector<std::vector<std::size_t>> touching(view_count);
  for (std::size_t k = 0; k < terms.size(); ++k) {
    touching[terms[k].first()].push_back(k);
    if (terms[k].second() != terms[k].first()) touching[terms[k].second()].push_back(k);
  }
  const double lo = config.lower_bound;
  const double hi = config.upper_bound;
  const double h = config.finite_difference_step;
  // Central differences touching only the terms that depend on each variable.
  GradientFn gradient = [&](const std::vector<double>& x, std::vector<double>& grad) {
    auto full = expand(x);
    for (std::size_t v = 1; v < view_count; ++v) {
      const double centre = full[v];
      const double plus = std::min(centre + h, hi);
      const double minus = std::max(centre - h, lo);
      double f_plus = 0.0;
      double f_minus = 0.0;
      full[v] = plus;
      for (std::size_t k : touching[v]) f_plus += terms[k].evaluate(full[terms[k].first()], full[terms[k].second()]);
      full[v] = minus;
      for (std::size_t k : touching[v]) f_minus += terms[k].evaluate(full[terms[k].first()], full[terms[k].second()]);
      full[v] = centre;
      grad[v - 1] = plus > minus ? (f_plus - f_minus) / (plus - minus) : 0.0;
    }
  };

  BoundedLbfgsOptions options;
  options.max_iterations = config.max_iterations;
  options.function_tolerance = config.tolerance;
  options.finite_difference_step = h;
  const auto result = minimize_bounded(objective, gradient, std::vector<double>(n, 1.0),
                                       std::vector<double>(n, lo), std::vector<double>(n, hi),
                                       options);
  solution.lambdas = expand(result.x);
  solution.objective = result.value;
  solution.iterations = result.iterations;
  solution.converged = result.converged;
  return solution;
}

ScaleSolution optimize_scales(std::span<const PointCloud> clouds,
                              std::span<const std::pair<std::size_t, std::size_t>> pairs,
                              const ScaleAlignmentConfig& config) {
  if (clouds.empty()) throw InputError("optimize_scales: no clouds");
  std::vector<PairTerm> terms;
  terms.reserve(pairs.size());
  for (const auto& [a, b] : pairs) {
    if (a >= clouds.size() || b >= clouds.size()) {
      throw InputError("optimize_scales: pair index out of range");
    }
    terms.emplace_back(a, b, clouds[a], clouds[b], config.max_points_per_view);
  }
  return optimize_scales(clouds.size(), terms, config);
}

std::optional<GroundPlane> detect_ground_plane(const PointCloud& cloud, std::uint64_t seed,
                                               const RansacConfig& config,
                                               std::optional<Vec3> camera_origin) {
  if (cloud.size() < 3) throw InputError("detect_ground_plane: need at least 3 points");
  const PointCloud sample = stride_subsample(cloud, kRansacMaxPoints);
  const double min_cos = std::cos(config.max_tilt_deg * std::numbers::pi / 180.0);

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, sample.size() - 1);
  std::optional<Plane3> best;
  std::size_t best_count = 0;
  for (int it = 0; it < config.iterations; ++it) {
    const std::size_t i = pick(rng);
    const std::size_t j = pick(rng);
    const std::size_t k = pick(rng);
    if (i == j || j == k || i == k) continue;
    bool ok = false;
    const Plane3 plane = plane_through(sample.points[i], sample.points[j], sample.points[k], ok);
    if (!ok || !admissible(plane, min_cos, camera_origin)) continue;
    const std::size_t count = count_inliers(sample, plane, config.inlier_threshold);
    if (count > best_count) {
      best_count = count;
      best = plane;
    }
  }
  if (!best) return std::nullopt;

  Plane3 plane = *best;
  for (int round = 0; round < 2; ++round) {
    const auto refined = refit(cloud, plane, config.inlier_threshold);
    if (!refined || !admissible(*refined, min_cos, camera_origin)) break;
    plane = *refined;
  }
  const std::size_t inliers = count_inliers(cloud, plane, config.inlier_threshold);
  if (static_cast<double>(inliers) < config.min_inlier_fraction * static_cast<double>(cloud.size())) {
    return std::nullopt;
  }
  return GroundPlane{plane, inliers};
}

double global_scale_from_ground(const Plane3& plane, const Vec3& camera_origin,
                                double canonical_height) {
  const double distance = std::abs(plane.signed_distance(camera_origin));
  if (distance < 1e-6) throw DegenerateGeometryError("camera origin lies on the ground plane");
  if (!(canonical_height > 0.0)) throw InputError("canonical height must be positive");
  return canonical_height / distance;
}

std::vector<std::pair<std::size_t, std::size_t>> consecutive_pairs(std::span<const ViewCloud> views,
                                                                   double wrap_span_deg) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  if (views.size() < 2) return pairs;
  for (std::size_t i = 0; i + 1 < views.size(); ++i) pairs.emplace_back(i, i + 1);
  const bool all_posed =
      std::all_of(views.begin(), views.end(), [](const ViewCloud& v) { return v.pose.has_value(); });
  if (views.size() >= 3 && all_posed) {
    double sweep = 0.0;
    for (std::size_t i = 0; i + 1 < views.size(); ++i) {
      sweep += wrap_pi(camera_yaw(*views[i + 1].pose) - camera_yaw(*views[i].pose));
    }
    if (std::abs(sweep) * 180.0 / std::numbers::pi >= wrap_span_deg - 1e-9) {
      pairs.emplace_back(views.size() - 1, 0);
    }
  }
  return pairs;
}

PointCloud frustum_crop(const PointCloud& cloud, const Pose3& pose, const Intrinsics& k) {
  const Pose3 inv = pose.inverse();
  PointCloud out;
  for (const auto& p : cloud.points) {
    const auto pix = project(inv.apply(p), k);
    if (!pix) continue;
    if ((*pix)[0] >= 0.0 && (*pix)[0] < k.width && (*pix)[1] >= 0.0 && (*pix)[1] < k.height) {
      out.points.push_back(p);
    }
  }
  return out;
}

std::vector<PairTerm> overlap_terms(std::span<const ViewCloud> views,
                                   std::span<const std::pair<std::size_t, std::size_t>> pairs,
                                   std::size_t max_points) {
  std::vector<PairTerm> terms;
  terms.reserve(pairs.size());
  for (const auto& [a, b] : pairs) {
    if (a >= views.size() || b >= views.size()) throw InputError("overlap_terms: pair index out of range");
    const auto& va = views[a];
    const auto& vb = views[b];
    PointCloud pa = va.cloud;
    PointCloud pb = vb.cloud;
    if (va.pose && vb.pose && va.intrinsics && vb.intrinsics) {
      pa = frustum_crop(va.cloud, *vb.pose, *vb.intrinsics);
      pb = frustum_crop(vb.cloud, *va.pose, *va.intrinsics);
    }
    terms.emplace_back(a, b, std::move(pa), std::move(pb), max_points);
  }
  return terms;
}

AlignedScan align_and_merge(std::span<const ViewCloud> views, AlignmentMode mode,
                            const ScaleAlignmentConfig& config) {
  if (views.empty()) throw InputError("align_and_merge: no views");

  AlignedScan out;
  ScaleReport& report = out.report;
  report.mode = mode;
  Vec3 origin = Vec3::Zero();
  for (const auto& v : views) origin += v.camera_origin;
  origin /= static_cast<double>(views.size());
  report.scan_origin = origin;

  std::vector<ViewCloud> local(views.begin(), views.end());
  for (auto& v : local) {
    v.cloud = translate(v.cloud, -origin);
    v.camera_origin -= origin;
    if (v.pose) v.pose->translation -= origin;
  }

  const std::size_t n = local.size();
  report.relative_scales.assign(n, 1.0);
  report.applied_scales.assign(n, 1.0);
  report.retained.assign(n, true);

  if (mode == AlignmentMode::kNone) {
    for (const auto& v : local) {
      out.merged.points.insert(out.merged.points.end(), v.cloud.points.begin(), v.cloud.points.end());
    }
    return out;
  }

  if (mode == AlignmentMode::kGround) {
    bool any = false;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& v = local[i];
      std::optional<GroundPlane> ground;
      if (v.cloud.size() >= 3) {
        ground = detect_ground_plane(v.cloud, config.seed + i, config.ransac, v.camera_origin);
      }
      if (!ground) {
        report.retained[i] = false;
        report.applied_scales[i] = 0.0;
        continue;
      }
      const double g = global_scale_from_ground(ground->plane, v.camera_origin, config.canonical_height);
      report.relative_scales[i] = g;
      report.applied_scales[i] = g;
      const PointCloud scaled = scale_about(v.cloud, g, v.camera_origin);
      out.merged.points.insert(out.merged.points.end(), scaled.points.begin(), scaled.points.end());
      Plane3 plane = ground->plane;
      const double nc = plane.normal.dot(v.camera_origin);
      plane.offset = nc + g * (plane.offset - nc);
      report.camera_heights.push_back(std::abs(plane.signed_distance(v.camera_origin)));
      if (!any) report.ground = plane;
      any = true;
    }
    if (!any) throw NoGroundError("no ground plane detected in any view");
    return out;
  }

  // Full: overlap-based relative scales, then one global ground-plane scale.
  report.pairs = consecutive_pairs(local, config.wrap_span_deg);
  const std::vector<PairTerm> terms = overlap_terms(local, report.pairs, config.max_points_per_view);
  const ScaleSolution solution = optimize_scales(n, terms, config);
  report.relative_scales = solution.lambdas;
  report.solution = solution;

  PointCloud merged;
  for (std::size_t i = 0; i < n; ++i) {
    const PointCloud scaled = scale(local[i].cloud, solution.lambdas[i]);
    merged.points.insert(merged.points.end(), scaled.points.begin(), scaled.points.end());
  }
  if (merged.size() < 3) throw NoGroundError("merged cloud too small for ground detection");
  const Vec3 camera = Vec3::Zero();
  const auto ground = detect_ground_plane(merged, config.seed, config.ransac, camera);
  if (!ground) throw NoGroundError("no ground plane detected in the merged cloud");
  const double g = global_scale_from_ground(ground->plane, camera, config.canonical_height);
  report.global_scale = g;
  for (std::size_t i = 0; i < n; ++i) report.applied_scales[i] = g * solution.lambdas[i];
  out.merged = scale(merged, g);
  Plane3 plane = ground->plane;
  plane.offset *= g;
  report.ground = plane;
  report.camera_heights.push_back(std::abs(plane.signed_distance(camera)));
  return out;
}

}  // namespace floorloc
