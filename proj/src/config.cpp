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

#include "floorloc/config.hpp"

#include <cmath>
#include <numbers>
#include <set>

#include "floorloc/error.hpp"

namespace floorloc {
namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& field, const std::string& what) {
  throw InputError("config field '" + field + "' " + what);
}

void check_range(const std::string& field, double v, double lo, double hi) {
  if (!std::isfinite(v) || v < lo || v > hi) {
    bad(field, "must be in [" + std::to_string(lo) + ", " + std::to_string(hi) + "], got " + std::to_string(v));
  }
}

void check_positive(const std::string& field, double v, double hi = 1e9) {
  if (!std::isfinite(v) || !(v > 0.0) || v > hi) {
    bad(field, "must be in (0, " + std::to_string(hi) + "], got " + std::to_string(v));
  }
}

// Reads typed values out of one JSON object and rejects unknown keys.
class Section {
 public:
  Section(const json& j, std::string prefix) : j_(j), prefix_(std::move(prefix)) {
    if (!j_.is_object()) throw ParseError("config section '" + prefix_ + "' must be an object");
  }
  ~Section() = default;

  template <typename T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception&) {
      throw ParseError("config field '" + name(key) + "' has the wrong type");
    }
  }

  const json* child(const char* key) {
    seen_.insert(key);
    return j_.contains(key) ? &j_.at(key) : nullptr;
  }

  std::string name(const std::string& key) const { return prefix_.empty() ? key : prefix_ + "." + key; }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) throw ParseError("unknown config field '" + name(key) + "'");
    }
  }

 private:
  const json& j_;
  std::string prefix_;
  std::set<std::string> seen_;
};

}  // namespace

void RunConfig::validate() const {
  if (unproject_stride < 1 || unproject_stride > 64) bad("unproject_stride", "must be in [1, 64]");
  if (sequential_orientations < 2 || sequential_orientations % 2 != 0 || sequential_orientations > 360) {
    bad("sequential_orientations", "must be an even integer in [2, 360]");
  }

  const auto& m = matching;
  check_positive("matching.resolution", m.resolution, 10.0);
  check_range("matching.sigma", m.sigma, 0.0, 10.0);
  check_range("matching.alpha", m.alpha, 0.0, 1e6);
  if (m.scales.empty()) bad("matching.scales", "must not be empty");
  for (double s : m.scales) check_positive("matching.scales", s, 10.0);
  if (m.orientations < 2 || m.orientations % 2 != 0 || m.orientations > 360) {
    bad("matching.orientations", "must be an even integer in [2, 360]");
  }
  check_positive("matching.histogram_bin_deg", m.histogram_bin_deg, 90.0);
  const double bins = 180.0 / m.histogram_bin_deg;
  if (std::abs(bins - std::round(bins)) > 1e-9) bad("matching.histogram_bin_deg", "must divide 180");
  if (m.nms_radius_bins < 0 || m.nms_radius_bins > 90) bad("matching.nms_radius_bins", "must be in [0, 90]");
  if (m.ces_exclusion_cells < 0 || m.ces_exclusion_cells > 10) {
    bad("matching.ces_exclusion_cells", "must be in [0, 10]");
  }

  const auto& e = extraction;
  check_positive("extraction.band_half_width", e.band_half_width, 2.0);
  check_positive("extraction.resolution", e.resolution, 1.0);
  check_positive("extraction.max_range", e.max_range, 1000.0);
  check_range("extraction.canny_low", e.canny_low, 0.0, 1000.0);
  check_range("extraction.canny_high", e.canny_high, e.canny_low, 1000.0);
  check_positive("extraction.hough_rho_cells", e.hough_rho_cells, 100.0);
  check_positive("extraction.hough_theta_deg", e.hough_theta_deg, 90.0);
  if (e.hough_threshold < 1) bad("extraction.hough_threshold", "must be >= 1");
  check_range("extraction.min_length", e.min_length, 0.0, 100.0);
  check_range("extraction.max_gap", e.max_gap, 0.0, 100.0);
  check_range("extraction.merge_angle_deg", e.merge_angle_deg, 0.0, 90.0);
  check_range("extraction.merge_distance_cells", e.merge_distance_cells, 0.0, 100.0);

  const auto& a = alignment;
  if (!(a.lower_bound > 0.0 && a.lower_bound < 1.0)) bad("alignment.lower_bound", "must be in (0, 1)");
  if (!(a.upper_bound > 1.0 && a.upper_bound <= 100.0)) bad("alignment.upper_bound", "must be in (1, 100]");
  check_positive("alignment.finite_difference_step", a.finite_difference_step, 0.1);
  if (a.max_iterations < 1 || a.max_iterations > 100000) bad("alignment.max_iterations", "must be in [1, 100000]");
  check_positive("alignment.tolerance", a.tolerance, 1.0);
  if (a.max_points_per_view < 1) bad("alignment.max_points_per_view", "must be >= 1");
  check_range("alignment.wrap_span_deg", a.wrap_span_deg, 0.0, 360.0);
  check_positive("alignment.canonical_height", a.canonical_height, 100.0);
  if (a.ransac.iterations < 1) bad("alignment.ransac.iterations", "must be >= 1");
  check_positive("alignment.ransac.inlier_threshold", a.ransac.inlier_threshold, 10.0);
  check_positive("alignment.ransac.min_inlier_fraction", a.ransac.min_inlier_fraction, 1.0);
  check_range("alignment.ransac.max_tilt_deg", a.ransac.max_tilt_deg, 0.0, 90.0);

  const auto& f = filter;
  if (f.particles < 1 || f.particles > 10000000) bad("filter.particles", "must be in [1, 10000000]");
  check_range("filter.sigma_forward", f.noise.forward_fraction, 0.0, 1.0);
  check_range("filter.sigma_heading_deg", f.noise.heading * 180.0 / std::numbers::pi, 0.0, 180.0);
  check_range("filter.ess_threshold", f.ess_threshold, 0.0, 1.0);
  check_range("filter.recovery_noise_factor", f.recovery_noise_factor, 1.0, 100.0);

  check_positive("eval.max_range", eval.max_range, 1000.0);
  if (eval.rays < 1 || eval.rays > 3600) bad("eval.rays", "must be in [1, 3600]");
  if (eval.ray_orientations < 1 || eval.ray_orientations > 3600) bad("eval.ray_orientations", "must be in [1, 3600]");
  check_range("eval.pose_clearance", eval.pose_clearance, 0.0, 10.0);
}

json to_json(const RunConfig& c) {
  const double deg = 180.0 / std::numbers::pi;
  json j;
  j["mode"] = to_string(c.mode);
  j["use_mask"] = c.use_mask;
  j["seed"] = c.seed;
  j["unproject_stride"] = c.unproject_stride;
  j["sequential_orientations"] = c.sequential_orientations;
  j["matching"] = {{"resolution", c.matching.resolution},
                   {"sigma", c.matching.sigma},
                   {"alpha", c.matching.alpha},
                   {"scales", c.matching.scales},
                   {"orientations", c.matching.orientations},
                   {"histogram_bin_deg", c.matching.histogram_bin_deg},
                   {"nms_radius_bins", c.matching.nms_radius_bins},
                   {"ces_exclusion_cells", c.matching.ces_exclusion_cells}};
  const auto& e = c.extraction;
  j["extraction"] = {{"band_half_width", e.band_half_width}, {"resolution", e.resolution},
                     {"max_range", e.max_range},             {"canny_low", e.canny_low},
                     {"canny_high", e.canny_high},           {"hough_rho_cells", e.hough_rho_cells},
                     {"hough_theta_deg", e.hough_theta_deg}, {"hough_threshold", e.hough_threshold},
                     {"min_length", e.min_length},           {"max_gap", e.max_gap},
                     {"merge_collinear", e.merge_collinear}, {"merge_angle_deg", e.merge_angle_deg},
                     {"merge_distance_cells", e.merge_distance_cells}};
  const auto& a = c.alignment;
  j["alignment"] = {{"lower_bound", a.lower_bound},
                    {"upper_bound", a.upper_bound},
                    {"finite_difference_step", a.finite_difference_step},
                    {"max_iterations", a.max_iterations},
                    {"tolerance", a.tolerance},
                    {"max_points_per_view", a.max_points_per_view},
                    {"wrap_span_deg", a.wrap_span_deg},
                    {"canonical_height", a.canonical_height},
                    {"ransac",
                     {{"iterations", a.ransac.iterations},
                      {"inlier_threshold", a.ransac.inlier_threshold},
                      {"min_inlier_fraction", a.ransac.min_inlier_fraction},
                      {"max_tilt_deg", a.ransac.max_tilt_deg}}}};
  j["filter"] = {{"particles", c.filter.particles},
                 {"sigma_forward", c.filter.noise.forward_fraction},
                 {"sigma_heading_deg", c.filter.noise.heading * deg},
                 {"ess_threshold", c.filter.ess_threshold},
                 {"recovery_noise_factor", c.filter.recovery_noise_factor}};
  j["eval"] = {{"max_range", c.eval.max_range},
               {"rays", c.eval.rays},
               {"ray_orientations", c.eval.ray_orientations},
               {"pose_clearance", c.eval.pose_clearance}};
  return j;
}

RunConfig config_from_json(const json& j) {
  RunConfig c;
  Section root(j, "");
  std::string mode = to_string(c.mode);
  root.get("mode", mode);
  try {
    c.mode = parse_alignment_mode(mode);
  } catch (const InputError&) {
    bad("mode", "must be one of none, ground, full");
  }
  root.get("use_mask", c.use_mask);
  root.get("seed", c.seed);
  root.get("unproject_stride", c.unproject_stride);
  root.get("sequential_orientations", c.sequential_orientations);

  if (const json* m = root.child("matching")) {
    Section s(*m, "matching");
    s.get("resolution", c.matching.resolution);
    s.get("sigma", c.matching.sigma);
    s.get("alpha", c.matching.alpha);
    s.get("scales", c.matching.scales);
    s.get("orientations", c.matching.orientations);
    s.get("histogram_bin_deg", c.matching.histogram_bin_deg);
    s.get("nms_radius_bins", c.matching.nms_radius_bins);
    s.get("ces_exclusion_cells", c.matching.ces_exclusion_cells);
    s.finish();
  }
  if (const json* x = root.child("extraction")) {
    Section s(*x, "extraction");
    auto& e = c.extraction;
    s.get("band_half_width", e.band_half_width);
    s.get("resolution", e.resolution);
    s.get("max_range", e.max_range);
    s.get("canny_low", e.canny_low);
    s.get("canny_high", e.canny_high);
    s.get("hough_rho_cells", e.hough_rho_cells);
    s.get("hough_theta_deg", e.hough_theta_deg);
    s.get("hough_threshold", e.hough_threshold);
    s.get("min_length", e.min_length);
    s.get("max_gap", e.max_gap);
    s.get("merge_collinear", e.merge_collinear);
    s.get("merge_angle_deg", e.merge_angle_deg);
    s.get("merge_distance_cells", e.merge_distance_cells);
    s.finish();
  }
  if (const json* x = root.child("alignment")) {
    Section s(*x, "alignment");
    auto& a = c.alignment;
    s.get("lower_bound", a.lower_bound);
    s.get("upper_bound", a.upper_bound);
    s.get("finite_difference_step", a.finite_difference_step);
    s.get("max_iterations", a.max_iterations);
    s.get("tolerance", a.tolerance);
    s.get("max_points_per_view", a.max_points_per_view);
    s.get("wrap_span_deg", a.wrap_span_deg);
    s.get("canonical_height", a.canonical_height);
    if (const json* r = s.child("ransac")) {
      Section rs(*r, "alignment.ransac");
      rs.get("iterations", a.ransac.iterations);
      rs.get("inlier_threshold", a.ransac.inlier_threshold);
      rs.get("min_inlier_fraction", a.ransac.min_inlier_fraction);
      rs.get("max_tilt_deg", a.ransac.max_tilt_deg);
      rs.finish();
    }
    s.finish();
  }
  if (const json* x = root.child("filter")) {
    Section s(*x, "filter");
    double heading_deg = c.filter.noise.heading * 180.0 / std::numbers::pi;
    s.get("particles", c.filter.particles);
    s.get("sigma_forward", c.filter.noise.forward_fraction);
    s.get("sigma_heading_deg", heading_deg);
    s.get("ess_threshold", c.filter.ess_threshold);
    s.get("recovery_noise_factor", c.filter.recovery_noise_factor);
    c.filter.noise.heading = heading_deg * std::numbers::pi / 180.0;
    s.finish();
  }
  if (const json* x = root.child("eval")) {
    Section s(*x, "eval");
    s.get("max_range", c.eval.max_range);
    s.get("rays", c.eval.rays);
    s.get("ray_orientations", c.eval.ray_orientations);
    s.get("pose_clearance", c.eval.pose_clearance);
    s.finish();
  }
  root.finish();
  c.alignment.seed = c.seed;
  c.filter.seed = c.seed;
  c.validate();
  return c;
}

}  // namespace floorloc
