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

#include "floorloc/particle_filter.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "floorloc/error.hpp"
#include "floorloc/random.hpp"

namespace floorloc {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::uint64_t kInitChannel = 0x1A1Bull;
constexpr std::uint64_t kResampleChannel = 0x2E5Aull;

double orientation_spacing(const std::vector<double>& thetas) {
  if (thetas.size() < 2) return kTwoPi;
  std::vector<double> sorted;
  for (double t : thetas) sorted.push_back(wrap_two_pi(t));
  std::sort(sorted.begin(), sorted.end());
  double gap = kTwoPi - (sorted.back() - sorted.front());
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    const double d = sorted[i] - sorted[i - 1];
    if (d > 1e-12) gap = std::min(gap, d);
  }
  return gap;
}

ParticleSet uniform_over_valid(const Raster2D& valid, std::size_t n, const CounterRng& rng) {
  std::vector<std::size_t> cells;
  for (std::size_t i = 0; i < valid.size(); ++i) {
    if (valid.values[i] > 0.5) cells.push_back(i);
  }
  if (cells.empty()) throw InputError("particle init: no traversable cells");
  ParticleSet out(n);
  const double w = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t pick = std::min(cells.size() - 1,
                                      static_cast<std::size_t>(rng.uniform(kInitChannel, i, 0) * cells.size()));
    const int col = static_cast<int>(cells[pick] % valid.width);
    const int row = static_cast<int>(cells[pick] / valid.width);
    const Vec2 c = valid.cell_center(col, row);
    out[i] = {c.x() + (rng.uniform(kInitChannel, i, 1) - 0.5) * valid.resolution,
              c.y() + (rng.uniform(kInitChannel, i, 2) - 0.5) * valid.resolution,
              kTwoPi * rng.uniform(kInitChannel, i, 3), w};
  }
  return out;
}

bool crosses_barrier(const FloorPlan& plan, const Vec2& from, const Vec2& to) {
  bool hit = false;
  trace_segment(plan.barrier, from, to, [&](const Cell& c) {
    if (!plan.barrier.contains(c) || plan.barrier.at(c) > 0.5) {
      hit = true;
      return false;
    }
    return true;
  });
  return hit;
}

}  // namespace

void OdometryStep::validate() const {
  if (!std::isfinite(delta_forward) || !std::isfinite(delta_heading)) {
    throw InputError("odometry step is not finite");
  }
  if (std::abs(delta_forward) >= kMaxOdometryStep) {
    throw InputError("odometry step of " + std::to_string(delta_forward) +
                     " m exceeds the 5 m sanity gate");
  }
}

double effective_sample_size(const ParticleSet& particles) {
  double sq = 0.0;
  for (const auto& p : particles) sq += p.weight * p.weight;
  return sq > 0.0 ? 1.0 / sq : 0.0;
}

void normalize_weights(ParticleSet& particles) {
  double total = 0.0;
  for (const auto& p : particles) total += p.weight;
  if (!(total > 0.0)) {
    const double w = particles.empty() ? 0.0 : 1.0 / static_cast<double>(particles.size());
    for (auto& p : particles) p.weight = w;
    return;
  }
  for (auto& p : particles) p.weight /= total;
}

ParticleSet init_from_heatmap(const HeatmapStack& pdf, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw InputError("particle init: n must be >= 1");
  if (pdf.empty()) throw InputError("particle init: empty heatmap stack");
  const CounterRng rng(seed);

  const std::size_t cells = pdf.maps.front().size();
  std::vector<double> cdf;
  cdf.reserve(cells * pdf.size());
  double total = 0.0;
  bool sane = true;
  for (const auto& map : pdf.maps) {
    for (double v : map.values) {
      if (!std::isfinite(v) || v < 0.0) sane = false;
      total += std::max(0.0, v);
      cdf.push_back(total);
    }
  }
  if (!sane || !(total > 0.0)) return uniform_over_valid(pdf.valid, n, rng);

  const double spacing = orientation_spacing(pdf.thetas);
  const Raster2D& grid = pdf.maps.front();
  const double w = 1.0 / static_cast<double>(n);
  ParticleSet out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double target = rng.uniform(kInitChannel, i, 0) * total;
    std::size_t k = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), target) - cdf.begin());
    k = std::min(k, cdf.size() - 1);
    const std::size_t o = k / cells;
    const std::size_t cell = k % cells;
    const Vec2 c = grid.cell_center(static_cast<int>(cell % grid.width), static_cast<int>(cell / grid.width));
    out[i] = {c.x() + (rng.uniform(kInitChannel, i, 1) - 0.5) * grid.resolution,
              c.y() + (rng.uniform(kInitChannel, i, 2) - 0.5) * grid.resolution,
              wrap_two_pi(pdf.thetas[o] + (rng.uniform(kInitChannel, i, 3) - 0.5) * spacing), w};
  }
  return out;
}

ParticleSet predict(const ParticleSet& particles, const OdometryStep& step, const MotionNoise& noise,
                    std::uint64_t seed, std::uint64_t step_index, std::uint64_t stream) {
  const CounterRng rng(seed ^ splitmix64(stream + 0x51ull));
  ParticleSet out = particles;
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto& p = out[i];
    const double ef = noise.forward_fraction > 0.0 ? noise.forward_fraction * rng.normal(step_index, i, 0) : 0.0;
    const double eh = noise.heading > 0.0 ? noise.heading * rng.normal(step_index, i, 1) : 0.0;
    p.theta = wrap_two_pi(p.theta + step.delta_heading + eh);
    const double d = step.delta_forward * (1.0 + ef);
    p.x += d * std::cos(p.theta);
    p.y += d * std::sin(p.theta);
  }
  return out;
}

ConstraintResult apply_constraints(ParticleSet& particles, const FloorPlan& plan,
                                   const ParticleSet& previous) {
  if (previous.size() != particles.size()) {
    throw InputError("apply_constraints: previous set is not index-aligned");
  }
  ConstraintResult result;
  double alive = 0.0;
  for (std::size_t i = 0; i < particles.size(); ++i) {
    auto& p = particles[i];
    const Vec2 from(previous[i].x, previous[i].y);
    const Vec2 to(p.x, p.y);
    const bool legal = p.weight > 0.0 && plan.is_traversable(to) && !crosses_barrier(plan, from, to);
    if (!legal) {
      if (p.weight > 0.0) ++result.killed;
      p.weight = 0.0;
      p.x = previous[i].x;
      p.y = previous[i].y;
    }
    alive += p.weight;
  }
  if (!(alive > 0.0)) {
    particles = previous;
    normalize_weights(particles);
    result.total_kill = true;
    return result;
  }
  for (auto& p : particles) p.weight /= alive;
  return result;
}

bool resample(ParticleSet& particles, double threshold, std::uint64_t seed, std::uint64_t step_index) {
  const std::size_t n = particles.size();
  if (n == 0) return false;
  if (effective_sample_size(particles) >= threshold * static_cast<double>(n)) return false;
  const CounterRng rng(seed);
  const double step = 1.0 / static_cast<double>(n);
  double u = rng.uniform(kResampleChannel, step_index) * step;
  ParticleSet out;
  out.reserve(n);
  double cumulative = particles.front().weight;
  std::size_t j = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (u > cumulative && j + 1 < n) cumulative += particles[++j].weight;
    Particle p = particles[j];
    p.weight = step;
    out.push_back(p);
    u += step;
  }
  particles = std::move(out);
  return true;
}

PoseEstimate estimate(const ParticleSet& particles) {
  if (particles.empty()) throw InputError("estimate: empty particle set");
  double total = 0.0;
  double x = 0.0;
  double y = 0.0;
  double s = 0.0;
  double c = 0.0;
  for (const auto& p : particles) {
    total += p.weight;
    x += p.weight * p.x;
    y += p.weight * p.y;
    s += p.weight * std::sin(p.theta);
    c += p.weight * std::cos(p.theta);
  }
  if (!(total > 0.0)) throw InputError("estimate: weights sum to zero");
  PoseEstimate e;
  e.x = x / total;
  e.y = y / total;
  e.theta = wrap_two_pi(std::atan2(s, c));
  double sq = 0.0;
  for (const auto& p : particles) sq += (p.weight / total) * (p.weight / total);
  e.score = (1.0 / sq) / static_cast<double>(particles.size());
  return e;
}

TrajectoryMetrics trajectory_metrics(const std::vector<PoseEstimate>& estimates,
                                     const std::vector<PoseEstimate>& truth) {
  if (estimates.size() != truth.size()) {
    throw InputError("trajectory metrics: estimate and truth counts differ");
  }
  if (estimates.empty()) throw InputError("trajectory metrics: empty trajectory");
  const std::size_t n = estimates.size();
  const std::size_t k = std::min<std::size_t>(10, n);
  double sq = 0.0;
  for (std::size_t i = n - k; i < n; ++i) {
    const double dx = estimates[i].x - truth[i].x;
    const double dy = estimates[i].y - truth[i].y;
    sq += dx * dx + dy * dy;
  }
  TrajectoryMetrics m;
  m.rmse_last10 = std::sqrt(sq / static_cast<double>(k));
  m.final_error = std::hypot(estimates.back().x - truth.back().x, estimates.back().y - truth.back().y);
  return m;
}

TrackResult run_trajectory(const HeatmapStack& pdf, const std::vector<OdometryStep>& steps,
                           const FloorPlan& plan, const FilterConfig& config,
                           const std::optional<std::vector<PoseEstimate>>& truth) {
  if (steps.empty()) throw InputError("run_trajectory: no odometry steps");
  if (truth && truth->size() != steps.size()) {
    throw InputError("run_trajectory: ground truth must hold one pose per step");
  }
  for (const auto& s : steps) s.validate();

  TrackResult result;
  ParticleSet particles = init_from_heatmap(pdf, config.particles, config.seed);
  MotionNoise inflated = config.noise;
  inflated.forward_fraction *= config.recovery_noise_factor;
  inflated.heading *= config.recovery_noise_factor;

  for (std::size_t i = 0; i < steps.size(); ++i) {
    const ParticleSet previous = particles;
    particles = predict(previous, steps[i], config.noise, config.seed, i, 0);
    if (apply_constraints(particles, plan, previous).total_kill) {
      ++result.recoveries;
      result.recovery_steps.push_back(i);
      particles = predict(previous, steps[i], inflated, config.seed, i, 1);
      if (apply_constraints(particles, plan, previous).total_kill) {
        ++result.reinitializations;
        particles = init_from_heatmap(pdf, config.particles, splitmix64(config.seed ^ (i + 1)));
      }
    }
    if (resample(particles, config.ess_threshold, config.seed, i)) ++result.resamples;
    result.estimates.push_back(estimate(particles));
  }
  if (truth) result.metrics = trajectory_metrics(result.estimates, *truth);
  return result;
}

}  // namespace floorloc
