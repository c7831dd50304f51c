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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "floorloc/error.hpp"
#include "floorloc/floorplan.hpp"
#include "floorloc/layout_matching.hpp"
#include "floorloc/particle_filter.hpp"
#include "test_support.hpp"

namespace floorloc {
namespace {

constexpr double kPi = std::numbers::pi;

double weight_sum(const ParticleSet& ps) {
  double s = 0.0;
  for (const auto& p : ps) s += p.weight;
  return s;
}

HeatmapStack one_hot(const FloorPlan& plan, const Vec2& where, int orientations, int hot) {
  HeatmapStack s;
  s.valid = plan.traversable;
  for (int o = 0; o < orientations; ++o) {
    s.maps.push_back(Raster2D::like(plan.traversable, 0.0));
    s.thetas.push_back(2.0 * kPi * o / orientations);
  }
  s.maps[hot].at(plan.traversable.cell_of(where)) = 1.0;
  return s;
}

// Multinomial cell frequencies from the sampler versus the stack itself.
std::vector<double> cell_frequencies(const ParticleSet& ps, const Raster2D& grid) {
  std::vector<double> f(grid.size(), 0.0);
  for (const auto& p : ps) f[grid.index(grid.cell_of({p.x, p.y}).col, grid.cell_of({p.x, p.y}).row)] += 1.0;
  for (auto& v : f) v /= static_cast<double>(ps.size());
  return f;
}

TEST(InitFromHeatmap, PeakedStackTotalVariation) {
  HeatmapStack s;
  s.valid = Raster2D(10, 10, 0.1, Vec2::Zero(), 1.0);
  s.maps = {Raster2D::like(s.valid)};
  s.thetas = {0.0};
  double total = 0.0;
  for (int r = 0; r < 10; ++r) {
    for (int c = 0; c < 10; ++c) {
      const double d2 = (c - 4.3) * (c - 4.3) + (r - 5.6) * (r - 5.6);
      total += s.maps[0].at(c, r) = std::exp(-0.5 * d2);
    }
  }
  for (auto& v : s.maps[0].values) v /= total;
  const auto ps = init_from_heatmap(s, 100000, 5);
  const auto f = cell_frequencies(ps, s.valid);
  double tv = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) tv += std::abs(f[i] - s.maps[0].values[i]);
  EXPECT_LT(0.5 * tv, 0.01);
}

TEST(InitFromHeatmap, FlatStackPassesChiSquare) {
  HeatmapStack s;
  s.valid = Raster2D(10, 10, 0.1, Vec2::Zero(), 1.0);
  s.maps = {Raster2D::like(s.valid, 0.01)};
  s.thetas = {0.0};
  const std::size_t n = 100000;
  const auto f = cell_frequencies(init_from_heatmap(s, n, 6), s.valid);
  double chi2 = 0.0;
  for (double v : f) chi2 += n * (v - 0.01) * (v - 0.01) / 0.01;
  EXPECT_LT(chi2, 148.23);  // 99 dof, p = 0.001
}

TEST(InitFromHeatmap, OneHotJitterAndDeterminism) {
  const FloorPlan plan = testing::box_plan(3, 3);
  const HeatmapStack s = one_hot(plan, {1.23, 2.04}, 4, 1);
  const auto a = init_from_heatmap(s, 2000, 11);
  const auto b = init_from_heatmap(s, 2000, 11);
  const Vec2 c = plan.traversable.cell_center(plan.traversable.cell_of({1.23, 2.04}));
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_LE(std::abs(a[i].x - c.x()), 0.05 + 1e-12);
    EXPECT_LE(std::abs(a[i].y - c.y()), 0.05 + 1e-12);
    EXPECT_LE(angle_distance(a[i].theta, kPi / 2), kPi / 4 + 1e-12);
    EXPECT_EQ(a[i].x, b[i].x);
    EXPECT_EQ(a[i].theta, b[i].theta);
    EXPECT_EQ(a[i].weight, 1.0 / 2000);
  }
  EXPECT_THROW(init_from_heatmap(s, 0, 1), InputError);
}

TEST(InitFromHeatmap, DegenerateStackFallsBackToTraversable) {
  const FloorPlan plan = testing::box_plan(2, 2);
  HeatmapStack s = one_hot(plan, {1, 1}, 2, 0);
  s.maps[0].values.assign(s.maps[0].size(), 0.0);
  for (const auto& p : init_from_heatmap(s, 500, 3)) EXPECT_TRUE(plan.is_traversable({p.x, p.y}));
}

TEST(Predict, ZeroNoiseExamples) {
  const MotionNoise none{0.0, 0.0};
  const ParticleSet start{{1.0, 2.0, 0.0, 0.5}, {0.0, 0.0, 1.0, 0.5}};
  EXPECT_EQ(predict(start, {0.0, 0.0}, none, 1)[0].x, 1.0);
  EXPECT_EQ(predict(start, {0.0, 0.0}, none, 1)[1].theta, 1.0);
  const auto fwd = predict(start, {1.0, 0.0}, none, 1);
  EXPECT_DOUBLE_EQ(fwd[0].x, 2.0);
  EXPECT_DOUBLE_EQ(fwd[0].y, 2.0);
  EXPECT_EQ(fwd[0].weight, 0.5);
  const auto turn = predict(start, {1.0, kPi / 2}, none, 1);
  EXPECT_NEAR(turn[0].x, 1.0, 1e-12);
  EXPECT_NEAR(turn[0].y, 3.0, 1e-12);
}

TEST(Predict, NoiseStatistics) {
  ParticleSet ps(20000, Particle{0, 0, 0, 1.0 / 20000});
  const auto out = predict(ps, {2.0, 0.0}, MotionNoise{0.1, 0.0}, 8);
  double m = 0.0;
  double v = 0.0;
  for (const auto& p : out) m += p.x;
  m /= out.size();
  for (const auto& p : out) v += (p.x - m) * (p.x - m);
  v /= out.size() - 1;
  EXPECT_NEAR(m, 2.0, 4 * 0.2 / std::sqrt(20000.0));
  EXPECT_NEAR(std::sqrt(v), 0.2, 0.01);
  EXPECT_EQ(predict(ps, {2.0, 0.1}, MotionNoise{}, 8, 3)[7].x, predict(ps, {2.0, 0.1}, MotionNoise{}, 8, 3)[7].x);
}

TEST(Predict, DeadReckoningFromPriorMean) {
  const MotionNoise none{0.0, 0.0};
  ParticleSet ps{{1, 1, 0.3, 0.25}, {1.4, 0.8, 0.3, 0.25}, {0.6, 1.2, 0.3, 0.5}};
  double x = 0.0, y = 0.0, th = 0.3;
  for (const auto& p : ps) x += p.weight * p.x, y += p.weight * p.y;
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 30; ++i) {
    const OdometryStep s{u(rng), 0.5 * u(rng)};
    ps = predict(ps, s, none, 2, i);
    th += s.delta_heading;
    x += s.delta_forward * std::cos(th);
    y += s.delta_forward * std::sin(th);
    const PoseEstimate e = estimate(ps);
    EXPECT_NEAR(e.x, x, 1e-9);
    EXPECT_NEAR(e.y, y, 1e-9);
  }
}

TEST(ApplyConstraints, WallCrossingAndOutsideAreKilled) {
  const FloorPlan plan = testing::box_plan(4, 4);
  const ParticleSet previous{{1, 1, 0, 0.25}, {1, 2, 0, 0.25}, {3, 3, 0, 0.25}, {2, 2, 0, 0.25}};
  ParticleSet moved = previous;
  moved[0].x = 5.0;  // through the east wall
  moved[1].x = -0.5;
  moved[2].y = 3.5;
  const auto r = apply_constraints(moved, plan, previous);
  EXPECT_EQ(r.killed, 2u);
  EXPECT_FALSE(r.total_kill);
  EXPECT_EQ(moved[0].weight, 0.0);
  EXPECT_EQ(moved[1].weight, 0.0);
  EXPECT_NEAR(moved[2].weight, 0.5, 1e-15);
  EXPECT_NEAR(weight_sum(moved), 1.0, 1e-12);
}

TEST(ApplyConstraints, AllLegalOnlyRenormalizes) {
  const FloorPlan plan = testing::box_plan(4, 4);
  const ParticleSet previous{{1, 1, 0, 0.2}, {2, 2, 0, 0.6}};
  ParticleSet moved{{1.5, 1, 0, 0.2}, {2, 2.5, 0, 0.6}};
  EXPECT_EQ(apply_constraints(moved, plan, previous).killed, 0u);
  EXPECT_NEAR(moved[0].weight, 0.25, 1e-15);
  EXPECT_NEAR(moved[1].weight, 0.75, 1e-15);
}

TEST(ApplyConstraints, TotalKillRestoresPrevious) {
  const FloorPlan plan = testing::box_plan(2, 2);
  const ParticleSet previous(10, Particle{1, 1, kPi, 0.1});
  ParticleSet moved = predict(previous, {3.0, 0.0}, MotionNoise{0, 0}, 1);
  const auto r = apply_constraints(moved, plan, previous);
  EXPECT_TRUE(r.total_kill);
  EXPECT_EQ(moved[3].x, 1.0);
  EXPECT_NEAR(weight_sum(moved), 1.0, 1e-12);
}

TEST(RunTrajectory, DeadEndTriggersRecoveryThenReinit) {
  const FloorPlan plan = testing::box_plan(2, 2);
  FilterConfig cfg;
  cfg.particles = 200;
  cfg.noise = {0.0, 0.0};
  const auto r = run_trajectory(one_hot(plan, {1, 1}, 4, 2), {{0.3, 0.0}, {3.0, 0.0}, {0.1, 0.0}}, plan, cfg);
  EXPECT_EQ(r.recoveries, 1u);
  EXPECT_EQ(r.reinitializations, 1u);
  ASSERT_EQ(r.recovery_steps.size(), 1u);
  EXPECT_EQ(r.recovery_steps[0], 1u);
  EXPECT_EQ(r.estimates.size(), 3u);
}

TEST(Ess, Examples) {
  ParticleSet ps{{0, 0, 0, 0.5}, {1, 0, 0, 0.5}, {2, 0, 0, 0}, {3, 0, 0, 0}};
  EXPECT_DOUBLE_EQ(effective_sample_size(ps), 2.0);
  ParticleSet keep = ps;
  EXPECT_FALSE(resample(keep, 0.5, 1));
  EXPECT_TRUE(resample(ps, 0.6, 1));
  for (const auto& p : ps) {
    EXPECT_EQ(p.weight, 0.25);
    EXPECT_LT(p.x, 1.5);
  }
  ParticleSet uniform(8, Particle{0, 0, 0, 0.125});
  EXPECT_DOUBLE_EQ(effective_sample_size(uniform), 8.0);
  EXPECT_FALSE(resample(uniform, 0.99, 1));
}

TEST(Resample, AllWeightOnOneParticle) {
  ParticleSet ps(6, Particle{0, 0, 0, 0});
  ps[4] = {7, 8, 1, 1.0};
  EXPECT_TRUE(resample(ps, 0.5, 2));
  for (const auto& p : ps) {
    EXPECT_EQ(p.x, 7);
    EXPECT_EQ(p.y, 8);
    EXPECT_NEAR(p.weight, 1.0 / 6, 1e-15);
  }
}

TEST(Resample, PreservesWeightedMeanInExpectation) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ParticleSet base(50);
  for (auto& p : base) p = {10 * u(rng), 5 * u(rng), 0, std::pow(u(rng), 4)};
  normalize_weights(base);
  double mu = 0.0;
  for (const auto& p : base) mu += p.weight * p.x;
  std::vector<double> means;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    ParticleSet ps = base;
    ASSERT_TRUE(resample(ps, 2.0, seed));
    double m = 0.0;
    for (const auto& p : ps) m += p.weight * p.x;
    means.push_back(m);
  }
  double avg = 0.0;
  for (double m : means) avg += m;
  avg /= means.size();
  double var = 0.0;
  for (double m : means) var += (m - avg) * (m - avg);
  var /= means.size() - 1;
  EXPECT_LE(std::abs(avg - mu), 3.0 * std::sqrt(var / means.size()) + 1e-12);
}

TEST(Estimate, Examples) {
  EXPECT_EQ(estimate({{3, 4, 1, 1}}).x, 3);
  const auto two = estimate({{0, 0, 0, 0.5}, {2, 0, 0, 0.5}});
  EXPECT_DOUBLE_EQ(two.x, 1.0);
  EXPECT_DOUBLE_EQ(two.y, 0.0);
  EXPECT_DOUBLE_EQ(two.score, 1.0);
  const double deg = kPi / 180;
  const auto wrap = estimate({{0, 0, -170 * deg, 0.5}, {0, 0, 170 * deg, 0.5}});
  EXPECT_NEAR(angle_distance(wrap.theta, kPi), 0.0, 1e-12);
  EXPECT_THROW(estimate({}), InputError);
}

TEST(Metrics, EqualTrajectoriesScoreZero) {
  std::vector<PoseEstimate> t;
  for (int i = 0; i < 15; ++i) t.push_back({0.1 * i, 1.0, 0.0, 0.0});
  const auto m = trajectory_metrics(t, t);
  EXPECT_EQ(m.rmse_last10, 0.0);
  EXPECT_EQ(m.final_error, 0.0);
  auto shifted = t;
  for (std::size_t i = 0; i < shifted.size(); ++i) shifted[i].x += i < 14 ? 1.0 : 0.0;
  const auto m2 = trajectory_metrics(shifted, t);
  EXPECT_NEAR(m2.rmse_last10, std::sqrt(0.9), 1e-12);
  EXPECT_EQ(m2.final_error, 0.0);
  EXPECT_THROW(trajectory_metrics(t, {}), InputError);
}

TEST(RunTrajectory, NoiselessOneHotPriorTracksExactly) {
  const FloorPlan plan = testing::box_plan(10, 10);
  const int deg = 30;
  FilterConfig cfg;
  cfg.particles = 2000;
  cfg.noise = {0.0, 0.0};
  const HeatmapStack prior = one_hot(plan, {2.05, 2.05}, 360, deg);
  std::vector<OdometryStep> steps;
  std::vector<PoseEstimate> truth;
  Vec2 p(2.05, 2.05);
  double th = deg * kPi / 180;
  for (int i = 0; i < 24; ++i) {
    const OdometryStep s{0.5, i % 8 == 7 ? kPi / 3 : 0.0};
    th += s.delta_heading;
    p += s.delta_forward * Vec2(std::cos(th), std::sin(th));
    steps.push_back(s);
    truth.push_back({p.x(), p.y(), th, 0});
  }
  const auto r = run_trajectory(prior, steps, plan, cfg, truth);
  ASSERT_TRUE(r.metrics.has_value());
  EXPECT_LT(r.metrics->final_error, plan.resolution());
  EXPECT_EQ(r.recoveries, 0u);
}

// Corridor with a side room; a symmetric prior resolves only once the
// mirrored hypothesis runs into the corridor wall.
TEST(RunTrajectory, BimodalPriorCollapsesLate) {
  const SegmentSet walls{{{Vec2(0, 0), Vec2(20, 0)},
                          {Vec2(20, 0), Vec2(20, 2)},
                          {Vec2(0, 2), Vec2(0, 0)},
                          {Vec2(0, 2), Vec2(14, 2)},
                          {Vec2(15, 2), Vec2(20, 2)},
                          {Vec2(12, 2), Vec2(12, 6)},
                          {Vec2(12, 6), Vec2(17, 6)},
                          {Vec2(17, 6), Vec2(17, 2)}},
                         SegmentFrame::kFloorPlan};
  const FloorPlan plan = build_floorplan(walls, {}, 0.1, Vec2(1, 1));
  HeatmapStack prior = one_hot(plan, {2, 1}, 36, 0);
  prior.maps[18].at(plan.traversable.cell_of({18, 1})) = 1.0;
  prior = normalize_to_pdf(prior);

  std::vector<OdometryStep> steps;
  std::vector<PoseEstimate> truth;
  Vec2 p(2, 1);
  double th = 0.0;
  for (int i = 0; i < 32; ++i) {
    const OdometryStep s{0.5, i == 25 ? kPi / 2 : 0.0};
    th += s.delta_heading;
    p += s.delta_forward * Vec2(std::cos(th), std::sin(th));
    steps.push_back(s);
    truth.push_back({p.x(), p.y(), th, 0});
  }
  FilterConfig cfg;
  cfg.seed = 3;
  const auto r = run_trajectory(prior, steps, plan, cfg, truth);
  ASSERT_TRUE(r.metrics.has_value());
  EXPECT_LT(r.metrics->final_error, 0.5);
  EXPECT_GE(r.metrics->rmse_last10, 5.0 * r.metrics->final_error);
  // Early on the estimate sits between the modes.
  EXPECT_GT(std::abs(r.estimates[10].x - truth[10].x), 2.0);
}

TEST(Properties, WeightsSumToOneAndParticlesStayInside) {
  const FloorPlan plan = testing::box_plan(5, 3);
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    ParticleSet ps(64);
    for (auto& p : ps) p = {0.2 + 4.6 * u(rng), 0.2 + 2.6 * u(rng), 6.28 * u(rng), u(rng)};
    normalize_weights(ps);
    ASSERT_NEAR(weight_sum(ps), 1.0, 1e-9);
    const ParticleSet previous = ps;
    ps = predict(ps, {2.0 * u(rng), u(rng) - 0.5}, MotionNoise{}, trial);
    ASSERT_NEAR(weight_sum(ps), 1.0, 1e-9);
    apply_constraints(ps, plan, previous);
    ASSERT_NEAR(weight_sum(ps), 1.0, 1e-9);
    for (const auto& p : ps) ASSERT_TRUE(plan.is_traversable({p.x, p.y}));
    resample(ps, 0.5, trial);
    ASSERT_NEAR(weight_sum(ps), 1.0, 1e-9);
  }
}

TEST(OdometryStep, SanityGate) {
  EXPECT_NO_THROW((OdometryStep{4.99, 0}).validate());
  EXPECT_THROW((OdometryStep{5.0, 0}).validate(), InputError);
  EXPECT_THROW((OdometryStep{-10.0, 0}).validate(), InputError);
}

}  // namespace
}  // namespace floorloc
