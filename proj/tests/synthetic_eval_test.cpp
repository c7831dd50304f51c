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
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "floorloc/error.hpp"
#include "floorloc/evaluation.hpp"
#include "floorloc/io.hpp"
#include "floorloc/ray_casting.hpp"
#include "floorloc/synthetic.hpp"
#include "test_support.hpp"

namespace floorloc {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDeg = kPi / 180.0;

// Nearest hit over every segment, no acceleration.
double brute_cast(const std::vector<Segment2>& segs, const Vec2& o, double angle, double max_range) {
  const Vec2 d(std::cos(angle), std::sin(angle));
  double best = std::numeric_limits<double>::infinity();
  for (const auto& s : segs) {
    const Vec2 e = s.b - s.a;
    const double den = d.x() * e.y() - d.y() * e.x();
    if (std::abs(den) < 1e-14) continue;
    const Vec2 w = s.a - o;
    const double t = (w.x() * e.y() - w.y() * e.x()) / den;
    const double u = (w.x() * d.y() - w.y() * d.x()) / den;
    if (t > 1e-12 && u >= -1e-12 && u <= 1.0 + 1e-12) best = std::min(best, t);
  }
  return best <= max_range ? best : kNoHit;
}

TEST(RayCast, SquareRoomExamples) {
  const FloorPlan plan = testing::box_plan(10, 10);
  const RayScan mid = ray_cast(plan, {5, 5, 0, 0}, 4, 10.0);
  ASSERT_EQ(mid.ranges.size(), 4u);
  for (double r : mid.ranges) EXPECT_NEAR(r, 5.0, 1e-12);
  EXPECT_NEAR(mid.angles[1], kPi / 2, 1e-12);

  const RayScan corner = ray_cast(plan, {1, 1, kPi / 4, 0}, 1, 10.0);
  EXPECT_EQ(corner.ranges[0], kNoHit);  // 9 sqrt(2) > 10
  const RayScan far = ray_cast(plan, {1, 1, kPi / 4, 0}, 1, 13.0);
  EXPECT_NEAR(far.ranges[0], 9.0 * std::sqrt(2.0), 1e-9);

  EXPECT_THROW(ray_cast(plan, {-3, 5, 0, 0}, 8, 10.0), InputError);
  EXPECT_THROW(ray_cast(plan, {5, 5, 0, 0}, 0, 10.0), InputError);
}

TEST(RayCast, ParallelRayMissesEverything) {
  SegmentSet walls{{{Vec2(0, 0), Vec2(30, 0)}, {Vec2(30, 0), Vec2(30, 1)}, {Vec2(30, 1), Vec2(0, 1)},
                    {Vec2(0, 1), Vec2(0, 0)}},
                   SegmentFrame::kFloorPlan};
  const FloorPlan plan = build_floorplan(walls, {}, 0.1, Vec2(1, 0.5));
  EXPECT_EQ(ray_cast(plan, {1, 0.5, 0, 0}, 1, 10.0).ranges[0], kNoHit);
}

TEST(RayCast, AgreesWithBruteForceOnGeneratedPlans) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const FloorPlan plan = gen_floorplan(seed);
    const auto walls = plan.closed_walls().segments;
    for (const auto& pose : sample_poses(plan, 5, seed)) {
      const RayScan scan = ray_cast(plan, pose, 72, 10.0);
      for (std::size_t i = 0; i < scan.ranges.size(); ++i) {
        const double b = brute_cast(walls, {pose.x, pose.y}, scan.angles[i], 10.0);
        if (std::isinf(b)) {
          EXPECT_EQ(scan.ranges[i], kNoHit);
        } else {
          EXPECT_NEAR(scan.ranges[i], b, 1e-9);
        }
      }
    }
  }
}

TEST(RayCast, RigidTransformInvariance) {
  const FloorPlan plan = gen_floorplan(4);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    const double phi = kPi * u(rng);
    const Vec2 t(20 * u(rng), 20 * u(rng));
    SegmentSet moved_walls = transform_segments(plan.walls, phi, t);
    std::vector<Segment2> moved_doors;
    for (const auto& d : plan.doors) moved_doors.push_back({rotate2d(d.a, phi) + t, rotate2d(d.b, phi) + t});
    const FloorPlan moved =
        build_floorplan(moved_walls, moved_doors, plan.resolution(), rotate2d(plan.seed, phi) + t);
    for (const auto& pose : sample_poses(plan, 3, trial)) {
      const Vec2 q = rotate2d({pose.x, pose.y}, phi) + t;
      const RayScan a = ray_cast(plan, pose, 36, 10.0);
      const RayScan b = ray_cast(moved, {q.x(), q.y(), pose.theta + phi, 0}, 36, 10.0);
      for (std::size_t i = 0; i < a.ranges.size(); ++i) {
        if (std::isinf(a.ranges[i])) {
          EXPECT_TRUE(std::isinf(b.ranges[i]) || b.ranges[i] > 10.0 - 1e-6);
        } else {
          EXPECT_NEAR(a.ranges[i], b.ranges[i], 1e-6);
        }
      }
    }
  }
}

TEST(PerfectSegments, ConvexRoomShowsAllWalls) {
  const FloorPlan plan = testing::box_plan(6, 4);
  const SegmentSet s = perfect_segments(plan, {2, 1.5, 0, 0}, 10.0);
  EXPECT_EQ(s.frame, SegmentFrame::kObservation);
  double total = 0.0;
  for (const auto& seg : s.segments) total += seg.length();
  EXPECT_NEAR(total, 20.0, 1e-9);
  EXPECT_GE(s.size(), 4u);
}

TEST(PerfectSegments, ClippedToRange) {
  const FloorPlan plan = testing::box_plan(30, 2);
  const SegmentSet s = perfect_segments(plan, {1, 1, 0, 0}, 10.0);
  for (const auto& seg : s.segments) {
    EXPECT_LE(seg.a.norm(), 10.0 + 1e-9);
    EXPECT_LE(seg.b.norm(), 10.0 + 1e-9);
  }
}

TEST(PerfectSegments, OccludedWallIsAbsent) {
  // A short wall behind a longer one, seen from the front.
  SegmentSet walls{{{Vec2(0, 0), Vec2(10, 0)}, {Vec2(10, 0), Vec2(10, 10)}, {Vec2(10, 10), Vec2(0, 10)},
                    {Vec2(0, 10), Vec2(0, 0)}, {Vec2(6, 3), Vec2(6, 7)}, {Vec2(8, 4.5), Vec2(8, 5.5)}},
                   SegmentFrame::kFloorPlan};
  const FloorPlan plan = build_floorplan(walls, {}, 0.1, Vec2(2, 5));
  const auto pieces = visible_pieces(plan.closed_walls().segments, {2, 5}, 20.0);
  for (const auto& p : pieces) {
    EXPECT_FALSE(std::abs(p.a.x() - 8.0) < 1e-9 && std::abs(p.b.x() - 8.0) < 1e-9);
  }
}

TEST(PerfectSegments, ObservationFrameIsPoseRelative) {
  const FloorPlan plan = testing::box_plan(10, 10);
  const SegmentSet s = perfect_segments(plan, {3, 5, kPi / 2, 0}, 10.0);
  // Heading +Y means the north wall (y = 10) lies 5 m straight ahead.
  bool found = false;
  for (const auto& seg : s.segments) {
    if (std::abs(seg.a.x() - 5.0) < 1e-9 && std::abs(seg.b.x() - 5.0) < 1e-9) found = true;
  }
  EXPECT_TRUE(found);
}

TEST(PerfectSegments, ReproduceRayCastRanges) {
  for (std::uint64_t seed : {7u, 8u}) {
    const FloorPlan plan = gen_floorplan(seed);
    for (const auto& pose : sample_poses(plan, 4, seed)) {
      const SegmentSet s = perfect_segments(plan, pose, 10.0);
      std::vector<Segment2> back;
      for (const auto& seg : s.segments) {
        back.push_back({rotate2d(seg.a, pose.theta) + Vec2(pose.x, pose.y),
                        rotate2d(seg.b, pose.theta) + Vec2(pose.x, pose.y)});
      }
      const RayScan scan = ray_cast(plan, pose, 90, 10.0);
      for (std::size_t i = 0; i < scan.ranges.size(); ++i) {
        if (!(scan.ranges[i] < 10.0 - 1e-3)) continue;
        EXPECT_NEAR(brute_cast(back, {pose.x, pose.y}, scan.angles[i], 10.0), scan.ranges[i], 1e-6);
      }
    }
  }
}

TEST(RayMatch, ZeroAtGeneratingPoseAndGlobalMax) {
  GenSpec gs;
  gs.uniform_rooms = false;
  const FloorPlan plan = gen_floorplan(14, gs);
  const DistanceField field = compute_distance_field(plan, 36, 10.0);
  for (const auto& sampled : sample_poses(plan, 3, 9)) {
    const Cell c = plan.traversable.cell_of({sampled.x, sampled.y});
    const Vec2 p = plan.traversable.cell_center(c);
    const PoseEstimate pose{p.x(), p.y(), 10 * kDeg * std::round(sampled.theta / (10 * kDeg)), 0};
    const RayScan scan = ray_cast(plan, pose, 36, 10.0);
    const HeatmapStack s = ray_match(field, scan, uniform_orientations(36));
    std::size_t o = 0;
    for (; o < s.thetas.size(); ++o) {
      if (angle_distance(s.thetas[o], pose.theta) < 1e-9) break;
    }
    ASSERT_LT(o, s.thetas.size());
    EXPECT_NEAR(s.maps[o].at(c), 0.0, 1e-4);
    const PoseEstimate best = argmax_pose(s);
    EXPECT_NEAR(best.x, pose.x, 1e-9);
    EXPECT_NEAR(best.y, pose.y, 1e-9);
  }
}

TEST(RayMatch, SymmetricCorridorHasTwoMaxima) {
  const FloorPlan plan = testing::box_plan(10, 2);
  const DistanceField field = compute_distance_field(plan, 36, 10.0);
  const Cell c = plan.traversable.cell_of({3, 1});
  const Vec2 p = plan.traversable.cell_center(c);
  const RayScan scan = ray_cast(plan, {p.x(), p.y(), 0, 0}, 36, 10.0);
  const HeatmapStack s = ray_match(field, scan, uniform_orientations(36));
  const Cell mirror = plan.traversable.cell_of(Vec2(10, 2) - p);
  EXPECT_NEAR(s.maps[0].at(c), 0.0, 1e-4);
  EXPECT_NEAR(s.maps[18].at(mirror), 0.0, 1e-4);
  EXPECT_NE(c, mirror);
}

TEST(Evaluate, Examples) {
  const std::vector<PoseEstimate> t{{0, 0, 0, 0}, {5, 5, 1, 0}};
  const EvalReport same = evaluate(t, t);
  for (const auto& row : same.rows) EXPECT_EQ(row.accuracy, 1.0);

  std::vector<PoseEstimate> off = t;
  off[1].x += 3.0;
  const EvalReport r = evaluate(off, t);
  EXPECT_EQ(r.accuracy(1.0), 0.5);
  EXPECT_EQ(r.accuracy(5.0), 1.0);
  EXPECT_EQ(r.accuracy(2.0), 0.5);

  std::vector<PoseEstimate> edge = t;
  edge[0].x = 1.0;
  EXPECT_EQ(evaluate(edge, t).accuracy(1.0), 1.0);

  std::vector<PoseEstimate> turned = t;
  turned[0].theta = 31 * kDeg;
  const EvalReport rt = evaluate(turned, t);
  EXPECT_EQ(rt.accuracy(1.0), 1.0);
  EXPECT_EQ(rt.accuracy(1.0, 30.0), 0.5);

  EXPECT_THROW(evaluate(t, {t[0]}), InputError);
  EXPECT_THROW(evaluate({}, {}), InputError);
}

TEST(Evaluate, MonotoneInThreshold) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<PoseEstimate> p, t;
    for (int i = 0; i < 20; ++i) {
      t.push_back({0, 0, 0, 0});
      p.push_back({n(rng), n(rng), n(rng), 0});
    }
    const EvalReport r = evaluate(p, t);
    const double ms[] = {0.1, 0.5, 1.0, 2.0, 5.0};
    for (int i = 1; i < 5; ++i) ASSERT_LE(r.accuracy(ms[i - 1]), r.accuracy(ms[i]));
    ASSERT_LE(r.accuracy(1.0, 30.0), r.accuracy(1.0));
  }
}

TEST(GenFloorplan, DeterministicAndValid) {
  GenSpec gs;
  gs.uniform_rooms = false;
  const auto a = io::plan_to_json(gen_floorplan(99, gs)).dump();
  const auto b = io::plan_to_json(gen_floorplan(99, gs)).dump();
  EXPECT_EQ(a, b);
  EXPECT_NE(a, io::plan_to_json(gen_floorplan(100, gs)).dump());
  const FloorPlan plan = gen_floorplan(99, gs);
  EXPECT_GT(plan.traversable.sum(), 100.0);
  for (const auto& s : plan.walls.segments) EXPECT_GT(s.length(), 0.0);
}

TEST(GenFloorplan, SingleRoomHasFourWalls) {
  GenSpec gs;
  gs.rooms = 1;
  gs.corridors = 0;
  gs.room_width = 10;
  gs.room_depth = 10;
  gs.pilasters_per_room = 0;
  const FloorPlan plan = gen_floorplan(1, gs);
  EXPECT_EQ(plan.walls.size(), 4u);
  EXPECT_TRUE(plan.is_traversable({5, 5}));
  gs.rooms = 3;
  EXPECT_THROW(gen_floorplan(1, gs), InputError);
}

TEST(GenFloorplan, CorridorConnectsAllRooms) {
  GenSpec gs;
  gs.uniform_rooms = false;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const FloorPlan plan = gen_floorplan(seed, gs);
    // Every room interior reached by the flood fill: each door is traversable on both sides.
    for (const auto& d : plan.doors) {
      const Vec2 m = 0.5 * (d.a + d.b);
      const Vec2 n = Vec2(-(d.b - d.a).y(), (d.b - d.a).x()).normalized();
      EXPECT_TRUE(plan.is_traversable(m + 0.3 * n));
      EXPECT_TRUE(plan.is_traversable(m - 0.3 * n));
    }
    EXPECT_EQ(plan.doors.size(), 6u);
  }
}

TEST(SamplePoses, ClearanceAndDeterminism) {
  const FloorPlan plan = gen_floorplan(2);
  const auto a = sample_poses(plan, 50, 4, 0.5);
  const auto b = sample_poses(plan, 50, 4, 0.5);
  const auto walls = plan.closed_walls().segments;
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].x, b[i].x);
    EXPECT_TRUE(plan.is_traversable({a[i].x, a[i].y}));
    for (int k = 0; k < 16; ++k) {
      EXPECT_GE(brute_cast(walls, {a[i].x, a[i].y}, k * kPi / 8, 1.0), 0.5 - 0.1);
    }
  }
}

}  // namespace
}  // namespace floorloc
