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

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "floorloc/config.hpp"
#include "floorloc/error.hpp"
#include "floorloc/io.hpp"
#include "floorloc/pipeline.hpp"
#include "floorloc/synthetic.hpp"
#include "test_support.hpp"

namespace floorloc {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("floorloc_cli_io_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(FLOORLOC_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

DepthMap random_depth(std::mt19937_64& rng, int w, int h, bool with_mask) {
  std::uniform_real_distribution<float> u(0.1f, 20.0f);
  DepthMap d(w, h);
  for (auto& v : d.depth) v = u(rng);
  if (with_mask) {
    d.mask.resize(d.depth.size());
    for (std::size_t i = 0; i < d.mask.size(); ++i) d.mask[i] = (i % 3 == 0) ? 0 : 1;
  }
  return d;
}

TEST(Io, DepthAndMaskRoundTripBitExact) {
  const fs::path dir = scratch("depth");
  std::mt19937_64 rng(1);
  const DepthMap d = random_depth(rng, 17, 9, true);
  io::write_depth(dir / "d.bin", d);
  const DepthMap r = io::read_depth(dir / "d.bin");
  EXPECT_EQ(r.width, 17);
  EXPECT_EQ(r.height, 9);
  EXPECT_EQ(0, std::memcmp(r.depth.data(), d.depth.data(), d.depth.size() * sizeof(float)));
  EXPECT_EQ(fs::file_size(dir / "d.bin"), 16u + 4u * 17u * 9u);

  io::write_mask(dir / "m.bin", 17, 9, d.mask);
  int w = 0, h = 0;
  EXPECT_EQ(io::read_mask(dir / "m.bin", w, h), d.mask);
  EXPECT_EQ(w, 17);
  EXPECT_EQ(h, 9);

  std::ofstream(dir / "junk.bin") << "nope";
  EXPECT_THROW(io::read_depth(dir / "junk.bin"), ParseError);
}

TEST(Io, PlanRoundTrip) {
  const fs::path dir = scratch("plan");
  GenSpec gs;
  gs.uniform_rooms = false;
  const FloorPlan plan = gen_floorplan(3, gs);
  io::write_plan(dir / "plan.json", plan);
  const FloorPlan back = io::read_plan(dir / "plan.json");
  ASSERT_EQ(back.walls.size(), plan.walls.size());
  for (std::size_t i = 0; i < plan.walls.size(); ++i) {
    EXPECT_NEAR((back.walls.segments[i].a - plan.walls.segments[i].a).norm(), 0.0, 1e-12);
    EXPECT_NEAR((back.walls.segments[i].b - plan.walls.segments[i].b).norm(), 0.0, 1e-12);
  }
  EXPECT_EQ(back.doors.size(), plan.doors.size());
  EXPECT_EQ(back.traversable.values, plan.traversable.values);
  EXPECT_EQ(back.raster.values, plan.raster.values);
  EXPECT_EQ(io::plan_to_json(back).dump(), io::plan_to_json(plan).dump());

  json bad = io::plan_to_json(plan);
  bad["units"] = "feet";
  EXPECT_THROW(io::plan_from_json(bad), ParseError);
}

TEST(Io, BundleRoundTrip) {
  const fs::path dir = scratch("bundle");
  const FloorPlan plan = gen_floorplan(2);
  ScanSpec spec;
  spec.views = 3;
  spec.width = 40;
  spec.height = 30;
  const auto scan = render_scan(plan, sample_poses(plan, 1, 1).front(), spec, 5);
  io::write_bundle(dir, scan.bundle);
  const ObservationBundle b = io::read_bundle(dir);
  ASSERT_EQ(b.frames.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& x = scan.bundle.frames[i];
    const auto& y = b.frames[i];
    EXPECT_EQ(x.depth.depth, y.depth.depth);
    EXPECT_EQ(x.depth.mask, y.depth.mask);
    EXPECT_NEAR((x.pose.matrix() - y.pose.matrix()).cwiseAbs().maxCoeff(), 0.0, 1e-12);
    EXPECT_NEAR(x.intrinsics.fx, y.intrinsics.fx, 1e-12);
    EXPECT_EQ(x.intrinsics.width, y.intrinsics.width);
  }
}

TEST(Io, HeatmapRoundTrip) {
  const fs::path dir = scratch("heat");
  std::mt19937_64 rng(2);
  HeatmapStack s = testing::random_stack(rng, 13, 7, 4);
  for (auto& m : s.maps) {
    for (auto& v : m.values) v = static_cast<float>(v);
  }
  io::write_heatmaps(dir, s);
  const HeatmapStack r = io::read_heatmaps(dir);
  ASSERT_EQ(r.size(), 4u);
  EXPECT_EQ(r.valid.values, s.valid.values);
  for (std::size_t o = 0; o < 4; ++o) {
    EXPECT_EQ(r.maps[o].values, s.maps[o].values);
    EXPECT_NEAR(r.thetas[o], s.thetas[o], 1e-12);
  }
  EXPECT_TRUE(fs::exists(dir / "heatmaps.json"));
  bool pgm = false;
  for (const auto& e : fs::directory_iterator(dir)) pgm |= e.path().extension() == ".pgm";
  EXPECT_TRUE(pgm);
}

TEST(Io, OdometryAndTruthRoundTrip) {
  const fs::path dir = scratch("odo");
  const std::vector<OdometryStep> steps{{0.5, 0.0}, {0.25, 0.1234567890123}, {-0.3, -1.0}};
  io::write_odometry(dir / "o.json", steps);
  const auto back = io::read_odometry(dir / "o.json");
  ASSERT_EQ(back.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_NEAR(back[i].delta_forward, steps[i].delta_forward, 1e-12);
    EXPECT_NEAR(back[i].delta_heading, steps[i].delta_heading, 1e-12);
  }
  io::Truth t{{1, 2, 3, 0}, {{1.5, 2, 3, 0}, {2, 2.25, 3.1, 0}}};
  io::write_truth(dir / "t.json", t);
  const io::Truth tb = io::read_truth(dir / "t.json");
  EXPECT_NEAR(tb.start.theta, 3.0, 1e-12);
  ASSERT_EQ(tb.poses.size(), 2u);
  EXPECT_NEAR(tb.poses[1].y, 2.25, 1e-12);

  io::write_json(dir / "big.json", json{{"steps", json::array({json{{"delta_forward", 10.0}, {"delta_heading", 0.0}}})}});
  EXPECT_THROW(io::read_odometry(dir / "big.json"), InputError);
}

TEST(Config, RoundTripAndFieldNamedErrors) {
  RunConfig c;
  c.matching.alpha = 4.5;
  c.matching.scales = {0.8, 1.0, 1.25};
  c.mode = AlignmentMode::kGround;
  c.filter.particles = 123;
  const RunConfig back = config_from_json(to_json(c));
  EXPECT_EQ(to_json(back).dump(), to_json(c).dump());

  json j = to_json(RunConfig{});
  j["matching"]["alpha"] = -1.0;
  try {
    config_from_json(j);
    FAIL() << "accepted a negative alpha";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("matching.alpha"), std::string::npos);
  }
  j = to_json(RunConfig{});
  j["matching"]["orientations"] = 3;
  EXPECT_THROW(config_from_json(j), InputError);
  j = to_json(RunConfig{});
  j["filter"]["particlez"] = 5;
  try {
    config_from_json(j);
    FAIL() << "accepted an unknown key";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("filter.particlez"), std::string::npos);
  }
  EXPECT_EQ(config_from_json(json::object()).matching.alpha, 10.0);
}

TEST(Cli, UsageAndMissingInputs) {
  EXPECT_EQ(run_cli(""), 2);
  EXPECT_EQ(run_cli("localize --bundle /nonexistent --plan /nonexistent"), 2);
  EXPECT_EQ(run_cli("eval-match --mode sideways"), 2);
}

class CliPipeline : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = scratch("pipeline");
    ASSERT_EQ(run_cli("gen-synthetic --seed 4 --steps 30 --out " + (dir_ / "gen").string()), 0);
    ASSERT_EQ(run_cli("localize --seed 4 --bundle " + (dir_ / "gen/bundle").string() + " --plan " +
                      (dir_ / "gen/plan.json").string() + " --orientations 4 --out " + (dir_ / "loc").string()),
              0);
  }
  static fs::path dir_;
};
fs::path CliPipeline::dir_;

TEST_F(CliPipeline, LocalizeWritesArtifacts) {
  EXPECT_TRUE(fs::exists(dir_ / "loc/result.json"));
  EXPECT_TRUE(fs::exists(dir_ / "loc/heatmaps/heatmaps.json"));
  const json r = io::read_json(dir_ / "loc/result.json");
  EXPECT_TRUE(r.contains("pose"));
  EXPECT_TRUE(r.contains("scale_report"));
  EXPECT_FALSE(r.contains("timings"));
  EXPECT_EQ(r["thetas"].size(), 4u);
}

TEST_F(CliPipeline, TrackMetricsPresentIffTruth) {
  const std::string base = "track --seed 1 --heatmaps " + (dir_ / "loc").string() + " --odometry " +
                           (dir_ / "gen/odometry.json").string() + " --plan " + (dir_ / "gen/plan.json").string();
  ASSERT_EQ(run_cli(base + " --out " + (dir_ / "t1").string()), 0);
  ASSERT_EQ(run_cli(base + " --truth " + (dir_ / "gen/truth.json").string() + " --out " + (dir_ / "t2").string()), 0);
  const json a = io::read_json(dir_ / "t1/track.json");
  const json b = io::read_json(dir_ / "t2/track.json");
  EXPECT_FALSE(a.contains("metrics"));
  ASSERT_TRUE(b.contains("metrics"));
  EXPECT_GE(b["metrics"]["final_error"].get<double>(), 0.0);
  EXPECT_EQ(a["estimates"].size(), 30u);
}

TEST_F(CliPipeline, TrackWithoutHeatmapsFails) {
  EXPECT_EQ(run_cli("track --odometry " + (dir_ / "gen/odometry.json").string() + " --plan " +
                    (dir_ / "gen/plan.json").string() + " --out " + (dir_ / "t3").string()),
            6);
  EXPECT_EQ(run_cli("track --heatmaps " + (dir_ / "gen").string() + " --odometry " +
                    (dir_ / "gen/odometry.json").string() + " --plan " + (dir_ / "gen/plan.json").string() +
                    " --out " + (dir_ / "t4").string()),
            6);
}

TEST_F(CliPipeline, OversizedOdometryRejected) {
  io::write_json(dir_ / "big.json",
                 json{{"steps", json::array({json{{"delta_forward", 10.0}, {"delta_heading", 0.0}}})}});
  const int code = run_cli("track --heatmaps " + (dir_ / "loc").string() + " --odometry " +
                           (dir_ / "big.json").string() + " --plan " + (dir_ / "gen/plan.json").string() +
                           " --out " + (dir_ / "t5").string());
  EXPECT_NE(code, 0);
  EXPECT_FALSE(fs::exists(dir_ / "t5/track.json"));
}

TEST_F(CliPipeline, AllMaskedBundleIsEmptyExtraction) {
  ObservationBundle b = io::read_bundle(dir_ / "gen/bundle");
  for (auto& f : b.frames) f.depth.mask.assign(f.depth.depth.size(), 0);
  io::write_bundle(dir_ / "masked", b);
  for (const std::string mode : {"none", "ground", "full"}) {
    EXPECT_EQ(run_cli("localize --mode " + mode + " --bundle " + (dir_ / "masked").string() + " --plan " +
                      (dir_ / "gen/plan.json").string() + " --out " + (dir_ / ("m_" + mode)).string()),
              5)
        << mode;
  }
}

TEST_F(CliPipeline, EvalMatchSinglePoseIsDeterministic) {
  ASSERT_EQ(run_cli("eval-match --gen-seed 3 --poses 1 --seed 2 --out " + (dir_ / "e1").string()), 0);
  ASSERT_EQ(run_cli("eval-match --gen-seed 3 --poses 1 --seed 2 --out " + (dir_ / "e2").string()), 0);
  EXPECT_EQ(io::read_file(dir_ / "e1/eval.json"), io::read_file(dir_ / "e2/eval.json"));
  const json e = io::read_json(dir_ / "e1/eval.json");
  EXPECT_EQ(e["cases"].size(), 1u);
}

// Generated rooms are often rectangular, so a few scans land on a 90 or 180
// degree twin of the true pose; the rate is what is checked.
TEST(Localize, CleanSyntheticScansMostlyLandNearTruth) {
  GenSpec gs;
  gs.uniform_rooms = false;
  int near = 0;
  const int total = 20;
  for (int seed = 0; seed < total; ++seed) {
    const FloorPlan plan = gen_floorplan(300 + seed, gs);
    const PoseEstimate truth = sample_poses(plan, 1, seed, 1.0).front();
    const auto scan = render_scan(plan, truth, ScanSpec{}, seed);
    const LocalizeResult r = localize(scan.bundle, plan, RunConfig{});
    const Cell a = plan.raster.cell_of({r.pose.x, r.pose.y});
    const Cell b = plan.raster.cell_of({truth.x, truth.y});
    near += std::max(std::abs(a.col - b.col), std::abs(a.row - b.row)) <= 1;
  }
  EXPECT_GE(near, 14) << near << " of " << total;
}

}  // namespace
}  // namespace floorloc
