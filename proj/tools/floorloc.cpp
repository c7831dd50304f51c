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

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "floorloc/config.hpp"
#include "floorloc/error.hpp"
#include "floorloc/evaluation.hpp"
#include "floorloc/io.hpp"
#include "floorloc/particle_filter.hpp"
#include "floorloc/pipeline.hpp"
#include "floorloc/synthetic.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace floorloc;

namespace {

enum ExitCode : int {
  kOk = 0,
  kOther = 1,
  kUsage = 2,
  kParse = 3,
  kNoGround = 4,
  kEmptyExtraction = 5,
  kMissingHeatmap = 6,
  kInvalidInput = 7,
};

class MissingHeatmapError : public Error {
 public:
  using Error::Error;
};

// Flags shared by every subcommand; they override the config file.
struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> mode;
  std::optional<bool> mask;
  std::optional<int> orientations;
  std::vector<double> scales;
  std::string out = "out";
  bool record_timings = false;

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
    app->add_option("--seed", seed, "global seed");
    app->add_option("--mode", mode, "scale alignment mode")->check(CLI::IsMember({"none", "ground", "full"}));
    app->add_flag("--mask,!--no-mask", mask, "honor depth masks");
    app->add_option("--orientations", orientations, "orientation candidates O (even)");
    app->add_option("--scales", scales, "corrective scales, comma separated")->delimiter(',');
    app->add_option("--out", out, "output directory");
    app->add_flag("--record-timings", record_timings, "include wall-clock timings in the result file");
  }

  RunConfig resolve() const {
    RunConfig cfg = config_path.empty() ? RunConfig{} : io::read_config(config_path);
    if (seed) cfg.seed = *seed;
    if (mode) cfg.mode = parse_alignment_mode(*mode);
    if (mask) cfg.use_mask = *mask;
    if (orientations) cfg.matching.orientations = *orientations;
    if (!scales.empty()) cfg.matching.scales = scales;
    cfg.alignment.seed = cfg.seed;
    cfg.filter.seed = cfg.seed;
    cfg.validate();
    return cfg;
  }
};

void report_timings(const std::vector<StageTiming>& timings, json* sink) {
  for (const auto& t : timings) std::fprintf(stderr, "[timing] %-20s %.3f s\n", t.stage.c_str(), t.seconds);
  if (sink) {
    json j = json::object();
    for (const auto& t : timings) j[t.stage] = t.seconds;
    *sink = j;
  }
}

int run_localize(const Common& common, const std::string& bundle_dir, const std::string& plan_path) {
  const RunConfig cfg = common.resolve();
  const FloorPlan plan = io::read_plan(plan_path);
  const ObservationBundle bundle = io::read_bundle(bundle_dir);
  const LocalizeResult result = localize(bundle, plan, cfg);

  const fs::path out(common.out);
  fs::create_directories(out);
  io::write_heatmaps(out / "heatmaps", result.stack);
  json j = {{"pose", io::pose_to_json(result.pose)},
            {"thetas", result.stack.thetas},
            {"scale_report", io::scale_report_to_json(result.scale_report)},
            {"segments", io::segments_to_json(result.segments)},
            {"heatmaps", "heatmaps/heatmaps.json"},
            {"config", to_json(cfg)}};
  json timings;
  report_timings(result.timings, common.record_timings ? &timings : nullptr);
  if (common.record_timings) j["timings"] = timings;
  io::write_json(out / "result.json", j);
  std::printf("pose x=%.3f y=%.3f theta=%.4f score=%.4f\n", result.pose.x, result.pose.y, result.pose.theta,
              result.pose.score);
  return kOk;
}

int run_track(const Common& common, const std::string& heatmap_dir, const std::string& bundle_dir,
              const std::string& odometry_path, const std::string& plan_path, const std::string& truth_path) {
  const RunConfig cfg = common.resolve();
  const FloorPlan plan = io::read_plan(plan_path);
  const auto steps = io::read_odometry(odometry_path);

  HeatmapStack stack;
  if (!heatmap_dir.empty()) {
    fs::path dir(heatmap_dir);
    if (!fs::exists(dir / "heatmaps.json") && fs::exists(dir / "heatmaps" / "heatmaps.json")) dir /= "heatmaps";
    if (!fs::exists(dir / "heatmaps.json")) {
      throw MissingHeatmapError("no heatmap stack in " + heatmap_dir +
                                "; run `floorloc localize --out DIR` first and pass DIR to --heatmaps");
    }
    stack = io::read_heatmaps(dir);
  } else if (!bundle_dir.empty()) {
    stack = localize(io::read_bundle(bundle_dir), plan, cfg, cfg.sequential_orientations).stack;
  } else {
    throw MissingHeatmapError("track needs a heatmap prior: pass --heatmaps DIR from `floorloc localize` or --bundle");
  }
  if (!stack.valid.same_geometry(plan.traversable)) {
    throw InputError("heatmap grid does not match the floor plan raster");
  }

  std::optional<std::vector<PoseEstimate>> truth;
  if (!truth_path.empty()) truth = io::read_truth(truth_path).poses;
  const auto started = std::chrono::steady_clock::now();
  const TrackResult result = run_trajectory(normalize_to_pdf(stack), steps, plan, cfg.filter, truth);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  json estimates = json::array();
  for (const auto& e : result.estimates) estimates.push_back(io::pose_to_json(e));
  json j = {{"estimates", estimates},
            {"resamples", result.resamples},
            {"recoveries", result.recoveries},
            {"reinitializations", result.reinitializations},
            {"recovery_steps", result.recovery_steps},
            {"config", to_json(cfg)}};
  if (result.metrics) {
    j["metrics"] = {{"rmse_last10", result.metrics->rmse_last10}, {"final_error", result.metrics->final_error}};
  }
  json timings;
  report_timings({{"particle_filter", seconds}}, common.record_timings ? &timings : nullptr);
  if (common.record_timings) j["timings"] = timings;
  const fs::path out(common.out);
  fs::create_directories(out);
  io::write_json(out / "track.json", j);
  const auto& last = result.estimates.back();
  std::printf("final x=%.3f y=%.3f theta=%.4f", last.x, last.y, last.theta);
  if (result.metrics) {
    std::printf(" rmse_last10=%.3f final_error=%.3f", result.metrics->rmse_last10, result.metrics->final_error);
  }
  std::printf("\n");
  return kOk;
}

int run_eval_match(const Common& common, const std::string& plan_path, std::optional<std::uint64_t> gen_seed,
                   std::size_t poses, const std::string& method, int rays) {
  const RunConfig cfg = common.resolve();
  if (poses < 1) throw InputError("--poses must be >= 1");
  FloorPlan plan;
  if (!plan_path.empty()) {
    plan = io::read_plan(plan_path);
  } else if (gen_seed) {
    plan = gen_floorplan(*gen_seed);
  } else {
    throw InputError("eval-match needs --plan or --gen-seed");
  }
  const auto truth = sample_poses(plan, poses, cfg.seed, cfg.eval.pose_clearance);
  const auto started = std::chrono::steady_clock::now();
  const auto predictions = method == "kernel" ? kernel_predictions(plan, truth, cfg)
                                              : ray_predictions(plan, truth, cfg, rays > 0 ? rays : cfg.eval.rays);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  const EvalReport report = evaluate(predictions, truth);

  json cases = json::array();
  for (std::size_t i = 0; i < truth.size(); ++i) {
    cases.push_back({{"truth", io::pose_to_json(truth[i])}, {"prediction", io::pose_to_json(predictions[i])}});
  }
  json j = {{"method", method},
            {"rays", method == "rays" ? (rays > 0 ? rays : cfg.eval.rays) : 0},
            {"report", io::report_to_json(report)},
            {"cases", cases},
            {"config", to_json(cfg)}};
  json timings;
  report_timings({{"matching", seconds}}, common.record_timings ? &timings : nullptr);
  if (common.record_timings) j["timings"] = timings;
  const fs::path out(common.out);
  fs::create_directories(out);
  io::write_json(out / "eval.json", j);

  std::printf("%-12s %s\n", "threshold", "accuracy");
  for (const auto& row : report.rows) {
    char label[32];
    if (row.degrees > 0.0) std::snprintf(label, sizeof label, "%.1fm/%.0fdeg", row.meters, row.degrees);
    else std::snprintf(label, sizeof label, "%.1fm", row.meters);
    std::printf("%-12s %.4f\n", label, row.accuracy);
  }
  return kOk;
}

struct GenOptions {
  int rooms = 6;
  int corridors = 1;
  bool uniform_rooms = false;
  double scale_min = 0.6;
  double scale_max = 1.6;
  int tables = 0;
  int windows = 0;
  std::size_t steps = 120;
  double odometry_noise = 0.0;
};

int run_gen_synthetic(const Common& common, const GenOptions& g) {
  const RunConfig cfg = common.resolve();
  GenSpec spec;
  spec.rooms = g.rooms;
  spec.corridors = g.corridors;
  spec.uniform_rooms = g.uniform_rooms;
  const FloorPlan plan = gen_floorplan(cfg.seed, spec);
  const PoseEstimate pose = sample_poses(plan, 1, cfg.seed, 1.0).front();

  ScanSpec scan_spec;
  scan_spec.scale_min = g.scale_min;
  scan_spec.scale_max = g.scale_max;
  scan_spec.tables = g.tables;
  scan_spec.windows = g.windows;
  scan_spec.emit_mask = common.mask.value_or(true);
  const SyntheticScan scan = render_scan(plan, pose, scan_spec, cfg.seed);

  TrajectorySpec traj_spec;
  traj_spec.steps = g.steps;
  traj_spec.forward_noise = g.odometry_noise;
  traj_spec.heading_noise = g.odometry_noise * 0.1;
  const SyntheticTrajectory traj = gen_trajectory(plan, traj_spec, cfg.seed, pose);

  const fs::path out(common.out);
  fs::create_directories(out);
  io::write_plan(out / "plan.json", plan);
  io::write_bundle(out / "bundle", scan.bundle);
  io::write_json(out / "scan_truth.json", {{"pose", io::pose_to_json(pose)}, {"corruptions", scan.corruptions}});
  io::write_odometry(out / "odometry.json", traj.odometry);
  io::write_truth(out / "truth.json", {traj.start, traj.truth});
  std::printf("wrote plan, bundle (%zu frames) and a %zu-step trajectory to %s\n", scan.bundle.frames.size(),
              traj.odometry.size(), out.string().c_str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Floor-plan localization from stationary depth scans"};
  app.require_subcommand(1);

  Common common;
  std::string bundle_dir;
  std::string plan_path;
  std::string heatmap_dir;
  std::string odometry_path;
  std::string truth_path;
  std::optional<std::uint64_t> gen_seed;
  std::size_t poses = 10;
  std::string method = "kernel";
  int rays = 0;
  GenOptions gen;

  auto* localize_cmd = app.add_subcommand("localize", "estimate a pose heatmap from an observation bundle");
  common.attach(localize_cmd);
  localize_cmd->add_option("--bundle", bundle_dir, "observation bundle directory")->required()->check(CLI::ExistingDirectory);
  localize_cmd->add_option("--plan", plan_path, "floor plan JSON")->required()->check(CLI::ExistingFile);

  auto* track_cmd = app.add_subcommand("track", "particle-filter tracking from a heatmap prior and odometry");
  Common track_common;
  track_common.attach(track_cmd);
  track_cmd->add_option("--heatmaps", heatmap_dir, "localize output directory");
  track_cmd->add_option("--bundle", bundle_dir, "bundle to localize when no heatmaps are given");
  track_cmd->add_option("--odometry", odometry_path, "odometry JSON")->required()->check(CLI::ExistingFile);
  track_cmd->add_option("--plan", plan_path, "floor plan JSON")->required()->check(CLI::ExistingFile);
  track_cmd->add_option("--truth", truth_path, "ground-truth trajectory JSON")->check(CLI::ExistingFile);

  auto* eval_cmd = app.add_subcommand("eval-match", "layout-matching accuracy on perfect observations");
  Common eval_common;
  eval_common.attach(eval_cmd);
  eval_cmd->add_option("--plan", plan_path, "floor plan JSON")->check(CLI::ExistingFile);
  eval_cmd->add_option("--gen-seed", gen_seed, "generate the plan from this seed instead");
  eval_cmd->add_option("--poses", poses, "number of sampled poses");
  eval_cmd->add_option("--method", method, "matcher")->check(CLI::IsMember({"kernel", "rays"}));
  eval_cmd->add_option("--rays", rays, "ray count for the rays method");

  auto* gen_cmd = app.add_subcommand("gen-synthetic", "write a synthetic plan, scan bundle and trajectory");
  Common gen_common;
  gen_common.attach(gen_cmd);
  gen_cmd->add_option("--rooms", gen.rooms, "room count");
  gen_cmd->add_option("--corridors", gen.corridors, "corridor count (0 or 1)");
  gen_cmd->add_flag("--uniform-rooms", gen.uniform_rooms, "give every room the same footprint");
  gen_cmd->add_option("--scale-min", gen.scale_min, "lowest per-view depth corruption");
  gen_cmd->add_option("--scale-max", gen.scale_max, "highest per-view depth corruption");
  gen_cmd->add_option("--tables", gen.tables, "table tops placed near the camera");
  gen_cmd->add_option("--windows", gen.windows, "views with see-through depth artifacts");
  gen_cmd->add_option("--steps", gen.steps, "trajectory length in steps");
  gen_cmd->add_option("--odometry-noise", gen.odometry_noise, "relative odometry noise");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*localize_cmd) return run_localize(common, bundle_dir, plan_path);
    if (*track_cmd) return run_track(track_common, heatmap_dir, bundle_dir, odometry_path, plan_path, truth_path);
    if (*eval_cmd) return run_eval_match(eval_common, plan_path, gen_seed, poses, method, rays);
    if (*gen_cmd) return run_gen_synthetic(gen_common, gen);
  } catch (const MissingHeatmapError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kMissingHeatmap;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const NoGroundError& e) {
    std::cerr << "no ground plane: " << e.what() << "\n";
    return kNoGround;
  } catch (const EmptyExtractionError& e) {
    std::cerr << "empty segment extraction: " << e.what() << "\n";
    return kEmptyExtraction;
  } catch (const Error& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kOther;
  }
  return kOther;
}
