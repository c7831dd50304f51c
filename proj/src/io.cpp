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

#include "floorloc/io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <tuple>

#include "floorloc/error.hpp"

namespace floorloc::io {
namespace {

using nlohmann::json;

constexpr std::uint32_t kFormatVersion = 1;
constexpr std::size_t kHeaderBytes = 16;

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint32_t get_u32(const std::string& in, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[at + i])) << (8 * i);
  return v;
}

void put_f32(std::string& out, float f) {
  std::uint32_t bits;
  std::memcpy(&bits, &f, sizeof bits);
  put_u32(out, bits);
}

float get_f32(const std::string& in, std::size_t at) {
  const std::uint32_t bits = get_u32(in, at);
  float f;
  std::memcpy(&f, &bits, sizeof f);
  return f;
}

std::string header(const char magic[4], int width, int height) {
  std::string out(magic, 4);
  put_u32(out, kFormatVersion);
  put_u32(out, static_cast<std::uint32_t>(width));
  put_u32(out, static_cast<std::uint32_t>(height));
  return out;
}

// Validates the header and payload size; returns (width, height).
std::pair<int, int> parse_header(const std::string& bytes, const char magic[4], std::size_t cell_bytes,
                                 const fs::path& path) {
  if (bytes.size() < kHeaderBytes || bytes.compare(0, 4, magic, 4) != 0) {
    throw ParseError(path.string() + ": not a " + std::string(magic, 4) + " raster");
  }
  if (get_u32(bytes, 4) != kFormatVersion) throw ParseError(path.string() + ": unsupported raster version");
  const std::uint32_t w = get_u32(bytes, 8);
  const std::uint32_t h = get_u32(bytes, 12);
  if (w == 0 || h == 0 || w > (1u << 16) || h > (1u << 16)) {
    throw ParseError(path.string() + ": implausible raster size");
  }
  if (bytes.size() != kHeaderBytes + static_cast<std::size_t>(w) * h * cell_bytes) {
    throw ParseError(path.string() + ": payload size does not match the header");
  }
  return {static_cast<int>(w), static_cast<int>(h)};
}

template <typename T>
T field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(where + ": missing '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ParseError(where + ": field '" + key + "' has the wrong type");
  }
}

json segment_json(const Segment2& s) { return json::array({s.a.x(), s.a.y(), s.b.x(), s.b.y()}); }

Segment2 segment_from(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 4) throw ParseError(where + ": segments are [x1, y1, x2, y2]");
  try {
    return {{j[0].get<double>(), j[1].get<double>()}, {j[2].get<double>(), j[3].get<double>()}};
  } catch (const json::exception&) {
    throw ParseError(where + ": segment coordinates must be numbers");
  }
}

std::string frame_name(std::size_t i, const char* ext) {
  std::ostringstream os;
  os << "frame_" << std::setw(3) << std::setfill('0') << i << ext;
  return os.str();
}

std::string indexed(const char* stem, std::size_t i, const char* ext) {
  std::ostringstream os;
  os << stem << std::setw(2) << std::setfill('0') << i << ext;
  return os.str();
}

}  // namespace

void write_atomic(const fs::path& path, const std::string& bytes) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("failed writing " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const fs::path& path) {
  const std::string text = read_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_json(const fs::path& path, const json& j) { write_atomic(path, j.dump(2) + "\n"); }

void write_depth(const fs::path& path, const DepthMap& depth) {
  std::string out = header("FLD1", depth.width, depth.height);
  out.reserve(kHeaderBytes + depth.depth.size() * 4);
  for (float d : depth.depth) put_f32(out, d);
  write_atomic(path, out);
}

DepthMap read_depth(const fs::path& path) {
  const std::string bytes = read_file(path);
  const auto [w, h] = parse_header(bytes, "FLD1", 4, path);
  DepthMap out(w, h);
  for (std::size_t i = 0; i < out.depth.size(); ++i) out.depth[i] = get_f32(bytes, kHeaderBytes + 4 * i);
  return out;
}

void write_mask(const fs::path& path, int width, int height, const std::vector<std::uint8_t>& mask) {
  if (mask.size() != static_cast<std::size_t>(width) * height) throw InputError("mask size mismatch");
  std::string out = header("FLM1", width, height);
  for (std::uint8_t m : mask) out.push_back(static_cast<char>(m ? 1 : 0));
  write_atomic(path, out);
}

std::vector<std::uint8_t> read_mask(const fs::path& path, int& width, int& height) {
  const std::string bytes = read_file(path);
  std::tie(width, height) = parse_header(bytes, "FLM1", 1, path);
  std::vector<std::uint8_t> out(static_cast<std::size_t>(width) * height);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = bytes[kHeaderBytes + i] != 0 ? 1 : 0;
  return out;
}

void write_float_raster(const fs::path& path, const Raster2D& raster) {
  std::string out = header("FLH1", raster.width, raster.height);
  for (double v : raster.values) put_f32(out, static_cast<float>(v));
  write_atomic(path, out);
}

std::vector<float> read_float_raster(const fs::path& path, int& width, int& height) {
  const std::string bytes = read_file(path);
  std::tie(width, height) = parse_header(bytes, "FLH1", 4, path);
  std::vector<float> out(static_cast<std::size_t>(width) * height);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = get_f32(bytes, kHeaderBytes + 4 * i);
  return out;
}

void write_pgm(const fs::path& path, const Raster2D& raster, const Raster2D* valid) {
  auto admissible = [&](std::size_t i) { return valid == nullptr || valid->values[i] > 0.5; };
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < raster.size(); ++i) {
    if (!admissible(i)) continue;
    lo = std::min(lo, raster.values[i]);
    hi = std::max(hi, raster.values[i]);
  }
  std::string out = "P5\n" + std::to_string(raster.width) + " " + std::to_string(raster.height) + "\n255\n";
  // Top image row is the largest y so the preview reads north-up.
  for (int r = raster.height - 1; r >= 0; --r) {
    for (int c = 0; c < raster.width; ++c) {
      const std::size_t i = raster.index(c, r);
      int level = 0;
      if (admissible(i) && hi > lo) level = static_cast<int>(std::lround(255.0 * (raster.values[i] - lo) / (hi - lo)));
      else if (admissible(i)) level = 255;
      out.push_back(static_cast<char>(std::clamp(level, 0, 255)));
    }
  }
  write_atomic(path, out);
}

json plan_to_json(const FloorPlan& plan) {
  json walls = json::array();
  for (const auto& s : plan.walls.segments) walls.push_back(segment_json(s));
  json doors = json::array();
  for (const auto& s : plan.doors) doors.push_back(segment_json(s));
  return {{"units", "meters"},
          {"resolution", plan.resolution()},
          {"seed", {plan.seed.x(), plan.seed.y()}},
          {"walls", walls},
          {"doors", doors}};
}

FloorPlan plan_from_json(const json& j) {
  const std::string where = "floor plan";
  if (field<std::string>(j, "units", where) != "meters") throw ParseError("floor plan: units must be \"meters\"");
  const double resolution = field<double>(j, "resolution", where);
  const auto seed = field<std::vector<double>>(j, "seed", where);
  if (seed.size() != 2) throw ParseError("floor plan: seed must be [x, y]");
  const json walls = field<json>(j, "walls", where);
  if (!walls.is_array() || walls.empty()) throw ParseError("floor plan: at least one wall segment is required");
  SegmentSet set;
  set.frame = SegmentFrame::kFloorPlan;
  for (const auto& w : walls) set.segments.push_back(segment_from(w, where));
  std::vector<Segment2> doors;
  if (j.contains("doors")) {
    if (!j["doors"].is_array()) throw ParseError("floor plan: doors must be a list");
    for (const auto& d : j["doors"]) doors.push_back(segment_from(d, where));
  }
  return build_floorplan(std::move(set), std::move(doors), resolution, Vec2(seed[0], seed[1]));
}

FloorPlan read_plan(const fs::path& path) { return plan_from_json(read_json(path)); }

void write_plan(const fs::path& path, const FloorPlan& plan) { write_json(path, plan_to_json(plan)); }

void write_bundle(const fs::path& dir, const ObservationBundle& bundle) {
  fs::create_directories(dir);
  json frames = json::array();
  for (std::size_t i = 0; i < bundle.frames.size(); ++i) {
    const auto& f = bundle.frames[i];
    json entry;
    entry["depth"] = frame_name(i, ".fld");
    write_depth(dir / frame_name(i, ".fld"), f.depth);
    if (f.depth.has_mask()) {
      entry["mask"] = frame_name(i, ".flm");
      write_mask(dir / frame_name(i, ".flm"), f.depth.width, f.depth.height, f.depth.mask);
    }
    const Mat4 m = f.pose.matrix();
    json pose = json::array();
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) pose.push_back(m(r, c));
    }
    entry["pose"] = pose;
    entry["intrinsics"] = {{"fx", f.intrinsics.fx},       {"fy", f.intrinsics.fy},
                           {"cx", f.intrinsics.cx},       {"cy", f.intrinsics.cy},
                           {"width", f.intrinsics.width}, {"height", f.intrinsics.height}};
    frames.push_back(entry);
  }
  write_json(dir / "manifest.json", {{"format", "floorloc-bundle"}, {"version", kFormatVersion}, {"frames", frames}});
}

ObservationBundle read_bundle(const fs::path& dir) {
  const json manifest = read_json(dir / "manifest.json");
  const json frames = field<json>(manifest, "frames", "manifest");
  if (!frames.is_array() || frames.empty()) throw ParseError("manifest: at least one frame is required");
  ObservationBundle bundle;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const std::string where = "manifest frame " + std::to_string(i);
    const json& f = frames[i];
    ObservationFrame frame;
    frame.depth = read_depth(dir / field<std::string>(f, "depth", where));
    if (f.contains("mask") && !f["mask"].is_null()) {
      int w = 0;
      int h = 0;
      frame.depth.mask = read_mask(dir / field<std::string>(f, "mask", where), w, h);
      if (w != frame.depth.width || h != frame.depth.height) throw InputError(where + ": mask size differs from depth");
    }
    const auto pose = field<std::vector<double>>(f, "pose", where);
    if (pose.size() != 16) throw ParseError(where + ": pose must hold 16 numbers (row-major 4x4)");
    Mat4 m;
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) m(r, c) = pose[static_cast<std::size_t>(4 * r + c)];
    }
    frame.pose = Pose3::from_matrix(m);
    if (!frame.pose.is_valid(1e-6)) throw InputError(where + ": pose rotation is not orthonormal");
    const json k = field<json>(f, "intrinsics", where);
    frame.intrinsics.fx = field<double>(k, "fx", where);
    frame.intrinsics.fy = field<double>(k, "fy", where);
    frame.intrinsics.cx = field<double>(k, "cx", where);
    frame.intrinsics.cy = field<double>(k, "cy", where);
    frame.intrinsics.width = field<int>(k, "width", where);
    frame.intrinsics.height = field<int>(k, "height", where);
    frame.intrinsics.validate();
    if (frame.intrinsics.width != frame.depth.width || frame.intrinsics.height != frame.depth.height) {
      throw InputError(where + ": depth size differs from the intrinsics");
    }
    bundle.frames.push_back(std::move(frame));
  }
  return bundle;
}

void write_heatmaps(const fs::path& dir, const HeatmapStack& stack) {
  if (stack.empty()) throw InputError("write_heatmaps: empty stack");
  fs::create_directories(dir);
  const Raster2D& grid = stack.maps.front();
  json maps = json::array();
  json previews = json::array();
  for (std::size_t o = 0; o < stack.size(); ++o) {
    const std::string name = indexed("heatmap_", o, ".flh");
    write_float_raster(dir / name, stack.maps[o]);
    maps.push_back(name);
  }
  std::vector<std::uint8_t> valid(stack.valid.size());
  for (std::size_t i = 0; i < valid.size(); ++i) valid[i] = stack.valid.values[i] > 0.5 ? 1 : 0;
  write_mask(dir / "valid.flm", stack.valid.width, stack.valid.height, valid);

  bool any_valid = std::any_of(valid.begin(), valid.end(), [](std::uint8_t v) { return v != 0; });
  if (any_valid) {
    const HeatmapStack pdf = normalize_to_pdf(stack);
    for (std::size_t o = 0; o < pdf.size(); ++o) {
      const std::string name = indexed("pdf_", o, ".pgm");
      write_pgm(dir / name, pdf.maps[o], &pdf.valid);
      previews.push_back(name);
    }
    write_pgm(dir / "pdf_all.pgm", collapse_orientations(pdf), &pdf.valid);
    previews.push_back("pdf_all.pgm");
  }
  write_json(dir / "heatmaps.json", {{"format", "floorloc-heatmaps"},
                                     {"version", kFormatVersion},
                                     {"width", grid.width},
                                     {"height", grid.height},
                                     {"resolution", grid.resolution},
                                     {"origin", {grid.origin.x(), grid.origin.y()}},
                                     {"thetas", stack.thetas},
                                     {"maps", maps},
                                     {"valid", "valid.flm"},
                                     {"previews", previews}});
}

HeatmapStack read_heatmaps(const fs::path& dir) {
  if (!fs::exists(dir / "heatmaps.json")) {
    throw ParseError("no heatmaps.json in " + dir.string() + "; run `floorloc localize` first");
  }
  const json side = read_json(dir / "heatmaps.json");
  const std::string where = "heatmaps.json";
  const int width = field<int>(side, "width", where);
  const int height = field<int>(side, "height", where);
  const double resolution = field<double>(side, "resolution", where);
  const auto origin = field<std::vector<double>>(side, "origin", where);
  if (origin.size() != 2) throw ParseError("heatmaps.json: origin must be [x, y]");
  HeatmapStack stack;
  stack.thetas = field<std::vector<double>>(side, "thetas", where);
  const auto names = field<std::vector<std::string>>(side, "maps", where);
  if (names.size() != stack.thetas.size() || names.empty()) {
    throw ParseError("heatmaps.json: maps and thetas must have the same non-zero length");
  }
  const Raster2D geometry(width, height, resolution, Vec2(origin[0], origin[1]));
  for (const auto& name : names) {
    int w = 0;
    int h = 0;
    const auto values = read_float_raster(dir / name, w, h);
    if (w != width || h != height) throw ParseError(name + ": size differs from the sidecar");
    Raster2D map = Raster2D::like(geometry);
    std::copy(values.begin(), values.end(), map.values.begin());
    stack.maps.push_back(std::move(map));
  }
  int w = 0;
  int h = 0;
  const auto valid = read_mask(dir / field<std::string>(side, "valid", where), w, h);
  if (w != width || h != height) throw ParseError("valid mask size differs from the sidecar");
  stack.valid = Raster2D::like(geometry);
  for (std::size_t i = 0; i < valid.size(); ++i) stack.valid.values[i] = valid[i];
  return stack;
}

json pose_to_json(const PoseEstimate& p) {
  return {{"x", p.x}, {"y", p.y}, {"theta", p.theta}, {"score", p.score}};
}

PoseEstimate pose_from_json(const json& j) {
  PoseEstimate p;
  p.x = field<double>(j, "x", "pose");
  p.y = field<double>(j, "y", "pose");
  p.theta = field<double>(j, "theta", "pose");
  if (j.contains("score")) p.score = field<double>(j, "score", "pose");
  return p;
}

std::vector<OdometryStep> read_odometry(const fs::path& path) {
  const json j = read_json(path);
  const json steps = field<json>(j, "steps", "odometry");
  if (!steps.is_array()) throw ParseError("odometry: steps must be a list");
  std::vector<OdometryStep> out;
  for (const auto& s : steps) {
    OdometryStep step;
    step.delta_forward = field<double>(s, "delta_forward", "odometry step");
    step.delta_heading = field<double>(s, "delta_heading", "odometry step");
    step.validate();
    out.push_back(step);
  }
  return out;
}

void write_odometry(const fs::path& path, const std::vector<OdometryStep>& steps) {
  json arr = json::array();
  for (const auto& s : steps) arr.push_back({{"delta_forward", s.delta_forward}, {"delta_heading", s.delta_heading}});
  write_json(path, {{"steps", arr}});
}

Truth read_truth(const fs::path& path) {
  const json j = read_json(path);
  Truth t;
  t.start = pose_from_json(field<json>(j, "start", "truth"));
  const json poses = field<json>(j, "poses", "truth");
  if (!poses.is_array()) throw ParseError("truth: poses must be a list");
  for (const auto& p : poses) t.poses.push_back(pose_from_json(p));
  return t;
}

void write_truth(const fs::path& path, const Truth& truth) {
  json poses = json::array();
  for (const auto& p : truth.poses) poses.push_back(pose_to_json(p));
  write_json(path, {{"start", pose_to_json(truth.start)}, {"poses", poses}});
}

json report_to_json(const EvalReport& report) {
  json rows = json::array();
  for (const auto& r : report.rows) rows.push_back({{"meters", r.meters}, {"degrees", r.degrees}, {"accuracy", r.accuracy}});
  return {{"count", report.count},
          {"rows", rows},
          {"position_errors", report.position_errors},
          {"angle_errors_deg", report.angle_errors_deg}};
}

json scale_report_to_json(const ScaleReport& r) {
  json pairs = json::array();
  for (const auto& [a, b] : r.pairs) pairs.push_back({a, b});
  json out = {{"mode", to_string(r.mode)},
              {"scan_origin", {r.scan_origin.x(), r.scan_origin.y(), r.scan_origin.z()}},
              {"relative_scales", r.relative_scales},
              {"applied_scales", r.applied_scales},
              {"retained", r.retained},
              {"pairs", pairs},
              {"global_scale", r.global_scale},
              {"camera_heights", r.camera_heights}};
  if (r.ground) {
    out["ground"] = {{"normal", {r.ground->normal.x(), r.ground->normal.y(), r.ground->normal.z()}},
                     {"offset", r.ground->offset}};
  } else {
    out["ground"] = nullptr;
  }
  if (r.solution) {
    out["solution"] = {{"objective", r.solution->objective},
                       {"initial_objective", r.solution->initial_objective},
                       {"iterations", r.solution->iterations},
                       {"converged", r.solution->converged}};
  } else {
    out["solution"] = nullptr;
  }
  return out;
}

json segments_to_json(const SegmentSet& segments) {
  json out = json::array();
  for (const auto& s : segments.segments) out.push_back(segment_json(s));
  return out;
}

RunConfig read_config(const fs::path& path) { return config_from_json(read_json(path)); }

}  // namespace floorloc::io
