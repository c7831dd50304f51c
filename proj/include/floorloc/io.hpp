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

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "floorloc/config.hpp"
#include "floorloc/evaluation.hpp"
#include "floorloc/floorplan.hpp"
#include "floorloc/geometry.hpp"
#include "floorloc/layout_matching.hpp"
#include "floorloc/particle_filter.hpp"
#include "floorloc/scale_alignment.hpp"

namespace floorloc::io {

namespace fs = std::filesystem;

/// Writes through a sibling temp file and renames it into place.
void write_atomic(const fs::path& path, const std::string& bytes);
std::string read_file(const fs::path& path);

nlohmann::json read_json(const fs::path& path);
void write_json(const fs::path& path, const nlohmann::json& j);

// Binary rasters: 16-byte header (4-byte magic, uint32 version, uint32
// width, uint32 height), then row-major little-endian payload.
void write_depth(const fs::path& path, const DepthMap& depth);
DepthMap read_depth(const fs::path& path);
void write_mask(const fs::path& path, int width, int height, const std::vector<std::uint8_t>& mask);
std::vector<std::uint8_t> read_mask(const fs::path& path, int& width, int& height);
void write_float_raster(const fs::path& path, const Raster2D& raster);
/// Reads values only; geometry comes from the caller's sidecar.
std::vector<float> read_float_raster(const fs::path& path, int& width, int& height);

/// 8-bit binary PGM, linearly stretched over the admissible cells.
void write_pgm(const fs::path& path, const Raster2D& raster, const Raster2D* valid = nullptr);

nlohmann::json plan_to_json(const FloorPlan& plan);
FloorPlan plan_from_json(const nlohmann::json& j);
FloorPlan read_plan(const fs::path& path);
void write_plan(const fs::path& path, const FloorPlan& plan);

/// Bundle directory: manifest.json plus one depth (and optional mask) file per frame.
void write_bundle(const fs::path& dir, const ObservationBundle& bundle);
ObservationBundle read_bundle(const fs::path& dir);

/// Heatmap directory: heatmaps.json sidecar, one FLH1 file per orientation,
/// the admissible-cell mask, and PGM previews of the normalized stack.
void write_heatmaps(const fs::path& dir, const HeatmapStack& stack);
HeatmapStack read_heatmaps(const fs::path& dir);

nlohmann::json pose_to_json(const PoseEstimate& p);
PoseEstimate pose_from_json(const nlohmann::json& j);

std::vector<OdometryStep> read_odometry(const fs::path& path);
void write_odometry(const fs::path& path, const std::vector<OdometryStep>& steps);

struct Truth {
  PoseEstimate start;
  std::vector<PoseEstimate> poses;  // after each step
};
Truth read_truth(const fs::path& path);
void write_truth(const fs::path& path, const Truth& truth);

nlohmann::json report_to_json(const EvalReport& report);
nlohmann::json scale_report_to_json(const ScaleReport& report);
nlohmann::json segments_to_json(const SegmentSet& segments);

RunConfig read_config(const fs::path& path);

}  // namespace floorloc::io
