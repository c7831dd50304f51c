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
#include <string>

#include <nlohmann/json.hpp>

#include "floorloc/layout_matching.hpp"
#include "floorloc/particle_filter.hpp"
#include "floorloc/scale_alignment.hpp"
#include "floorloc/segment_extraction.hpp"

namespace floorloc {

struct EvalConfig {
  double max_range = 10.0;
  int rays = 36;
  int ray_orientations = 36;
  double pose_clearance = 0.3;
};

struct RunConfig {
  AlignmentMode mode = AlignmentMode::kFull;
  bool use_mask = true;
  std::uint64_t seed = 0;
  int unproject_stride = kDefaultUnprojectStride;
  int sequential_orientations = 4;
  MatchingConfig matching;
  SegmentExtractionConfig extraction;
  ScaleAlignmentConfig alignment;
  FilterConfig filter;
  EvalConfig eval;

  /// Throws InputError naming the first field outside its legal range.
  void validate() const;
};

nlohmann::json to_json(const RunConfig& config);

/// Missing keys keep their defaults; unknown keys and out-of-range values are
/// rejected with the offending field in the message.
RunConfig config_from_json(const nlohmann::json& j);

}  // namespace floorloc
