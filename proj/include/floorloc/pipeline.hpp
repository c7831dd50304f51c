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

#include <string>
#include <vector>

#include "floorloc/config.hpp"
#include "floorloc/evaluation.hpp"
#include "floorloc/floorplan.hpp"
#include "floorloc/layout_matching.hpp"
#include "floorloc/ray_casting.hpp"
#include "floorloc/scale_alignment.hpp"

namespace floorloc {

struct StageTiming {
  std::string stage;
  double seconds = 0.0;
};

struct LocalizeResult {
  HeatmapStack stack;
  PoseEstimate pose;
  ScaleReport scale_report;
  SegmentSet segments;  // observation frame, scan origin at (0, 0)
  std::vector<StageTiming> timings;
};

std::vector<ViewCloud> bundle_to_views(const ObservationBundle& bundle, int stride, bool use_mask);

/// Horizontal band around the camera height, rasterized and line-fitted.
SegmentSet observe_segments(const PointCloud& merged, const SegmentExtractionConfig& config);

/// Full chain from depth frames to a heatmap stack. `orientations` <= 0
/// uses the configured stationary count.
LocalizeResult localize(const ObservationBundle& bundle, const FloorPlan& plan, const RunConfig& config,
                        int orientations = 0);

/// Matching only, for observations already expressed as segments.
LocalizeResult localize_segments_only(const SegmentSet& observation, const FloorPlan& plan,
                                      const RunConfig& config, int orientations = 0);

/// Argmax predictions from perfect observations. Failed cases yield NaN poses.
std::vector<PoseEstimate> kernel_predictions(const FloorPlan& plan, const std::vector<PoseEstimate>& poses,
                                             const RunConfig& config);
std::vector<PoseEstimate> ray_predictions(const FloorPlan& plan, const std::vector<PoseEstimate>& poses,
                                          const RunConfig& config, int rays);

}  // namespace floorloc
