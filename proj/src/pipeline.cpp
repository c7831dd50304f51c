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

#include "floorloc/pipeline.hpp"

#include <chrono>
#include <limits>

#include "floorloc/error.hpp"
#include "floorloc/segment_extraction.hpp"

namespace floorloc {
namespace {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - start_).count();
    start_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

MatchingConfig matching_for(const FloorPlan& plan, const RunConfig& config, int orientations) {
  MatchingConfig m = config.matching;
  m.resolution = plan.resolution();
  if (orientations > 0) m.orientations = orientations;
  return m;
}

PoseEstimate failed_pose() {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  return {nan, nan, nan, nan};
}

}  // namespace

std::vector<ViewCloud> bundle_to_views(const ObservationBundle& bundle, int stride, bool use_mask) {
  std::vector<ViewCloud> views;
  views.reserve(bundle.frames.size());
  for (const auto& frame : bundle.frames) {
    ViewCloud v;
    if (use_mask || !frame.depth.has_mask()) {
      v.cloud = unproject(frame.depth, frame.intrinsics, frame.pose, stride);
    } else {
      DepthMap unmasked = frame.depth;
      unmasked.mask.clear();
      v.cloud = unproject(unmasked, frame.intrinsics, frame.pose, stride);
    }
    v.camera_origin = frame.pose.translation;
    v.pose = frame.pose;
    v.intrinsics = frame.intrinsics;
    views.push_back(std::move(v));
  }
  return views;
}

SegmentSet observe_segments(const PointCloud& merged, const SegmentExtractionConfig& config) {
  auto band = slice_band(merged, 0.0, config.band_half_width);
  band = clip_range(band, Vec2::Zero(), config.max_range);
  if (band.empty()) throw EmptyExtractionError("no points in the wall band around the camera height");
  const Raster2D raster = rasterize(band, config.resolution);
  SegmentSet segments = extract_segments(raster, config);
  if (segments.empty()) throw EmptyExtractionError("no wall segments found in the observation");
  return segments;
}

LocalizeResult localize(const ObservationBundle& bundle, const FloorPlan& plan, const RunConfig& config,
                        int orientations) {
  if (bundle.frames.empty()) throw InputError("localize: bundle has no frames");
  LocalizeResult result;
  Stopwatch watch;

  const auto views = bundle_to_views(bundle, config.unproject_stride, config.use_mask);
  bool any_points = false;
  for (const auto& v : views) any_points = any_points || !v.cloud.empty();
  if (!any_points) throw EmptyExtractionError("every depth pixel is invalid or masked");
  result.timings.push_back({"unproject", watch.lap()});

  ScaleAlignmentConfig align = config.alignment;
  align.seed = config.seed;
  const AlignedScan aligned = align_and_merge(views, config.mode, align);
  result.scale_report = aligned.report;
  result.timings.push_back({"scale_alignment", watch.lap()});

  result.segments = observe_segments(aligned.merged, config.extraction);
  result.timings.push_back({"segment_extraction", watch.lap()});

  result.stack = localize_segments(plan, result.segments, Vec2::Zero(), matching_for(plan, config, orientations));
  result.pose = argmax_pose(result.stack);
  result.timings.push_back({"layout_matching", watch.lap()});
  return result;
}

LocalizeResult localize_segments_only(const SegmentSet& observation, const FloorPlan& plan,
                                      const RunConfig& config, int orientations) {
  if (observation.empty()) throw EmptyExtractionError("observation holds no segments");
  LocalizeResult result;
  Stopwatch watch;
  result.segments = observation;
  result.stack = localize_segments(plan, observation, Vec2::Zero(), matching_for(plan, config, orientations));
  result.pose = argmax_pose(result.stack);
  result.timings.push_back({"layout_matching", watch.lap()});
  return result;
}

std::vector<PoseEstimate> kernel_predictions(const FloorPlan& plan, const std::vector<PoseEstimate>& poses,
                                             const RunConfig& config) {
  std::vector<PoseEstimate> out;
  out.reserve(poses.size());
  for (const auto& truth : poses) {
    try {
      const SegmentSet obs = perfect_segments(plan, truth, config.eval.max_range);
      out.push_back(localize_segments_only(obs, plan, config).pose);
    } catch (const Error&) {
      out.push_back(failed_pose());
    }
  }
  return out;
}

std::vector<PoseEstimate> ray_predictions(const FloorPlan& plan, const std::vector<PoseEstimate>& poses,
                                          const RunConfig& config, int rays) {
  const DistanceField field = compute_distance_field(plan, rays, config.eval.max_range);
  const auto thetas = uniform_orientations(config.eval.ray_orientations);
  std::vector<PoseEstimate> out;
  out.reserve(poses.size());
  for (const auto& truth : poses) {
    try {
      const RayScan scan = ray_cast(plan, truth, rays, config.eval.max_range);
      out.push_back(argmax_pose(ray_match(field, scan, thetas)));
    } catch (const Error&) {
      out.push_back(failed_pose());
    }
  }
  return out;
}

}  // namespace floorloc
