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

#include "floorloc/segment_extraction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <opencv2/core.hpp>
#include <opencv2/imgproc.hpp>

#include "floorloc/error.hpp"

namespace floorloc {

std::vector<Vec2> slice_band(const PointCloud& cloud, double center_height, double half_width) {
  if (!(half_width > 0.0)) throw InputError("slice_band: half_width must be positive");
  std::vector<Vec2> out;
  for (const auto& p : cloud.points) {
    if (std::abs(elevation(p) - center_height) <= half_width) out.push_back(to_plan2d(p));
  }
  return out;
}

std::vector<Vec2> clip_range(const std::vector<Vec2>& points, const Vec2& center, double max_range) {
  std::vector<Vec2> out;
  out.reserve(points.size());
  const double r2 = max_range * max_range;
  for (const auto& p : points) {
    if ((p - center).squaredNorm() <= r2) out.push_back(p);
  }
  return out;
}

Raster2D rasterize(const std::vector<Vec2>& points, double resolution) {
  if (points.empty()) throw InputError("rasterize: no points");
  if (!(resolution > 0.0)) throw InputError("rasterize: resolution must be positive");
  Vec2 lo = points.front();
  Vec2 hi = lo;
  for (const auto& p : points) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const Vec2 origin = lo - Vec2::Constant(resolution);
  const int width = static_cast<int>(std::floor((hi.x() - origin.x()) / resolution + 0.5)) + 2;
  const int height = static_cast<int>(std::floor((hi.y() - origin.y()) / resolution + 0.5)) + 2;
  Raster2D raster(width, height, resolution, origin);
  for (const auto& p : points) {
    const Cell c = raster.cell_of(p);
    raster.at(c) += 1.0;
  }
  return raster;
}

std::vector<Segment2> merge_collinear(std::vector<Segment2> segments, double max_angle_rad,
                                      double max_distance, double max_gap) {
  bool merged_any = true;
  while (merged_any) {
    merged_any = false;
    std::stable_sort(segments.begin(), segments.end(),
                     [](const Segment2& x, const Segment2& y) { return x.length() > y.length(); });
    for (std::size_t i = 0; i < segments.size() && !merged_any; ++i) {
      const Segment2 base = segments[i];
      const double base_len = base.length();
      if (base_len <= 0.0) continue;
      const Vec2 u = (base.b - base.a) / base_len;
      const Vec2 nrm(-u.y(), u.x());
      for (std::size_t j = i + 1; j < segments.size(); ++j) {
        const Segment2& other = segments[j];
        const double other_len = other.length();
        if (other_len <= 0.0) continue;
        const double dphi = std::abs(wrap_pi(2.0 * (base.orientation() - other.orientation()))) / 2.0;
        if (dphi > max_angle_rad) continue;
        const double da = std::abs(nrm.dot(other.a - base.a));
        const double db = std::abs(nrm.dot(other.b - base.a));
        if (std::max(da, db) > max_distance) continue;
        const double t0 = 0.0;
        const double t1 = base_len;
        double s0 = u.dot(other.a - base.a);
        double s1 = u.dot(other.b - base.a);
        if (s0 > s1) std::swap(s0, s1);
        const double gap = std::max(s0 - t1, t0 - s1);
        if (gap > max_gap) continue;

        // Length-weighted mean of the two lines' offsets (base sits at 0).
        const double offset =
            other_len * nrm.dot(0.5 * (other.a + other.b) - base.a) / (base_len + other_len);
        const double lo = std::min(t0, s0);
        const double hi = std::max(t1, s1);
        Segment2 fused{base.a + lo * u + offset * nrm, base.a + hi * u + offset * nrm};
        segments[i] = fused;
        segments.erase(segments.begin() + static_cast<std::ptrdiff_t>(j));
        merged_any = true;
        break;
      }
    }
  }
  return segments;
}

SegmentSet extract_segments(const Raster2D& raster, const SegmentExtractionConfig& config) {
  if (raster.empty()) throw InputError("extract_segments: empty raster");
  SegmentSet out;
  out.frame = SegmentFrame::kObservation;

  cv::Mat binary(raster.height, raster.width, CV_8UC1, cv::Scalar(0));
  bool any = false;
  for (int r = 0; r < raster.height; ++r) {
    auto* row = binary.ptr<std::uint8_t>(r);
    for (int c = 0; c < raster.width; ++c) {
      if (raster.at(c, r) >= 1.0) {
        row[c] = 255;
        any = true;
      }
    }
  }
  if (!any) return out;

  cv::Mat edges;
  cv::Canny(binary, edges, config.canny_low, config.canny_high, 3, false);
  std::vector<cv::Vec4i> lines;
  const double min_len_cells = config.min_length / raster.resolution;
  const double max_gap_cells = config.max_gap / raster.resolution;
  cv::HoughLinesP(edges, lines, config.hough_rho_cells, config.hough_theta_deg * CV_PI / 180.0,
                  config.hough_threshold, min_len_cells, max_gap_cells);

  std::vector<Segment2> segments;
  segments.reserve(lines.size());
  for (const auto& l : lines) {
    Segment2 s{raster.cell_center(l[0], l[1]), raster.cell_center(l[2], l[3])};
    if (s.length() > 0.5 * raster.resolution) segments.push_back(s);
  }
  if (config.merge_collinear) {
    segments = merge_collinear(std::move(segments), config.merge_angle_deg * std::numbers::pi / 180.0,
                               config.merge_distance_cells * raster.resolution, config.max_gap);
  }
  for (auto& s : segments) {
    if (s.length() > 0.5 * raster.resolution) out.segments.push_back(s);
  }
  return out;
}

}  // namespace floorloc
