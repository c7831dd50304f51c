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

#include <vector>

#include "floorloc/geometry.hpp"
#include "floorloc/raster.hpp"

namespace floorloc {

struct SegmentExtractionConfig {
  double band_half_width = 0.1;   // meters around the camera height
  double resolution = 0.05;       // meters per cell
  double max_range = 25.0;        // meters from the scan origin
  double canny_low = 50.0;
  double canny_high = 150.0;
  double hough_rho_cells = 1.0;
  double hough_theta_deg = 1.0;
  int hough_threshold = 10;
  double min_length = 0.3;        // meters
  double max_gap = 0.15;          // meters
  /// Fuse near-collinear duplicates (Canny traces both sides of a thin wall).
  bool merge_collinear = true;
  double merge_angle_deg = 3.0;
  double merge_distance_cells = 2.5;
};

/// Points whose elevation is within `half_width` of `center_height`,
/// projected to the top-down 2D frame.
std::vector<Vec2> slice_band(const PointCloud& cloud, double center_height, double half_width);

/// Drops points farther than `max_range` from `center`.
std::vector<Vec2> clip_range(const std::vector<Vec2>& points, const Vec2& center, double max_range);

/// Occupancy-count raster over the bounding box of `points`, padded by one
/// cell on every side. Throws InputError for an empty point list.
Raster2D rasterize(const std::vector<Vec2>& points, double resolution);

/// Binarize (count >= 1), Canny, probabilistic Hough, then optional
/// collinear merging. Endpoints are returned in meters.
SegmentSet extract_segments(const Raster2D& raster, const SegmentExtractionConfig& config = {});

/// Greedy fusion of segments that are nearly parallel, close and
/// overlapping (or separated by at most `max_gap`).
std::vector<Segment2> merge_collinear(std::vector<Segment2> segments, double max_angle_rad,
                                      double max_distance, double max_gap);

}  // namespace floorloc
