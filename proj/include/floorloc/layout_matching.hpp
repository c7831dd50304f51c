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

#include "floorloc/correlation.hpp"
#include "floorloc/floorplan.hpp"
#include "floorloc/raster.hpp"

namespace floorloc {

struct MatchingConfig {
  double resolution = kDefaultPlanResolution;  // must equal the plan raster's
  double sigma = 0.15;                         // RW smoothing, meters
  double alpha = 10.0;                         // CES penalty weight
  std::vector<double> scales{0.9, 1.0, 1.1};
  int orientations = 10;
  double histogram_bin_deg = 1.0;
  int nms_radius_bins = 2;
  int ces_exclusion_cells = 1;
};

/// Length-weighted histogram of segment orientations over [-pi/2, pi/2).
struct OrientationHistogram {
  double bin_width = 0.0;
  std::vector<double> mass;

  int bins() const { return static_cast<int>(mass.size()); }
  double total() const;
  int bin_of(double orientation) const;
};

OrientationHistogram orientation_histogram(const SegmentSet& segments, double bin_width);

/// Rotations (radians, [0, 2pi)) that best align the observation histogram
/// with the plan histogram: the top count/2 circular cross-correlation
/// peaks after non-maximum suppression, followed by their pi complements.
std::vector<double> candidate_orientations(const OrientationHistogram& observation,
                                           const OrientationHistogram& plan, int count,
                                           int nms_radius_bins = 2);

/// Recorded-wall and certainly-empty-space kernels at one orientation.
/// Both share the anchor, which is the scan origin.
struct KernelPair {
  Kernel2D rw;
  Kernel2D ces;
  double theta = 0.0;
  double resolution = 0.0;
};

/// Rotates `observation` (and its scan origin) by `theta` about the origin,
/// rasterizes the walls (Gaussian smoothed with std `sigma`, then peak
/// normalized) and fills the triangles (origin, a, b) for CES, clearing CES
/// cells within `ces_exclusion_cells` of the raw wall trace.
KernelPair build_kernels(const SegmentSet& observation, const Vec2& scan_origin, double theta,
                         double resolution, double sigma, int ces_exclusion_cells = 1);

/// rw - alpha * ces on the shared grid.
Kernel2D combine(const KernelPair& kernels, double alpha);

/// Scores a pose grid: cross-correlation of the plan wall raster with
/// rw - alpha * ces anchored at each cell. Cells outside traversable space
/// receive the minimum traversable score.
Raster2D match(const FloorPlan& plan, const KernelPair& kernels, double alpha);
Raster2D match(ImageCorrelator& correlator, const FloorPlan& plan, const KernelPair& kernels,
               double alpha);

/// Replaces cells where `valid` is zero by the minimum over valid cells.
void suppress_invalid(std::vector<Raster2D*> maps, const Raster2D& valid);

/// Per-orientation score grids over plan cells: the posterior over pose.
struct HeatmapStack {
  std::vector<Raster2D> maps;
  std::vector<double> thetas;
  Raster2D valid;  // 1 where a pose is admissible; same geometry as maps

  std::size_t size() const { return maps.size(); }
  bool empty() const { return maps.empty(); }
  double total() const;
};

/// Builds a stack over every (theta, scale): entry o is the cellwise max
/// over scales.
HeatmapStack compute_heatmaps(const FloorPlan& plan, const SegmentSet& observation,
                              const Vec2& scan_origin, const std::vector<double>& thetas,
                              const std::vector<double>& scales, double alpha, double sigma,
                              int ces_exclusion_cells = 1);

/// Orientations from histograms, then `compute_heatmaps`.
HeatmapStack localize_segments(const FloorPlan& plan, const SegmentSet& observation,
                               const Vec2& scan_origin, const MatchingConfig& config);

struct PoseEstimate {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
  double score = 0.0;
};

/// Global maximum over valid cells and orientations. Ties go to the lowest
/// orientation index, then row-major cell order. Throws NoSolutionError
/// when no cell is valid.
PoseEstimate argmax_pose(const HeatmapStack& stack);

/// Shifts valid scores to be non-negative and divides by the total so the
/// stack sums to 1. Invalid cells become 0; a flat stack becomes uniform
/// over valid cells.
HeatmapStack normalize_to_pdf(const HeatmapStack& stack);

/// Maximum over orientations, per cell.
Raster2D collapse_orientations(const HeatmapStack& stack);

}  // namespace floorloc
