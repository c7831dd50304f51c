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

#include "floorloc/layout_matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "floorloc/error.hpp"

namespace floorloc {
namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> gaussian_taps(double sigma_cells) {
  const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma_cells)));
  std::vector<double> taps(2 * radius + 1);
  double total = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double w = std::exp(-0.5 * (i * i) / (sigma_cells * sigma_cells));
    taps[i + radius] = w;
    total += w;
  }
  for (double& w : taps) w /= total;
  return taps;
}

void blur(std::vector<double>& grid, int width, int height, double sigma_cells) {
  const auto taps = gaussian_taps(sigma_cells);
  const int radius = static_cast<int>(taps.size() / 2);
  std::vector<double> tmp(grid.size(), 0.0);
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) {
        const int cc = c + k;
        if (cc >= 0 && cc < width) acc += taps[k + radius] * grid[static_cast<std::size_t>(r) * width + cc];
      }
      tmp[static_cast<std::size_t>(r) * width + c] = acc;
    }
  }
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) {
        const int rr = r + k;
        if (rr >= 0 && rr < height) acc += taps[k + radius] * tmp[static_cast<std::size_t>(rr) * width + c];
      }
      grid[static_cast<std::size_t>(r) * width + c] = acc;
    }
  }
}

double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

bool inside_triangle(const Vec2& p, const Vec2& a, const Vec2& b, const Vec2& c) {
  const double d1 = cross(b - a, p - a);
  const double d2 = cross(c - b, p - b);
  const double d3 = cross(a - c, p - c);
  constexpr double eps = 1e-12;
  const bool has_neg = d1 < -eps || d2 < -eps || d3 < -eps;
  const bool has_pos = d1 > eps || d2 > eps || d3 > eps;
  return !(has_neg && has_pos);
}

}  // namespace

double OrientationHistogram::total() const {
  double t = 0.0;
  for (double m : mass) t += m;
  return t;
}

int OrientationHistogram::bin_of(double orientation) const {
  const int b = static_cast<int>(std::floor((orientation + kPi / 2) / bin_width));
  return std::clamp(b, 0, bins() - 1);
}

OrientationHistogram orientation_histogram(const SegmentSet& segments, double bin_width) {
  if (segments.empty()) throw InputError("orientation_histogram: no segments");
  if (!(bin_width > 0.0)) throw InputError("orientation_histogram: bin width must be positive");
  const double count = kPi / bin_width;
  const long bins = std::lround(count);
  if (bins < 1 || std::abs(count - static_cast<double>(bins)) > 1e-6) {
    throw InputError("orientation_histogram: bin width must divide pi");
  }
  OrientationHistogram hist;
  hist.bin_width = bin_width;
  hist.mass.assign(static_cast<std::size_t>(bins), 0.0);
  for (const auto& s : segments.segments) {
    const double len = s.length();
    if (len <= 0.0) continue;
    hist.mass[hist.bin_of(s.orientation())] += len;
  }
  return hist;
}

std::vector<double> candidate_orientations(const OrientationHistogram& observation,
                                           const OrientationHistogram& plan, int count,
                                           int nms_radius_bins) {
  if (observation.bins() != plan.bins() || observation.bins() == 0 ||
      std::abs(observation.bin_width - plan.bin_width) > 1e-12) {
    throw InputError("candidate_orientations: histograms must share bins");
  }
  if (count < 2 || count % 2 != 0) throw InputError("candidate_orientations: count must be even and >= 2");
  const int nb = observation.bins();

  std::vector<double> corr(nb, 0.0);
  for (int s = 0; s < nb; ++s) {
    double acc = 0.0;
    for (int b = 0; b < nb; ++b) acc += observation.mass[b] * plan.mass[(b + s) % nb];
    corr[s] = acc;
  }
  if (*std::max_element(corr.begin(), corr.end()) <= 0.0) {
    throw InputError("candidate_orientations: histograms have no overlapping mass");
  }

  std::vector<int> order(nb);
  for (int s = 0; s < nb; ++s) order[s] = s;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return corr[a] > corr[b]; });

  const int wanted = std::min(count / 2, nb);
  std::vector<int> picked;
  auto circular = [nb](int a, int b) {
    const int d = std::abs(a - b) % nb;
    return std::min(d, nb - d);
  };
  for (int s : order) {
    if (static_cast<int>(picked.size()) == wanted) break;
    const bool suppressed = std::any_of(picked.begin(), picked.end(),
                                        [&](int p) { return circular(p, s) <= nms_radius_bins; });
    if (!suppressed) picked.push_back(s);
  }
  // Not enough distinct peaks: pad with the next-best shifts.
  for (int s : order) {
    if (static_cast<int>(picked.size()) == wanted) break;
    if (std::find(picked.begin(), picked.end(), s) == picked.end()) picked.push_back(s);
  }

  std::vector<double> thetas;
  thetas.reserve(2 * picked.size());
  for (int s : picked) thetas.push_back(wrap_two_pi(s * observation.bin_width));
  for (int s : picked) thetas.push_back(wrap_two_pi(s * observation.bin_width + kPi));
  return thetas;
}

KernelPair build_kernels(const SegmentSet& observation, const Vec2& scan_origin, double theta,
                         double resolution, double sigma, int ces_exclusion_cells) {
  if (observation.empty()) throw InputError("build_kernels: no observed segments");
  if (!(resolution > 0.0)) throw InputError("build_kernels: resolution must be positive");
  if (sigma < 0.0) throw InputError("build_kernels: sigma must be non-negative");

  std::vector<Segment2> segs;
  segs.reserve(observation.size());
  for (const auto& s : observation.segments) {
    segs.push_back({rotate2d(s.a - scan_origin, theta), rotate2d(s.b - scan_origin, theta)});
  }

  Vec2 lo = Vec2::Zero();
  Vec2 hi = Vec2::Zero();
  for (const auto& s : segs) {
    lo = lo.cwiseMin(s.a).cwiseMin(s.b);
    hi = hi.cwiseMax(s.a).cwiseMax(s.b);
  }
  const int pad = static_cast<int>(std::ceil(3.0 * sigma / resolution)) + 1 + ces_exclusion_cells;
  const int cmin = static_cast<int>(std::floor(lo.x() / resolution)) - pad;
  const int rmin = static_cast<int>(std::floor(lo.y() / resolution)) - pad;
  const int cmax = static_cast<int>(std::ceil(hi.x() / resolution)) + pad;
  const int rmax = static_cast<int>(std::ceil(hi.y() / resolution)) + pad;

  // Scratch raster whose cell (c, r) centre is ((cmin + c) r, (rmin + r) r).
  Raster2D grid(cmax - cmin + 1, rmax - rmin + 1, resolution, Vec2(cmin * resolution, rmin * resolution));
  for (const auto& s : segs) draw_segment(grid, s);
  const std::vector<double> raw = grid.values;

  KernelPair out;
  out.theta = theta;
  out.resolution = resolution;
  out.rw.width = out.ces.width = grid.width;
  out.rw.height = out.ces.height = grid.height;
  out.rw.anchor_col = out.ces.anchor_col = -cmin;
  out.rw.anchor_row = out.ces.anchor_row = -rmin;

  out.rw.values = raw;
  if (sigma > 0.0) {
    blur(out.rw.values, grid.width, grid.height, sigma / resolution);
    const double peak = *std::max_element(out.rw.values.begin(), out.rw.values.end());
    if (peak > 0.0) {
      for (double& v : out.rw.values) v /= peak;
    }
  }

  out.ces.values.assign(grid.size(), 0.0);
  const Vec2 apex = Vec2::Zero();
  for (const auto& s : segs) {
    if (std::abs(cross(s.a - apex, s.b - apex)) < 1e-12) continue;
    const Vec2 tlo = apex.cwiseMin(s.a).cwiseMin(s.b);
    const Vec2 thi = apex.cwiseMax(s.a).cwiseMax(s.b);
    const Cell c0 = grid.cell_of(tlo);
    const Cell c1 = grid.cell_of(thi);
    for (int r = std::max(0, c0.row - 1); r <= std::min(grid.height - 1, c1.row + 1); ++r) {
      for (int c = std::max(0, c0.col - 1); c <= std::min(grid.width - 1, c1.col + 1); ++c) {
        if (inside_triangle(grid.cell_center(c, r), apex, s.a, s.b)) out.ces.values[grid.index(c, r)] = 1.0;
      }
    }
  }
  // Walls never fall inside their own empty space.
  const int ex = ces_exclusion_cells;
  for (int r = 0; r < grid.height; ++r) {
    for (int c = 0; c < grid.width; ++c) {
      if (raw[grid.index(c, r)] <= 0.0) continue;
      for (int dr = -ex; dr <= ex; ++dr) {
        for (int dc = -ex; dc <= ex; ++dc) {
          if (grid.contains(c + dc, r + dr)) out.ces.values[grid.index(c + dc, r + dr)] = 0.0;
        }
      }
    }
  }
  return out;
}

Kernel2D combine(const KernelPair& kernels, double alpha) {
  Kernel2D k = kernels.rw;
  for (std::size_t i = 0; i < k.values.size(); ++i) k.values[i] -= alpha * kernels.ces.values[i];
  return k;
}

void suppress_invalid(std::vector<Raster2D*> maps, const Raster2D& valid) {
  double lowest = std::numeric_limits<double>::infinity();
  for (const Raster2D* m : maps) {
    for (std::size_t i = 0; i < m->size(); ++i) {
      if (valid.values[i] > 0.5) lowest = std::min(lowest, m->values[i]);
    }
  }
  if (!std::isfinite(lowest)) lowest = 0.0;
  for (Raster2D* m : maps) {
    for (std::size_t i = 0; i < m->size(); ++i) {
      if (valid.values[i] <= 0.5) m->values[i] = lowest;
    }
  }
}

Raster2D match(ImageCorrelator& correlator, const FloorPlan& plan, const KernelPair& kernels,
               double alpha) {
  if (std::abs(kernels.resolution - plan.resolution()) > 1e-9) {
    throw InputError("match: kernel resolution differs from the floor-plan resolution");
  }
  Raster2D out = Raster2D::like(plan.raster);
  out.values = correlator.correlate(combine(kernels, alpha));
  suppress_invalid({&out}, plan.traversable);
  return out;
}

Raster2D match(const FloorPlan& plan, const KernelPair& kernels, double alpha) {
  ImageCorrelator correlator(plan.raster);
  return match(correlator, plan, kernels, alpha);
}

double HeatmapStack::total() const {
  double t = 0.0;
  for (const auto& m : maps) t += m.sum();
  return t;
}

HeatmapStack compute_heatmaps(const FloorPlan& plan, const SegmentSet& observation,
                              const Vec2& scan_origin, const std::vector<double>& thetas,
                              const std::vector<double>& scales, double alpha, double sigma,
                              int ces_exclusion_cells) {
  if (thetas.empty()) throw InputError("compute_heatmaps: no orientations");
  if (scales.empty()) throw InputError("compute_heatmaps: no scales");
  for (double s : scales) {
    if (!(s > 0.0)) throw InputError("compute_heatmaps: scales must be positive");
  }
  ImageCorrelator correlator(plan.raster);
  HeatmapStack stack;
  stack.thetas = thetas;
  stack.valid = plan.traversable;
  for (double theta : thetas) {
    Raster2D best;
    for (double s : scales) {
      const SegmentSet scaled = transform_segments(observation, 0.0, Vec2::Zero(), s);
      const KernelPair k = build_kernels(scaled, s * scan_origin, theta, plan.resolution(), sigma,
                                         ces_exclusion_cells);
      Raster2D h = match(correlator, plan, k, alpha);
      if (best.empty()) {
        best = std::move(h);
      } else {
        for (std::size_t i = 0; i < best.size(); ++i) best.values[i] = std::max(best.values[i], h.values[i]);
      }
    }
    stack.maps.push_back(std::move(best));
  }
  std::vector<Raster2D*> ptrs;
  for (auto& m : stack.maps) ptrs.push_back(&m);
  suppress_invalid(ptrs, stack.valid);
  return stack;
}

HeatmapStack localize_segments(const FloorPlan& plan, const SegmentSet& observation,
                               const Vec2& scan_origin, const MatchingConfig& config) {
  const double bw = config.histogram_bin_deg * kPi / 180.0;
  const auto obs_hist = orientation_histogram(observation, bw);
  const auto plan_hist = orientation_histogram(plan.closed_walls(), bw);
  const auto thetas = candidate_orientations(obs_hist, plan_hist, config.orientations, config.nms_radius_bins);
  return compute_heatmaps(plan, observation, scan_origin, thetas, config.scales, config.alpha, config.sigma,
                          config.ces_exclusion_cells);
}

PoseEstimate argmax_pose(const HeatmapStack& stack) {
  if (stack.empty()) throw InputError("argmax_pose: empty stack");
  const Raster2D& ref = stack.maps.front();
  const bool masked = stack.valid.size() == ref.size();
  bool found = false;
  std::size_t best_o = 0;
  std::size_t best_i = 0;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t o = 0; o < stack.maps.size(); ++o) {
    const auto& m = stack.maps[o];
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (masked && stack.valid.values[i] <= 0.5) continue;
      const double v = m.values[i];
      if (!std::isfinite(v)) continue;
      if (!found || v > best) {
        found = true;
        best = v;
        best_o = o;
        best_i = i;
      }
    }
  }
  if (!found) throw NoSolutionError("argmax_pose: no admissible cell in the heatmap stack");
  const int col = static_cast<int>(best_i % static_cast<std::size_t>(ref.width));
  const int row = static_cast<int>(best_i / static_cast<std::size_t>(ref.width));
  const Vec2 p = ref.cell_center(col, row);
  return {p.x(), p.y(), wrap_two_pi(stack.thetas[best_o]), best};
}

HeatmapStack normalize_to_pdf(const HeatmapStack& stack) {
  if (stack.empty()) throw InputError("normalize_to_pdf: empty stack");
  HeatmapStack out = stack;
  const std::size_t n = stack.maps.front().size();
  const bool masked = stack.valid.size() == n;
  auto is_valid = [&](std::size_t i) { return !masked || stack.valid.values[i] > 0.5; };

  double lowest = std::numeric_limits<double>::infinity();
  std::size_t valid_cells = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!is_valid(i)) continue;
    ++valid_cells;
    for (const auto& m : stack.maps) lowest = std::min(lowest, m.values[i]);
  }
  if (valid_cells == 0) throw NoSolutionError("normalize_to_pdf: no admissible cell");

  // Kahan summation keeps the total exact enough for a 1e-9 contract.
  double total = 0.0;
  double comp = 0.0;
  for (const auto& m : stack.maps) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!is_valid(i)) continue;
      const double y = (m.values[i] - lowest) - comp;
      const double t = total + y;
      comp = (t - total) - y;
      total = t;
    }
  }
  const double uniform = 1.0 / static_cast<double>(valid_cells * stack.maps.size());
  for (auto& m : out.maps) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!is_valid(i)) {
        m.values[i] = 0.0;
      } else if (total > 0.0) {
        m.values[i] = (m.values[i] - lowest) / total;
      } else {
        m.values[i] = uniform;
      }
    }
  }
  return out;
}

Raster2D collapse_orientations(const HeatmapStack& stack) {
  if (stack.empty()) throw InputError("collapse_orientations: empty stack");
  Raster2D out = stack.maps.front();
  for (std::size_t o = 1; o < stack.maps.size(); ++o) {
    for (std::size_t i = 0; i < out.size(); ++i) out.values[i] = std::max(out.values[i], stack.maps[o].values[i]);
  }
  return out;
}

}  // namespace floorloc
