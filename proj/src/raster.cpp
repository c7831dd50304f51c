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

#include "floorloc/raster.hpp"

#include <algorithm>
#include <limits>
#include <numbers>
#include <numeric>

#include "floorloc/error.hpp"

namespace floorloc {

Raster2D::Raster2D(int w, int h, double res, Vec2 org, double fill)
    : width(w), height(h), resolution(res), origin(std::move(org)) {
  if (w < 0 || h < 0) throw InputError("raster: negative dimensions");
  if (!(res > 0.0)) throw InputError("raster: resolution must be positive");
  values.assign(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill);
}

Raster2D Raster2D::like(const Raster2D& other, double fill) {
  return Raster2D(other.width, other.height, other.resolution, other.origin, fill);
}

bool Raster2D::same_geometry(const Raster2D& other) const {
  return width == other.width && height == other.height &&
         std::abs(resolution - other.resolution) < 1e-12 &&
         (origin - other.origin).cwiseAbs().maxCoeff() < 1e-9;
}

double Raster2D::sum() const { return std::accumulate(values.begin(), values.end(), 0.0); }

double Raster2D::max_value() const {
  if (values.empty()) return -std::numeric_limits<double>::infinity();
  return *std::max_element(values.begin(), values.end());
}

double Segment2::orientation() const {
  const Vec2 d = b - a;
  double phi = std::atan2(d.y(), d.x());
  // Fold into [-pi/2, pi/2).
  while (phi >= std::numbers::pi / 2) phi -= std::numbers::pi;
  while (phi < -std::numbers::pi / 2) phi += std::numbers::pi;
  return phi;
}

void draw_segment(Raster2D& raster, const Segment2& segment, double value) {
  trace_segment(raster, segment.a, segment.b, [&](const Cell& c) {
    if (raster.contains(c)) raster.at(c) = std::max(raster.at(c), value);
    return true;
  });
}

SegmentSet transform_segments(const SegmentSet& set, double theta, const Vec2& translation,
                              double scale) {
  SegmentSet out;
  out.frame = set.frame;
  out.segments.reserve(set.size());
  for (const auto& s : set.segments) {
    out.segments.push_back({rotate2d(scale * s.a, theta) + translation,
                            rotate2d(scale * s.b, theta) + translation});
  }
  return out;
}

}  // namespace floorloc
