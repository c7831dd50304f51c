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

#include "floorloc/ray_casting.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "floorloc/error.hpp"

namespace floorloc {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

double point_segment_distance(const Vec2& p, const Segment2& s) {
  const Vec2 e = s.b - s.a;
  const double len2 = e.squaredNorm();
  if (len2 <= 0.0) return (p - s.a).norm();
  const double t = std::clamp((p - s.a).dot(e) / len2, 0.0, 1.0);
  return (p - (s.a + t * e)).norm();
}

// Liang-Barsky test of a segment against an axis-aligned box.
bool segment_hits_box(const Segment2& s, const Vec2& lo, const Vec2& hi) {
  double t0 = 0.0;
  double t1 = 1.0;
  const Vec2 d = s.b - s.a;
  for (int axis = 0; axis < 2; ++axis) {
    const double p0 = s.a[axis];
    const double dv = d[axis];
    if (std::abs(dv) < 1e-15) {
      if (p0 < lo[axis] || p0 > hi[axis]) return false;
      continue;
    }
    double ta = (lo[axis] - p0) / dv;
    double tb = (hi[axis] - p0) / dv;
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 > t1) return false;
  }
  return true;
}

std::optional<double> intersect_ray_line(const Vec2& origin, const Vec2& direction, const Segment2& s) {
  const Vec2 e = s.b - s.a;
  const double denom = cross(direction, e);
  if (std::abs(denom) < 1e-15) return std::nullopt;
  return cross(s.a - origin, e) / denom;
}

}  // namespace

std::optional<double> intersect_ray_segment(const Vec2& origin, const Vec2& direction,
                                            const Segment2& segment) {
  const Vec2 e = segment.b - segment.a;
  const double denom = cross(direction, e);
  if (std::abs(denom) < 1e-15) return std::nullopt;
  const Vec2 ao = segment.a - origin;
  const double t = cross(ao, e) / denom;
  const double u = cross(ao, direction) / denom;
  constexpr double eps = 1e-12;
  if (t < 0.0 || u < -eps || u > 1.0 + eps) return std::nullopt;
  return t;
}

SegmentIndex::SegmentIndex(std::vector<Segment2> segments, double cell_size)
    : segments_(std::move(segments)), cell_(cell_size) {
  if (!(cell_size > 0.0)) throw InputError("SegmentIndex: cell size must be positive");
  if (segments_.empty()) return;
  Vec2 lo = segments_.front().a;
  Vec2 hi = lo;
  for (const auto& s : segments_) {
    lo = lo.cwiseMin(s.a).cwiseMin(s.b);
    hi = hi.cwiseMax(s.a).cwiseMax(s.b);
  }
  origin_ = lo - Vec2::Constant(cell_);
  cols_ = static_cast<int>(std::ceil((hi.x() - origin_.x()) / cell_)) + 1;
  rows_ = static_cast<int>(std::ceil((hi.y() - origin_.y()) / cell_)) + 1;
  buckets_.assign(static_cast<std::size_t>(cols_) * rows_, {});
  for (int i = 0; i < static_cast<int>(segments_.size()); ++i) {
    const auto& s = segments_[i];
    const Vec2 slo = s.a.cwiseMin(s.b);
    const Vec2 shi = s.a.cwiseMax(s.b);
    const int c0 = std::max(0, static_cast<int>(std::floor((slo.x() - origin_.x()) / cell_)) - 1);
    const int c1 = std::min(cols_ - 1, static_cast<int>(std::floor((shi.x() - origin_.x()) / cell_)) + 1);
    const int r0 = std::max(0, static_cast<int>(std::floor((slo.y() - origin_.y()) / cell_)) - 1);
    const int r1 = std::min(rows_ - 1, static_cast<int>(std::floor((shi.y() - origin_.y()) / cell_)) + 1);
    for (int r = r0; r <= r1; ++r) {
      for (int c = c0; c <= c1; ++c) {
        const Vec2 blo = origin_ + Vec2(c * cell_, r * cell_);
        const Vec2 bhi = blo + Vec2::Constant(cell_);
        const Vec2 margin = Vec2::Constant(1e-9);
        if (segment_hits_box(s, blo - margin, bhi + margin)) {
          buckets_[static_cast<std::size_t>(r) * cols_ + c].push_back(i);
        }
      }
    }
  }
}

double SegmentIndex::cast(const Vec2& origin, const Vec2& direction, double max_range) const {
  if (segments_.empty()) return kNoHit;
  const Vec2 lo = origin_;
  const Vec2 hi = origin_ + Vec2(cols_ * cell_, rows_ * cell_);

  // Clip the ray to the grid box.
  double t_enter = 0.0;
  double t_leave = max_range;
  for (int axis = 0; axis < 2; ++axis) {
    if (std::abs(direction[axis]) < 1e-15) {
      if (origin[axis] < lo[axis] || origin[axis] > hi[axis]) return kNoHit;
      continue;
    }
    double ta = (lo[axis] - origin[axis]) / direction[axis];
    double tb = (hi[axis] - origin[axis]) / direction[axis];
    if (ta > tb) std::swap(ta, tb);
    t_enter = std::max(t_enter, ta);
    t_leave = std::min(t_leave, tb);
  }
  if (t_enter > t_leave) return kNoHit;

  const Vec2 start = origin + t_enter * direction;
  int c = std::clamp(static_cast<int>(std::floor((start.x() - lo.x()) / cell_)), 0, cols_ - 1);
  int r = std::clamp(static_cast<int>(std::floor((start.y() - lo.y()) / cell_)), 0, rows_ - 1);
  const int step_c = direction.x() > 0 ? 1 : -1;
  const int step_r = direction.y() > 0 ? 1 : -1;
  auto boundary_t = [&](int axis, int index, int step) {
    if (std::abs(direction[axis]) < 1e-15) return kNoHit;
    const double edge = lo[axis] + (index + (step > 0 ? 1 : 0)) * cell_;
    return (edge - origin[axis]) / direction[axis];
  };
  double t_next_c = boundary_t(0, c, step_c);
  double t_next_r = boundary_t(1, r, step_r);
  const double dt_c = std::abs(direction.x()) < 1e-15 ? kNoHit : cell_ / std::abs(direction.x());
  const double dt_r = std::abs(direction.y()) < 1e-15 ? kNoHit : cell_ / std::abs(direction.y());

  double best = kNoHit;
  while (c >= 0 && r >= 0 && c < cols_ && r < rows_) {
    for (int idx : buckets_[static_cast<std::size_t>(r) * cols_ + c]) {
      const auto t = intersect_ray_segment(origin, direction, segments_[idx]);
      if (t && *t < best) best = *t;
    }
    const double t_exit = std::min(t_next_c, t_next_r);
    if (best <= t_exit + 1e-12) break;
    if (t_exit > t_leave) break;
    if (t_next_c < t_next_r) {
      c += step_c;
      t_next_c += dt_c;
    } else {
      r += step_r;
      t_next_r += dt_r;
    }
  }
  return best <= max_range ? best : kNoHit;
}

RayScan ray_cast(const FloorPlan& plan, const PoseEstimate& pose, int n_rays, double max_range) {
  if (n_rays < 1) throw InputError("ray_cast: n_rays must be >= 1");
  const Vec2 origin(pose.x, pose.y);
  if (!plan.is_traversable(origin)) throw InputError("ray_cast: pose outside traversable space");
  const auto closed = plan.closed_walls();
  RayScan scan;
  scan.origin = origin;
  scan.max_range = max_range;
  scan.angles.resize(n_rays);
  scan.ranges.resize(n_rays);
  for (int k = 0; k < n_rays; ++k) {
    const double angle = pose.theta + kTwoPi * k / n_rays;
    const Vec2 dir(std::cos(angle), std::sin(angle));
    double best = kNoHit;
    for (const auto& s : closed.segments) {
      const auto t = intersect_ray_segment(origin, dir, s);
      if (t && *t < best) best = *t;
    }
    scan.angles[k] = angle;
    scan.ranges[k] = best <= max_range ? best : kNoHit;
  }
  return scan;
}

std::vector<Segment2> visible_pieces(const std::vector<Segment2>& walls, const Vec2& origin,
                                     double max_range) {
  std::vector<Segment2> candidates;
  for (const auto& s : walls) {
    if (s.length() <= 0.0) continue;
    if (point_segment_distance(origin, s) >= max_range) continue;
    candidates.push_back(s);
  }
  if (candidates.empty()) return {};

  std::vector<double> angles;
  auto add_angle = [&](const Vec2& p) {
    const Vec2 d = p - origin;
    if (d.squaredNorm() < 1e-24) return;
    angles.push_back(wrap_two_pi(std::atan2(d.y(), d.x())));
  };
  for (const auto& s : candidates) {
    add_angle(s.a);
    add_angle(s.b);
  }
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    for (std::size_t j = i + 1; j < candidates.size(); ++j) {
      const auto& p = candidates[i];
      const auto& q = candidates[j];
      const Vec2 e = p.b - p.a;
      const Vec2 f = q.b - q.a;
      const double denom = cross(e, f);
      if (std::abs(denom) < 1e-15) continue;
      const double t = cross(q.a - p.a, f) / denom;
      const double u = cross(q.a - p.a, e) / denom;
      if (t > 0.0 && t < 1.0 && u > 0.0 && u < 1.0) add_angle(p.a + t * e);
    }
  }
  std::sort(angles.begin(), angles.end());
  angles.erase(std::unique(angles.begin(), angles.end(), [](double a, double b) { return b - a < 1e-12; }),
               angles.end());

  struct Piece {
    int segment;
    Segment2 geom;
  };
  std::vector<Piece> pieces;
  const std::size_t m = angles.size();
  for (std::size_t i = 0; i < m; ++i) {
    const double a0 = angles[i];
    double a1 = (i + 1 < m) ? angles[i + 1] : angles[0] + kTwoPi;
    if (a1 - a0 < 1e-12) continue;
    const double mid = 0.5 * (a0 + a1);
    const Vec2 dmid(std::cos(mid), std::sin(mid));
    int nearest = -1;
    double best = kNoHit;
    for (int k = 0; k < static_cast<int>(candidates.size()); ++k) {
      const auto t = intersect_ray_segment(origin, dmid, candidates[k]);
      if (t && *t < best) {
        best = *t;
        nearest = k;
      }
    }
    if (nearest < 0) continue;
    const auto& s = candidates[nearest];
    const Vec2 d0(std::cos(a0), std::sin(a0));
    const Vec2 d1(std::cos(a1), std::sin(a1));
    const auto t0 = intersect_ray_line(origin, d0, s);
    const auto t1 = intersect_ray_line(origin, d1, s);
    if (!t0 || !t1 || *t0 < 0.0 || *t1 < 0.0) continue;
    Vec2 pa = origin + *t0 * d0;
    Vec2 pb = origin + *t1 * d1;

    // Clip to the observation disk.
    const Vec2 e = pb - pa;
    const double qa = e.squaredNorm();
    if (qa < 1e-24) continue;
    const double qb = 2.0 * e.dot(pa - origin);
    const double qc = (pa - origin).squaredNorm() - max_range * max_range;
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc <= 0.0) continue;
    const double sq = std::sqrt(disc);
    const double lo = std::max(0.0, (-qb - sq) / (2.0 * qa));
    const double hi = std::min(1.0, (-qb + sq) / (2.0 * qa));
    if (hi - lo <= 1e-12) continue;
    pieces.push_back({nearest, {pa + lo * e, pa + hi * e}});
  }

  // Fuse angularly adjacent pieces of the same wall.
  std::vector<Piece> fused;
  for (const auto& p : pieces) {
    if (!fused.empty() && fused.back().segment == p.segment &&
        (fused.back().geom.b - p.geom.a).norm() < 1e-9) {
      fused.back().geom.b = p.geom.b;
    } else {
      fused.push_back(p);
    }
  }
  if (fused.size() > 1 && fused.front().segment == fused.back().segment &&
      (fused.back().geom.b - fused.front().geom.a).norm() < 1e-9) {
    fused.front().geom.a = fused.back().geom.a;
    fused.pop_back();
  }
  std::vector<Segment2> out;
  out.reserve(fused.size());
  for (const auto& p : fused) out.push_back(p.geom);
  return out;
}

SegmentSet perfect_segments(const FloorPlan& plan, const PoseEstimate& pose, double max_range) {
  const Vec2 origin(pose.x, pose.y);
  if (!plan.is_traversable(origin)) throw InputError("perfect_segments: pose outside traversable space");
  const auto pieces = visible_pieces(plan.closed_walls().segments, origin, max_range);
  SegmentSet out;
  out.frame = SegmentFrame::kObservation;
  for (const auto& p : pieces) {
    out.segments.push_back({rotate2d(p.a - origin, -pose.theta), rotate2d(p.b - origin, -pose.theta)});
  }
  return out;
}

DistanceField compute_distance_field(const FloorPlan& plan, int directions, double max_range) {
  if (directions < 1) throw InputError("distance field: need at least one direction");
  DistanceField field;
  field.valid = plan.traversable;
  field.directions = directions;
  field.max_range = max_range;
  field.ranges.assign(plan.traversable.size() * static_cast<std::size_t>(directions), -1.0f);
  const SegmentIndex index(plan.closed_walls().segments, 1.0);
  std::vector<Vec2> dirs(directions);
  for (int k = 0; k < directions; ++k) {
    const double a = kTwoPi * k / directions;
    dirs[k] = Vec2(std::cos(a), std::sin(a));
  }
  for (int r = 0; r < plan.traversable.height; ++r) {
    for (int c = 0; c < plan.traversable.width; ++c) {
      const std::size_t cell = plan.traversable.index(c, r);
      if (plan.traversable.values[cell] <= 0.5) continue;
      const Vec2 p = plan.traversable.cell_center(c, r);
      for (int k = 0; k < directions; ++k) {
        const double t = index.cast(p, dirs[k], max_range);
        field.ranges[cell * directions + k] = std::isfinite(t) ? static_cast<float>(t) : -1.0f;
      }
    }
  }
  return field;
}

std::vector<double> uniform_orientations(int count) {
  if (count < 1) throw InputError("uniform_orientations: count must be >= 1");
  std::vector<double> out(count);
  for (int k = 0; k < count; ++k) out[k] = kTwoPi * k / count;
  return out;
}

HeatmapStack ray_match(const DistanceField& field, const RayScan& scan, const std::vector<double>& thetas) {
  const int n = field.directions;
  if (static_cast<int>(scan.ranges.size()) != n || scan.angles.size() != scan.ranges.size()) {
    throw InputError("ray_match: scan ray count must equal the distance field's direction count");
  }
  if (thetas.empty()) throw InputError("ray_match: no orientations");
  const double step = kTwoPi / n;

  // Offsets of each ray relative to the scan heading, snapped to the grid.
  std::vector<int> offsets(n);
  for (int k = 0; k < n; ++k) {
    offsets[k] = static_cast<int>(std::lround(wrap_two_pi(scan.angles[k] - scan.angles[0]) / step)) % n;
  }
  std::vector<float> observed(n);
  for (int k = 0; k < n; ++k) observed[k] = std::isfinite(scan.ranges[k]) ? static_cast<float>(scan.ranges[k]) : -1.0f;

  HeatmapStack stack;
  stack.valid = field.valid;
  std::vector<int> shifts;
  for (double theta : thetas) {
    const int j = static_cast<int>(std::lround(wrap_two_pi(theta) / step)) % n;
    shifts.push_back(j);
    stack.thetas.push_back(j * step);
    stack.maps.push_back(Raster2D::like(field.valid, 0.0));
  }

  std::vector<float> doubled(2 * static_cast<std::size_t>(n));
  std::vector<float> permuted(n);
  const float worst = -static_cast<float>(field.max_range);
  for (std::size_t cell = 0; cell < field.valid.size(); ++cell) {
    if (field.valid.values[cell] <= 0.5) continue;
    const float* row = &field.ranges[cell * n];
    std::copy(row, row + n, doubled.begin());
    std::copy(row, row + n, doubled.begin() + n);
    for (std::size_t h = 0; h < shifts.size(); ++h) {
      float acc = 0.0f;
      float count = 0.0f;
      for (int k = 0; k < n; ++k) {
        const float f = doubled[shifts[h] + offsets[k]];
        const float o = observed[k];
        const bool ok = (f >= 0.0f) & (o >= 0.0f);
        acc += ok ? std::abs(o - f) : 0.0f;
        count += ok ? 1.0f : 0.0f;
      }
      stack.maps[h].values[cell] = count > 0.0f ? -static_cast<double>(acc / count) : worst;
    }
  }
  std::vector<Raster2D*> ptrs;
  for (auto& m : stack.maps) ptrs.push_back(&m);
  suppress_invalid(ptrs, stack.valid);
  return stack;
}

}  // namespace floorloc
