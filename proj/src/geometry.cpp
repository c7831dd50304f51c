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

#include "floorloc/geometry.hpp"

#include <cmath>
#include <numbers>

#include "floorloc/error.hpp"

namespace floorloc {

void Intrinsics::validate() const {
  if (!(fx > 0.0) || !(fy > 0.0)) {
    throw InputError("intrinsics: focal lengths must be positive");
  }
  if (width <= 0 || height <= 0) {
    throw InputError("intrinsics: image size must be positive");
  }
  if (!(cx >= 0.0 && cx < width && cy >= 0.0 && cy < height)) {
    throw InputError("intrinsics: principal point outside the image");
  }
}

Pose3 Pose3::from_matrix(const Mat4& m) {
  Pose3 pose;
  pose.rotation = m.block<3, 3>(0, 0);
  pose.translation = m.block<3, 1>(0, 3);
  return pose;
}

Mat4 Pose3::matrix() const {
  Mat4 m = Mat4::Identity();
  m.block<3, 3>(0, 0) = rotation;
  m.block<3, 1>(0, 3) = translation;
  return m;
}

Pose3 Pose3::inverse() const {
  Pose3 inv;
  inv.rotation = rotation.transpose();
  inv.translation = -(inv.rotation * translation);
  return inv;
}

bool Pose3::is_valid(double tol) const {
  if (!rotation.allFinite() || !translation.allFinite()) return false;
  const Mat3 residual = rotation.transpose() * rotation - Mat3::Identity();
  if (residual.cwiseAbs().maxCoeff() >= tol) return false;
  return std::abs(rotation.determinant() - 1.0) < tol * 10.0;
}

Pose3 compose(const Pose3& outer, const Pose3& inner) {
  Pose3 out;
  out.rotation = outer.rotation * inner.rotation;
  out.translation = outer.rotation * inner.translation + outer.translation;
  return out;
}

Pose3 camera_pose_from_yaw_pitch(double yaw, double pitch_down, const Vec3& origin) {
  const Mat3 r_yaw = Eigen::AngleAxisd(-yaw, Vec3::UnitY()).toRotationMatrix();
  const Mat3 r_pitch = Eigen::AngleAxisd(-pitch_down, Vec3::UnitX()).toRotationMatrix();
  Pose3 pose;
  pose.rotation = r_yaw * r_pitch;
  pose.translation = origin;
  return pose;
}

DepthMap::DepthMap(int w, int h, float fill)
    : width(w), height(h), depth(static_cast<std::size_t>(w) * h, fill) {}

bool DepthMap::kept(int u, int v) const {
  const float d = at(u, v);
  if (!std::isfinite(d) || d <= 0.0f) return false;
  if (!mask.empty() && mask[static_cast<std::size_t>(v) * width + u] == 0) return false;
  return true;
}

PointCloud unproject(const DepthMap& depth, const Intrinsics& k, const Pose3& pose, int stride) {
  k.validate();
  if (stride < 1) throw InputError("unproject: stride must be >= 1");
  if (depth.width != k.width || depth.height != k.height) {
    throw InputError("unproject: depth map size does not match intrinsics");
  }
  if (depth.depth.size() != static_cast<std::size_t>(depth.width) * depth.height) {
    throw InputError("unproject: depth grid has the wrong number of entries");
  }
  if (depth.has_mask() && depth.mask.size() != depth.depth.size()) {
    throw InputError("unproject: mask size does not match depth map");
  }

  PointCloud cloud;
  cloud.points.reserve(depth.depth.size() / (static_cast<std::size_t>(stride) * stride) + 1);
  for (int v = 0; v < depth.height; v += stride) {
    for (int u = 0; u < depth.width; u += stride) {
      if (!depth.kept(u, v)) continue;
      const double d = depth.at(u, v);
      const Vec3 cam((u - k.cx) * d / k.fx, (v - k.cy) * d / k.fy, d);
      cloud.points.push_back(pose.apply(cam));
    }
  }
  return cloud;
}

std::optional<Vec3> project(const Vec3& camera_point, const Intrinsics& k) {
  if (!(camera_point.z() > 0.0)) return std::nullopt;
  const double u = k.fx * camera_point.x() / camera_point.z() + k.cx;
  const double v = k.fy * camera_point.y() / camera_point.z() + k.cy;
  return Vec3(u, v, camera_point.z());
}

PointCloud transform(const PointCloud& cloud, const Pose3& pose) {
  PointCloud out;
  out.points.reserve(cloud.size());
  for (const auto& p : cloud.points) out.points.push_back(pose.apply(p));
  return out;
}

PointCloud scale(const PointCloud& cloud, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw InputError("scale: lambda must be positive");
  }
  PointCloud out;
  out.points.reserve(cloud.size());
  for (const auto& p : cloud.points) out.points.push_back(lambda * p);
  return out;
}

PointCloud scale_about(const PointCloud& cloud, double lambda, const Vec3& center) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw InputError("scale: lambda must be positive");
  }
  PointCloud out;
  out.points.reserve(cloud.size());
  for (const auto& p : cloud.points) out.points.push_back(center + lambda * (p - center));
  return out;
}

PointCloud translate(const PointCloud& cloud, const Vec3& offset) {
  PointCloud out;
  out.points.reserve(cloud.size());
  for (const auto& p : cloud.points) out.points.push_back(p + offset);
  return out;
}

PointCloud stride_subsample(const PointCloud& cloud, std::size_t max_points) {
  if (max_points == 0 || cloud.size() <= max_points) return cloud;
  const std::size_t step = (cloud.size() + max_points - 1) / max_points;
  PointCloud out;
  out.points.reserve(max_points);
  for (std::size_t i = 0; i < cloud.size(); i += step) out.points.push_back(cloud.points[i]);
  return out;
}

double wrap_two_pi(double angle) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double a = std::fmod(angle, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  if (a >= kTwoPi) a -= kTwoPi;
  return a;
}

double wrap_pi(double angle) {
  double a = wrap_two_pi(angle + std::numbers::pi) - std::numbers::pi;
  return a;
}

double angle_distance(double a, double b) { return std::abs(wrap_pi(a - b)); }

}  // namespace floorloc
