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
#include <optional>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace floorloc {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;

// Frame conventions
// -----------------
// Camera frame: +x right, +y down, +z forward (optical axis).
// Scan (tracking) frame: gravity aligned with +y pointing down, so the
// vertical coordinate of a point is its y value and elevation is -y.
// Top-down 2D frame: X = z, Y = -x. Heading 0 is the +z direction and
// angles increase counter-clockwise when viewed from above.

inline double elevation(const Vec3& p) { return -p.y(); }
inline Vec2 to_plan2d(const Vec3& p) { return {p.z(), -p.x()}; }

/// Pinhole intrinsics. Pixel (u, v) has coordinates exactly (u, v).
struct Intrinsics {
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.0;
  double cy = 0.0;
  int width = 1;
  int height = 1;

  /// Throws InputError unless fx, fy > 0 and the principal point lies
  /// inside the image.
  void validate() const;
};

/// Rigid transform in SE(3), mapping local coordinates into a parent frame.
struct Pose3 {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  static Pose3 identity() { return {}; }
  static Pose3 from_matrix(const Mat4& m);

  Mat4 matrix() const;
  Vec3 apply(const Vec3& p) const { return rotation * p + translation; }
  Pose3 inverse() const;

  /// True when rotation is orthonormal with determinant +1 within `tol`.
  bool is_valid(double tol = 1e-9) const;
};

/// Returns the pose equivalent to applying `inner` first, then `outer`.
Pose3 compose(const Pose3& outer, const Pose3& inner);

/// Rotation about the scan frame's vertical axis giving the 2D heading `yaw`
/// to the camera's optical axis, followed by a downward pitch.
Pose3 camera_pose_from_yaw_pitch(double yaw, double pitch_down, const Vec3& origin);

/// Per-pixel depth along the optical axis. Values <= 0 or non-finite are
/// missing. An empty mask keeps every pixel.
struct DepthMap {
  int width = 0;
  int height = 0;
  std::vector<float> depth;
  std::vector<std::uint8_t> mask;

  DepthMap() = default;
  DepthMap(int w, int h, float fill = 0.0f);

  float at(int u, int v) const { return depth[static_cast<std::size_t>(v) * width + u]; }
  float& at(int u, int v) { return depth[static_cast<std::size_t>(v) * width + u]; }
  bool kept(int u, int v) const;
  bool has_mask() const { return !mask.empty(); }
};

struct PointCloud {
  std::vector<Vec3> points;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
};

/// Plane {p : normal . p = offset} with a unit normal.
struct Plane3 {
  Vec3 normal = Vec3::UnitY();
  double offset = 0.0;

  double signed_distance(const Vec3& p) const { return normal.dot(p) - offset; }
};

/// One posed depth frame of a stationary scan.
struct ObservationFrame {
  DepthMap depth;
  Intrinsics intrinsics;
  Pose3 pose;  // camera-to-scan-frame
};

struct ObservationBundle {
  std::vector<ObservationFrame> frames;
};

inline constexpr int kDefaultUnprojectStride = 4;

/// Back-projects every `stride`-th kept pixel and maps it through `pose`.
PointCloud unproject(const DepthMap& depth, const Intrinsics& k, const Pose3& pose,
                     int stride = kDefaultUnprojectStride);

/// Projects a camera-frame point; returns (u, v, depth) or nothing when the
/// point is behind the camera.
std::optional<Vec3> project(const Vec3& camera_point, const Intrinsics& k);

PointCloud transform(const PointCloud& cloud, const Pose3& pose);

/// Multiplies every coordinate by `lambda` (scaling about the frame origin).
PointCloud scale(const PointCloud& cloud, double lambda);

/// Scales about `center`: p -> center + lambda (p - center).
PointCloud scale_about(const PointCloud& cloud, double lambda, const Vec3& center);

PointCloud translate(const PointCloud& cloud, const Vec3& offset);

/// Keeps every k-th point so that at most `max_points` remain.
PointCloud stride_subsample(const PointCloud& cloud, std::size_t max_points);

/// Wraps an angle into [0, 2pi).
double wrap_two_pi(double angle);
/// Wraps an angle into [-pi, pi).
double wrap_pi(double angle);
/// Smallest absolute difference between two angles, in [0, pi].
double angle_distance(double a, double b);

}  // namespace floorloc
