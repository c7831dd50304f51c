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

#include <cstddef>
#include <span>
#include <vector>

#include "floorloc/geometry.hpp"

namespace floorloc {

/// Static 3D k-d tree for exact nearest-neighbour queries.
class KdTree3 {
 public:
  struct Hit {
    std::size_t index = 0;
    double distance = 0.0;
  };

  KdTree3() = default;
  explicit KdTree3(std::span<const Vec3> points);

  /// Nearest stored point to `query`. The tree must be non-empty.
  Hit nearest(const Vec3& query) const;

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }

 private:
  struct Node {
    int axis = -1;  // -1 marks a leaf
    double split = 0.0;
    std::size_t begin = 0;
    std::size_t end = 0;
    int left = -1;
    int right = -1;
  };

  int build(std::size_t begin, std::size_t end, int depth);
  void search(int node, const Vec3& q, Hit& best, double& best_sq) const;

  std::vector<Vec3> points_;
  std::vector<std::size_t> order_;
  std::vector<Node> nodes_;
};

}  // namespace floorloc
