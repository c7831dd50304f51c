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

#include "floorloc/layout_matching.hpp"

namespace floorloc {

struct ThresholdAccuracy {
  double meters = 0.0;
  double degrees = 0.0;  // 0 means position only
  double accuracy = 0.0;
};

struct EvalReport {
  std::size_t count = 0;
  std::vector<ThresholdAccuracy> rows;  // 0.1, 0.5, 1, 2, 5 m then (1 m, 30 deg)
  std::vector<double> position_errors;
  std::vector<double> angle_errors_deg;

  /// Accuracy for a row; throws InputError if absent.
  double accuracy(double meters, double degrees = 0.0) const;
};

EvalReport evaluate(const std::vector<PoseEstimate>& predictions,
                    const std::vector<PoseEstimate>& truths);

}  // namespace floorloc
