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

#include "floorloc/evaluation.hpp"

#include <cmath>
#include <numbers>

#include "floorloc/error.hpp"

namespace floorloc {

double EvalReport::accuracy(double meters, double degrees) const {
  for (const auto& row : rows) {
    if (row.meters == meters && row.degrees == degrees) return row.accuracy;
  }
  throw InputError("no accuracy row for the requested threshold");
}

EvalReport evaluate(const std::vector<PoseEstimate>& predictions,
                    const std::vector<PoseEstimate>& truths) {
  if (predictions.size() != truths.size()) {
    throw InputError("evaluate: prediction and truth counts differ");
  }
  if (predictions.empty()) throw InputError("evaluate: nothing to evaluate");
  EvalReport report;
  report.count = predictions.size();
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const double dp = std::hypot(predictions[i].x - truths[i].x, predictions[i].y - truths[i].y);
    const double da = angle_distance(predictions[i].theta, truths[i].theta) * 180.0 / std::numbers::pi;
    report.position_errors.push_back(dp);
    report.angle_errors_deg.push_back(da);
  }
  auto fraction = [&](double meters, double degrees) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < report.count; ++i) {
      // Thresholds are inclusive; the tiny slack absorbs float noise in the distance.
      const bool pos_ok = report.position_errors[i] <= meters + 1e-12;
      const bool ang_ok = degrees <= 0.0 || report.angle_errors_deg[i] <= degrees + 1e-9;
      hits += (pos_ok && ang_ok) ? 1 : 0;
    }
    return static_cast<double>(hits) / static_cast<double>(report.count);
  };
  for (double m : {0.1, 0.5, 1.0, 2.0, 5.0}) report.rows.push_back({m, 0.0, fraction(m, 0.0)});
  report.rows.push_back({1.0, 30.0, fraction(1.0, 30.0)});
  return report;
}

}  // namespace floorloc
