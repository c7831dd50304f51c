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

#include <functional>
#include <vector>

namespace floorloc {

/// Options for `minimize_bounded`.
struct BoundedLbfgsOptions {
  int max_iterations = 100;
  int history = 8;
  /// Stop when the relative objective decrease falls below this.
  double function_tolerance = 1e-6;
  /// Stop when the infinity norm of the projected gradient falls below this.
  double gradient_tolerance = 1e-8;
  /// Step for central finite differences when no gradient is supplied.
  double finite_difference_step = 1e-3;
  int max_line_search_steps = 30;
};

struct BoundedLbfgsResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

using ObjectiveFn = std::function<double(const std::vector<double>&)>;
/// Writes the gradient at x into `grad` (already sized).
using GradientFn = std::function<void(const std::vector<double>& x, std::vector<double>& grad)>;

/// Box-constrained limited-memory BFGS.
///
/// Each iteration fixes the variables that sit on a bound with the gradient
/// pushing outward, builds the two-loop L-BFGS direction over the remaining
/// free variables, and runs an Armijo backtracking search along the
/// projected path P(x + a d). Falls back to projected steepest descent when
/// the quasi-Newton direction is not a descent direction.
///
/// Never throws on non-convergence; the best iterate is returned with
/// `converged = false`.
BoundedLbfgsResult minimize_bounded(const ObjectiveFn& f, const GradientFn& gradient,
                                    std::vector<double> x0, const std::vector<double>& lower,
                                    const std::vector<double>& upper,
                                    const BoundedLbfgsOptions& options = {});

/// Central finite-difference gradient that never samples outside the box.
void finite_difference_gradient(const ObjectiveFn& f, const std::vector<double>& x,
                                const std::vector<double>& lower,
                                const std::vector<double>& upper, double step,
                                std::vector<double>& grad);

}  // namespace floorloc
