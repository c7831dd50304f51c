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

#include "floorloc/bounded_lbfgs.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "floorloc/error.hpp"

namespace floorloc {
namespace {

struct Correction {
  std::vector<double> s;
  std::vector<double> y;
  double rho = 0.0;
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

void project(std::vector<double>& x, const std::vector<double>& lo, const std::vector<double>& hi) {
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], lo[i], hi[i]);
}

}  // namespace

void finite_difference_gradient(const ObjectiveFn& f, const std::vector<double>& x,
                                const std::vector<double>& lower,
                                const std::vector<double>& upper, double step,
                                std::vector<double>& grad) {
  grad.assign(x.size(), 0.0);
  std::vector<double> probe = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double plus = std::min(x[i] + step, upper[i]);
    const double minus = std::max(x[i] - step, lower[i]);
    if (plus <= minus) continue;
    probe[i] = plus;
    const double f_plus = f(probe);
    probe[i] = minus;
    const double f_minus = f(probe);
    probe[i] = x[i];
    grad[i] = (f_plus - f_minus) / (plus - minus);
  }
}

BoundedLbfgsResult minimize_bounded(const ObjectiveFn& f, const GradientFn& gradient,
                                    std::vector<double> x0, const std::vector<double>& lower,
                                    const std::vector<double>& upper,
                                    const BoundedLbfgsOptions& options) {
  const std::size_t n = x0.size();
  if (lower.size() != n || upper.size() != n) {
    throw InputError("minimize_bounded: bound vectors must match the variable count");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(lower[i] <= upper[i])) throw InputError("minimize_bounded: lower bound above upper");
  }

  BoundedLbfgsResult result;
  int evaluations = 0;
  auto eval = [&](const std::vector<double>& x) {
    ++evaluations;
    return f(x);
  };
  auto grad_at = [&](const std::vector<double>& x, std::vector<double>& g) {
    if (gradient) {
      g.assign(n, 0.0);
      gradient(x, g);
    } else {
      finite_difference_gradient(eval, x, lower, upper, options.finite_difference_step, g);
    }
  };

  std::vector<double> x = std::move(x0);
  project(x, lower, upper);
  double fx = eval(x);
  result.x = x;
  result.value = fx;
  if (n == 0) {
    result.converged = true;
    result.evaluations = evaluations;
    return result;
  }

  std::vector<double> g;
  grad_at(x, g);
  std::deque<Correction> history;
  std::vector<double> d(n), x_new(n), g_new, q(n), alpha_buf;

  // Tolerance for deciding a variable sits on its bound.
  auto at_lower = [&](std::size_t i) { return x[i] <= lower[i] + 1e-12; };
  auto at_upper = [&](std::size_t i) { return x[i] >= upper[i] - 1e-12; };

  for (int iter = 0; iter < options.max_iterations; ++iter) {
    result.iterations = iter + 1;

    std::vector<bool> free(n, true);
    double pg_norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if ((at_lower(i) && g[i] > 0.0) || (at_upper(i) && g[i] < 0.0)) {
        free[i] = false;
      } else {
        pg_norm = std::max(pg_norm, std::abs(g[i]));
      }
    }
    if (pg_norm <= options.gradient_tolerance) {
      result.converged = true;
      break;
    }

    // Two-loop recursion restricted to the free variables.
    for (std::size_t i = 0; i < n; ++i) q[i] = free[i] ? g[i] : 0.0;
    alpha_buf.assign(history.size(), 0.0);
    for (std::size_t k = history.size(); k-- > 0;) {
      const auto& c = history[k];
      double sq = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        if (free[i]) sq += c.s[i] * q[i];
      alpha_buf[k] = c.rho * sq;
      for (std::size_t i = 0; i < n; ++i)
        if (free[i]) q[i] -= alpha_buf[k] * c.y[i];
    }
    double gamma = 1.0;
    if (!history.empty()) {
      const auto& last = history.back();
      gamma = dot(last.s, last.y) / dot(last.y, last.y);
    }
    for (std::size_t i = 0; i < n; ++i) q[i] *= gamma;
    for (std::size_t k = 0; k < history.size(); ++k) {
      const auto& c = history[k];
      double yr = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        if (free[i]) yr += c.y[i] * q[i];
      const double beta = c.rho * yr;
      for (std::size_t i = 0; i < n; ++i)
        if (free[i]) q[i] += c.s[i] * (alpha_buf[k] - beta);
    }
    for (std::size_t i = 0; i < n; ++i) d[i] = free[i] ? -q[i] : 0.0;

    double slope = dot(d, g);
    if (!(slope < 0.0)) {
      for (std::size_t i = 0; i < n; ++i) d[i] = free[i] ? -g[i] : 0.0;
      history.clear();
      slope = dot(d, g);
    }

    // No coordinate moves more than ~10% of the box width per iteration.
    double step = 1.0;
    double dnorm = 0.0;
    for (double v : d) dnorm = std::max(dnorm, std::abs(v));
    double box = 0.0;
    for (std::size_t i = 0; i < n; ++i) box = std::max(box, upper[i] - lower[i]);
    if (dnorm > 0.0 && std::isfinite(box)) step = std::min(1.0, 0.1 * box / dnorm);

    bool accepted = false;
    double f_new = fx;
    for (int ls = 0; ls < options.max_line_search_steps; ++ls) {
      for (std::size_t i = 0; i < n; ++i) x_new[i] = x[i] + step * d[i];
      project(x_new, lower, upper);
      double decrease = 0.0;
      for (std::size_t i = 0; i < n; ++i) decrease += g[i] * (x_new[i] - x[i]);
      f_new = eval(x_new);
      if (f_new <= fx + 1e-4 * decrease && decrease < 0.0) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      // No progress along this direction; treat as converged at x.
      result.converged = history.empty();
      if (!history.empty()) {
        history.clear();
        continue;
      }
      break;
    }

    grad_at(x_new, g_new);
    Correction c;
    c.s.resize(n);
    c.y.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      c.s[i] = x_new[i] - x[i];
      c.y[i] = g_new[i] - g[i];
    }
    const double sy = dot(c.s, c.y);
    if (sy > 1e-12 * dot(c.y, c.y) && sy > 0.0) {
      c.rho = 1.0 / sy;
      history.push_back(std::move(c));
      if (static_cast<int>(history.size()) > options.history) history.pop_front();
    }

    const double f_old = fx;
    x = x_new;
    fx = f_new;
    g = g_new;
    result.x = x;
    result.value = fx;

    const double scale = std::max({std::abs(f_old), std::abs(fx), 1.0});
    if ((f_old - fx) / scale <= options.function_tolerance) {
      result.converged = true;
      break;
    }
  }

  result.evaluations = evaluations;
  return result;
}

}  // namespace floorloc
