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

#include <cmath>
#include <cstdint>
#include <numbers>

namespace floorloc {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Stateless generator: every draw is a pure function of (key, a, b, c).
/// Draws for different particles or steps never share state, so the
/// result does not depend on evaluation order.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(splitmix64(key)) {}

  std::uint64_t bits(std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) const {
    std::uint64_t h = splitmix64(key_ ^ a);
    h = splitmix64(h ^ (b * 0xD1342543DE82EF95ull));
    return splitmix64(h ^ (c * 0xA0761D6478BD642Full));
  }

  /// Uniform in [0, 1).
  double uniform(std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) const {
    return static_cast<double>(bits(a, b, c) >> 11) * 0x1.0p-53;
  }

  /// Standard normal by Box-Muller; `c` selects the draw.
  double normal(std::uint64_t a, std::uint64_t b, std::uint64_t c) const {
    const double u1 = 1.0 - uniform(a, b, 2 * c);  // (0, 1]
    const double u2 = uniform(a, b, 2 * c + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t key_;
};

/// Sequential wrapper for code that just needs a stream of numbers.
class Stream {
 public:
  explicit Stream(std::uint64_t seed, std::uint64_t channel = 0) : rng_(seed), channel_(channel) {}

  double uniform() { return rng_.uniform(channel_, counter_++); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal() { return rng_.normal(channel_, counter_++, 0); }
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    return n == 0 ? 0 : static_cast<std::uint64_t>(uniform() * static_cast<double>(n)) % n;
  }

 private:
  CounterRng rng_;
  std::uint64_t channel_;
  std::uint64_t counter_ = 0;
};

}  // namespace floorloc
