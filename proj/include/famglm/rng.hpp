/*
 * Copyright 2026 The famglm authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <cmath>
#include <cstdint>

#include "famglm/core.hpp"

namespace famglm {

/// Counter-based 64-bit generator (SplitMix64 output function over an
/// additive counter). Streams are cheap: Rng::stream(seed, k) opens the k-th
/// independent stream of a seed, so parallel replicates never share state and
/// any replicate can be regenerated in isolation. The seed is mixed before
/// the stream index is folded in; otherwise nearby seeds would share stream
/// sets (stream(s, k) == stream(s ^ 1, k ^ 1)).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  static Rng stream(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return Rng(z ^ index);
  }

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) from the top 53 bits.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller; the paired draw is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  bool bernoulli(double p) { return uniform() < p; }

  /// Poisson draw. Sequential inversion for small rates, Hormann's
  /// transformed rejection (PTRS) for large ones.
  long poisson(double rate) {
    require(rate >= 0.0 && std::isfinite(rate), errc::out_of_range,
            "poisson: rate must be finite and nonnegative");
    if (rate < 30.0) return poisson_inversion(rate);
    return poisson_ptrs(rate);
  }

 private:
  long poisson_inversion(double rate) {
    const double limit = std::exp(-rate);
    long k = 0;
    double prod = uniform();
    while (prod > limit) {
      ++k;
      prod *= uniform();
    }
    return k;
  }

  long poisson_ptrs(double rate) {
    const double b = 0.931 + 2.53 * std::sqrt(rate);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    const double log_rate = std::log(rate);
    for (;;) {
      const double u = uniform() - 0.5;
      const double v = uniform();
      const double us = 0.5 - std::abs(u);
      const double kf = std::floor((2.0 * a / us + b) * u + rate + 0.43);
      if (us >= 0.07 && v <= v_r) return static_cast<long>(kf);
      if (kf < 0.0 || (us < 0.013 && v > us)) continue;
      const double lhs = std::log(v * inv_alpha / (a / (us * us) + b));
      const double rhs = kf * log_rate - rate - std::lgamma(kf + 1.0);
      if (lhs <= rhs) return static_cast<long>(kf);
    }
  }

  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Draw from N(mean, L * L^T) given the lower Cholesky factor L.
inline Vector mvn_sample(const Vector& mean, const Matrix& chol_lower, Rng& rng) {
  require(chol_lower.rows() == chol_lower.cols() && chol_lower.rows() == mean.size(),
          errc::shape_mismatch, "mvn_sample: mean and factor disagree");
  Vector z(mean.size());
  for (Index i = 0; i < z.size(); ++i) z(i) = rng.normal();
  return mean + chol_lower * z;
}

}  // namespace famglm
