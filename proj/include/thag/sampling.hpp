// Copyright 2026 The thag Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Samplers for the distributions used by the schemes: uniform over R_q,
// ternary, truncated rounded Gaussian (chi), and uniform smudging noise.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "thag/bigint.hpp"
#include "thag/ring.hpp"
#include "thag/rng.hpp"

namespace thag {

struct NoiseSpec {
  Rational sigma;
  Rational bound;

  // B = 6 sigma unless overridden.
  static NoiseSpec from_sigma(const Rational& sigma) { return NoiseSpec::make(sigma, 6 * sigma); }

  static NoiseSpec make(const Rational& sigma, const Rational& bound) {
    THAG_REQUIRE(sgn(sigma) >= 0, Errc::kInvalidArgument, "sigma must be non-negative");
    THAG_REQUIRE(bound >= sigma, Errc::kInvalidArgument, "noise bound must be >= sigma");
    return NoiseSpec{sigma, bound};
  }

  // Largest integer a truncated sample may take.
  std::int64_t integer_bound() const { return floor_of(bound).get_si(); }
};

inline RingElement sample_uniform(const RingParamsPtr& params, Rng& rng) {
  BigCoeffs c;
  c.values.resize(params->n());
  for (auto& v : c.values) v = rng.uniform_below(params->q());
  return RingElement::from_big(params, c);
}

inline std::vector<std::int64_t> sample_ternary_coeffs(std::size_t n, Rng& rng) {
  std::vector<std::int64_t> out(n);
  for (auto& v : out) v = static_cast<std::int64_t>(rng.uniform_below(3)) - 1;
  return out;
}

inline RingElement sample_ternary(const RingParamsPtr& params, Rng& rng) {
  return RingElement::from_signed(params, sample_ternary_coeffs(params->n(), rng));
}

// Rounded continuous Gaussian of standard deviation sigma, resampled until
// |x| <= bound.
inline std::vector<std::int64_t> sample_gaussian_coeffs(std::size_t n, const NoiseSpec& spec,
                                                        Rng& rng) {
  std::vector<std::int64_t> out(n, 0);
  const double sigma = spec.sigma.get_d();
  if (sigma == 0.0) return out;
  const std::int64_t limit = spec.integer_bound();
  for (auto& v : out) {
    for (;;) {
      // Box-Muller, cosine branch only.
      const double u1 = rng.uniform_open01();
      const double u2 = rng.uniform_open01();
      const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
      const double x = std::floor(sigma * z + 0.5);
      if (std::fabs(x) <= static_cast<double>(limit)) {
        v = static_cast<std::int64_t>(x);
        break;
      }
    }
  }
  return out;
}

inline RingElement sample_gaussian(const RingParamsPtr& params, const NoiseSpec& spec, Rng& rng) {
  return RingElement::from_signed(params, sample_gaussian_coeffs(params->n(), spec, rng));
}

// Uniform over the integers of [-bound, bound].
inline BigCoeffs sample_smudging(const RingParamsPtr& params, const BigInt& bound, Rng& rng) {
  THAG_REQUIRE(sgn(bound) >= 0, Errc::kInvalidArgument, "smudging bound must be non-negative");
  BigCoeffs out;
  out.values.assign(params->n(), 0);
  if (sgn(bound) == 0) return out;
  const BigInt width = 2 * bound + 1;
  if (bit_length(width) < 64) {
    const u64 w = width.get_ui();
    const std::int64_t b = bound.get_si();
    for (auto& v : out.values) v = static_cast<long>(static_cast<std::int64_t>(rng.uniform_below(w)) - b);
    return out;
  }
  for (auto& v : out.values) v = rng.uniform_below(width) - bound;
  return out;
}

}  // namespace thag
