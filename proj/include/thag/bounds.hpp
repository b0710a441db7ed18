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

// Closed-form noise and modulus bounds, all in exact rational arithmetic.

#include <cstdint>

#include "thag/bigint.hpp"
#include "thag/error.hpp"

namespace thag {

// Noise bound of a fresh single-key ciphertext: (2n + 1) B.
inline Rational fresh_bound(std::uint64_t n, const Rational& noise_bound) {
  return Rational(BigInt(2 * n + 1)) * noise_bound;
}

inline long half_lambda_ceil(long lambda) { return (lambda + 1) / 2; }

struct MpBounds {
  Rational b_fresh;     // (2n + 1) B
  Rational b_fresh_mp;  // B (2nL + 1): fresh ciphertext under the collective key
  Rational b_ct;        // L B (2nL + 1): after summing L fresh ciphertexts
  Rational b_smg;       // 2^{ceil(lambda/2)} b_ct
  Rational b_ct_mp;     // b_ct + L b_smg
};

inline MpBounds mp_bounds(std::uint64_t n, std::uint64_t parties, const Rational& noise_bound,
                          long lambda) {
  THAG_REQUIRE(n > 0 && parties > 0, Errc::kInvalidArgument, "n and L must be positive");
  THAG_REQUIRE(lambda >= 0, Errc::kInvalidArgument, "lambda must be non-negative");
  MpBounds b;
  const BigInt big_n(static_cast<unsigned long>(n));
  const BigInt big_l(static_cast<unsigned long>(parties));
  b.b_fresh = fresh_bound(n, noise_bound);
  b.b_fresh_mp = noise_bound * Rational(2 * big_n * big_l + 1);
  b.b_ct = Rational(big_l) * b.b_fresh_mp;
  b.b_smg = Rational(pow2(half_lambda_ceil(lambda))) * b.b_ct;
  b.b_ct_mp = b.b_ct + Rational(big_l) * b.b_smg;
  return b;
}

// MBFV decrypts correctly iff noise < q/(2t) - t/2, i.e. q > 2 t b + t^2.
inline Rational qmin_mbfv_threshold(const BigInt& t, const Rational& b_ct_mp) {
  return Rational(2 * t) * b_ct_mp + Rational(t * t);
}

// MCKKS decrypts within bound iff delta b_m + noise < q/2.
inline Rational qmin_mckks_threshold(const Rational& delta, const Rational& b_m,
                                     const Rational& b_ct_mp) {
  return 2 * (delta * b_m + b_ct_mp);
}

inline long qmin_mbfv(const BigInt& t, const Rational& b_ct_mp) {
  return min_bits_exceeding(qmin_mbfv_threshold(t, b_ct_mp));
}

inline long qmin_mckks(const Rational& delta, const Rational& b_m, const Rational& b_ct_mp) {
  return min_bits_exceeding(qmin_mckks_threshold(delta, b_m, b_ct_mp));
}

// Power-of-two scale reaching the target error margin: 2^{ceil(log2(b eps^-1))}.
inline BigInt scale_from_eps(const Rational& eps_inv, const Rational& b_ct_mp) {
  THAG_REQUIRE(eps_inv >= 1, Errc::kInvalidArgument, "eps^-1 must be >= 1");
  THAG_REQUIRE(sgn(b_ct_mp) > 0, Errc::kInvalidArgument, "noise bound must be positive");
  const long k = ceil_log2(b_ct_mp * eps_inv);
  return k <= 0 ? BigInt(1) : pow2(k);
}

enum class Winner { kMckksSmallerQ, kMbfvSmallerOrEqual };

// MCKKS needs the smaller modulus iff t^2/(2b) + t - 1 > eps^-1.
inline Winner winner(const BigInt& t, const Rational& eps_inv, const Rational& b_ct_mp) {
  const Rational lhs = Rational(t * t) / (2 * b_ct_mp) + Rational(t - 1);
  return lhs > eps_inv ? Winner::kMckksSmallerQ : Winner::kMbfvSmallerOrEqual;
}

// Equivalent threshold form: MCKKS is smaller iff b > (2 delta b_m - t^2) / (2 (t - 1)).
inline bool mckks_smaller_by_delta(const BigInt& t, const Rational& delta, const Rational& b_m,
                                   const Rational& b_ct_mp) {
  THAG_REQUIRE(t > 1, Errc::kInvalidArgument, "t must exceed 1");
  return b_ct_mp > (2 * delta * b_m - Rational(t * t)) / Rational(2 * (t - 1));
}

inline const char* winner_name(Winner w) {
  return w == Winner::kMckksSmallerQ ? "MCKKS_smaller_q" : "MBFV_smaller_or_equal";
}

}  // namespace thag
