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

// Arbitrary-precision integers and rationals (GMP) plus the handful of exact
// helpers the bound arithmetic needs.

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

#include "thag/error.hpp"

namespace thag {

using BigInt = mpz_class;
using Rational = mpq_class;

inline BigInt pow2(long bits) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, static_cast<unsigned long>(bits));
  return r;
}

inline BigInt from_u64(std::uint64_t v) {
  BigInt r;
  mpz_import(r.get_mpz_t(), 1, -1, sizeof(v), 0, 0, &v);
  return r;
}

inline BigInt from_i64(std::int64_t v) {
  BigInt r = from_u64(v < 0 ? 0 - static_cast<std::uint64_t>(v) : static_cast<std::uint64_t>(v));
  if (v < 0) r = -r;
  return r;
}

// Number of bits in |v|; 0 for v == 0.
inline long bit_length(const BigInt& v) {
  if (sgn(v) == 0) return 0;
  return static_cast<long>(mpz_sizeinbase(v.get_mpz_t(), 2));
}

inline BigInt floor_of(const Rational& x) {
  BigInt r;
  mpz_fdiv_q(r.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return r;
}

inline BigInt ceil_of(const Rational& x) {
  BigInt r;
  mpz_cdiv_q(r.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return r;
}

// num/den in lowest terms. mpq_class(num, den) does not canonicalize.
inline Rational ratio(const BigInt& num, const BigInt& den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

// Nearest integer, ties rounded toward +infinity.
inline BigInt round_half_up(const Rational& x) {
  return floor_of(x + Rational(1, 2));
}

// Smallest k with 2^k >= x, for x > 0.
inline long ceil_log2(const Rational& x) {
  THAG_REQUIRE(sgn(x) > 0, Errc::kInvalidArgument, "ceil_log2 of non-positive value");
  long k = bit_length(x.get_num()) - bit_length(x.get_den());
  auto two_pow = [](long e) {
    return e >= 0 ? Rational(pow2(e)) : Rational(BigInt(1), pow2(-e));
  };
  while (two_pow(k) < x) ++k;
  while (two_pow(k - 1) >= x) --k;
  return k;
}

// Smallest bit length b such that some integer of b bits exceeds x strictly,
// i.e. bit_length(floor(x) + 1). This is the minimal modulus size for a
// strict lower bound q > x.
inline long min_bits_exceeding(const Rational& x) {
  if (sgn(x) < 0) return 1;
  return bit_length(floor_of(x) + 1);
}

inline double log2_of(const BigInt& v) {
  long exp = 0;
  double mant = mpz_get_d_2exp(&exp, v.get_mpz_t());
  return std::log2(std::fabs(mant)) + static_cast<double>(exp);
}

inline double log2_of(const Rational& x) {
  return log2_of(BigInt(x.get_num())) - log2_of(BigInt(x.get_den()));
}

// Parses an exact decimal such as "19.2", "-3", "1e-3" or a fraction "96/5".
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  THAG_REQUIRE(!s.empty(), Errc::kConfig, "empty number");
  if (auto slash = s.find('/'); slash != std::string::npos) {
    Rational r(s, 10);
    r.canonicalize();
    return r;
  }
  long exp10 = 0;
  if (auto e = s.find_first_of("eE"); e != std::string::npos) {
    exp10 = std::stol(s.substr(e + 1));
    s = s.substr(0, e);
  }
  bool neg = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    neg = s[0] == '-';
    s = s.substr(1);
  }
  std::string digits;
  long frac = 0;
  bool seen_dot = false;
  for (char c : s) {
    if (c == '.') {
      THAG_REQUIRE(!seen_dot, Errc::kConfig, "malformed number '" + std::string(text) + "'");
      seen_dot = true;
    } else if (c >= '0' && c <= '9') {
      digits.push_back(c);
      if (seen_dot) ++frac;
    } else {
      throw Error(Errc::kConfig, "malformed number '" + std::string(text) + "'");
    }
  }
  THAG_REQUIRE(!digits.empty(), Errc::kConfig, "malformed number '" + std::string(text) + "'");
  BigInt num(digits, 10);
  long scale = exp10 - frac;
  BigInt ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
  Rational r = scale >= 0 ? Rational(num * ten_pow) : ratio(num, ten_pow);
  r.canonicalize();
  return neg ? Rational(-r) : r;
}

// Exact decimal when the expansion terminates within max_frac digits,
// otherwise truncated toward zero with a trailing "~".
inline std::string to_decimal(const Rational& x, int max_frac = 6) {
  BigInt num = abs(x.get_num());
  const BigInt& den = x.get_den();
  BigInt whole = num / den;
  BigInt rem = num % den;
  std::string out = (sgn(x) < 0 ? "-" : "") + whole.get_str();
  if (rem == 0) return out;
  out.push_back('.');
  for (int i = 0; i < max_frac && rem != 0; ++i) {
    rem *= 10;
    BigInt digit = rem / den;
    rem %= den;
    out += digit.get_str();
  }
  if (rem != 0) out.push_back('~');
  return out;
}

inline std::uint64_t mod_u64(const BigInt& v, std::uint64_t p) {
  static_assert(sizeof(unsigned long) == sizeof(std::uint64_t));
  // Floor division by a positive divisor leaves a non-negative remainder.
  return mpz_fdiv_ui(v.get_mpz_t(), p);
}

}  // namespace thag
