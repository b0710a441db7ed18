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

// Choosing RNS prime chains of a requested size.

#include <algorithm>
#include <map>
#include <vector>

#include "thag/bigint.hpp"
#include "thag/modarith.hpp"

namespace thag {

inline constexpr int kDefaultPrimeBits = 60;

// NTT-friendly primes for degree n whose product has exactly `bits` bits.
// Uses the fewest limbs of at most kDefaultPrimeBits bits each and spreads
// the size evenly across them.
inline std::vector<u64> select_primes_for_bits(std::size_t n, long bits) {
  THAG_REQUIRE(bits >= 2, Errc::kNoPrimesFound, "modulus must have at least 2 bits");
  const long limbs = (bits + kDefaultPrimeBits - 1) / kDefaultPrimeBits;
  const long base = bits / limbs;
  const long extra = bits % limbs;
  std::map<long, std::size_t, std::greater<>> by_size;
  for (long i = 0; i < limbs; ++i) ++by_size[base + (i < extra ? 1 : 0)];
  std::vector<u64> primes;
  for (const auto& [size, count] : by_size) {
    auto chosen = ntt_primes_below(static_cast<int>(size), n, count, primes);
    primes.insert(primes.end(), chosen.begin(), chosen.end());
  }
  return primes;
}

inline BigInt product_of(const std::vector<u64>& primes) {
  BigInt q = 1;
  for (u64 p : primes) q *= from_u64(p);
  return q;
}

// Fewest-limb chain whose product strictly exceeds `threshold`.
inline std::vector<u64> select_primes_exceeding(std::size_t n, const Rational& threshold) {
  long bits = std::max<long>(2, min_bits_exceeding(threshold));
  for (int attempt = 0; attempt < 4; ++attempt, ++bits) {
    auto primes = select_primes_for_bits(n, bits);
    if (Rational(product_of(primes)) > threshold) return primes;
  }
  throw Error(Errc::kNoPrimesFound, "could not reach modulus threshold");
}

}  // namespace thag
