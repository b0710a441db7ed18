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

// Word-sized modular arithmetic for the RNS limbs.

#include <cstdint>
#include <vector>

#include "thag/error.hpp"

namespace thag {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline constexpr int kMaxPrimeBits = 61;

inline u64 add_mod(u64 a, u64 b, u64 p) {
  u64 s = a + b;
  return s >= p ? s - p : s;
}

inline u64 sub_mod(u64 a, u64 b, u64 p) { return a >= b ? a - b : a + p - b; }

inline u64 neg_mod(u64 a, u64 p) { return a == 0 ? 0 : p - a; }

inline u64 mul_mod(u64 a, u64 b, u64 p) {
  return static_cast<u64>(static_cast<u128>(a) * b % p);
}

inline u64 pow_mod(u64 base, u64 exp, u64 p) {
  u64 result = 1 % p;
  base %= p;
  while (exp) {
    if (exp & 1) result = mul_mod(result, base, p);
    base = mul_mod(base, base, p);
    exp >>= 1;
  }
  return result;
}

inline u64 inv_mod(u64 a, u64 p) { return pow_mod(a, p - 2, p); }

// Precomputed floor(w * 2^64 / p) for multiplying many values by a fixed w.
inline u64 shoup_precompute(u64 w, u64 p) {
  return static_cast<u64>((static_cast<u128>(w) << 64) / p);
}

inline u64 mul_mod_shoup(u64 x, u64 w, u64 w_shoup, u64 p) {
  u64 q = static_cast<u64>((static_cast<u128>(x) * w_shoup) >> 64);
  u64 r = x * w - q * p;
  return r >= p ? r - p : r;
}

// Deterministic Miller-Rabin; the base set is exact for all 64-bit inputs.
inline bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 small : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % small == 0) return n == small;
  }
  u64 d = n - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    u64 x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < r; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

// Primitive 2n-th root of unity mod p, the smallest one found by scanning
// candidates; requires p = 1 (mod 2n).
inline u64 primitive_2n_root(u64 p, u64 n) {
  const u64 order = 2 * n;
  THAG_REQUIRE((p - 1) % order == 0, Errc::kInvalidArgument, "prime is not 1 mod 2n");
  const u64 cofactor = (p - 1) / order;
  for (u64 x = 2; x < p; ++x) {
    u64 psi = pow_mod(x, cofactor, p);
    if (pow_mod(psi, n, p) == p - 1) return psi;
  }
  throw Error(Errc::kNoPrimesFound, "no primitive root found");
}

// The `count` largest primes p < 2^bits with p = 1 (mod 2n), descending,
// skipping anything in `exclude`.
inline std::vector<u64> ntt_primes_below(int bits, u64 n, std::size_t count,
                                         const std::vector<u64>& exclude = {}) {
  THAG_REQUIRE(bits >= 2 && bits <= kMaxPrimeBits, Errc::kNoPrimesFound,
               "prime size out of range");
  const u64 step = 2 * n;
  const u64 limit = 1ULL << bits;
  std::vector<u64> out;
  if (limit <= step) throw Error(Errc::kNoPrimesFound, "prime size too small for ring degree");
  u64 candidate = ((limit - 1) / step) * step + 1;
  if (candidate >= limit) candidate -= step;
  while (out.size() < count && candidate > step) {
    bool skip = false;
    for (u64 e : exclude) skip |= (e == candidate);
    if (!skip && is_prime(candidate)) out.push_back(candidate);
    candidate -= step;
  }
  THAG_REQUIRE(out.size() == count, Errc::kNoPrimesFound,
               "not enough NTT-friendly primes below 2^" + std::to_string(bits));
  return out;
}

}  // namespace thag
