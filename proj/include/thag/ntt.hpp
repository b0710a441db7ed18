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

// Negacyclic number-theoretic transform over Z_p for x^n + 1.
//
// Forward: Cooley-Tukey with bit-reversed powers of a primitive 2n-th root
// psi, natural-order input, bit-reversed output. Inverse: Gentleman-Sande,
// bit-reversed input, natural-order output, scaled by n^{-1}.

#include <cstdint>
#include <span>
#include <vector>

#include "thag/modarith.hpp"

namespace thag {

class NttTables {
 public:
  NttTables(u64 p, std::size_t n) : p_(p), n_(n) {
    THAG_REQUIRE(n >= 2 && (n & (n - 1)) == 0, Errc::kInvalidArgument,
                 "ring degree must be a power of two");
    const u64 psi = primitive_2n_root(p, n);
    const u64 psi_inv = inv_mod(psi, p);
    int log_n = 0;
    while ((std::size_t{1} << log_n) < n) ++log_n;
    psi_rev_.resize(n);
    psi_inv_rev_.resize(n);
    psi_rev_shoup_.resize(n);
    psi_inv_rev_shoup_.resize(n);
    u64 pw = 1, pw_inv = 1;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t r = bit_reverse(i, log_n);
      psi_rev_[r] = pw;
      psi_inv_rev_[r] = pw_inv;
      pw = mul_mod(pw, psi, p);
      pw_inv = mul_mod(pw_inv, psi_inv, p);
    }
    for (std::size_t i = 0; i < n; ++i) {
      psi_rev_shoup_[i] = shoup_precompute(psi_rev_[i], p);
      psi_inv_rev_shoup_[i] = shoup_precompute(psi_inv_rev_[i], p);
    }
    n_inv_ = inv_mod(static_cast<u64>(n % p), p);
    n_inv_shoup_ = shoup_precompute(n_inv_, p);
  }

  u64 modulus() const { return p_; }
  std::size_t degree() const { return n_; }

  void forward(std::span<u64> a) const {
    std::size_t t = n_;
    for (std::size_t m = 1; m < n_; m <<= 1) {
      t >>= 1;
      for (std::size_t i = 0; i < m; ++i) {
        const std::size_t j1 = 2 * i * t;
        const u64 w = psi_rev_[m + i];
        const u64 ws = psi_rev_shoup_[m + i];
        for (std::size_t j = j1; j < j1 + t; ++j) {
          const u64 u = a[j];
          const u64 v = mul_mod_shoup(a[j + t], w, ws, p_);
          a[j] = add_mod(u, v, p_);
          a[j + t] = sub_mod(u, v, p_);
        }
      }
    }
  }

  void inverse(std::span<u64> a) const {
    std::size_t t = 1;
    for (std::size_t m = n_; m > 1; m >>= 1) {
      const std::size_t h = m >> 1;
      std::size_t j1 = 0;
      for (std::size_t i = 0; i < h; ++i) {
        const u64 w = psi_inv_rev_[h + i];
        const u64 ws = psi_inv_rev_shoup_[h + i];
        for (std::size_t j = j1; j < j1 + t; ++j) {
          const u64 u = a[j];
          const u64 v = a[j + t];
          a[j] = add_mod(u, v, p_);
          a[j + t] = mul_mod_shoup(sub_mod(u, v, p_), w, ws, p_);
        }
        j1 += 2 * t;
      }
      t <<= 1;
    }
    for (auto& x : a) x = mul_mod_shoup(x, n_inv_, n_inv_shoup_, p_);
  }

 private:
  static std::size_t bit_reverse(std::size_t x, int bits) {
    std::size_t r = 0;
    for (int i = 0; i < bits; ++i) {
      r = (r << 1) | (x & 1);
      x >>= 1;
    }
    return r;
  }

  u64 p_;
  std::size_t n_;
  std::vector<u64> psi_rev_, psi_inv_rev_, psi_rev_shoup_, psi_inv_rev_shoup_;
  u64 n_inv_ = 0, n_inv_shoup_ = 0;
};

}  // namespace thag
