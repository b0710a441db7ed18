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

// Exact arithmetic in R_q = Z[x]/(x^n + 1) in residue-number-system form.
//
// A RingElement stores one length-n residue vector per prime, limb-major.
// Residues are always in [0, p_j); the centered lift into (-q/2, q/2] is the
// external view (crt_lift).

#include <algorithm>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "thag/bigint.hpp"
#include "thag/error.hpp"
#include "thag/modarith.hpp"
#include "thag/ntt.hpp"

namespace thag {

class RingParams;
using RingParamsPtr = std::shared_ptr<const RingParams>;

class RingParams {
 public:
  static RingParamsPtr create(std::size_t n, std::vector<u64> primes) {
    return RingParamsPtr(new RingParams(n, std::move(primes)));
  }

  std::size_t n() const { return n_; }
  const std::vector<u64>& primes() const { return primes_; }
  std::size_t limbs() const { return primes_.size(); }
  const BigInt& q() const { return q_; }
  long log2_q() const { return log2_q_; }
  const NttTables& ntt(std::size_t j) const { return ntt_[j]; }

  bool same_as(const RingParams& o) const { return n_ == o.n_ && primes_ == o.primes_; }

  // Centered CRT reconstruction of one coefficient from its residues, read
  // with the given stride (the limb length n for a RingElement).
  void lift_coefficient(const u64* residues, std::size_t stride, BigInt& out) const {
    out = 0;
    for (std::size_t j = 0; j < primes_.size(); ++j) {
      const u64 y = mul_mod(residues[j * stride], qhat_inv_[j], primes_[j]);
      mpz_addmul_ui(out.get_mpz_t(), qhat_[j].get_mpz_t(), y);
    }
    while (out >= q_) out -= q_;
    if (2 * out > q_) out -= q_;
  }

 private:
  RingParams(std::size_t n, std::vector<u64> primes) : n_(n), primes_(std::move(primes)) {
    THAG_REQUIRE(n_ >= 4 && (n_ & (n_ - 1)) == 0, Errc::kInvalidArgument,
                 "ring degree must be a power of two >= 4, got " + std::to_string(n_));
    THAG_REQUIRE(!primes_.empty(), Errc::kNoPrimesFound, "empty prime list");
    for (std::size_t j = 0; j < primes_.size(); ++j) {
      const u64 p = primes_[j];
      THAG_REQUIRE(p < (1ULL << kMaxPrimeBits) && is_prime(p), Errc::kInvalidArgument,
                   std::to_string(p) + " is not a word-sized prime");
      THAG_REQUIRE((p - 1) % (2 * n_) == 0, Errc::kInvalidArgument,
                   std::to_string(p) + " is not 1 mod 2n");
      for (std::size_t k = 0; k < j; ++k)
        THAG_REQUIRE(primes_[k] != p, Errc::kInvalidArgument, "duplicate prime");
    }
    q_ = 1;
    for (u64 p : primes_) q_ *= from_u64(p);
    log2_q_ = bit_length(q_);
    for (u64 p : primes_) {
      BigInt qhat = q_ / from_u64(p);
      qhat_.push_back(qhat);
      qhat_inv_.push_back(inv_mod(mod_u64(qhat, p), p));
      ntt_.emplace_back(p, n_);
    }
  }

  std::size_t n_;
  std::vector<u64> primes_;
  BigInt q_;
  long log2_q_ = 0;
  std::vector<BigInt> qhat_;
  std::vector<u64> qhat_inv_;
  std::vector<NttTables> ntt_;
};

// Coefficient vector of arbitrary-precision signed integers.
struct BigCoeffs {
  std::vector<BigInt> values;

  std::size_t size() const { return values.size(); }
  bool operator==(const BigCoeffs&) const = default;
};

enum class Domain : std::uint8_t { kCoefficient, kNtt };

class RingElement {
 public:
  RingElement() = default;

  static RingElement zero(RingParamsPtr params, Domain domain = Domain::kCoefficient) {
    RingElement r;
    r.data_.assign(params->n() * params->limbs(), 0);
    r.params_ = std::move(params);
    r.domain_ = domain;
    return r;
  }

  // Signed coefficients, reduced into every limb.
  static RingElement from_signed(RingParamsPtr params, std::span<const std::int64_t> coeffs) {
    const std::size_t n = params->n();
    THAG_REQUIRE(coeffs.size() <= n, Errc::kLengthMismatch, "too many coefficients");
    RingElement r = zero(params);
    for (std::size_t j = 0; j < params->limbs(); ++j) {
      const u64 p = params->primes()[j];
      u64* limb = r.data_.data() + j * n;
      for (std::size_t i = 0; i < coeffs.size(); ++i) {
        const std::int64_t c = coeffs[i];
        const u64 mag = static_cast<u64>(c < 0 ? -(c + 1) : c) + (c < 0 ? 1 : 0);
        const u64 red = mag % p;
        limb[i] = c < 0 ? neg_mod(red, p) : red;
      }
    }
    return r;
  }

  // RNS decomposition of arbitrary integers (any sign, any size).
  static RingElement from_big(RingParamsPtr params, const BigCoeffs& coeffs) {
    const std::size_t n = params->n();
    THAG_REQUIRE(coeffs.size() <= n, Errc::kLengthMismatch, "too many coefficients");
    RingElement r = zero(params);
    for (std::size_t j = 0; j < params->limbs(); ++j) {
      const u64 p = params->primes()[j];
      u64* limb = r.data_.data() + j * n;
      for (std::size_t i = 0; i < coeffs.size(); ++i) limb[i] = mod_u64(coeffs.values[i], p);
    }
    return r;
  }

  static RingElement from_residues(RingParamsPtr params, std::vector<u64> data,
                                   Domain domain = Domain::kCoefficient) {
    THAG_REQUIRE(data.size() == params->n() * params->limbs(), Errc::kLengthMismatch,
                 "residue vector has wrong length");
    for (std::size_t j = 0; j < params->limbs(); ++j)
      for (std::size_t i = 0; i < params->n(); ++i)
        THAG_REQUIRE(data[j * params->n() + i] < params->primes()[j], Errc::kFormat,
                     "residue out of range");
    RingElement r;
    r.params_ = std::move(params);
    r.data_ = std::move(data);
    r.domain_ = domain;
    return r;
  }

  const RingParamsPtr& params() const { return params_; }
  Domain domain() const { return domain_; }
  bool empty() const { return !params_; }

  std::span<u64> limb(std::size_t j) { return {data_.data() + j * params_->n(), params_->n()}; }
  std::span<const u64> limb(std::size_t j) const {
    return {data_.data() + j * params_->n(), params_->n()};
  }
  const std::vector<u64>& residues() const { return data_; }

  RingElement& to_ntt() {
    if (domain_ == Domain::kNtt) return *this;
    for (std::size_t j = 0; j < params_->limbs(); ++j) params_->ntt(j).forward(limb(j));
    domain_ = Domain::kNtt;
    return *this;
  }

  RingElement& to_coeff() {
    if (domain_ == Domain::kCoefficient) return *this;
    for (std::size_t j = 0; j < params_->limbs(); ++j) params_->ntt(j).inverse(limb(j));
    domain_ = Domain::kCoefficient;
    return *this;
  }

  RingElement as_ntt() const { return RingElement(*this).to_ntt(); }
  RingElement as_coeff() const { return RingElement(*this).to_coeff(); }

  RingElement& operator+=(const RingElement& o) {
    check_compatible(o, true);
    for (std::size_t j = 0; j < params_->limbs(); ++j) {
      const u64 p = params_->primes()[j];
      auto a = limb(j);
      auto b = o.limb(j);
      for (std::size_t i = 0; i < a.size(); ++i) a[i] = add_mod(a[i], b[i], p);
    }
    return *this;
  }

  RingElement& operator-=(const RingElement& o) {
    check_compatible(o, true);
    for (std::size_t j = 0; j < params_->limbs(); ++j) {
      const u64 p = params_->primes()[j];
      auto a = limb(j);
      auto b = o.limb(j);
      for (std::size_t i = 0; i < a.size(); ++i) a[i] = sub_mod(a[i], b[i], p);
    }
    return *this;
  }

  RingElement operator-() const {
    RingElement r(*this);
    for (std::size_t j = 0; j < params_->limbs(); ++j) {
      const u64 p = params_->primes()[j];
      for (auto& x : r.limb(j)) x = neg_mod(x, p);
    }
    return r;
  }

  // Multiplication by an arbitrary integer constant; valid in either domain.
  RingElement& mul_scalar(const BigInt& c) {
    for (std::size_t j = 0; j < params_->limbs(); ++j) {
      const u64 p = params_->primes()[j];
      const u64 w = mod_u64(c, p);
      const u64 ws = shoup_precompute(w, p);
      for (auto& x : limb(j)) x = mul_mod_shoup(x, w, ws, p);
    }
    return *this;
  }

  // Pointwise product; both operands must be in the NTT domain.
  RingElement& mul_pointwise(const RingElement& o) {
    check_compatible(o, true);
    THAG_REQUIRE(domain_ == Domain::kNtt, Errc::kDomainMismatch,
                 "pointwise product needs NTT-domain operands");
    for (std::size_t j = 0; j < params_->limbs(); ++j) {
      const u64 p = params_->primes()[j];
      auto a = limb(j);
      auto b = o.limb(j);
      for (std::size_t i = 0; i < a.size(); ++i) a[i] = mul_mod(a[i], b[i], p);
    }
    return *this;
  }

  bool operator==(const RingElement& o) const {
    return domain_ == o.domain_ && data_ == o.data_ &&
           (params_ == o.params_ || (params_ && o.params_ && params_->same_as(*o.params_)));
  }

  void check_compatible(const RingElement& o, bool same_domain) const {
    THAG_REQUIRE(params_ && o.params_ &&
                     (params_ == o.params_ || params_->same_as(*o.params_)),
                 Errc::kParamsMismatch, "ring elements use different parameters");
    if (same_domain)
      THAG_REQUIRE(domain_ == o.domain_, Errc::kDomainMismatch,
                   "ring elements are in different domains");
  }

 private:
  RingParamsPtr params_;
  std::vector<u64> data_;
  Domain domain_ = Domain::kCoefficient;
};

inline RingElement ring_add(const RingElement& a, const RingElement& b) {
  RingElement r(a);
  r += b;
  return r;
}

inline RingElement ring_sub(const RingElement& a, const RingElement& b) {
  RingElement r(a);
  r -= b;
  return r;
}

// Negacyclic product through the per-prime NTT. Operands may be in either
// domain; two NTT-domain inputs give an NTT-domain result, anything else a
// coefficient-domain result.
inline RingElement ring_mul(const RingElement& a, const RingElement& b) {
  a.check_compatible(b, false);
  const bool stay_ntt = a.domain() == Domain::kNtt && b.domain() == Domain::kNtt;
  RingElement r = a.as_ntt();
  if (b.domain() == Domain::kNtt) {
    r.mul_pointwise(b);
  } else {
    r.mul_pointwise(b.as_ntt());
  }
  if (!stay_ntt) r.to_coeff();
  return r;
}

// O(n^2) negacyclic convolution per limb, without the NTT.
inline RingElement ring_mul_schoolbook(const RingElement& a, const RingElement& b) {
  a.check_compatible(b, false);
  const RingElement x = a.as_coeff();
  const RingElement y = b.as_coeff();
  const auto& params = a.params();
  const std::size_t n = params->n();
  RingElement r = RingElement::zero(params);
  for (std::size_t j = 0; j < params->limbs(); ++j) {
    const u64 p = params->primes()[j];
    auto xa = x.limb(j);
    auto yb = y.limb(j);
    auto out = r.limb(j);
    for (std::size_t i = 0; i < n; ++i) {
      if (xa[i] == 0) continue;
      for (std::size_t k = 0; k < n; ++k) {
        const u64 prod = mul_mod(xa[i], yb[k], p);
        const std::size_t idx = i + k;
        if (idx < n) {
          out[idx] = add_mod(out[idx], prod, p);
        } else {
          out[idx - n] = sub_mod(out[idx - n], prod, p);
        }
      }
    }
  }
  return r;
}

inline RingElement operator+(const RingElement& a, const RingElement& b) { return ring_add(a, b); }
inline RingElement operator-(const RingElement& a, const RingElement& b) { return ring_sub(a, b); }
inline RingElement operator*(const RingElement& a, const RingElement& b) { return ring_mul(a, b); }

// Centered representatives in (-q/2, q/2].
inline BigCoeffs crt_lift(const RingElement& a) {
  const RingElement c = a.as_coeff();
  const auto& params = c.params();
  const std::size_t n = params->n();
  BigCoeffs out;
  out.values.resize(n);
  const u64* base = c.residues().data();
  for (std::size_t i = 0; i < n; ++i) params->lift_coefficient(base + i, n, out.values[i]);
  return out;
}

inline BigInt inf_norm(const BigCoeffs& a) {
  BigInt m = 0;
  for (const auto& v : a.values) {
    if (mpz_cmpabs(v.get_mpz_t(), m.get_mpz_t()) > 0) m = abs(v);
  }
  return m;
}

inline BigCoeffs operator-(const BigCoeffs& a, const BigCoeffs& b) {
  THAG_REQUIRE(a.size() == b.size(), Errc::kLengthMismatch, "coefficient vectors differ in length");
  BigCoeffs r;
  r.values.resize(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r.values[i] = a.values[i] - b.values[i];
  return r;
}

inline BigCoeffs operator+(const BigCoeffs& a, const BigCoeffs& b) {
  THAG_REQUIRE(a.size() == b.size(), Errc::kLengthMismatch, "coefficient vectors differ in length");
  BigCoeffs r;
  r.values.resize(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r.values[i] = a.values[i] + b.values[i];
  return r;
}

}  // namespace thag
