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

// L-out-of-L threshold variant of the additive schemes.
//
// Each party holds an additive share sk_i of the ideal key sk = sum sk_i.
// Given a common random p1, party i publishes p0_i = -p1 sk_i + e_i and the
// collective key is (sum p0_i, p1). To open a ciphertext (c0, c1) every party
// publishes h_i = sk_i c1 + e_smg,i and d = [c0 + sum h_i]_q.

#include <algorithm>
#include <array>
#include <cstdint>
#include <set>
#include <span>
#include <vector>

#include "thag/he.hpp"

namespace thag {

using CrsSeed = std::array<std::uint8_t, 32>;

struct Crs {
  CrsSeed seed{};
  RingElement p1;
};

struct SecretShare {
  std::uint32_t party = 0;  // 1-based
  RingElement sk;
};

struct PkShare {
  std::uint32_t party = 0;
  RingElement p0;
};

struct CollectivePublicKey {
  RingElement p0, p1;

  PublicKey as_public_key() const { return PublicKey{p0, p1}; }
};

struct PartialDecryption {
  std::uint32_t party = 0;
  RingElement h;
};

struct SmudgeParams {
  long lambda = 0;
  Rational b_ct;
  Rational b_smg;  // 2^{ceil(lambda/2)} b_ct

  // Largest integer magnitude a smudging coefficient may take.
  BigInt integer_bound() const { return floor_of(b_smg); }
};

inline Crs crs_expand(const CrsSeed& seed, const SchemeParams& params) {
  Rng rng = Rng(seed).derive("thag.crs.p1");
  return Crs{seed, sample_uniform(params.ring, rng)};
}

inline SecretShare gen_share(const SchemeParams& params, std::uint32_t party, Rng& rng) {
  THAG_REQUIRE(party >= 1 && party <= params.parties, Errc::kInvalidArgument,
               "party index out of range");
  return SecretShare{party, sample_ternary(params.ring, rng)};
}

inline PkShare pk_share_with(const SecretShare& share, const Crs& crs, const RingElement& e) {
  RingElement p0 = -(share.sk * crs.p1);
  p0 += e;
  return PkShare{share.party, std::move(p0)};
}

inline PkShare pk_share(const SchemeParams& params, const SecretShare& share, const Crs& crs,
                        Rng& rng) {
  return pk_share_with(share, crs, sample_gaussian(params.ring, params.noise, rng));
}

namespace detail {

template <typename Msg>
void check_party_set(const SchemeParams& params, std::span<const Msg> msgs) {
  std::set<std::uint32_t> seen;
  for (const auto& m : msgs) {
    THAG_REQUIRE(m.party >= 1 && m.party <= params.parties, Errc::kInvalidArgument,
                 "party index " + std::to_string(m.party) + " out of range");
    THAG_REQUIRE(seen.insert(m.party).second, Errc::kDuplicateIndex,
                 "party " + std::to_string(m.party) + " appears twice");
  }
  THAG_REQUIRE(msgs.size() == params.parties, Errc::kMissingShare,
               "expected " + std::to_string(params.parties) + " shares, got " +
                   std::to_string(msgs.size()));
}

}  // namespace detail

inline CollectivePublicKey combine_pk(const SchemeParams& params, std::span<const PkShare> shares,
                                      const Crs& crs) {
  detail::check_party_set(params, shares);
  RingElement p0 = RingElement::zero(params.ring);
  for (const auto& s : shares) p0 += s.p0;
  return CollectivePublicKey{std::move(p0), crs.p1};
}

inline SmudgeParams smudge_bound(long lambda, const Rational& b_ct) {
  THAG_REQUIRE(lambda >= 0, Errc::kInvalidArgument, "lambda must be non-negative");
  THAG_REQUIRE(sgn(b_ct) >= 0, Errc::kInvalidArgument, "b_ct must be non-negative");
  return SmudgeParams{lambda, b_ct, Rational(pow2(half_lambda_ceil(lambda))) * b_ct};
}

// Smudging sized from the planner's worst-case aggregate bound for params.
inline SmudgeParams smudge_for(const SchemeParams& params) {
  return smudge_bound(params.lambda, params.bounds.b_ct);
}

inline PartialDecryption partial_decrypt_with(const SchemeParams& params, const SecretShare& share,
                                              const Ciphertext& ct, const BigCoeffs& e_smg) {
  RingElement h = ring_mul(ct.c1, share.sk).to_coeff();
  h += RingElement::from_big(params.ring, e_smg);
  return PartialDecryption{share.party, std::move(h)};
}

inline PartialDecryption partial_decrypt(const SchemeParams& params, const SecretShare& share,
                                         const Ciphertext& ct, const SmudgeParams& smudge,
                                         Rng& rng) {
  const Rational wrap = ratio(params.q(), 2);
  const Rational total =
      smudge.b_ct + Rational(BigInt(static_cast<unsigned long>(params.parties))) * smudge.b_smg;
  THAG_REQUIRE(total < wrap, Errc::kBoundTooLargeForQ,
               "aggregate smudging would wrap modulo q; planner and parameters disagree");
  return partial_decrypt_with(params, share, ct,
                              sample_smudging(params.ring, smudge.integer_bound(), rng));
}

// Centered d = [c0 + sum h_i]_q.
inline BigCoeffs combine_decrypt(const SchemeParams& params, const Ciphertext& ct,
                                 std::span<const PartialDecryption> partials) {
  detail::check_party_set(params, partials);
  RingElement d = ct.c0.as_coeff();
  for (const auto& p : partials) d += p.h;
  return crt_lift(d);
}

inline BfvPlaintext finalize_bfv(const SchemeParams& params, const BigCoeffs& d) {
  THAG_REQUIRE(params.scheme == Scheme::kBfv, Errc::kInvalidArgument, "not a BFV parameter set");
  return scale_and_round_bfv(params, d);
}

inline CkksDecoded finalize_ckks(const SchemeParams& params, const BigCoeffs& d) {
  THAG_REQUIRE(params.scheme == Scheme::kCkks, Errc::kInvalidArgument, "not a CKKS parameter set");
  CkksDecoded out;
  out.values = scale_down_ckks(params, d);
  out.delta = params.delta;
  out.error_bound = params.epsilon();
  return out;
}

}  // namespace thag
