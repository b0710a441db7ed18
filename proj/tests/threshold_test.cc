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

#include <algorithm>
#include <cmath>

#include "gtest/gtest.h"
#include "oracles.hpp"
#include "thag/threshold.hpp"

namespace thag {
namespace {

SchemeParams mp_params(Scheme scheme, std::uint64_t parties, long lambda, long q_bits = 60) {
  SchemeConfig cfg;
  cfg.scheme = scheme;
  cfg.n = 1024;
  cfg.q_bits = q_bits;
  cfg.t = 257;
  cfg.eps_inv = 1 << 10;
  cfg.parties = parties;
  cfg.lambda = lambda;
  return setup(cfg);
}

CrsSeed seed_of(std::uint8_t b) {
  CrsSeed s{};
  s.fill(b);
  return s;
}

struct Committee {
  Crs crs;
  std::vector<SecretShare> shares;
  std::vector<PkShare> pk_shares;
  CollectivePublicKey cpk;
  SecretKey ideal;
};

Committee make_committee(const SchemeParams& p, std::uint64_t seed) {
  Committee c;
  Rng root = Rng::from_seed(seed);
  c.crs = crs_expand(seed_of(static_cast<std::uint8_t>(seed)), p);
  c.ideal.s = RingElement::zero(p.ring);
  for (std::uint32_t i = 1; i <= p.parties; ++i) {
    Rng r = root.derive("party", i);
    c.shares.push_back(gen_share(p, i, r));
    c.pk_shares.push_back(pk_share(p, c.shares.back(), c.crs, r));
    c.ideal.s += c.shares.back().sk;
  }
  c.cpk = combine_pk(p, c.pk_shares, c.crs);
  return c;
}

std::vector<PartialDecryption> open_all(const SchemeParams& p, const Committee& c,
                                        const Ciphertext& ct, std::uint64_t seed) {
  Rng root = Rng::from_seed(seed);
  std::vector<PartialDecryption> out;
  for (const auto& s : c.shares) {
    Rng r = root.derive("smudge", s.party);
    out.push_back(partial_decrypt(p, s, ct, smudge_for(p), r));
  }
  return out;
}

TEST(CrsTest, DeterministicAndSeedSensitive) {
  SchemeParams p = mp_params(Scheme::kBfv, 2, 16);
  EXPECT_EQ(crs_expand(seed_of(7), p).p1, crs_expand(seed_of(7), p).p1);
  EXPECT_FALSE(crs_expand(seed_of(7), p).p1 == crs_expand(seed_of(8), p).p1);
}

TEST(CrsTest, CoefficientsLookUniform) {
  SchemeParams p = mp_params(Scheme::kBfv, 2, 16);
  // Centered lift of a uniform element: mean near 0, E|x| near q/4.
  const double q = std::ldexp(1.0, static_cast<int>(p.ring->log2_q()));
  double sum = 0, abs_sum = 0;
  std::size_t count = 0;
  for (std::uint8_t s = 0; s < 8; ++s) {
    BigCoeffs c = crt_lift(crs_expand(seed_of(s), p).p1);
    for (const auto& v : c.values) {
      const double x = v.get_d() / q;
      sum += x;
      abs_sum += std::fabs(x);
      ++count;
    }
  }
  // q here is 2^bits, the true modulus is slightly below it.
  EXPECT_NEAR(sum / count, 0.0, 0.02);
  EXPECT_NEAR(abs_sum / count, 0.25, 0.02);
}

TEST(PkShareTest, ZeroNoiseCancels) {
  SchemeParams p = mp_params(Scheme::kBfv, 2, 16);
  Crs crs = crs_expand(seed_of(1), p);
  Rng rng = Rng::from_seed(1);
  SecretShare s = gen_share(p, 1, rng);
  PkShare pk = pk_share_with(s, crs, RingElement::zero(p.ring));
  RingElement x = pk.p0 + crs.p1 * s.sk;
  EXPECT_EQ(inf_norm(crt_lift(x)), 0);
}

TEST(PkShareTest, CollectiveKeyNoiseWithinLB) {
  for (std::uint64_t L : {2u, 4u, 8u}) {
    SchemeParams p = mp_params(Scheme::kBfv, L, 16);
    Committee c = make_committee(p, 11);
    RingElement e = c.cpk.p0 + c.cpk.p1 * c.ideal.s;
    const BigInt norm = inf_norm(crt_lift(e));
    EXPECT_LE(Rational(norm), Rational(BigInt(static_cast<unsigned long>(L))) * p.noise.bound);
    EXPECT_GT(norm, 0);
  }
}

TEST(PkShareTest, CombineRejectsBadPartySets) {
  SchemeParams p = mp_params(Scheme::kBfv, 3, 16);
  Committee c = make_committee(p, 12);
  auto expect_code = [&](std::vector<PkShare> v, Errc code) {
    try {
      combine_pk(p, v, c.crs);
      FAIL() << errc_name(code);
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), code);
    }
  };
  expect_code({c.pk_shares[0], c.pk_shares[1]}, Errc::kMissingShare);
  expect_code({c.pk_shares[0], c.pk_shares[1], c.pk_shares[1]}, Errc::kDuplicateIndex);
  PkShare bogus = c.pk_shares[2];
  bogus.party = 4;
  expect_code({c.pk_shares[0], c.pk_shares[1], bogus}, Errc::kInvalidArgument);
  bogus.party = 0;
  expect_code({c.pk_shares[0], c.pk_shares[1], bogus}, Errc::kInvalidArgument);
}

TEST(PkShareTest, CombineIsOrderInvariant) {
  SchemeParams p = mp_params(Scheme::kBfv, 4, 16);
  Committee c = make_committee(p, 13);
  std::vector<PkShare> v = c.pk_shares;
  std::reverse(v.begin(), v.end());
  EXPECT_EQ(combine_pk(p, v, c.crs).p0, c.cpk.p0);
  std::swap(v[0], v[2]);
  EXPECT_EQ(combine_pk(p, v, c.crs).p0, c.cpk.p0);
}

TEST(SmudgeTest, BoundExamples) {
  const Rational b(1000);
  EXPECT_EQ(smudge_bound(0, b).b_smg, b);
  EXPECT_EQ(smudge_bound(32, b).b_smg, 65536 * b);
  EXPECT_EQ(smudge_bound(31, b).b_smg, 65536 * b);
  SmudgeParams s = smudge_bound(128, Rational(161061580));
  EXPECT_NEAR(s.b_smg.get_d(), 2.971e27, 0.001e27);
  EXPECT_THROW(smudge_bound(-1, b), Error);
}

TEST(PartialDecryptTest, RejectsSmudgingThatWouldWrap) {
  SchemeParams p = mp_params(Scheme::kBfv, 2, 16);
  Committee c = make_committee(p, 14);
  Rng rng = Rng::from_seed(14);
  Ciphertext ct = encrypt(p, c.cpk.as_public_key(), BfvPlaintext{{1}}, rng);
  try {
    partial_decrypt(p, c.shares[0], ct, smudge_bound(128, p.bounds.b_ct), rng);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kBoundTooLargeForQ);
  }
}

TEST(PartialDecryptTest, SmudgingStaysWithinBound) {
  SchemeParams p = mp_params(Scheme::kBfv, 2, 16);
  Committee c = make_committee(p, 15);
  Rng rng = Rng::from_seed(15);
  Ciphertext ct = encrypt(p, c.cpk.as_public_key(), BfvPlaintext{{3}}, rng);
  const BigInt bound = smudge_for(p).integer_bound();
  auto parts = open_all(p, c, ct, 15);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    BigCoeffs e = crt_lift(parts[i].h - ct.c1 * c.shares[i].sk);
    EXPECT_LE(inf_norm(e), bound);
    // Uniform on [-b, b]: the max over 1024 draws is close to b.
    EXPECT_GT(Rational(inf_norm(e)), Rational(bound) * Rational(9, 10));
  }
}

TEST(ThresholdDecryptTest, IdealKeyEquivalence) {
  SchemeParams p = mp_params(Scheme::kBfv, 4, 16);
  Committee c = make_committee(p, 16);
  Rng rng = Rng::from_seed(16);
  Ciphertext ct = encrypt(p, c.cpk.as_public_key(), BfvPlaintext{{5, -7, 128}}, rng);
  std::vector<BigCoeffs> smudges;
  std::vector<PartialDecryption> parts;
  BigCoeffs total;
  total.values.assign(p.n(), 0);
  for (const auto& s : c.shares) {
    smudges.push_back(sample_smudging(p.ring, smudge_for(p).integer_bound(), rng));
    parts.push_back(partial_decrypt_with(p, s, ct, smudges.back()));
    total = total + smudges.back();
  }
  BigCoeffs combined = combine_decrypt(p, ct, parts);
  BigCoeffs ideal = decrypt_raw(c.ideal, ct);
  BigCoeffs diff = combined - ideal;
  for (std::size_t i = 0; i < p.n(); ++i) ASSERT_EQ(diff.values[i], total.values[i]);

  // Zero smudging reproduces the ideal-key decryption exactly.
  BigCoeffs zero;
  zero.values.assign(p.n(), 0);
  parts.clear();
  for (const auto& s : c.shares) parts.push_back(partial_decrypt_with(p, s, ct, zero));
  EXPECT_EQ(combine_decrypt(p, ct, parts).values, ideal.values);
}

TEST(ThresholdDecryptTest, SinglePartyCollapsesToSingleKey) {
  SchemeParams p = mp_params(Scheme::kBfv, 1, 0);
  Committee c = make_committee(p, 17);
  Rng rng = Rng::from_seed(17);
  BfvPlaintext pt{{1, 2, 3, -4}};
  Ciphertext ct = encrypt(p, c.cpk.as_public_key(), pt, rng);
  auto parts = open_all(p, c, ct, 17);
  BfvPlaintext got = finalize_bfv(p, combine_decrypt(p, ct, parts));
  BfvPlaintext direct = dec_bfv(p, c.ideal, ct);
  EXPECT_EQ(got.values, direct.values);
  EXPECT_EQ(std::vector<std::int64_t>(got.values.begin(), got.values.begin() + 4), pt.values);
}

TEST(ThresholdDecryptTest, CombineRejectsMissingPartial) {
  SchemeParams p = mp_params(Scheme::kBfv, 3, 16);
  Committee c = make_committee(p, 18);
  Rng rng = Rng::from_seed(18);
  Ciphertext ct = encrypt(p, c.cpk.as_public_key(), BfvPlaintext{{1}}, rng);
  auto parts = open_all(p, c, ct, 18);
  parts.pop_back();
  try {
    combine_decrypt(p, ct, parts);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kMissingShare);
  }
}

TEST(ThresholdDecryptTest, EndToEndBfvSum) {
  for (std::uint64_t L : {2u, 4u}) {
    SchemeParams p = mp_params(Scheme::kBfv, L, 16);
    Committee c = make_committee(p, 19 + L);
    Rng rng = Rng::from_seed(19 + L);
    std::vector<std::int64_t> expect(p.n(), 0);
    Ciphertext acc;
    for (std::uint64_t i = 0; i < L; ++i) {
      BfvPlaintext pt;
      pt.values.resize(p.n());
      for (std::size_t j = 0; j < p.n(); ++j) {
        pt.values[j] = static_cast<std::int64_t>(rng.uniform_below(64));
        expect[j] += pt.values[j];
      }
      Ciphertext ct = encrypt(p, c.cpk.as_public_key(), pt, rng);
      acc = i == 0 ? ct : add(p, acc, ct);
    }
    BigCoeffs d = combine_decrypt(p, acc, open_all(p, c, acc, 99));
    BfvPlaintext got = finalize_bfv(p, d);
    for (std::size_t j = 0; j < p.n(); ++j) {
      std::int64_t e = expect[j] % 257;
      if (2 * e > 257) e -= 257;
      ASSERT_EQ(got.values[j], e) << "L=" << L << " j=" << j;
    }
    EXPECT_THROW(finalize_ckks(p, d), Error);
  }
}

TEST(ThresholdDecryptTest, EndToEndCkksWithinMargin) {
  SchemeParams p = mp_params(Scheme::kCkks, 4, 16);
  Committee c = make_committee(p, 30);
  Rng rng = Rng::from_seed(30);
  std::vector<double> expect(p.n(), 0);
  Ciphertext acc;
  for (std::uint64_t i = 0; i < p.parties; ++i) {
    CkksPlaintext pt;
    pt.values.resize(p.n());
    for (std::size_t j = 0; j < p.n(); ++j) {
      pt.values[j] = (static_cast<double>(rng.uniform_below(2001)) - 1000) / 1000.0;
      expect[j] += pt.values[j];
    }
    Ciphertext ct = encrypt(p, c.cpk.as_public_key(), pt, rng);
    acc = i == 0 ? ct : add(p, acc, ct);
  }
  CkksDecoded out = finalize_ckks(p, combine_decrypt(p, acc, open_all(p, c, acc, 31)));
  const double margin = out.error_bound.get_d();
  EXPECT_LE(margin, 1.0 / 1024);
  // Encoding rounds each input by at most 1/(2 delta).
  const double slack = p.parties * 0.5 / p.delta.get_d();
  for (std::size_t j = 0; j < p.n(); ++j)
    ASSERT_LE(std::fabs(out.values[j] - expect[j]), margin + slack) << j;
}

}  // namespace
}  // namespace thag
