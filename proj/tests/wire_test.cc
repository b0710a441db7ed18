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

#include "gtest/gtest.h"
#include "thag/wire.hpp"

namespace thag {
namespace {

SchemeParams small_params(Scheme scheme, long q_bits = 70) {
  SchemeConfig cfg;
  cfg.scheme = scheme;
  cfg.n = 16;
  cfg.q_bits = q_bits;
  cfg.t = 17;
  cfg.parties = 2;
  return setup(cfg);
}

Ciphertext sample_ct(const SchemeParams& p, std::uint64_t seed) {
  Rng rng = Rng::from_seed(seed);
  SecretKey sk = seckeygen(p, rng);
  PublicKey pk = pubkeygen(p, sk, rng);
  if (p.scheme == Scheme::kBfv) return encrypt(p, pk, BfvPlaintext{{1, -2, 3}}, rng);
  return encrypt(p, pk, CkksPlaintext{{0.25, -0.5}}, rng);
}

TEST(WireTest, CiphertextRoundTrip) {
  for (Scheme s : {Scheme::kBfv, Scheme::kCkks}) {
    SchemeParams p = small_params(s);
    Ciphertext ct = sample_ct(p, 1);
    ct.adds_consumed = 7;
    wire::Bytes b = wire::encode(ct);
    EXPECT_EQ(b.size(), wire::ciphertext_size(*p.ring));
    Ciphertext back = wire::decode_ciphertext(b, p);
    EXPECT_EQ(back.c0, ct.c0);
    EXPECT_EQ(back.c1, ct.c1);
    EXPECT_EQ(back.adds_consumed, 7u);
    EXPECT_EQ(back.scheme, s);
    EXPECT_EQ(wire::encode(back), b);
  }
}

TEST(WireTest, CiphertextLayout) {
  SchemeParams p = small_params(Scheme::kBfv);
  Ciphertext ct = sample_ct(p, 2);
  ct.adds_consumed = 0x01020304;
  wire::Bytes b = wire::encode(ct);
  const std::size_t k = p.ring->limbs();
  ASSERT_EQ(k, 2u);
  EXPECT_EQ(std::string(b.begin(), b.begin() + 4), "THAG");
  EXPECT_EQ(b[4], 1);
  EXPECT_EQ(b[5], 0);
  EXPECT_EQ(b[6], 1);  // BFV
  EXPECT_EQ(b[7], 16);
  EXPECT_EQ(b[8] | b[9] | b[10], 0);
  EXPECT_EQ(b[11], k);
  std::uint64_t p0 = 0;
  for (int i = 0; i < 8; ++i) p0 |= static_cast<std::uint64_t>(b[12 + i]) << (8 * i);
  EXPECT_EQ(p0, p.ring->primes()[0]);
  // First residue of c0 limb 1 sits after limb 0's 16 coefficients.
  const std::size_t body = 12 + 8 * k;
  std::uint64_t r = 0;
  for (int i = 0; i < 8; ++i) r |= static_cast<std::uint64_t>(b[body + 16 * 8 + i]) << (8 * i);
  EXPECT_EQ(r, ct.c0.as_coeff().limb(1)[0]);
  EXPECT_EQ(b[b.size() - 4], 0x04);
  EXPECT_EQ(b[b.size() - 1], 0x01);
}

TEST(WireTest, CiphertextRejectsCorruption) {
  SchemeParams p = small_params(Scheme::kBfv);
  wire::Bytes b = wire::encode(sample_ct(p, 3));
  auto expect_code = [&](wire::Bytes bad, const SchemeParams& pp, Errc code) {
    try {
      wire::decode_ciphertext(bad, pp);
      FAIL() << errc_name(code);
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), code);
    }
  };
  wire::Bytes bad = b;
  bad[0] = 'X';
  expect_code(bad, p, Errc::kFormat);
  bad = b;
  bad[4] = 2;
  expect_code(bad, p, Errc::kFormat);
  bad = b;
  bad.pop_back();
  expect_code(bad, p, Errc::kFormat);
  bad = b;
  bad.push_back(0);
  expect_code(bad, p, Errc::kFormat);
  bad = b;
  for (int i = 0; i < 8; ++i) bad[12 + 8 * 2 + i] = 0xff;  // residue >= p
  expect_code(bad, p, Errc::kFormat);
  expect_code(b, small_params(Scheme::kCkks), Errc::kParamsMismatch);
  expect_code(b, small_params(Scheme::kBfv, 100), Errc::kParamsMismatch);
}

TEST(WireTest, ShareMessagesRoundTrip) {
  SchemeParams p = small_params(Scheme::kBfv);
  Rng rng = Rng::from_seed(4);
  Crs crs = crs_expand(CrsSeed{}, p);
  SecretShare s = gen_share(p, 2, rng);
  PkShare pk = pk_share(p, s, crs, rng);
  wire::Bytes b = wire::encode(pk);
  EXPECT_EQ(b.size(), wire::share_message_size(*p.ring));
  EXPECT_EQ(b[6], 0x10);
  EXPECT_EQ(b[7], 2);
  EXPECT_EQ(b[8], 0);
  PkShare back = wire::decode_pk_share(b, p.ring);
  EXPECT_EQ(back.party, 2u);
  EXPECT_EQ(back.p0, pk.p0);
  EXPECT_THROW(wire::decode_partial(b, p.ring), Error);

  PartialDecryption pd = partial_decrypt(p, s, sample_ct(p, 5), smudge_for(p), rng);
  PartialDecryption pback = wire::decode_partial(wire::encode(pd), p.ring);
  EXPECT_EQ(pback.party, 2u);
  EXPECT_EQ(pback.h, pd.h);
}

TEST(WireTest, NttDomainIsWrittenAsCoefficients) {
  SchemeParams p = small_params(Scheme::kBfv);
  Ciphertext ct = sample_ct(p, 6);
  Ciphertext ntt = ct;
  ntt.c0 = ct.c0.as_ntt();
  EXPECT_EQ(wire::encode(ntt), wire::encode(ct));
}

}  // namespace
}  // namespace thag
