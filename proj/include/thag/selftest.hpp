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

// Small-n property checks over every module, reported per invariant.
// Failures are report content, never exceptions.

#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "thag/harness.hpp"
#include "thag/wire.hpp"

namespace thag {

enum class CheckStatus { kPass, kFail, kExpectedReject };

inline const char* status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::kPass: return "pass";
    case CheckStatus::kFail: return "FAIL";
    case CheckStatus::kExpectedReject: return "expected-reject";
  }
  return "?";
}

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::kFail;
  std::string detail;
};

struct SelftestReport {
  std::vector<CheckResult> checks;

  bool ok() const {
    for (const auto& c : checks)
      if (c.status == CheckStatus::kFail) return false;
    return true;
  }

  std::string to_text() const {
    std::ostringstream os;
    for (const auto& c : checks) {
      os << status_name(c.status) << "  " << c.name;
      if (!c.detail.empty()) os << "  (" << c.detail << ")";
      os << "\n";
    }
    std::size_t failed = 0;
    for (const auto& c : checks) failed += c.status == CheckStatus::kFail;
    os << (failed ? "selftest: " + std::to_string(failed) + " failed" : std::string("selftest: ok"))
       << "\n";
    return os.str();
  }
};

namespace selftest {

// Reference product over the integers, reduced centered mod q.
inline std::vector<BigInt> big_negacyclic(const std::vector<BigInt>& a,
                                          const std::vector<BigInt>& b, const BigInt& q) {
  const std::size_t n = a.size();
  std::vector<BigInt> out(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i + j < n) out[i + j] += a[i] * b[j];
      else out[i + j - n] -= a[i] * b[j];
    }
  for (auto& v : out) {
    mpz_fdiv_r(v.get_mpz_t(), v.get_mpz_t(), q.get_mpz_t());
    if (2 * v > q) v -= q;
  }
  return out;
}

inline std::string ntt_oracle() {
  Rng rng = Rng::from_seed(101);
  for (std::size_t n : {4, 8, 16}) {
    auto ring = RingParams::create(n, ntt_primes_below(50, n, 2, {}));
    for (int k = 0; k < 200; ++k) {
      RingElement a = sample_uniform(ring, rng);
      RingElement b = sample_uniform(ring, rng);
      const RingElement fast = (a * b).to_coeff();
      if (!(fast == ring_mul_schoolbook(a, b))) return "NTT differs from schoolbook at n=" + std::to_string(n);
      if (crt_lift(fast).values != big_negacyclic(crt_lift(a).values, crt_lift(b).values, ring->q()))
        return "NTT differs from integer convolution at n=" + std::to_string(n);
    }
  }
  return {};
}

inline std::string crt_roundtrip() {
  Rng rng = Rng::from_seed(102);
  auto ring = RingParams::create(16, ntt_primes_below(60, 16, 3, {}));
  for (int k = 0; k < 100; ++k) {
    BigCoeffs c = crt_lift(sample_uniform(ring, rng));
    if (!(crt_lift(RingElement::from_big(ring, c)).values == c.values)) return "lift/reduce mismatch";
  }
  return {};
}

inline SchemeParams bound_example_params() {
  SchemeConfig cfg;
  cfg.scheme = Scheme::kBfv;
  cfg.n = 1024;
  cfg.q_bits = 30;
  cfg.t = 257;
  return setup(cfg);
}

inline std::string fresh_noise() {
  SchemeParams p = bound_example_params();
  Rng rng = Rng::from_seed(103);
  SecretKey sk = seckeygen(p, rng);
  PublicKey pk = pubkeygen(p, sk, rng);
  const BigInt limit = floor_of(p.bounds.b_fresh);
  for (int k = 0; k < 100; ++k) {
    BfvPlaintext pt;
    pt.values.resize(p.n());
    for (auto& v : pt.values) v = static_cast<std::int64_t>(rng.uniform_below(257)) - 128;
    Ciphertext ct = encrypt(p, pk, pt, rng);
    RingElement m = RingElement::from_signed(p.ring, pt.values);
    m.mul_scalar(p.delta);
    const BigInt noise = inf_norm(decrypt_raw(sk, ct) - crt_lift(m));
    if (noise > limit) return "noise " + noise.get_str() + " above " + limit.get_str();
    if (dec_bfv(p, sk, ct).values != pt.values) return "round trip failed";
  }
  return {};
}

inline std::string additive_capacity() {
  SchemeParams p = bound_example_params();
  Rng rng = Rng::from_seed(104);
  SecretKey sk = seckeygen(p, rng);
  PublicKey pk = pubkeygen(p, sk, rng);
  const std::uint64_t k = std::min<std::uint64_t>(p.kappa, 30);
  std::vector<std::int64_t> expect(p.n(), 0);
  Ciphertext acc;
  for (std::uint64_t i = 0; i <= k; ++i) {
    BfvPlaintext pt;
    pt.values.resize(p.n());
    for (std::size_t j = 0; j < p.n(); ++j) {
      pt.values[j] = static_cast<std::int64_t>(rng.uniform_below(257)) - 128;
      expect[j] = ((expect[j] + pt.values[j]) % 257 + 257) % 257;
      if (2 * expect[j] > 257) expect[j] -= 257;
    }
    Ciphertext ct = encrypt(p, pk, pt, rng);
    acc = i == 0 ? ct : add(p, acc, ct);
  }
  if (dec_bfv(p, sk, acc).values != expect) return "sum of " + std::to_string(k + 1) + " wrong";
  return {};
}

inline std::string ckks_margin() {
  SchemeConfig cfg;
  cfg.scheme = Scheme::kCkks;
  cfg.n = 1024;
  cfg.q_bits = 60;
  cfg.eps_inv = 1 << 12;
  SchemeParams p = setup(cfg);
  Rng rng = Rng::from_seed(105);
  SecretKey sk = seckeygen(p, rng);
  PublicKey pk = pubkeygen(p, sk, rng);
  const double bound = Rational(p.bounds.b_fresh / Rational(p.delta)).get_d();
  for (int k = 0; k < 20; ++k) {
    CkksPlaintext pt;
    pt.values.resize(p.n());
    for (auto& v : pt.values) v = 2 * rng.uniform_open01() - 1;
    CkksDecoded d = dec_ckks(p, sk, encrypt(p, pk, pt, rng));
    for (std::size_t j = 0; j < p.n(); ++j)
      if (std::fabs(d.values[j] - pt.values[j]) >= bound + 0.5 / p.delta.get_d())
        return "coefficient error above (2n+1)B/delta";
  }
  return {};
}

inline std::string threshold_equivalence() {
  SchemeConfig cfg;
  cfg.scheme = Scheme::kBfv;
  cfg.n = 1024;
  cfg.q_bits = 60;
  cfg.t = 257;
  cfg.parties = 3;
  cfg.lambda = 16;
  SchemeParams p = setup(cfg);
  Rng rng = Rng::from_seed(106);
  Crs crs = crs_expand(CrsSeed{}, p);
  std::vector<SecretShare> shares;
  std::vector<PkShare> pks;
  SecretKey ideal{RingElement::zero(p.ring)};
  for (std::uint32_t i = 1; i <= 3; ++i) {
    shares.push_back(gen_share(p, i, rng));
    pks.push_back(pk_share(p, shares.back(), crs, rng));
    ideal.s += shares.back().sk;
  }
  CollectivePublicKey cpk = combine_pk(p, pks, crs);
  Ciphertext ct = encrypt(p, cpk.as_public_key(), BfvPlaintext{{1, -2, 3}}, rng);
  BigCoeffs zero;
  zero.values.assign(p.n(), 0);
  std::vector<PartialDecryption> parts;
  for (const auto& s : shares) parts.push_back(partial_decrypt_with(p, s, ct, zero));
  if (combine_decrypt(p, ct, parts).values != decrypt_raw(ideal, ct).values)
    return "combined decryption differs from ideal key";
  return {};
}

inline std::string closed_form_winner() {
  Rng rng = Rng::from_seed(107);
  for (int k = 0; k < 500; ++k) {
    const BigInt t = 2 + rng.uniform_below(BigInt(pow2(80)));
    const Rational eps_inv(rng.uniform_below(BigInt(pow2(80))) + 1);
    const Rational b(rng.uniform_below(BigInt(pow2(90))) + 1, 3);
    const bool closed_form = winner(t, eps_inv, b) == Winner::kMckksSmallerQ;
    const bool direct = qmin_mckks_threshold(b * eps_inv, 1, b) < qmin_mbfv_threshold(t, b);
    if (closed_form != direct) return "closed form disagrees with direct comparison";
  }
  return {};
}

inline std::string wire_roundtrip() {
  SchemeConfig cfg;
  cfg.scheme = Scheme::kBfv;
  cfg.n = 64;
  cfg.q_bits = 90;
  cfg.t = 17;
  SchemeParams p = setup(cfg);
  Rng rng = Rng::from_seed(108);
  SecretKey sk = seckeygen(p, rng);
  Ciphertext ct = encrypt(p, pubkeygen(p, sk, rng), BfvPlaintext{{5}}, rng);
  const wire::Bytes b = wire::encode(ct);
  const Ciphertext back = wire::decode_ciphertext(b, p);
  if (!(back.c0 == ct.c0 && back.c1 == ct.c1) || wire::encode(back) != b) return "mismatch";
  return {};
}

inline std::string protocol(Scheme scheme) {
  ProtocolConfig c;
  c.scheme = scheme;
  c.model_size = 3000;
  c.plan.parties = 3;
  Transcript a = run_protocol(c);
  if (!a.ok()) return "opened aggregate disagrees with cleartext oracle";
  if (run_protocol(c).to_text() != a.to_text()) return "transcript not reproducible";
  return {};
}

}  // namespace selftest

inline SelftestReport run_selftest() {
  SelftestReport rep;
  auto check = [&](const std::string& name, const std::function<std::string()>& fn) {
    CheckResult r{name, CheckStatus::kFail, {}};
    try {
      r.detail = fn();
      if (r.detail.empty()) r.status = CheckStatus::kPass;
    } catch (const std::exception& e) {
      r.detail = std::string("unexpected error: ") + e.what();
    }
    rep.checks.push_back(std::move(r));
  };
  check("ring: NTT product equals schoolbook and integer convolution", selftest::ntt_oracle);
  check("ring: CRT lift inverts residue reduction", selftest::crt_roundtrip);
  check("bfv: fresh noise within (2n+1)B and decryption exact", selftest::fresh_noise);
  check("bfv: sums within capacity decrypt exactly", selftest::additive_capacity);
  check("ckks: fresh error within (2n+1)B/delta", selftest::ckks_margin);
  check("threshold: shares combine to the ideal key", selftest::threshold_equivalence);
  check("planner: closed form equals direct modulus comparison", selftest::closed_form_winner);
  check("wire: ciphertext encoding round trips", selftest::wire_roundtrip);
  check("protocol: MBFV average exact, transcript reproducible",
        [] { return selftest::protocol(Scheme::kBfv); });
  check("protocol: MCKKS average within epsilon, transcript reproducible",
        [] { return selftest::protocol(Scheme::kCkks); });

  // A parameter set that violates the fresh-noise condition must be refused.
  CheckResult planted{"planted: t = 2^20 with a 30-bit q is refused", CheckStatus::kFail, {}};
  try {
    SchemeConfig cfg;
    cfg.scheme = Scheme::kBfv;
    cfg.n = 1024;
    cfg.q_bits = 30;
    cfg.t = pow2(20);
    setup(cfg);
    planted.detail = "setup accepted it";
  } catch (const Error& e) {
    if (e.code() == Errc::kBoundViolation) {
      planted.status = CheckStatus::kExpectedReject;
      planted.detail = e.what();
    } else {
      planted.detail = std::string("wrong error: ") + e.what();
    }
  }
  rep.checks.push_back(std::move(planted));
  return rep;
}

}  // namespace thag
