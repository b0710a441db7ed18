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

// Single-key additive BFV and CKKS over R_q without slot packing.
//
//   SecKeyGen:  s <- R_3
//   PubKeyGen:  p1 <- R_q, e <- chi, pk = (-s p1 + e, p1)
//   Enc:        u <- R_3, e0, e1 <- chi, ct = (delta m + u p0 + e0, u p1 + e1)
//   Add:        component-wise
//   Dec (BFV):  m = [round((t/q) [c0 + c1 s]_q)]_t
//   Dec (CKKS): m ~ [c0 + c1 s]_q / delta

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "thag/bigint.hpp"
#include "thag/bounds.hpp"
#include "thag/primes.hpp"
#include "thag/ring.hpp"
#include "thag/rng.hpp"
#include "thag/sampling.hpp"

namespace thag {

enum class Scheme : std::uint8_t { kBfv = 1, kCkks = 2 };

inline const char* scheme_name(Scheme s) { return s == Scheme::kBfv ? "BFV" : "CKKS"; }

// Raw, unvalidated scheme configuration.
struct SchemeConfig {
  Scheme scheme = Scheme::kBfv;
  std::size_t n = 1024;
  std::vector<u64> primes;  // explicit chain; otherwise chosen from q_bits
  long q_bits = 0;
  BigInt t = 0;  // BFV plaintext modulus
  Rational sigma = Rational(16, 5);
  std::optional<Rational> noise_bound;  // defaults to 6 sigma
  Rational eps_inv = 1;                 // CKKS target inverse error margin
  std::optional<BigInt> delta;          // CKKS scale override
  Rational b_m = 1;                     // CKKS plaintext bound
  std::uint64_t parties = 1;
  long lambda = 0;
  std::optional<std::uint64_t> kappa;  // requested addition capacity
};

struct SchemeParams {
  Scheme scheme = Scheme::kBfv;
  RingParamsPtr ring;
  BigInt t;      // BFV only
  BigInt delta;  // BFV: floor(q/t); CKKS: scale
  Rational eps_inv;
  Rational b_m = 1;
  NoiseSpec noise;
  std::uint64_t kappa = 0;  // homomorphic additions the bounds guarantee
  std::uint64_t parties = 1;
  long lambda = 0;
  MpBounds bounds;

  std::size_t n() const { return ring->n(); }
  const BigInt& q() const { return ring->q(); }
  bool multiparty() const { return parties > 1 || lambda > 0; }
  // Realized CKKS error margin b_ct_mp / delta.
  Rational epsilon() const { return bounds.b_ct_mp / Rational(delta); }
};

namespace detail {

inline std::string bits_short(const Rational& lhs, const Rational& rhs) {
  if (sgn(rhs) <= 0) return "right-hand side is non-positive";
  const double deficit = log2_of(lhs) - log2_of(rhs);
  return "short by " + std::to_string(deficit < 0 ? 0.0 : deficit) + " bits";
}

// Largest k such that (k + 1) * per_ct < rhs, capped.
inline std::uint64_t additions_within(const Rational& per_ct, const Rational& rhs) {
  constexpr std::uint64_t kCap = 0xffffffffULL;
  if (sgn(per_ct) == 0) return kCap;
  const BigInt m = ceil_of(rhs / per_ct) - 1;  // max ciphertext count
  if (m <= 1) return 0;
  if (m - 1 > BigInt(static_cast<unsigned long>(kCap))) return kCap;
  return BigInt(m - 1).get_ui();
}

}  // namespace detail

inline SchemeParams setup(const SchemeConfig& cfg) {
  SchemeParams p;
  p.scheme = cfg.scheme;
  std::vector<u64> primes = cfg.primes;
  if (primes.empty()) {
    THAG_REQUIRE(cfg.q_bits > 0, Errc::kConfig, "either primes or q_bits must be given");
    primes = select_primes_for_bits(cfg.n, cfg.q_bits);
  }
  p.ring = RingParams::create(cfg.n, std::move(primes));
  p.noise = cfg.noise_bound ? NoiseSpec::make(cfg.sigma, *cfg.noise_bound)
                            : NoiseSpec::from_sigma(cfg.sigma);
  THAG_REQUIRE(cfg.parties >= 1, Errc::kConfig, "at least one party required");
  p.parties = cfg.parties;
  p.lambda = cfg.lambda;
  p.b_m = cfg.b_m;
  p.eps_inv = cfg.eps_inv;
  p.bounds = mp_bounds(cfg.n, cfg.parties, p.noise.bound, cfg.lambda);
  const Rational q(p.q());

  Rational rhs;
  if (cfg.scheme == Scheme::kBfv) {
    THAG_REQUIRE(cfg.t > 1, Errc::kConfig, "BFV needs a plaintext modulus t > 1");
    THAG_REQUIRE(p.q() > cfg.t, Errc::kBoundViolation, "q must exceed t");
    THAG_REQUIRE(cfg.t < pow2(62), Errc::kConfig, "t must be below 2^62");
    p.t = cfg.t;
    p.delta = p.q() / p.t;
    rhs = q / Rational(2 * p.t) - ratio(p.t, 2);
  } else {
    THAG_REQUIRE(sgn(cfg.b_m) > 0, Errc::kConfig, "b_m must be positive");
    p.delta = cfg.delta ? *cfg.delta : scale_from_eps(cfg.eps_inv, p.bounds.b_ct_mp);
    THAG_REQUIRE(p.delta >= 1, Errc::kConfig, "CKKS scale must be >= 1");
    rhs = q / 2 - Rational(p.delta) * cfg.b_m;
  }

  THAG_REQUIRE(p.bounds.b_fresh < rhs, Errc::kBoundViolation,
               std::string("fresh noise bound (2n+1)B does not fit the modulus: ") +
                   detail::bits_short(p.bounds.b_fresh, rhs));

  std::uint64_t kappa_max = 0;
  if (p.multiparty()) {
    THAG_REQUIRE(p.bounds.b_ct_mp < rhs, Errc::kBoundViolation,
                 std::string("multiparty noise bound does not fit the modulus: ") +
                     detail::bits_short(p.bounds.b_ct_mp, rhs));
    kappa_max = cfg.parties - 1;
  } else {
    kappa_max = detail::additions_within(p.bounds.b_fresh, rhs);
  }
  if (cfg.kappa) {
    THAG_REQUIRE(*cfg.kappa <= kappa_max, Errc::kBoundViolation,
                 "requested capacity " + std::to_string(*cfg.kappa) + " exceeds supported " +
                     std::to_string(kappa_max));
    p.kappa = *cfg.kappa;
  } else {
    p.kappa = kappa_max;
  }
  return p;
}

struct SecretKey {
  RingElement s;

  RingElement s_ntt() const { return s.as_ntt(); }
};

struct PublicKey {
  RingElement p0, p1;

  PublicKey as_ntt() const { return PublicKey{p0.as_ntt(), p1.as_ntt()}; }
};

struct BfvPlaintext {
  std::vector<std::int64_t> values;  // centered mod t
};

struct CkksPlaintext {
  std::vector<double> values;
};

struct CkksDecoded {
  std::vector<double> values;
  BigInt delta;
  Rational error_bound;  // per-coefficient residual estimate
};

struct Ciphertext {
  RingElement c0, c1;
  Scheme scheme = Scheme::kBfv;
  std::uint32_t adds_consumed = 0;
};

// Encryption randomness, exposed so tests can pin it.
struct EncryptionNoise {
  RingElement u, e0, e1;
};

inline SecretKey seckeygen(const SchemeParams& params, Rng& rng) {
  return SecretKey{sample_ternary(params.ring, rng)};
}

inline PublicKey pubkeygen_with(const SchemeParams& params, const SecretKey& sk,
                                const RingElement& p1, const RingElement& e) {
  (void)params;
  RingElement p0 = -(sk.s * p1);
  p0 += e;
  return PublicKey{std::move(p0), p1};
}

inline PublicKey pubkeygen(const SchemeParams& params, const SecretKey& sk, Rng& rng) {
  RingElement p1 = sample_uniform(params.ring, rng);
  RingElement e = sample_gaussian(params.ring, params.noise, rng);
  return pubkeygen_with(params, sk, p1, e);
}

// delta * m for a BFV message, after range checks.
inline RingElement encode_bfv(const SchemeParams& params, const BfvPlaintext& pt) {
  THAG_REQUIRE(params.scheme == Scheme::kBfv, Errc::kInvalidArgument, "not a BFV parameter set");
  THAG_REQUIRE(pt.values.size() <= params.n(), Errc::kPlaintextOutOfRange,
               "plaintext longer than ring degree");
  const std::int64_t t = params.t.get_si();
  for (auto v : pt.values) {
    THAG_REQUIRE(2 * static_cast<__int128>(v) <= t && 2 * static_cast<__int128>(v) > -t,
                 Errc::kPlaintextOutOfRange,
                 "BFV plaintext value " + std::to_string(v) + " outside (-t/2, t/2]");
  }
  RingElement m = RingElement::from_signed(params.ring, pt.values);
  m.mul_scalar(params.delta);
  return m;
}

namespace detail {

// round_half_up(x) for a finite double, exactly: x - floor(x) is representable.
inline double round_half_up_double(double x) {
  const double fl = std::floor(x);
  return x - fl >= 0.5 ? fl + 1 : fl;
}

// k when x = 2^k, otherwise -1.
inline long pow2_exponent(const BigInt& x) {
  if (sgn(x) <= 0) return -1;
  const long k = static_cast<long>(mpz_scan1(x.get_mpz_t(), 0));
  return bit_length(x) == k + 1 ? k : -1;
}

}  // namespace detail

// round(delta * v) for a CKKS message.
inline RingElement encode_ckks(const SchemeParams& params, const CkksPlaintext& pt) {
  THAG_REQUIRE(params.scheme == Scheme::kCkks, Errc::kInvalidArgument, "not a CKKS parameter set");
  THAG_REQUIRE(pt.values.size() <= params.n(), Errc::kPlaintextOutOfRange,
               "plaintext longer than ring degree");
  BigCoeffs c;
  c.values.resize(pt.values.size());
  const Rational delta(params.delta);
  const long k = detail::pow2_exponent(params.delta);
  for (std::size_t i = 0; i < pt.values.size(); ++i) {
    THAG_REQUIRE(std::isfinite(pt.values[i]), Errc::kPlaintextOutOfRange, "CKKS value not finite");
    const Rational v(pt.values[i]);
    THAG_REQUIRE(abs(v) <= params.b_m, Errc::kPlaintextOutOfRange,
                 "CKKS value exceeds plaintext bound b_m");
    if (k >= 0 && k < 900) {
      // Power-of-two scale: the product is exact in binary.
      c.values[i] = detail::round_half_up_double(std::ldexp(pt.values[i], static_cast<int>(k)));
    } else {
      c.values[i] = round_half_up(delta * v);
    }
  }
  return RingElement::from_big(params.ring, c);
}

inline Ciphertext encrypt_encoded_with(const SchemeParams& params, const PublicKey& pk,
                                       const RingElement& scaled_message,
                                       const EncryptionNoise& noise) {
  const RingElement u = noise.u.as_ntt();
  Ciphertext ct;
  ct.scheme = params.scheme;
  // pk may be held in either domain; callers encrypting in bulk keep it in
  // the NTT domain.
  ct.c0 = ring_mul(u, pk.p0).to_coeff();
  ct.c0 += scaled_message;
  ct.c0 += noise.e0;
  ct.c1 = ring_mul(u, pk.p1).to_coeff();
  ct.c1 += noise.e1;
  return ct;
}

inline EncryptionNoise sample_encryption_noise(const SchemeParams& params, Rng& rng) {
  EncryptionNoise z;
  z.u = sample_ternary(params.ring, rng);
  z.e0 = sample_gaussian(params.ring, params.noise, rng);
  z.e1 = sample_gaussian(params.ring, params.noise, rng);
  return z;
}

inline Ciphertext encrypt(const SchemeParams& params, const PublicKey& pk, const BfvPlaintext& pt,
                          Rng& rng) {
  RingElement m = encode_bfv(params, pt);
  return encrypt_encoded_with(params, pk, m, sample_encryption_noise(params, rng));
}

inline Ciphertext encrypt(const SchemeParams& params, const PublicKey& pk, const CkksPlaintext& pt,
                          Rng& rng) {
  RingElement m = encode_ckks(params, pt);
  return encrypt_encoded_with(params, pk, m, sample_encryption_noise(params, rng));
}

inline Ciphertext add(const SchemeParams& params, const Ciphertext& a, const Ciphertext& b) {
  THAG_REQUIRE(a.scheme == b.scheme && a.scheme == params.scheme, Errc::kParamsMismatch,
               "ciphertexts belong to different schemes");
  const std::uint64_t consumed =
      static_cast<std::uint64_t>(a.adds_consumed) + b.adds_consumed + 1;
  THAG_REQUIRE(consumed <= params.kappa, Errc::kCapacityExceeded,
               "addition would consume " + std::to_string(consumed) + " of capacity " +
                   std::to_string(params.kappa));
  Ciphertext r;
  r.scheme = a.scheme;
  r.c0 = a.c0 + b.c0;
  r.c1 = a.c1 + b.c1;
  r.adds_consumed = static_cast<std::uint32_t>(consumed);
  return r;
}

// [c0 + c1 s]_q, centered.
inline BigCoeffs decrypt_raw(const SecretKey& sk, const Ciphertext& ct) {
  RingElement x = ring_mul(ct.c1, sk.s);
  x += ct.c0;
  return crt_lift(x);
}

// [round((t/q) d)]_t per coefficient, ties rounded up, centered in (-t/2, t/2].
inline BfvPlaintext scale_and_round_bfv(const SchemeParams& params, const BigCoeffs& d) {
  BfvPlaintext out;
  out.values.resize(d.size());
  const BigInt& q = params.q();
  const BigInt two_q = 2 * q;
  const BigInt& t = params.t;
  BigInt num, m;
  for (std::size_t i = 0; i < d.size(); ++i) {
    num = 2 * t * d.values[i] + q;
    mpz_fdiv_q(m.get_mpz_t(), num.get_mpz_t(), two_q.get_mpz_t());
    mpz_fdiv_r(m.get_mpz_t(), m.get_mpz_t(), t.get_mpz_t());
    if (2 * m > t) m -= t;
    out.values[i] = m.get_si();
  }
  return out;
}

inline std::vector<double> scale_down_ckks(const SchemeParams& params, const BigCoeffs& d) {
  std::vector<double> out(d.size());
  Rational r;
  for (std::size_t i = 0; i < d.size(); ++i) {
    r = ratio(d.values[i], params.delta);
    r.canonicalize();
    out[i] = r.get_d();
  }
  return out;
}

inline BfvPlaintext dec_bfv(const SchemeParams& params, const SecretKey& sk, const Ciphertext& ct) {
  THAG_REQUIRE(params.scheme == Scheme::kBfv && ct.scheme == Scheme::kBfv,
               Errc::kInvalidArgument, "dec_bfv needs BFV parameters and ciphertext");
  return scale_and_round_bfv(params, decrypt_raw(sk, ct));
}

inline CkksDecoded dec_ckks(const SchemeParams& params, const SecretKey& sk, const Ciphertext& ct) {
  THAG_REQUIRE(params.scheme == Scheme::kCkks && ct.scheme == Scheme::kCkks,
               Errc::kInvalidArgument, "dec_ckks needs CKKS parameters and ciphertext");
  CkksDecoded out;
  out.values = scale_down_ckks(params, decrypt_raw(sk, ct));
  out.delta = params.delta;
  out.error_bound = Rational(BigInt(ct.adds_consumed + 1)) * params.bounds.b_fresh /
                    Rational(params.delta);
  return out;
}

// Fixed-point quantization of real updates for BFV: round(2^p w_i). The
// aggregate of `parties` such vectors must stay inside (-t/2, t/2].
inline BfvPlaintext encode_fixed(std::span<const double> w, int scale_bits, const BigInt& t,
                                 std::uint64_t parties = 1) {
  THAG_REQUIRE(scale_bits >= 0 && scale_bits < 62, Errc::kOverflowRisk, "bad scale bits");
  double max_abs = 0;
  for (double v : w) {
    THAG_REQUIRE(std::isfinite(v), Errc::kOverflowRisk, "update value not finite");
    max_abs = std::max(max_abs, std::fabs(v));
  }
  const Rational reach = Rational(BigInt(static_cast<unsigned long>(parties))) *
                         Rational(pow2(scale_bits)) * Rational(max_abs);
  THAG_REQUIRE(reach < ratio(t, 2), Errc::kOverflowRisk,
               "L * 2^p * max|w| must stay below t/2");
  BfvPlaintext pt;
  pt.values.resize(w.size());
  for (std::size_t i = 0; i < w.size(); ++i)
    pt.values[i] = static_cast<std::int64_t>(
        detail::round_half_up_double(std::ldexp(w[i], scale_bits)));
  return pt;
}

// value / (2^p L) per coefficient.
inline std::vector<double> decode_fixed(std::span<const std::int64_t> values, int scale_bits,
                                        std::uint64_t parties = 1) {
  std::vector<double> out(values.size());
  const BigInt denom = pow2(scale_bits) * BigInt(static_cast<unsigned long>(parties));
  for (std::size_t i = 0; i < values.size(); ++i) {
    Rational r(from_i64(values[i]), denom);
    r.canonicalize();
    out[i] = r.get_d();
  }
  return out;
}

}  // namespace thag
