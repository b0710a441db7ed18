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

// Parameter planner: evaluates the multiparty noise bounds, the minimal
// ciphertext moduli for threshold BFV and CKKS, which of the two needs the
// smaller modulus, the (log2 t, log2 eps^-1) region grids, and picks a
// concrete RNS prime chain that passes the security table.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "thag/bounds.hpp"
#include "thag/he.hpp"
#include "thag/primes.hpp"

namespace thag {

struct PlanInputs {
  std::optional<Scheme> scheme;  // gates prime selection and security; unset plans both
  std::uint64_t n = 8192;
  std::uint64_t parties = 10;
  Rational sigma = Rational(16, 5);
  Rational noise_bound = Rational(96, 5);
  long lambda = 128;
  BigInt t = pow2(20);
  Rational eps_inv = Rational(pow2(20));
  Rational b_m = 1;
  bool require_security = true;
  std::map<std::uint64_t, long> security_overrides;  // n -> max log2 q

  void validate() const {
    THAG_REQUIRE(n >= 4 && (n & (n - 1)) == 0, Errc::kConfig, "n must be a power of two >= 4");
    THAG_REQUIRE(parties >= 1, Errc::kConfig, "L must be positive");
    THAG_REQUIRE(sgn(sigma) >= 0 && noise_bound >= sigma && sgn(noise_bound) > 0, Errc::kConfig,
                 "noise bound must satisfy B >= sigma >= 0 and B > 0");
    THAG_REQUIRE(lambda >= 0, Errc::kConfig, "lambda must be non-negative");
    THAG_REQUIRE(t >= 2, Errc::kConfig, "t must be >= 2");
    THAG_REQUIRE(eps_inv >= 1, Errc::kConfig, "eps^-1 must be >= 1");
    THAG_REQUIRE(sgn(b_m) > 0, Errc::kConfig, "b_m must be positive");
    if (!scheme || *scheme == Scheme::kCkks)
      THAG_REQUIRE(b_m <= 1, Errc::kConfig, "b_m must be <= 1 after normalization");
  }

  MpBounds bounds() const { return mp_bounds(n, parties, noise_bound, lambda); }
};

// Maximum log2 q at 128-bit classical security for a ternary secret, per
// ring degree (community HE security standard table).
inline const std::map<std::uint64_t, long>& default_security_table() {
  static const std::map<std::uint64_t, long> table = {
      {1024, 27}, {2048, 54}, {4096, 109}, {8192, 218}, {16384, 438}, {32768, 881}};
  return table;
}

inline bool security_check(std::uint64_t n, long log2_q,
                           const std::map<std::uint64_t, long>& overrides = {}) {
  if (auto it = overrides.find(n); it != overrides.end()) return log2_q <= it->second;
  const auto& table = default_security_table();
  auto it = table.find(n);
  THAG_REQUIRE(it != table.end(), Errc::kUnknownN,
               "no security entry for n = " + std::to_string(n));
  return log2_q <= it->second;
}

// Reference modulus sizes for three example parameter sets. Annotations only,
// nothing is computed from them.
struct ReferenceSet {
  int id;
  std::uint64_t n, parties;
  std::optional<long> t_bits, eps_bits;
  int limbs;
  long q_bits;
  std::optional<long> qmin_bfv_bits, qmin_ckks_bits;
};

inline const std::vector<ReferenceSet>& reference_sets() {
  static const std::vector<ReferenceSet> sets = {
      {1, 16384, 16, 45, 45, 4, 240, 232, 238},
      {2, 16384, 32, 60, std::nullopt, 10, 300, 280, std::nullopt},
      {3, 16384, 32, std::nullopt, 60, 9, 270, std::nullopt, 259},
  };
  return sets;
}

struct SchemePlan {
  long qmin_bits = 0;
  Rational qmin_threshold;
  std::vector<u64> primes;
  long log2_q = 0;
  bool security_ok = false;
};

struct PlanReport {
  PlanInputs inputs;
  MpBounds bounds;
  BigInt delta_ckks;
  Rational epsilon_ckks;  // realized b_ct_mp / delta
  Winner winner = Winner::kMbfvSmallerOrEqual;  // exact-scale comparison at (t, eps^-1)
  bool closed_form_holds = false;                       // threshold form with the planned scale
  bool planned_mckks_smaller = false;           // direct threshold comparison, planned scale
  SchemePlan bfv, ckks;
  std::optional<ReferenceSet> reference;

  const SchemePlan& for_scheme(Scheme s) const { return s == Scheme::kBfv ? bfv : ckks; }

  std::string to_text() const;
};

namespace detail {

inline std::optional<long> exact_log2(const Rational& x) {
  if (x.get_den() != 1) return std::nullopt;
  const BigInt& v = x.get_num();
  if (sgn(v) <= 0 || mpz_popcount(v.get_mpz_t()) != 1) return std::nullopt;
  return bit_length(v) - 1;
}

inline std::string primes_text(const std::vector<u64>& primes) {
  std::string out;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(primes[i]);
  }
  return out;
}

}  // namespace detail

inline PlanReport plan(const PlanInputs& inputs) {
  inputs.validate();
  PlanReport r;
  r.inputs = inputs;
  r.bounds = inputs.bounds();
  const Rational& b = r.bounds.b_ct_mp;
  r.delta_ckks = scale_from_eps(inputs.eps_inv, b);
  r.epsilon_ckks = b / Rational(r.delta_ckks);
  r.winner = winner(inputs.t, inputs.eps_inv, b);
  r.closed_form_holds = mckks_smaller_by_delta(inputs.t, Rational(r.delta_ckks), inputs.b_m, b);

  r.bfv.qmin_threshold = qmin_mbfv_threshold(inputs.t, b);
  r.ckks.qmin_threshold = qmin_mckks_threshold(Rational(r.delta_ckks), inputs.b_m, b);
  r.planned_mckks_smaller = r.ckks.qmin_threshold < r.bfv.qmin_threshold;

  for (auto [scheme, sp] : {std::pair{Scheme::kBfv, &r.bfv}, std::pair{Scheme::kCkks, &r.ckks}}) {
    sp->qmin_bits = min_bits_exceeding(sp->qmin_threshold);
    sp->primes = select_primes_exceeding(inputs.n, sp->qmin_threshold);
    sp->log2_q = bit_length(product_of(sp->primes));
    sp->security_ok = security_check(inputs.n, sp->log2_q, inputs.security_overrides);
    if (inputs.require_security && (!inputs.scheme || *inputs.scheme == scheme)) {
      THAG_REQUIRE(sp->security_ok, Errc::kBoundViolation,
                   std::string(scheme_name(scheme)) + " modulus of " +
                       std::to_string(sp->log2_q) + " bits exceeds the 128-bit security limit for n = " +
                       std::to_string(inputs.n));
    }
  }

  const auto t_bits = detail::exact_log2(Rational(inputs.t));
  const auto eps_bits = detail::exact_log2(inputs.eps_inv);
  for (const auto& ref : reference_sets()) {
    if (ref.n != inputs.n || ref.parties != inputs.parties || inputs.lambda != 128) continue;
    const bool t_ok = !ref.t_bits || ref.t_bits == t_bits;
    const bool e_ok = !ref.eps_bits || ref.eps_bits == eps_bits;
    if (t_ok && e_ok) {
      r.reference = ref;
      break;
    }
  }
  return r;
}

// Builds scheme parameters for the planned prime chain.
inline SchemeParams params_from_plan(const PlanReport& report, Scheme scheme) {
  SchemeConfig cfg;
  cfg.scheme = scheme;
  cfg.n = report.inputs.n;
  cfg.primes = report.for_scheme(scheme).primes;
  cfg.t = report.inputs.t;
  cfg.sigma = report.inputs.sigma;
  cfg.noise_bound = report.inputs.noise_bound;
  cfg.eps_inv = report.inputs.eps_inv;
  cfg.delta = report.delta_ckks;
  cfg.b_m = report.inputs.b_m;
  cfg.parties = report.inputs.parties;
  cfg.lambda = report.inputs.lambda;
  return setup(cfg);
}

inline std::string PlanReport::to_text() const {
  std::ostringstream os;
  auto kv = [&](const std::string& k, const std::string& v) { os << k << " = " << v << "\n"; };
  kv("n", std::to_string(inputs.n));
  kv("parties", std::to_string(inputs.parties));
  kv("sigma", to_decimal(inputs.sigma));
  kv("noise_bound", to_decimal(inputs.noise_bound));
  kv("lambda", std::to_string(inputs.lambda));
  kv("t", inputs.t.get_str());
  kv("eps_inv", to_decimal(inputs.eps_inv));
  kv("b_m", to_decimal(inputs.b_m));
  kv("b_fresh", to_decimal(bounds.b_fresh));
  kv("b_fresh_mp", to_decimal(bounds.b_fresh_mp));
  kv("b_ct", to_decimal(bounds.b_ct));
  kv("b_smg", to_decimal(bounds.b_smg));
  kv("b_ct_mp", to_decimal(bounds.b_ct_mp));
  kv("log2_b_ct_mp", std::to_string(log2_of(bounds.b_ct_mp)));
  kv("delta_ckks", "2^" + std::to_string(bit_length(delta_ckks) - 1));
  {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6e", epsilon_ckks.get_d());
    kv("epsilon_ckks", buf);
  }
  kv("qmin_mbfv_bits", std::to_string(bfv.qmin_bits));
  kv("qmin_mckks_bits", std::to_string(ckks.qmin_bits));
  kv("winner", winner_name(winner));
  kv("closed_form_mckks_smaller", closed_form_holds ? "true" : "false");
  kv("planned_mckks_smaller", planned_mckks_smaller ? "true" : "false");
  kv("mbfv_primes", detail::primes_text(bfv.primes));
  kv("mbfv_log2_q", std::to_string(bfv.log2_q));
  kv("mbfv_security_ok", bfv.security_ok ? "true" : "false");
  kv("mckks_primes", detail::primes_text(ckks.primes));
  kv("mckks_log2_q", std::to_string(ckks.log2_q));
  kv("mckks_security_ok", ckks.security_ok ? "true" : "false");
  if (reference) {
    kv("reference_set", std::to_string(reference->id));
    kv("reference_limbs", std::to_string(reference->limbs));
    kv("reference_q_bits", std::to_string(reference->q_bits));
    kv("reference_qmin_bfv_bits",
       reference->qmin_bfv_bits ? std::to_string(*reference->qmin_bfv_bits) : "-");
    kv("reference_qmin_ckks_bits",
       reference->qmin_ckks_bits ? std::to_string(*reference->qmin_ckks_bits) : "-");
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Region grids

struct RegionCell {
  long t_bits = 0;
  long eps_bits = 0;
  Winner winner = Winner::kMbfvSmallerOrEqual;
  long qmin_mbfv_bits = 0;
  long qmin_mckks_bits = 0;
  bool direct_mckks_smaller = false;  // exact threshold comparison
};

struct RegionGrid {
  long t_lo = 0, t_hi = 0, eps_lo = 0, eps_hi = 0;
  Rational b_ct_mp;
  std::vector<RegionCell> cells;  // row-major: t outer, eps inner

  const RegionCell& at(long t_bits, long eps_bits) const {
    return cells[static_cast<std::size_t>((t_bits - t_lo) * (eps_hi - eps_lo + 1) +
                                          (eps_bits - eps_lo))];
  }

  std::size_t mckks_count() const {
    std::size_t c = 0;
    for (const auto& cell : cells) c += cell.winner == Winner::kMckksSmallerQ;
    return c;
  }

  // First column where the MCKKS region climbs a full bit above the
  // diagonal, i.e. cell (t, t + 1) is MCKKS-favorable. This is where the
  // quadratic term takes over.
  std::optional<long> crossover_bits() const {
    for (long tb = t_lo; tb <= t_hi; ++tb) {
      if (tb + 1 > eps_hi || tb + 1 < eps_lo) continue;
      if (at(tb, tb + 1).winner == Winner::kMckksSmallerQ) return tb;
    }
    return std::nullopt;
  }

  std::string to_csv() const {
    std::ostringstream os;
    os << "log2_t,log2_eps_inv,winner,qmin_mbfv_bits,qmin_mckks_bits\n";
    for (const auto& c : cells)
      os << c.t_bits << "," << c.eps_bits << "," << winner_name(c.winner) << ","
         << c.qmin_mbfv_bits << "," << c.qmin_mckks_bits << "\n";
    return os.str();
  }
};

// Cells use t = 2^t_bits and eps^-1 = 2^eps_bits; the CKKS scale in each
// cell is the exact delta = b_ct_mp eps^-1 / b_m so that both moduli are
// compared at the same error margin.
inline RegionGrid region_grid(const PlanInputs& inputs, long t_lo, long t_hi, long eps_lo,
                              long eps_hi) {
  THAG_REQUIRE(t_lo <= t_hi && eps_lo <= eps_hi, Errc::kEmptyRange, "empty grid range");
  THAG_REQUIRE(t_lo >= 1 && eps_lo >= 0, Errc::kEmptyRange, "grid needs t >= 2, eps^-1 >= 1");
  PlanInputs in = inputs;
  in.t = 2;
  in.eps_inv = 1;
  in.validate();
  RegionGrid g;
  g.t_lo = t_lo;
  g.t_hi = t_hi;
  g.eps_lo = eps_lo;
  g.eps_hi = eps_hi;
  g.b_ct_mp = in.bounds().b_ct_mp;
  g.cells.reserve(static_cast<std::size_t>((t_hi - t_lo + 1) * (eps_hi - eps_lo + 1)));
  for (long tb = t_lo; tb <= t_hi; ++tb) {
    const BigInt t = pow2(tb);
    const Rational bfv_threshold = qmin_mbfv_threshold(t, g.b_ct_mp);
    const long bfv_bits = min_bits_exceeding(bfv_threshold);
    for (long eb = eps_lo; eb <= eps_hi; ++eb) {
      const Rational eps_inv(pow2(eb));
      const Rational delta = g.b_ct_mp * eps_inv / inputs.b_m;
      const Rational ckks_threshold = qmin_mckks_threshold(delta, inputs.b_m, g.b_ct_mp);
      RegionCell c;
      c.t_bits = tb;
      c.eps_bits = eb;
      c.winner = winner(t, eps_inv, g.b_ct_mp);
      c.qmin_mbfv_bits = bfv_bits;
      c.qmin_mckks_bits = min_bits_exceeding(ckks_threshold);
      c.direct_mckks_smaller = ckks_threshold < bfv_threshold;
      g.cells.push_back(c);
    }
  }
  return g;
}

// ---------------------------------------------------------------------------
// Piecewise-linear approximation of the region boundary

struct IntervalColumn {
  long t_bits = 0;
  double exact_bits = 0;   // log2(t^2/(2b) + t - 1)
  double approx_bits = 0;  // max(log2(t - 1), 2 log2 t - log2 b - 1)
  double deviation = 0;
  bool in_window = false;
};

struct IntervalReport {
  double crossover_bits = 0;  // log2 b + 1, where t^2/(2b) = t
  double window_bits = 2;
  double max_deviation_outside = 0;
  double max_deviation_interval1 = 0;
  double max_deviation_interval2 = 0;
  std::vector<IntervalColumn> columns;
};

inline IntervalReport interval_approx_check(const Rational& b_ct_mp, long t_lo, long t_hi,
                                            double window_bits = 2) {
  THAG_REQUIRE(t_lo <= t_hi && t_lo >= 1, Errc::kEmptyRange, "empty column range");
  IntervalReport rep;
  rep.window_bits = window_bits;
  const double log_b = log2_of(b_ct_mp);
  rep.crossover_bits = log_b + 1;
  for (long tb = t_lo; tb <= t_hi; ++tb) {
    const BigInt t = pow2(tb);
    IntervalColumn col;
    col.t_bits = tb;
    col.exact_bits = log2_of(Rational(t * t) / (2 * b_ct_mp) + Rational(t - 1));
    const double first = log2_of(BigInt(t - 1));
    const double second = 2.0 * static_cast<double>(tb) - log_b - 1.0;
    col.approx_bits = std::max(first, second);
    col.deviation = std::fabs(col.exact_bits - col.approx_bits);
    col.in_window = std::fabs(static_cast<double>(tb) - rep.crossover_bits) <= window_bits;
    if (!col.in_window) {
      rep.max_deviation_outside = std::max(rep.max_deviation_outside, col.deviation);
      auto& side = static_cast<double>(tb) < rep.crossover_bits ? rep.max_deviation_interval1
                                                               : rep.max_deviation_interval2;
      side = std::max(side, col.deviation);
    }
    rep.columns.push_back(col);
  }
  return rep;
}

inline IntervalReport interval_approx_check(const PlanInputs& inputs, const RegionGrid& grid,
                                            double window_bits = 2) {
  (void)inputs;
  return interval_approx_check(grid.b_ct_mp, grid.t_lo, grid.t_hi, window_bits);
}

}  // namespace thag
