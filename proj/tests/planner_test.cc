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

#include <cmath>

#include "gtest/gtest.h"
#include "thag/planner.hpp"

namespace thag {
namespace {

const Rational kB = Rational(96, 5);  // 19.2

PlanInputs region_inputs(long lambda, std::uint64_t parties = 10) {
  PlanInputs in;
  in.n = 8192;
  in.parties = parties;
  in.noise_bound = kB;
  in.lambda = lambda;
  return in;
}

TEST(FreshBoundTest, ExactValues) {
  EXPECT_EQ(fresh_bound(1024, kB), Rational(196704, 5));  // 39340.8
  EXPECT_EQ(fresh_bound(1024, 0), 0);
}

TEST(MpBoundsTest, FormulaCollapseAndExamples) {
  MpBounds one = mp_bounds(1024, 1, kB, 0);
  EXPECT_EQ(one.b_ct_mp, 2 * one.b_ct);
  EXPECT_EQ(one.b_ct, Rational(2049) * kB);

  MpBounds two = mp_bounds(1024, 2, kB, 0);
  EXPECT_EQ(two.b_fresh_mp, Rational(4097) * kB);
  EXPECT_EQ(two.b_ct, Rational(786624, 5));  // 157324.8
  EXPECT_EQ(two.b_ct_mp, Rational(2359872, 5));  // 471974.4

  MpBounds set1 = mp_bounds(16384, 16, kB, 128);
  EXPECT_EQ(set1.b_ct, Rational(805307904, 5));  // 161061580.8
  EXPECT_EQ(set1.b_smg, Rational(pow2(64)) * set1.b_ct);
  EXPECT_EQ(set1.b_ct_mp, Rational(1 + 16 * pow2(64)) * set1.b_ct);
}

TEST(MpBoundsTest, StrictlyIncreasingInEachInput) {
  const MpBounds base = mp_bounds(1024, 4, kB, 32);
  EXPECT_LT(base.b_ct_mp, mp_bounds(2048, 4, kB, 32).b_ct_mp);
  EXPECT_LT(base.b_ct_mp, mp_bounds(1024, 5, kB, 32).b_ct_mp);
  EXPECT_LT(base.b_ct_mp, mp_bounds(1024, 4, kB + Rational(1, 10), 32).b_ct_mp);
  EXPECT_LT(base.b_ct_mp, mp_bounds(1024, 4, kB, 34).b_ct_mp);
  for (long lambda = 0; lambda < 200; lambda += 2)
    ASSERT_LT(mp_bounds(1024, 4, kB, lambda).b_ct_mp, mp_bounds(1024, 4, kB, lambda + 2).b_ct_mp);
  // Odd lambda rounds its half up.
  EXPECT_EQ(mp_bounds(1024, 4, kB, 33).b_smg, mp_bounds(1024, 4, kB, 34).b_smg);
}

TEST(QminTest, MbfvExamplesAndMonotonicity) {
  EXPECT_EQ(qmin_mbfv(2, 1), 4);
  EXPECT_EQ(qmin_mbfv_threshold(256, Rational(2359872, 5)), Rational(1208582144, 5));
  EXPECT_EQ(qmin_mbfv(256, Rational(2359872, 5)), 28);
  Rng rng = Rng::from_seed(1);
  for (int i = 0; i < 500; ++i) {
    BigInt t = 2 + rng.uniform_below(BigInt(pow2(40)));
    Rational b(rng.uniform_below(BigInt(pow2(60))) + 1, 7);
    ASSERT_LE(qmin_mbfv(t, b), qmin_mbfv(t + 1, b));
    ASSERT_LE(qmin_mbfv(t, b), qmin_mbfv(t, b + 1));
  }
}

TEST(QminTest, MckksExamples) {
  const Rational b(4719744, 10);
  EXPECT_EQ(qmin_mckks_threshold(0, 1, b), 2 * b);
  EXPECT_EQ(qmin_mckks_threshold(b, 1, b), 4 * b);
  EXPECT_EQ(qmin_mckks(b, 1, b), min_bits_exceeding(4 * b));
}

TEST(ScaleFromEpsTest, PowerOfTwoCeiling) {
  const Rational b(4719744, 10);
  EXPECT_EQ(scale_from_eps(1, b), pow2(19));  // 2^18 < 471974.4 <= 2^19
  Rng rng = Rng::from_seed(2);
  for (int i = 0; i < 200; ++i) {
    Rational eps_inv(rng.uniform_below(BigInt(pow2(50))) + 1);
    Rational bb(rng.uniform_below(BigInt(pow2(80))) + 1, 3);
    BigInt delta = scale_from_eps(eps_inv, bb);
    ASSERT_LE(bb / Rational(delta), 1 / eps_inv);
    ASSERT_GT(bb / Rational(delta / 2), 1 / eps_inv);
  }
}

TEST(WinnerTest, ExactBoundaryExamples) {
  const Rational b(pow2(50));
  EXPECT_EQ(winner(pow2(20), Rational(pow2(19)), b), Winner::kMckksSmallerQ);
  // LHS = 2^20 - 1 + 2^-11 < 2^20.
  EXPECT_EQ(winner(pow2(20), Rational(pow2(20)), b), Winner::kMbfvSmallerOrEqual);
}

TEST(WinnerTest, ThresholdFormEquivalentAtRandomPoints) {
  Rng rng = Rng::from_seed(3);
  for (int i = 0; i < 1000; ++i) {
    const BigInt t = 2 + rng.uniform_below(BigInt(pow2(1 + static_cast<long>(rng.uniform_below(100)))));
    const Rational eps_inv(rng.uniform_below(BigInt(pow2(1 + static_cast<long>(rng.uniform_below(100))))) + 1);
    const Rational b(rng.uniform_below(BigInt(pow2(100))) + 1, rng.uniform_below(BigInt(1000)) + 1);
    const bool closed_form = winner(t, eps_inv, b) == Winner::kMckksSmallerQ;
    const bool threshold_form = mckks_smaller_by_delta(t, b * eps_inv, 1, b);
    const bool direct = qmin_mckks_threshold(b * eps_inv, 1, b) < qmin_mbfv_threshold(t, b);
    ASSERT_EQ(closed_form, threshold_form);
    ASSERT_EQ(closed_form, direct);
  }
}

TEST(RegionGridTest, VerdictMatchesDirectComparisonAndCsv) {
  RegionGrid g = region_grid(region_inputs(32), 8, 40, 8, 40);
  for (const auto& c : g.cells)
    ASSERT_EQ(c.winner == Winner::kMckksSmallerQ, c.direct_mckks_smaller);
  const std::string csv = g.to_csv();
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "log2_t,log2_eps_inv,winner,qmin_mbfv_bits,qmin_mckks_bits");
  EXPECT_THROW(region_grid(region_inputs(32), 10, 9, 8, 40), Error);
}

TEST(RegionGridTest, FavorableAreaShrinksWithLambdaAndParties) {
  std::vector<RegionGrid> grids;
  for (long lambda : {32, 64, 96, 128}) grids.push_back(region_grid(region_inputs(lambda), 8, 120, 8, 120));
  for (std::size_t k = 1; k < grids.size(); ++k) {
    EXPECT_LT(grids[k].mckks_count(), grids[k - 1].mckks_count());
    for (std::size_t i = 0; i < grids[k].cells.size(); ++i)
      if (grids[k].cells[i].winner == Winner::kMckksSmallerQ)
        ASSERT_EQ(grids[k - 1].cells[i].winner, Winner::kMckksSmallerQ);
  }
  RegionGrid l8 = region_grid(region_inputs(128, 8), 8, 120, 8, 120);
  RegionGrid l128 = region_grid(region_inputs(128, 128), 8, 120, 8, 120);
  EXPECT_LT(l128.mckks_count(), l8.mckks_count());
}

TEST(RegionGridTest, CrossoverFollowsNoiseBound) {
  for (long lambda : {32, 64, 96, 128}) {
    RegionGrid g = region_grid(region_inputs(lambda), 8, 120, 8, 121);
    auto x = g.crossover_bits();
    ASSERT_TRUE(x.has_value());
    EXPECT_NEAR(static_cast<double>(*x), log2_of(g.b_ct_mp) + 1, 1.0);
  }
}

TEST(IntervalCheckTest, DeviationSmallOutsideWindow) {
  const Rational b = region_inputs(64).bounds().b_ct_mp;
  IntervalReport rep = interval_approx_check(b, 8, 120);
  EXPECT_NEAR(rep.crossover_bits, log2_of(b) + 1, 1e-9);
  EXPECT_LT(rep.max_deviation_interval1, 1.0);
  EXPECT_LT(rep.max_deviation_interval2, 1.0);
  // Deep in either interval the approximation is essentially exact.
  EXPECT_LT(rep.columns.front().deviation, 1e-6);
  EXPECT_LT(rep.columns.back().deviation, 1e-6);
  // At t = 2b the two addends are equal: exactly one bit above either line.
  const Rational b2(pow2(40));
  IntervalReport at = interval_approx_check(b2, 41, 41, 0);
  EXPECT_NEAR(at.columns[0].deviation, 1.0, 1e-9);
}

TEST(SecurityCheckTest, TableAndOverrides) {
  EXPECT_TRUE(security_check(16384, 240));
  EXPECT_TRUE(security_check(16384, 300));
  EXPECT_FALSE(security_check(1024, 1000));
  EXPECT_FALSE(security_check(4096, 200, {{4096, 100}}));
  EXPECT_TRUE(security_check(4096, 200, {{4096, 250}}));
  EXPECT_TRUE(security_check(64, 10, {{64, 12}}));
  try {
    security_check(64, 10);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kUnknownN);
  }
}

TEST(PlanTest, SmallRunnableConfig) {
  PlanInputs in;
  in.scheme = Scheme::kBfv;
  in.n = 1024;
  in.parties = 2;
  in.lambda = 16;
  in.t = 257;
  in.require_security = false;
  PlanReport r = plan(in);
  EXPECT_GT(Rational(product_of(r.bfv.primes)), r.bfv.qmin_threshold);
  SchemeParams p = params_from_plan(r, Scheme::kBfv);
  EXPECT_EQ(p.kappa, 1u);
  EXPECT_EQ(p.q(), product_of(r.bfv.primes));
  EXPECT_EQ(r.to_text(), plan(in).to_text());

  in.require_security = true;
  EXPECT_THROW(plan(in), Error);  // 1024 allows only 27 bits
}

TEST(PlanTest, ReferenceSetsAnnotatedAndOrderingConsistent) {
  PlanInputs set1;
  set1.n = 16384;
  set1.parties = 16;
  set1.lambda = 128;
  set1.t = pow2(45);
  set1.eps_inv = Rational(pow2(45));
  PlanReport r1 = plan(set1);
  ASSERT_TRUE(r1.reference.has_value());
  EXPECT_EQ(r1.reference->id, 1);
  EXPECT_EQ(r1.closed_form_holds, r1.planned_mckks_smaller);
  EXPECT_TRUE(r1.bfv.security_ok);

  PlanInputs set2 = set1;
  set2.parties = 32;
  set2.t = pow2(60);
  set2.scheme = Scheme::kBfv;
  PlanReport r2 = plan(set2);
  ASSERT_TRUE(r2.reference.has_value());
  EXPECT_EQ(r2.reference->id, 2);
  const std::string text = r2.to_text();
  EXPECT_NE(text.find("reference_limbs = 10"), std::string::npos);
  EXPECT_NE(text.find("reference_q_bits = 300"), std::string::npos);
  EXPECT_NE(text.find("reference_qmin_bfv_bits = 280"), std::string::npos);

  PlanInputs set3 = set2;
  set3.scheme = Scheme::kCkks;
  set3.t = pow2(20);
  set3.eps_inv = Rational(pow2(60));
  PlanReport r3 = plan(set3);
  ASSERT_TRUE(r3.reference.has_value());
  EXPECT_EQ(r3.reference->id, 3);
  EXPECT_EQ(r3.reference->qmin_ckks_bits, 259);
  EXPECT_GT(r3.ckks.qmin_bits, 0);
}

TEST(PlanTest, RejectsBadInputs) {
  PlanInputs in;
  in.b_m = 2;
  EXPECT_THROW(plan(in), Error);
  in = PlanInputs{};
  in.n = 1000;
  EXPECT_THROW(plan(in), Error);
}

}  // namespace
}  // namespace thag
