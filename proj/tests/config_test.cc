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
#include "thag/config.hpp"

namespace thag {
namespace {

Errc code_of(const std::string& text) {
  ToolConfig cfg;
  try {
    apply_config_text(cfg, text);
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::kFormat;  // sentinel: no error
}

TEST(ConfigTest, ParsesEverySection) {
  ToolConfig cfg;
  apply_config_text(cfg, R"(
[plan]
scheme = ckks
n = 4096
parties = 8
sigma = 3.2
noise_bound = 96/5
lambda = 32
t = 2^30
eps_inv = 2^25
b_m = 1
require_security = yes

[protocol]
model_size = 10000
seed = 42
scale_bits = 12
rounds = 2
parallel = true
transcript = out.txt

[region]
t_lo = 10
t_hi = 20
window = 3

[bench]
parties = 2, 4, 8
repeats = 5

[security]
4096 = 100
)");
  const PlanInputs& p = cfg.protocol.plan;
  EXPECT_EQ(cfg.protocol.scheme, Scheme::kCkks);
  EXPECT_TRUE(cfg.scheme_given);
  EXPECT_EQ(p.n, 4096u);
  EXPECT_EQ(p.parties, 8u);
  EXPECT_EQ(p.sigma, Rational(16, 5));
  EXPECT_EQ(p.noise_bound, Rational(96, 5));
  EXPECT_EQ(p.lambda, 32);
  EXPECT_EQ(p.t, pow2(30));
  EXPECT_EQ(p.eps_inv, Rational(pow2(25)));
  EXPECT_TRUE(p.require_security);
  EXPECT_EQ(cfg.protocol.model_size, 10000u);
  EXPECT_EQ(cfg.protocol.seed, 42u);
  EXPECT_EQ(cfg.protocol.scale_bits, 12);
  EXPECT_EQ(cfg.protocol.rounds, 2u);
  EXPECT_TRUE(cfg.protocol.parallel);
  EXPECT_EQ(cfg.protocol.transcript_path, "out.txt");
  EXPECT_EQ(cfg.region.t_lo, 10);
  EXPECT_EQ(cfg.region.window, 3.0);
  EXPECT_EQ(cfg.bench.parties, (std::vector<std::uint64_t>{2, 4, 8}));
  EXPECT_EQ(cfg.bench.repeats, 5u);
  EXPECT_EQ(p.security_overrides.at(4096), 100);
}

TEST(ConfigTest, RejectsUnknownAndMalformed) {
  EXPECT_EQ(code_of("[plan]\nbogus = 1\n"), Errc::kConfig);
  EXPECT_EQ(code_of("[nowhere]\nn = 1\n"), Errc::kConfig);
  EXPECT_EQ(code_of("n = 1024\n"), Errc::kConfig);
  EXPECT_EQ(code_of("[plan]\nn = 10x\n"), Errc::kConfig);
  EXPECT_EQ(code_of("[plan]\nt = 3^4\n"), Errc::kConfig);
  EXPECT_EQ(code_of("[plan]\nt = 2.5\n"), Errc::kConfig);
  EXPECT_EQ(code_of("[plan]\nscheme = rsa\n"), Errc::kConfig);
  EXPECT_EQ(code_of("[protocol]\nparallel = maybe\n"), Errc::kConfig);
  EXPECT_EQ(code_of("[plan\nn = 1\n"), Errc::kConfig);
  EXPECT_EQ(code_of("[plan]\nn = 2048\n"), Errc::kFormat);
}

TEST(ConfigTest, DecimalsAreExact) {
  ToolConfig cfg;
  apply_config_text(cfg, "[plan]\nnoise_bound = 19.2\nsigma = 32e-1\n");
  EXPECT_EQ(cfg.protocol.plan.noise_bound, Rational(96, 5));
  EXPECT_EQ(cfg.protocol.plan.sigma, Rational(16, 5));
}

}  // namespace
}  // namespace thag
