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
#include "thag/selftest.hpp"

namespace thag {
namespace {

TEST(SelftestTest, AllChecksPassAndPlantedViolationIsRejected) {
  SelftestReport rep = run_selftest();
  EXPECT_TRUE(rep.ok()) << rep.to_text();
  ASSERT_FALSE(rep.checks.empty());
  EXPECT_EQ(rep.checks.back().status, CheckStatus::kExpectedReject) << rep.to_text();
  EXPECT_NE(rep.to_text().find("selftest: ok"), std::string::npos);
  bool has_oracle = false;
  for (const auto& c : rep.checks) has_oracle |= c.name.find("integer convolution") != std::string::npos;
  EXPECT_TRUE(has_oracle);
}

}  // namespace
}  // namespace thag
