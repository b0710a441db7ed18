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

#include <stdexcept>
#include <string>
#include <string_view>

namespace thag {

enum class Errc {
  kParamsMismatch,
  kDomainMismatch,
  kBoundViolation,
  kNoPrimesFound,
  kPlaintextOutOfRange,
  kCapacityExceeded,
  kOverflowRisk,
  kMissingShare,
  kDuplicateIndex,
  kBoundTooLargeForQ,
  kEmptyRange,
  kUnknownN,
  kLengthMismatch,
  kInvalidArgument,
  kConfig,
  kFormat,
};

inline std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::kParamsMismatch: return "params-mismatch";
    case Errc::kDomainMismatch: return "domain-mismatch";
    case Errc::kBoundViolation: return "bound-violation";
    case Errc::kNoPrimesFound: return "no-primes-found";
    case Errc::kPlaintextOutOfRange: return "plaintext-out-of-range";
    case Errc::kCapacityExceeded: return "capacity-exceeded";
    case Errc::kOverflowRisk: return "overflow-risk";
    case Errc::kMissingShare: return "missing-share";
    case Errc::kDuplicateIndex: return "duplicate-index";
    case Errc::kBoundTooLargeForQ: return "bound-too-large-for-q";
    case Errc::kEmptyRange: return "empty-range";
    case Errc::kUnknownN: return "unknown-n";
    case Errc::kLengthMismatch: return "length-mismatch";
    case Errc::kInvalidArgument: return "invalid-argument";
    case Errc::kConfig: return "config-error";
    case Errc::kFormat: return "format-error";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

  // Rejections that stem from configuration or parameter bounds, as opposed
  // to failures while the protocol is running.
  bool is_config_rejection() const noexcept {
    switch (code_) {
      case Errc::kBoundViolation:
      case Errc::kBoundTooLargeForQ:
      case Errc::kNoPrimesFound:
      case Errc::kOverflowRisk:
      case Errc::kUnknownN:
      case Errc::kEmptyRange:
      case Errc::kInvalidArgument:
      case Errc::kConfig:
        return true;
      default:
        return false;
    }
  }

 private:
  Errc code_;
};

#define THAG_REQUIRE(cond, code, msg)              \
  do {                                             \
    if (!(cond)) throw ::thag::Error((code), (msg)); \
  } while (0)

}  // namespace thag
