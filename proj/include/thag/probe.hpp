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

// Secret-key noise probe. Only for tests and diagnostics: it needs the
// secret key, which no party holds in the threshold setting. Define
// THAG_ENABLE_NOISE_PROBE before including to opt in.

#ifndef THAG_ENABLE_NOISE_PROBE
#error "thag/probe.hpp requires THAG_ENABLE_NOISE_PROBE"
#endif

#include <span>

#include "thag/he.hpp"

namespace thag::probe {

// ||[c0 + c1 s - delta m]_q||_inf, where m is the (unreduced) integer
// message the ciphertext is expected to carry.
inline BigInt noise_of(const SchemeParams& params, const SecretKey& sk, const Ciphertext& ct,
                       std::span<const std::int64_t> reference) {
  RingElement x = ring_mul(ct.c1, sk.s);
  x += ct.c0;
  RingElement m = RingElement::from_signed(params.ring, reference);
  m.mul_scalar(params.delta);
  x -= m;
  return inf_norm(crt_lift(x));
}

// Same, with the scaled message given directly as integers (CKKS encodings).
inline BigInt noise_of_encoded(const SchemeParams& params, const SecretKey& sk,
                               const Ciphertext& ct, const BigCoeffs& scaled_message) {
  RingElement x = ring_mul(ct.c1, sk.s);
  x += ct.c0;
  x -= RingElement::from_big(params.ring, scaled_message);
  return inf_norm(crt_lift(x));
}

}  // namespace thag::probe
