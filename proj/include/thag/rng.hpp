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

// Deterministic random streams. A stream is ChaCha20 keyed by a 32-byte key;
// child streams are derived by keyed BLAKE2b over a label, so every party
// and purpose gets an independent, reproducible substream of one root seed.

#include <sodium.h>

#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "thag/bigint.hpp"

namespace thag {

class Rng {
 public:
  using Key = std::array<std::uint8_t, crypto_stream_chacha20_KEYBYTES>;

  explicit Rng(const Key& key) : key_(key) { init_sodium(); }

  static Rng from_seed(std::uint64_t seed) {
    init_sodium();
    std::array<std::uint8_t, 8> le{};
    for (int i = 0; i < 8; ++i) le[i] = static_cast<std::uint8_t>(seed >> (8 * i));
    static constexpr std::string_view kDomain = "thag.root-seed";
    Key key{};
    crypto_generichash_state st;
    crypto_generichash_init(&st, nullptr, 0, key.size());
    crypto_generichash_update(&st, reinterpret_cast<const unsigned char*>(kDomain.data()),
                              kDomain.size());
    crypto_generichash_update(&st, le.data(), le.size());
    crypto_generichash_final(&st, key.data(), key.size());
    return Rng(key);
  }

  Rng derive(std::string_view label) const {
    Key child{};
    crypto_generichash(child.data(), child.size(),
                       reinterpret_cast<const unsigned char*>(label.data()), label.size(),
                       key_.data(), key_.size());
    return Rng(child);
  }

  Rng derive(std::string_view label, std::uint64_t index) const {
    return derive(std::string(label) + "#" + std::to_string(index));
  }

  const Key& key() const { return key_; }

  void fill(std::span<std::uint8_t> out) {
    for (auto& b : out) {
      if (pos_ == buf_.size()) refill();
      b = buf_[pos_++];
    }
  }

  std::uint64_t next_u64() {
    if (buf_.size() - pos_ < 8) {
      std::array<std::uint8_t, 8> tmp{};
      fill(tmp);
      std::uint64_t v = 0;
      std::memcpy(&v, tmp.data(), 8);
      return v;
    }
    std::uint64_t v = 0;
    std::memcpy(&v, buf_.data() + pos_, 8);
    pos_ += 8;
    return v;
  }

  // Uniform on [0, bound) by masked rejection; bound > 0.
  std::uint64_t uniform_below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    const int bits = 64 - __builtin_clzll(bound - 1);
    const std::uint64_t mask = bits == 64 ? ~0ULL : ((1ULL << bits) - 1);
    for (;;) {
      std::uint64_t v = next_u64() & mask;
      if (v < bound) return v;
    }
  }

  // Uniform on [0, bound) for an arbitrary-precision bound > 0.
  BigInt uniform_below(const BigInt& bound) {
    if (bound <= 1) return 0;
    const long bits = bit_length(BigInt(bound - 1));
    const std::size_t words = static_cast<std::size_t>((bits + 63) / 64);
    const int top_bits = static_cast<int>(bits - 64 * static_cast<long>(words - 1));
    const std::uint64_t top_mask = top_bits == 64 ? ~0ULL : ((1ULL << top_bits) - 1);
    scratch_.resize(words);
    BigInt v;
    for (;;) {
      for (auto& w : scratch_) w = next_u64();
      scratch_.back() &= top_mask;
      mpz_import(v.get_mpz_t(), words, -1, sizeof(std::uint64_t), 0, 0, scratch_.data());
      if (v < bound) return v;
    }
  }

  // Uniform double in the open interval (0, 1) with 53 random bits.
  double uniform_open01() {
    for (;;) {
      std::uint64_t v = next_u64() >> 11;
      if (v != 0) return std::ldexp(static_cast<double>(v), -53);
    }
  }

 private:
  static void init_sodium() {
    static const int ready = sodium_init();
    (void)ready;
  }

  void refill() {
    static const std::array<std::uint8_t, kBufBytes> zeros{};
    static const std::array<std::uint8_t, crypto_stream_chacha20_NONCEBYTES> nonce{};
    crypto_stream_chacha20_xor_ic(buf_.data(), zeros.data(), buf_.size(), nonce.data(), block_,
                                  key_.data());
    block_ += kBufBytes / 64;
    pos_ = 0;
  }

  static constexpr std::size_t kBufBytes = 1024;

  Key key_;
  std::uint64_t block_ = 0;
  std::array<std::uint8_t, kBufBytes> buf_{};
  std::size_t pos_ = kBufBytes;
  std::vector<std::uint64_t> scratch_;
};

}  // namespace thag
