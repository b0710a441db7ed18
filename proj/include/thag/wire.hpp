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

// Binary message formats. All integers little-endian.
//
// ciphertext:  "THAG" u16 version, u8 scheme, ring header, c0, c1, u32 adds_consumed
// share msg:   "THAG" u16 version, u8 kind, u16 party, ring header, element
// ring header: u32 n, u8 prime count, u64 primes
// element:     u64 residues, prime-major then coefficient, coefficient domain

#include <bit>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <vector>

#include "thag/threshold.hpp"

namespace thag::wire {

inline constexpr std::uint16_t kVersion = 1;
inline constexpr char kMagic[4] = {'T', 'H', 'A', 'G'};

enum class Kind : std::uint8_t {
  kPkShare = 0x10,
  kPartialDecryption = 0x11,
  kCollectiveKey = 0x12,  // p0 only, p1 comes from the CRS
};

using Bytes = std::vector<std::uint8_t>;

class Writer {
 public:
  void put_u8(std::uint8_t v) { buf_.push_back(v); }
  void put_u16(std::uint16_t v) { put_le(v, 2); }
  void put_u32(std::uint32_t v) { put_le(v, 4); }
  void put_u64(std::uint64_t v) { put_le(v, 8); }
  void put_raw(const void* p, std::size_t len) {
    const auto* b = static_cast<const std::uint8_t*>(p);
    buf_.insert(buf_.end(), b, b + len);
  }
  void reserve(std::size_t n) { buf_.reserve(n); }
  Bytes take() { return std::move(buf_); }

 private:
  void put_le(std::uint64_t v, int len) {
    for (int i = 0; i < len; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  Bytes buf_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> data) : data_(data) {}

  std::uint8_t u8() { return static_cast<std::uint8_t>(get_le(1)); }
  std::uint16_t u16() { return static_cast<std::uint16_t>(get_le(2)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(get_le(4)); }
  std::uint64_t u64() { return get_le(8); }
  void raw(void* out, std::size_t len) {
    need(len);
    std::memcpy(out, data_.data() + pos_, len);
    pos_ += len;
  }
  bool done() const { return pos_ == data_.size(); }

 private:
  void need(std::size_t len) const {
    THAG_REQUIRE(data_.size() - pos_ >= len, Errc::kFormat, "truncated message");
  }
  std::uint64_t get_le(int len) {
    need(static_cast<std::size_t>(len));
    std::uint64_t v = 0;
    for (int i = 0; i < len; ++i) v |= static_cast<std::uint64_t>(data_[pos_ + i]) << (8 * i);
    pos_ += static_cast<std::size_t>(len);
    return v;
  }
  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

namespace detail {

inline void put_header(Writer& w, std::uint8_t tag) {
  w.put_raw(kMagic, 4);
  w.put_u16(kVersion);
  w.put_u8(tag);
}

inline std::uint8_t get_header(Reader& r) {
  char magic[4];
  r.raw(magic, 4);
  THAG_REQUIRE(std::memcmp(magic, kMagic, 4) == 0, Errc::kFormat, "bad magic");
  const std::uint16_t version = r.u16();
  THAG_REQUIRE(version == kVersion, Errc::kFormat,
               "unsupported format version " + std::to_string(version));
  return r.u8();
}

inline void put_ring_header(Writer& w, const RingParams& ring) {
  w.put_u32(static_cast<std::uint32_t>(ring.n()));
  w.put_u8(static_cast<std::uint8_t>(ring.limbs()));
  for (u64 p : ring.primes()) w.put_u64(p);
}

inline void get_ring_header(Reader& r, const RingParams& ring) {
  const std::uint32_t n = r.u32();
  const std::uint8_t k = r.u8();
  THAG_REQUIRE(n == ring.n() && k == ring.limbs(), Errc::kParamsMismatch,
               "message ring shape differs from local parameters");
  for (u64 p : ring.primes())
    THAG_REQUIRE(r.u64() == p, Errc::kParamsMismatch, "message prime chain differs");
}

inline void put_element(Writer& w, const RingElement& a) {
  const RingElement c = a.as_coeff();
  // Residues are host u64; the format is little-endian.
  if constexpr (std::endian::native == std::endian::little) {
    w.put_raw(c.residues().data(), c.residues().size() * sizeof(u64));
  } else {
    for (u64 x : c.residues()) w.put_u64(x);
  }
}

inline RingElement get_element(Reader& r, const RingParamsPtr& ring) {
  std::vector<u64> data(ring->n() * ring->limbs());
  if constexpr (std::endian::native == std::endian::little) {
    r.raw(data.data(), data.size() * sizeof(u64));
  } else {
    for (auto& x : data) x = r.u64();
  }
  return RingElement::from_residues(ring, std::move(data));
}

inline std::size_t element_bytes(const RingParams& ring) { return ring.n() * ring.limbs() * 8; }
inline std::size_t ring_header_bytes(const RingParams& ring) { return 5 + 8 * ring.limbs(); }

}  // namespace detail

inline std::size_t ciphertext_size(const RingParams& ring) {
  return 7 + detail::ring_header_bytes(ring) + 2 * detail::element_bytes(ring) + 4;
}

inline std::size_t share_message_size(const RingParams& ring) {
  return 7 + 2 + detail::ring_header_bytes(ring) + detail::element_bytes(ring);
}

inline Bytes encode(const Ciphertext& ct) {
  const RingParams& ring = *ct.c0.params();
  Writer w;
  w.reserve(ciphertext_size(ring));
  detail::put_header(w, static_cast<std::uint8_t>(ct.scheme));
  detail::put_ring_header(w, ring);
  detail::put_element(w, ct.c0);
  detail::put_element(w, ct.c1);
  w.put_u32(ct.adds_consumed);
  return w.take();
}

inline Ciphertext decode_ciphertext(std::span<const std::uint8_t> bytes,
                                    const SchemeParams& params) {
  Reader r(bytes);
  const std::uint8_t tag = detail::get_header(r);
  THAG_REQUIRE(tag == static_cast<std::uint8_t>(Scheme::kBfv) ||
                   tag == static_cast<std::uint8_t>(Scheme::kCkks),
               Errc::kFormat, "unknown scheme tag");
  THAG_REQUIRE(tag == static_cast<std::uint8_t>(params.scheme), Errc::kParamsMismatch,
               "ciphertext scheme differs from local parameters");
  detail::get_ring_header(r, *params.ring);
  Ciphertext ct;
  ct.scheme = params.scheme;
  ct.c0 = detail::get_element(r, params.ring);
  ct.c1 = detail::get_element(r, params.ring);
  ct.adds_consumed = r.u32();
  THAG_REQUIRE(r.done(), Errc::kFormat, "trailing bytes after ciphertext");
  return ct;
}

inline Bytes encode_share_message(Kind kind, std::uint32_t party, const RingElement& a) {
  THAG_REQUIRE(party <= 0xffff, Errc::kInvalidArgument, "party index exceeds u16");
  const RingParams& ring = *a.params();
  Writer w;
  w.reserve(share_message_size(ring));
  detail::put_header(w, static_cast<std::uint8_t>(kind));
  w.put_u16(static_cast<std::uint16_t>(party));
  detail::put_ring_header(w, ring);
  detail::put_element(w, a);
  return w.take();
}

struct ShareMessage {
  Kind kind;
  std::uint32_t party;
  RingElement element;
};

inline ShareMessage decode_share_message(std::span<const std::uint8_t> bytes,
                                         const RingParamsPtr& ring) {
  Reader r(bytes);
  const std::uint8_t tag = detail::get_header(r);
  THAG_REQUIRE(tag >= 0x10 && tag <= 0x12, Errc::kFormat, "unknown message kind");
  ShareMessage m{static_cast<Kind>(tag), r.u16(), RingElement{}};
  detail::get_ring_header(r, *ring);
  m.element = detail::get_element(r, ring);
  THAG_REQUIRE(r.done(), Errc::kFormat, "trailing bytes after message");
  return m;
}

inline Bytes encode(const PkShare& s) {
  return encode_share_message(Kind::kPkShare, s.party, s.p0);
}

inline Bytes encode(const PartialDecryption& p) {
  return encode_share_message(Kind::kPartialDecryption, p.party, p.h);
}

inline PkShare decode_pk_share(std::span<const std::uint8_t> bytes, const RingParamsPtr& ring) {
  ShareMessage m = decode_share_message(bytes, ring);
  THAG_REQUIRE(m.kind == Kind::kPkShare, Errc::kFormat, "not a public-key share");
  return PkShare{m.party, std::move(m.element)};
}

inline PartialDecryption decode_partial(std::span<const std::uint8_t> bytes,
                                        const RingParamsPtr& ring) {
  ShareMessage m = decode_share_message(bytes, ring);
  THAG_REQUIRE(m.kind == Kind::kPartialDecryption, Errc::kFormat, "not a partial decryption");
  return PartialDecryption{m.party, std::move(m.element)};
}

}  // namespace thag::wire
