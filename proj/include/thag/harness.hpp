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

// Simulated private average aggregation: L clients and one aggregator over an
// in-process message bus. Every message is serialized with the wire formats,
// byte-counted, and decoded on the receiving side.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "thag/planner.hpp"
#include "thag/threshold.hpp"
#include "thag/wire.hpp"

namespace thag {

struct ProtocolConfig {
  Scheme scheme = Scheme::kBfv;
  PlanInputs plan = smoke_plan();
  std::uint64_t model_size = 4096;
  std::uint64_t seed = 1;
  int scale_bits = 10;  // BFV fixed point
  std::uint32_t rounds = 1;
  bool parallel = false;
  std::string transcript_path;
  std::string report_path;
  std::string aggregate_path;

  static PlanInputs smoke_plan() {
    PlanInputs in;
    in.n = 1024;
    in.parties = 2;
    in.lambda = 16;
    in.require_security = false;
    return in;
  }
};

struct Session {
  ProtocolConfig config;
  PlanReport plan;
  SchemeParams params;
  std::size_t chunks = 0;

  std::uint64_t parties() const { return params.parties; }
  std::size_t chunk_begin(std::size_t c) const { return c * params.n(); }
  std::size_t chunk_end(std::size_t c) const {
    return std::min<std::size_t>(config.model_size, (c + 1) * params.n());
  }
};

// Plans the modulus for the configured scheme and sets up parameters; any
// rejection happens here, before a protocol step runs.
inline Session make_session(const ProtocolConfig& config) {
  THAG_REQUIRE(config.model_size >= 1, Errc::kConfig, "model_size must be positive");
  THAG_REQUIRE(config.rounds >= 1, Errc::kConfig, "rounds must be positive");
  THAG_REQUIRE(config.plan.parties <= 0xffff, Errc::kConfig, "at most 65535 parties");
  Session s;
  s.config = config;
  PlanInputs in = config.plan;
  in.scheme = config.scheme;
  s.plan = plan(in);
  s.params = params_from_plan(s.plan, config.scheme);
  s.chunks = static_cast<std::size_t>((config.model_size + s.params.n() - 1) / s.params.n());
  if (config.scheme == Scheme::kBfv) {
    // Aggregated fixed-point values must stay inside (-t/2, t/2].
    const Rational reach = Rational(BigInt(static_cast<unsigned long>(s.parties()))) *
                           Rational(pow2(config.scale_bits));
    THAG_REQUIRE(config.scale_bits >= 0 && reach < ratio(s.params.t, 2), Errc::kOverflowRisk,
                 "L * 2^p reaches t/2; lower scale_bits or raise t");
  }
  return s;
}

// ---------------------------------------------------------------- transport

struct MessageRecord {
  std::uint32_t round = 0;
  std::string kind;
  std::string from;
  std::string to;
  std::size_t bytes = 0;
};

class MessageBus {
 public:
  // Records the message and hands the bytes to the receiver.
  wire::Bytes post(std::uint32_t round, std::string kind, std::string from, std::string to,
                   wire::Bytes bytes) {
    total_ += bytes.size();
    records_.push_back(MessageRecord{round, std::move(kind), std::move(from), std::move(to),
                                     bytes.size()});
    return bytes;
  }
  const std::vector<MessageRecord>& records() const { return records_; }
  std::uint64_t total_bytes() const { return total_; }

 private:
  std::vector<MessageRecord> records_;
  std::uint64_t total_ = 0;
};

inline std::string client_name(std::uint32_t i) { return "client" + std::to_string(i); }

// ---------------------------------------------------------------- roles

struct ClientState {
  std::uint32_t index = 0;  // 1-based
  SecretShare share;
  Rng stream = Rng(Rng::Key{});
  std::vector<double> update;
};

// Aggregator state. Holds public material only; tests audit the field types.
struct Aggregator {
  CrsSeed crs_seed{};
  CollectivePublicKey cpk;
  std::vector<Ciphertext> sum;
  std::vector<std::uint32_t> contributors;

  void absorb(const Session& s, std::vector<Ciphertext> list, std::uint32_t client) {
    THAG_REQUIRE(list.size() == s.chunks, Errc::kLengthMismatch,
                 "client submitted " + std::to_string(list.size()) + " ciphertexts, expected " +
                     std::to_string(s.chunks));
    if (contributors.empty()) {
      sum = std::move(list);
    } else {
      for (std::size_t c = 0; c < sum.size(); ++c) sum[c] = add(s.params, sum[c], list[c]);
    }
    contributors.push_back(client);
  }
};

namespace detail {

template <typename F>
void for_each_party(std::size_t count, bool parallel, F&& fn) {
  if (!parallel || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const std::size_t width = std::max(1u, std::thread::hardware_concurrency());
  for (std::size_t start = 0; start < count; start += width) {
    const std::size_t stop = std::min(count, start + width);
    std::vector<std::exception_ptr> errors(stop - start);
    {
      std::vector<std::jthread> threads;
      for (std::size_t i = start; i < stop; ++i)
        threads.emplace_back([&, i] {
          try {
            fn(i);
          } catch (...) {
            errors[i - start] = std::current_exception();
          }
        });
    }
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
}

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace detail

// Stand-in for local training: uniform reals in (-1, 1), pre-divided by L for
// CKKS so the aggregate stays within b_m.
inline std::vector<double> synthetic_update(const Session& s, const ClientState& client,
                                            std::uint32_t round) {
  Rng rng = client.stream.derive("update", round);
  std::vector<double> w(s.config.model_size);
  const double scale = s.config.scheme == Scheme::kCkks ? 1.0 / static_cast<double>(s.parties())
                                                       : 1.0;
  for (auto& v : w) v = (2 * rng.uniform_open01() - 1) * scale;
  return w;
}

struct SetupResult {
  Crs crs;
  std::vector<ClientState> clients;
  Aggregator aggregator;
};

inline SetupResult run_setup(const Session& s, MessageBus* bus = nullptr) {
  const SchemeParams& p = s.params;
  Rng root = Rng::from_seed(s.config.seed);
  SetupResult r;
  CrsSeed seed{};
  root.derive("crs").fill(seed);
  if (bus) bus->post(0, "crs", "setup", "all", wire::Bytes(seed.begin(), seed.end()));
  r.crs = crs_expand(seed, p);
  r.aggregator.crs_seed = seed;

  r.clients.resize(s.parties());
  std::vector<PkShare> pk(s.parties());
  detail::for_each_party(s.parties(), s.config.parallel, [&](std::size_t i) {
    ClientState& c = r.clients[i];
    c.index = static_cast<std::uint32_t>(i + 1);
    c.stream = root.derive("client", c.index);
    Rng share_rng = c.stream.derive("share");
    c.share = gen_share(p, c.index, share_rng);
    Rng pk_rng = c.stream.derive("pk");
    pk[i] = pk_share(p, c.share, r.crs, pk_rng);
  });
  std::vector<PkShare> received;
  for (const auto& m : pk) {
    wire::Bytes b = wire::encode(m);
    if (bus) b = bus->post(0, "pk_share", client_name(m.party), "aggregator", std::move(b));
    received.push_back(wire::decode_pk_share(b, p.ring));
  }
  r.aggregator.cpk = combine_pk(p, received, r.crs);
  if (bus) {
    bus->post(0, "collective_key", "aggregator", "all",
              wire::encode_share_message(wire::Kind::kCollectiveKey, 0, r.aggregator.cpk.p0));
  }
  return r;
}

// One client's input: ceil(N/n) ciphertexts under the collective key.
inline std::vector<Ciphertext> client_input_step(const Session& s, const ClientState& client,
                                                 const CollectivePublicKey& cpk,
                                                 std::uint32_t round) {
  const SchemeParams& p = s.params;
  THAG_REQUIRE(client.update.size() == s.config.model_size, Errc::kLengthMismatch,
               "client update has wrong length");
  const PublicKey pk = cpk.as_public_key().as_ntt();
  Rng rng = client.stream.derive("encrypt", round);
  std::vector<Ciphertext> out;
  out.reserve(s.chunks);
  for (std::size_t c = 0; c < s.chunks; ++c) {
    std::span<const double> w(client.update.data() + s.chunk_begin(c),
                              s.chunk_end(c) - s.chunk_begin(c));
    if (p.scheme == Scheme::kBfv) {
      out.push_back(encrypt(p, pk, encode_fixed(w, s.config.scale_bits, p.t, s.parties()), rng));
    } else {
      out.push_back(encrypt(p, pk, CkksPlaintext{{w.begin(), w.end()}}, rng));
    }
  }
  return out;
}

// Chunk-wise homomorphic sum over all clients' lists.
inline std::vector<Ciphertext> aggregator_eval_step(const Session& s,
                                                    std::vector<std::vector<Ciphertext>> lists) {
  THAG_REQUIRE(!lists.empty(), Errc::kMissingShare, "no client input");
  Aggregator agg;
  for (std::size_t i = 0; i < lists.size(); ++i)
    agg.absorb(s, std::move(lists[i]), static_cast<std::uint32_t>(i + 1));
  return std::move(agg.sum);
}

struct OpenedAggregate {
  std::vector<double> values;       // the average w*
  std::vector<std::int64_t> fixed;  // BFV: opened sum of fixed-point inputs
};

// Collective decryption of every chunk; BFV divides the opened sum by L.
inline OpenedAggregate output_step(const Session& s, const std::vector<Ciphertext>& cts,
                                   const std::vector<ClientState>& clients, std::uint32_t round,
                                   MessageBus* bus = nullptr) {
  const SchemeParams& p = s.params;
  THAG_REQUIRE(cts.size() == s.chunks, Errc::kLengthMismatch, "wrong number of ciphertexts");
  const SmudgeParams smudge = smudge_for(p);
  std::vector<Rng> rngs;
  for (const auto& c : clients) rngs.push_back(c.stream.derive("smudge", round));

  OpenedAggregate out;
  out.values.reserve(s.config.model_size);
  for (std::size_t c = 0; c < s.chunks; ++c) {
    wire::Bytes ct_bytes = wire::encode(cts[c]);
    if (bus) ct_bytes = bus->post(round, "aggregate_ct", "aggregator", "all", std::move(ct_bytes));
    const Ciphertext ct = wire::decode_ciphertext(ct_bytes, p);

    std::vector<PartialDecryption> parts(clients.size());
    detail::for_each_party(clients.size(), s.config.parallel, [&](std::size_t i) {
      parts[i] = partial_decrypt(p, clients[i].share, ct, smudge, rngs[i]);
    });
    std::vector<PartialDecryption> received;
    for (auto& m : parts) {
      wire::Bytes b = wire::encode(m);
      if (bus) b = bus->post(round, "partial_dec", client_name(m.party), "aggregator", std::move(b));
      received.push_back(wire::decode_partial(b, p.ring));
    }
    const BigCoeffs d = combine_decrypt(p, ct, received);
    const std::size_t len = s.chunk_end(c) - s.chunk_begin(c);
    if (p.scheme == Scheme::kBfv) {
      BfvPlaintext m = finalize_bfv(p, d);
      m.values.resize(len);
      std::vector<double> avg = decode_fixed(m.values, s.config.scale_bits, s.parties());
      out.fixed.insert(out.fixed.end(), m.values.begin(), m.values.end());
      out.values.insert(out.values.end(), avg.begin(), avg.end());
    } else {
      CkksDecoded m = finalize_ckks(p, d);
      out.values.insert(out.values.end(), m.values.begin(), m.values.begin() + len);
    }
  }
  if (bus) bus->post(round, "aggregate", "aggregator", "all", wire::Bytes(8 * out.values.size()));
  return out;
}

// ---------------------------------------------------------------- transcript

struct PhaseTimings {
  double keygen = 0;
  double encryption = 0;
  double aggregation = 0;
  double decryption = 0;
  double total = 0;
};

struct RoundOutcome {
  std::vector<double> aggregate;
  double max_error = 0;    // against the cleartext oracle
  bool exact = false;      // BFV: opened sum equals the fixed-point oracle
  bool within_eps = false; // CKKS: max_error < epsilon
  bool ok() const { return exact || within_eps; }
};

struct Transcript {
  Scheme scheme = Scheme::kBfv;
  std::vector<std::pair<std::string, std::string>> header;
  std::vector<MessageRecord> messages;
  std::vector<RoundOutcome> rounds;
  std::uint64_t total_bytes = 0;
  PhaseTimings timings;  // kept out of to_text(); wall clock is not reproducible

  bool ok() const {
    return std::all_of(rounds.begin(), rounds.end(), [](const auto& r) { return r.ok(); });
  }
  std::string to_text() const;
  std::string timing_csv() const;
};

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string digest_of(const std::vector<double>& v) {
  std::vector<std::uint8_t> bytes;
  bytes.reserve(8 * v.size());
  for (double x : v) {
    const auto u = std::bit_cast<std::uint64_t>(x);
    for (int i = 0; i < 8; ++i) bytes.push_back(static_cast<std::uint8_t>(u >> (8 * i)));
  }
  unsigned char h[32];
  crypto_generichash(h, sizeof(h), bytes.data(), bytes.size(), nullptr, 0);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned char c : h) {
    out += hex[c >> 4];
    out += hex[c & 15];
  }
  return out;
}

inline std::string Transcript::to_text() const {
  std::ostringstream os;
  os << "# thag transcript\n";
  for (const auto& [k, v] : header) os << k << " = " << v << "\n";
  os << "\n[messages]\n";
  for (const auto& m : messages)
    os << m.round << " " << m.kind << " " << m.from << " -> " << m.to << " " << m.bytes << "\n";
  os << "total_bytes = " << total_bytes << "\n";
  for (std::size_t r = 0; r < rounds.size(); ++r) {
    const auto& o = rounds[r];
    os << "\n[round " << r << "]\n";
    os << "aggregate_blake2b = " << digest_of(o.aggregate) << "\n";
    os << "aggregate_head =";
    for (std::size_t i = 0; i < std::min<std::size_t>(8, o.aggregate.size()); ++i)
      os << " " << format_double(o.aggregate[i]);
    os << "\n";
    os << "max_error = " << format_double(o.max_error) << "\n";
    if (scheme == Scheme::kBfv) {
      os << "exact = " << (o.exact ? "yes" : "no") << "\n";
    } else {
      os << "within_epsilon = " << (o.within_eps ? "yes" : "no") << "\n";
    }
  }
  return os.str();
}

inline std::string Transcript::timing_csv() const {
  std::ostringstream os;
  os << "phase,seconds\n";
  os << "Col. Key Gen.," << format_double(timings.keygen) << "\n";
  os << "Encryption," << format_double(timings.encryption) << "\n";
  os << "Aggregation," << format_double(timings.aggregation) << "\n";
  os << "Col. Dec.," << format_double(timings.decryption) << "\n";
  os << "Total," << format_double(timings.total) << "\n";
  return os.str();
}

namespace detail {

inline std::vector<std::pair<std::string, std::string>> session_header(const Session& s) {
  const SchemeParams& p = s.params;
  const SchemePlan& sp = s.plan.for_scheme(p.scheme);
  std::vector<std::pair<std::string, std::string>> h = {
      {"format", "1"},
      {"scheme", scheme_name(p.scheme)},
      {"seed", std::to_string(s.config.seed)},
      {"n", std::to_string(p.n())},
      {"parties", std::to_string(p.parties)},
      {"lambda", std::to_string(p.lambda)},
      {"model_size", std::to_string(s.config.model_size)},
      {"chunks", std::to_string(s.chunks)},
      {"rounds", std::to_string(s.config.rounds)},
      {"q_bits", std::to_string(p.ring->log2_q())},
      {"qmin_bits", std::to_string(sp.qmin_bits)},
      {"primes", detail::primes_text(p.ring->primes())},
      {"security_128", sp.security_ok ? "yes" : "no"},
      {"kappa", std::to_string(p.kappa)},
      {"b_ct_mp", to_decimal(p.bounds.b_ct_mp)},
  };
  if (p.scheme == Scheme::kBfv) {
    h.emplace_back("t", p.t.get_str());
    h.emplace_back("scale_bits", std::to_string(s.config.scale_bits));
  } else {
    h.emplace_back("delta", p.delta.get_str());
    h.emplace_back("epsilon", format_double(p.epsilon().get_d()));
  }
  return h;
}

inline RoundOutcome check_round(const Session& s, const std::vector<ClientState>& clients,
                                OpenedAggregate opened) {
  RoundOutcome o;
  const std::size_t N = s.config.model_size;
  if (s.params.scheme == Scheme::kBfv) {
    // Cleartext fixed-point oracle: integer sum of round(2^p w).
    std::vector<std::int64_t> sum(N, 0);
    for (const auto& c : clients)
      for (std::size_t j = 0; j < N; ++j)
        sum[j] += static_cast<std::int64_t>(
            std::floor(std::ldexp(c.update[j], s.config.scale_bits) + 0.5));
    o.exact = opened.fixed == sum;
    const double denom = std::ldexp(static_cast<double>(s.parties()), s.config.scale_bits);
    for (std::size_t j = 0; j < N; ++j)
      o.max_error = std::max(o.max_error,
                             std::fabs(opened.values[j] - static_cast<double>(sum[j]) / denom));
  } else {
    for (std::size_t j = 0; j < N; ++j) {
      double ref = 0;
      for (const auto& c : clients) ref += c.update[j];
      o.max_error = std::max(o.max_error, std::fabs(opened.values[j] - ref));
    }
    o.within_eps = o.max_error < s.params.epsilon().get_d();
  }
  o.aggregate = std::move(opened.values);
  return o;
}

}  // namespace detail

inline Transcript run_protocol(const Session& s) {
  using clock = std::chrono::steady_clock;
  Transcript tr;
  tr.scheme = s.params.scheme;
  tr.header = detail::session_header(s);
  MessageBus bus;
  const auto start = clock::now();

  auto t0 = clock::now();
  SetupResult setup = run_setup(s, &bus);
  tr.timings.keygen = detail::seconds_since(t0);
  double checking = 0;

  const std::size_t L = setup.clients.size();
  const std::size_t width =
      s.config.parallel ? std::max(1u, std::thread::hardware_concurrency()) : 1;
  for (std::uint32_t round = 0; round < s.config.rounds; ++round) {
    for (auto& c : setup.clients) c.update = synthetic_update(s, c, round);
    setup.aggregator.sum.clear();
    setup.aggregator.contributors.clear();

    // Clients encrypt in batches; the aggregator absorbs in client order.
    for (std::size_t start_i = 0; start_i < L; start_i += width) {
      const std::size_t stop = std::min(L, start_i + width);
      std::vector<std::vector<wire::Bytes>> sent(stop - start_i);
      t0 = clock::now();
      detail::for_each_party(stop - start_i, s.config.parallel, [&](std::size_t k) {
        const ClientState& c = setup.clients[start_i + k];
        for (auto& ct : client_input_step(s, c, setup.aggregator.cpk, round))
          sent[k].push_back(wire::encode(ct));
      });
      tr.timings.encryption += detail::seconds_since(t0);

      t0 = clock::now();
      for (std::size_t k = 0; k < sent.size(); ++k) {
        const std::uint32_t who = setup.clients[start_i + k].index;
        std::vector<Ciphertext> list;
        for (auto& b : sent[k]) {
          b = bus.post(round, "ciphertext", client_name(who), "aggregator", std::move(b));
          list.push_back(wire::decode_ciphertext(b, s.params));
          b = wire::Bytes{};
        }
        setup.aggregator.absorb(s, std::move(list), who);
      }
      tr.timings.aggregation += detail::seconds_since(t0);
    }

    t0 = clock::now();
    OpenedAggregate opened = output_step(s, setup.aggregator.sum, setup.clients, round, &bus);
    tr.timings.decryption += detail::seconds_since(t0);

    t0 = clock::now();
    tr.rounds.push_back(detail::check_round(s, setup.clients, std::move(opened)));
    checking += detail::seconds_since(t0);
  }
  tr.timings.total = detail::seconds_since(start) - checking;
  tr.messages = bus.records();
  tr.total_bytes = bus.total_bytes();
  return tr;
}

inline Transcript run_protocol(const ProtocolConfig& config) {
  return run_protocol(make_session(config));
}

}  // namespace thag
