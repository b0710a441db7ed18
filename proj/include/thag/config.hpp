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

// INI-style configuration for the command line tool.
//
//   [plan]      scheme n parties sigma noise_bound lambda t eps_inv b_m require_security
//   [protocol]  model_size seed scale_bits rounds parallel transcript report aggregate
//   [region]    t_lo t_hi eps_lo eps_hi window
//   [bench]     n parties model_size repeats
//   [security]  <n> = <max log2 q>
//
// Unknown sections and keys are rejected. Numbers accept decimals, a/b and 2^k.

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "thag/harness.hpp"

namespace thag {

struct RegionSpec {
  long t_lo = 8, t_hi = 120;
  long eps_lo = 8, eps_hi = 120;
  double window = 2;
};

struct BenchSpec {
  std::vector<std::uint64_t> n = {4096};
  std::vector<std::uint64_t> parties = {2, 4, 8, 16};
  std::uint64_t model_size = 65536;
  std::uint32_t repeats = 3;
};

struct ToolConfig {
  ProtocolConfig protocol;
  RegionSpec region;
  BenchSpec bench;
  bool scheme_given = false;  // plan covers both schemes otherwise
};

namespace config {

inline std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  THAG_REQUIRE(ec == std::errc() && p == v.data() + v.size(), Errc::kConfig,
               key + ": expected a non-negative integer, got '" + v + "'");
  return out;
}

inline long parse_long(const std::string& key, const std::string& v) {
  long out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  THAG_REQUIRE(ec == std::errc() && p == v.data() + v.size(), Errc::kConfig,
               key + ": expected an integer, got '" + v + "'");
  return out;
}

// Decimal, a/b, or 2^k.
inline Rational parse_number(const std::string& key, const std::string& v) {
  if (auto caret = v.find('^'); caret != std::string::npos) {
    THAG_REQUIRE(v.substr(0, caret) == "2", Errc::kConfig, key + ": only powers of 2 allowed");
    const long k = parse_long(key, v.substr(caret + 1));
    THAG_REQUIRE(k >= 0 && k <= 4096, Errc::kConfig, key + ": exponent out of range");
    return Rational(pow2(k));
  }
  try {
    return parse_rational(v);
  } catch (const Error&) {
    throw Error(Errc::kConfig, key + ": malformed number '" + v + "'");
  }
}

inline BigInt parse_integer(const std::string& key, const std::string& v) {
  const Rational r = parse_number(key, v);
  THAG_REQUIRE(r.get_den() == 1, Errc::kConfig, key + ": expected an integer, got '" + v + "'");
  return r.get_num();
}

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
  if (v == "false" || v == "no" || v == "0" || v == "off") return false;
  throw Error(Errc::kConfig, key + ": expected a boolean, got '" + v + "'");
}

inline std::vector<std::uint64_t> parse_list(const std::string& key, const std::string& v) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(' '));
    item.erase(item.find_last_not_of(' ') + 1);
    out.push_back(parse_u64(key, item));
  }
  THAG_REQUIRE(!out.empty(), Errc::kConfig, key + ": empty list");
  return out;
}

inline Scheme parse_scheme(const std::string& v) {
  if (v == "bfv" || v == "BFV" || v == "mbfv" || v == "MBFV") return Scheme::kBfv;
  if (v == "ckks" || v == "CKKS" || v == "mckks" || v == "MCKKS") return Scheme::kCkks;
  throw Error(Errc::kConfig, "scheme: expected bfv or ckks, got '" + v + "'");
}

}  // namespace config

// Sets one key. Used by the file loader and by command line overrides.
inline void set_option(ToolConfig& cfg, const std::string& section, const std::string& key,
                       const std::string& value) {
  using namespace config;
  const std::string name = section + "." + key;
  PlanInputs& plan = cfg.protocol.plan;
  ProtocolConfig& proto = cfg.protocol;
  if (section == "plan") {
    if (key == "scheme") {
      proto.scheme = parse_scheme(value);
      cfg.scheme_given = true;
    } else if (key == "n") {
      plan.n = parse_u64(name, value);
    } else if (key == "parties") {
      plan.parties = parse_u64(name, value);
    } else if (key == "sigma") {
      plan.sigma = parse_number(name, value);
    } else if (key == "noise_bound") {
      plan.noise_bound = parse_number(name, value);
    } else if (key == "lambda") {
      plan.lambda = parse_long(name, value);
    } else if (key == "t") {
      plan.t = parse_integer(name, value);
    } else if (key == "eps_inv") {
      plan.eps_inv = parse_number(name, value);
    } else if (key == "b_m") {
      plan.b_m = parse_number(name, value);
    } else if (key == "require_security") {
      plan.require_security = parse_bool(name, value);
    } else {
      throw Error(Errc::kConfig, "unknown key " + name);
    }
  } else if (section == "protocol") {
    if (key == "model_size") {
      proto.model_size = parse_u64(name, value);
    } else if (key == "seed") {
      proto.seed = parse_u64(name, value);
    } else if (key == "scale_bits") {
      proto.scale_bits = static_cast<int>(parse_long(name, value));
    } else if (key == "rounds") {
      proto.rounds = static_cast<std::uint32_t>(parse_u64(name, value));
    } else if (key == "parallel") {
      proto.parallel = parse_bool(name, value);
    } else if (key == "transcript") {
      proto.transcript_path = value;
    } else if (key == "report") {
      proto.report_path = value;
    } else if (key == "aggregate") {
      proto.aggregate_path = value;
    } else {
      throw Error(Errc::kConfig, "unknown key " + name);
    }
  } else if (section == "region") {
    if (key == "t_lo") cfg.region.t_lo = parse_long(name, value);
    else if (key == "t_hi") cfg.region.t_hi = parse_long(name, value);
    else if (key == "eps_lo") cfg.region.eps_lo = parse_long(name, value);
    else if (key == "eps_hi") cfg.region.eps_hi = parse_long(name, value);
    else if (key == "window") cfg.region.window = parse_number(name, value).get_d();
    else throw Error(Errc::kConfig, "unknown key " + name);
  } else if (section == "bench") {
    if (key == "n") cfg.bench.n = parse_list(name, value);
    else if (key == "parties") cfg.bench.parties = parse_list(name, value);
    else if (key == "model_size") cfg.bench.model_size = parse_u64(name, value);
    else if (key == "repeats") cfg.bench.repeats = static_cast<std::uint32_t>(parse_u64(name, value));
    else throw Error(Errc::kConfig, "unknown key " + name);
  } else if (section == "security") {
    plan.security_overrides[parse_u64(name, key)] = parse_long(name, value);
  } else {
    throw Error(Errc::kConfig, "unknown section [" + section + "]");
  }
}

inline void apply_config_text(ToolConfig& cfg, const std::string& text) {
  boost::property_tree::ptree tree;
  std::istringstream in(text);
  try {
    boost::property_tree::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw Error(Errc::kConfig, e.what());
  }
  for (const auto& [section, body] : tree) {
    THAG_REQUIRE(!body.empty() || body.data().empty(), Errc::kConfig,
                 "key '" + section + "' outside any section");
    for (const auto& [key, value] : body) set_option(cfg, section, key, value.data());
  }
}

inline ToolConfig load_config(const std::string& path) {
  std::ifstream f(path);
  THAG_REQUIRE(f.good(), Errc::kConfig, "cannot read config file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  ToolConfig cfg;
  apply_config_text(cfg, ss.str());
  return cfg;
}

}  // namespace thag
