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

// thag: plan, region, run, bench, selftest.
// Exit codes: 0 ok, 2 configuration or bound rejection, 3 runtime failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "thag/config.hpp"
#include "thag/selftest.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

void write_out(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  THAG_REQUIRE(f.good(), thag::Errc::kConfig, "cannot write " + path);
  f << text;
}

struct Overrides {
  std::string config_path;
  std::vector<std::string> sets;  // section.key=value
  std::string scheme, t, eps_inv, noise_bound;
  std::uint64_t n = 0, parties = 0, seed = 0, model_size = 0;
  long lambda = -1;
  int scale_bits = -1;
  std::uint32_t rounds = 0;
  bool parallel = false, insecure = false;
};

thag::ToolConfig build_config(const Overrides& o) {
  thag::ToolConfig cfg = o.config_path.empty() ? thag::ToolConfig{} : thag::load_config(o.config_path);
  auto set = [&](const char* sec, const char* key, const std::string& v) {
    thag::set_option(cfg, sec, key, v);
  };
  if (!o.scheme.empty()) set("plan", "scheme", o.scheme);
  if (o.n) set("plan", "n", std::to_string(o.n));
  if (o.parties) set("plan", "parties", std::to_string(o.parties));
  if (o.lambda >= 0) set("plan", "lambda", std::to_string(o.lambda));
  if (!o.t.empty()) set("plan", "t", o.t);
  if (!o.eps_inv.empty()) set("plan", "eps_inv", o.eps_inv);
  if (!o.noise_bound.empty()) set("plan", "noise_bound", o.noise_bound);
  if (o.insecure) set("plan", "require_security", "false");
  if (o.seed) set("protocol", "seed", std::to_string(o.seed));
  if (o.model_size) set("protocol", "model_size", std::to_string(o.model_size));
  if (o.scale_bits >= 0) set("protocol", "scale_bits", std::to_string(o.scale_bits));
  if (o.rounds) set("protocol", "rounds", std::to_string(o.rounds));
  if (o.parallel) set("protocol", "parallel", "true");
  for (const auto& s : o.sets) {
    const auto dot = s.find('.');
    const auto eq = s.find('=');
    THAG_REQUIRE(dot != std::string::npos && eq != std::string::npos && dot < eq,
                 thag::Errc::kConfig, "--set expects section.key=value, got '" + s + "'");
    thag::set_option(cfg, s.substr(0, dot), s.substr(dot + 1, eq - dot - 1), s.substr(eq + 1));
  }
  return cfg;
}

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("-c,--config", o.config_path, "INI config file");
  cmd->add_option("--set", o.sets, "override, section.key=value (repeatable)");
  cmd->add_option("--scheme", o.scheme, "bfv or ckks");
  cmd->add_option("--n", o.n, "ring degree");
  cmd->add_option("--parties", o.parties, "number of parties L");
  cmd->add_option("--lambda", o.lambda, "statistical security parameter for smudging");
  cmd->add_option("--t", o.t, "BFV plaintext modulus, integer or 2^k");
  cmd->add_option("--eps-inv", o.eps_inv, "inverse CKKS error margin, number or 2^k");
  cmd->add_option("--noise-bound", o.noise_bound, "noise bound B");
  cmd->add_flag("--insecure", o.insecure, "skip the 128-bit modulus size check");
}

int cmd_plan(const Overrides& o, const std::string& out) {
  thag::ToolConfig cfg = build_config(o);
  thag::PlanInputs in = cfg.protocol.plan;
  if (cfg.scheme_given) in.scheme = cfg.protocol.scheme;
  write_out(out, thag::plan(in).to_text());
  return kExitOk;
}

int cmd_region(const Overrides& o, const std::string& out, const std::string& intervals) {
  thag::ToolConfig cfg = build_config(o);
  const auto& r = cfg.region;
  thag::RegionGrid g = thag::region_grid(cfg.protocol.plan, r.t_lo, r.t_hi, r.eps_lo, r.eps_hi);
  write_out(out, g.to_csv());
  if (!intervals.empty()) {
    thag::IntervalReport rep = thag::interval_approx_check(g.b_ct_mp, r.t_lo, r.t_hi, r.window);
    std::ostringstream os;
    os << "crossover_bits = " << thag::format_double(rep.crossover_bits) << "\n";
    os << "window_bits = " << thag::format_double(rep.window_bits) << "\n";
    os << "max_deviation_outside_window = " << thag::format_double(rep.max_deviation_outside)
       << "\n";
    os << "log2_t,exact_bits,approx_bits,deviation,in_window\n";
    for (const auto& c : rep.columns)
      os << c.t_bits << "," << thag::format_double(c.exact_bits) << ","
         << thag::format_double(c.approx_bits) << "," << thag::format_double(c.deviation) << ","
         << (c.in_window ? 1 : 0) << "\n";
    write_out(intervals, os.str());
  }
  return kExitOk;
}

int cmd_run(const Overrides& o, std::string out, std::string report, std::string aggregate) {
  thag::ToolConfig cfg = build_config(o);
  if (out.empty()) out = cfg.protocol.transcript_path;
  if (report.empty()) report = cfg.protocol.report_path;
  if (aggregate.empty()) aggregate = cfg.protocol.aggregate_path;
  thag::Session s = thag::make_session(cfg.protocol);
  thag::Transcript tr = thag::run_protocol(s);
  write_out(out, tr.to_text());
  if (report.empty()) {
    std::cerr << tr.timing_csv();
  } else {
    write_out(report, tr.timing_csv());
  }
  if (!aggregate.empty()) {
    std::string text;
    for (const auto& r : tr.rounds)
      for (double v : r.aggregate) text += thag::format_double(v) + "\n";
    write_out(aggregate, text);
  }
  if (!tr.ok()) {
    std::cerr << "thag: opened aggregate disagrees with the cleartext oracle\n";
    return kExitRuntime;
  }
  return kExitOk;
}

int cmd_bench(const Overrides& o, const std::string& out) {
  thag::ToolConfig cfg = build_config(o);
  if (o.model_size) cfg.bench.model_size = o.model_size;
  std::ostringstream os;
  os << "scheme,n,parties,model_size,repeat,keygen_s,encryption_s,aggregation_s,decryption_s,"
        "total_s,bytes,ok\n";
  for (std::uint64_t n : cfg.bench.n) {
    for (std::uint64_t L : cfg.bench.parties) {
      thag::ProtocolConfig pc = cfg.protocol;
      pc.plan.n = n;
      pc.plan.parties = L;
      pc.model_size = cfg.bench.model_size;
      thag::Session s = thag::make_session(pc);
      for (std::uint32_t rep = 0; rep < cfg.bench.repeats; ++rep) {
        thag::Transcript tr = thag::run_protocol(s);
        const auto& t = tr.timings;
        os << thag::scheme_name(pc.scheme) << "," << n << "," << L << "," << pc.model_size << ","
           << rep << "," << thag::format_double(t.keygen) << ","
           << thag::format_double(t.encryption) << "," << thag::format_double(t.aggregation)
           << "," << thag::format_double(t.decryption) << "," << thag::format_double(t.total)
           << "," << tr.total_bytes << "," << (tr.ok() ? 1 : 0) << "\n";
      }
    }
  }
  write_out(out, os.str());
  return kExitOk;
}

int cmd_selftest() {
  thag::SelftestReport rep = thag::run_selftest();
  std::cout << rep.to_text();
  return rep.ok() ? kExitOk : kExitRuntime;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"thag: additive threshold BFV/CKKS toolkit and aggregation simulator"};
  app.require_subcommand(1);
  Overrides o;
  std::string out, report, aggregate, intervals;

  auto* plan = app.add_subcommand("plan", "evaluate noise and modulus bounds");
  add_common(plan, o);
  plan->add_option("-o,--out", out, "output file (default stdout)");

  auto* region = app.add_subcommand("region", "MBFV/MCKKS winner grid as CSV");
  add_common(region, o);
  region->add_option("-o,--out", out, "CSV output (default stdout)");
  region->add_option("--intervals", intervals, "also write the piecewise approximation check");

  auto* run = app.add_subcommand("run", "simulate the aggregation protocol");
  add_common(run, o);
  run->add_option("--seed", o.seed, "root seed");
  run->add_option("--model-size", o.model_size, "number of model parameters N");
  run->add_option("--scale-bits", o.scale_bits, "BFV fixed-point bits p");
  run->add_option("--rounds", o.rounds, "protocol rounds reusing keys");
  run->add_flag("--parallel", o.parallel, "run client steps concurrently");
  run->add_option("-o,--out", out, "transcript output (default stdout)");
  run->add_option("--report", report, "timing CSV (default stderr)");
  run->add_option("--aggregate", aggregate, "write the opened average, one value per line");

  auto* bench = app.add_subcommand("bench", "timing sweep as CSV");
  add_common(bench, o);
  bench->add_option("--model-size", o.model_size, "number of model parameters N");
  bench->add_option("-o,--out", out, "CSV output (default stdout)");

  app.add_subcommand("selftest", "run the built-in property checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*plan) return cmd_plan(o, out);
    if (*region) return cmd_region(o, out, intervals);
    if (*run) return cmd_run(o, out, report, aggregate);
    if (*bench) return cmd_bench(o, out);
    return cmd_selftest();
  } catch (const thag::Error& e) {
    std::cerr << "thag: " << e.what() << "\n";
    return e.is_config_rejection() ? kExitConfig : kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "thag: " << e.what() << "\n";
    return kExitRuntime;
  }
}
