/*
 * Copyright 2026 The premeasure Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// premeasure: build stages, schedules and certificates from the command line.
//
// Exit status: 0 success, 2 configuration error, 3 verification violation.

#include <bit>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "premeasure/errors.hpp"
#include "premeasure/mass.hpp"
#include "premeasure/scheduler.hpp"
#include "premeasure/verifier.hpp"
#include "report_json.hpp"

namespace {

using premeasure::report::Json;

constexpr int kExitConfig = 2;
constexpr int kExitViolation = 3;

struct RunConfig {
  std::string adapter = "rational-line";
  std::string basis_file;
  std::uint64_t depth = 3;
  std::uint64_t stages = 0;
  std::uint64_t scan_cap = premeasure::kDefaultScanCap;
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "json";
  std::string epsilon = "1/8";
};

std::vector<premeasure::OpenRegion> read_basis_file(const std::string& path, premeasure::SpaceKind kind) {
  std::ifstream in(path);
  if (!in) throw premeasure::Error(premeasure::ErrorCode::kConfigError, "cannot read basis file " + path);
  std::vector<premeasure::OpenRegion> regions;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    regions.push_back(premeasure::OpenRegion::parse(kind, line));
  }
  return regions;
}

premeasure::Space make_space(const RunConfig& cfg) {
  premeasure::SpaceKind kind;
  if (cfg.adapter == "rational-line" || cfg.adapter == "line") {
    kind = premeasure::SpaceKind::kRationalLine;
  } else if (cfg.adapter == "cantor") {
    kind = premeasure::SpaceKind::kCantor;
  } else {
    throw premeasure::Error(premeasure::ErrorCode::kConfigError, "unknown adapter '" + cfg.adapter + "'");
  }
  std::vector<premeasure::OpenRegion> injected;
  if (!cfg.basis_file.empty()) injected = read_basis_file(cfg.basis_file, kind);
  return kind == premeasure::SpaceKind::kRationalLine ? premeasure::Space::rational_line(std::move(injected))
                                                       : premeasure::Space::cantor(std::move(injected));
}

premeasure::DyadicMass parse_epsilon(const std::string& text) {
  const premeasure::Rational r = premeasure::Rational::parse(text);
  const std::int64_t d = r.denominator();
  if (r.numerator() <= 0 || (d & (d - 1)) != 0) {
    throw premeasure::Error(premeasure::ErrorCode::kConfigError, "epsilon must be a positive dyadic rational, got " + text);
  }
  return {premeasure::BigInt(r.numerator()), static_cast<std::uint64_t>(std::countr_zero(static_cast<std::uint64_t>(d)))};
}

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(cfg.out);
  if (!f) throw premeasure::Error(premeasure::ErrorCode::kConfigError, "cannot write " + cfg.out);
  f << text;
}

void require_json(const RunConfig& cfg, const std::string& command) {
  if (cfg.format != "json") throw premeasure::Error(premeasure::ErrorCode::kConfigError, command + " only writes json");
}

std::string run_build(const RunConfig& cfg, const premeasure::Space& space) {
  std::uint64_t n = cfg.stages;
  if (n == 0) n = space.injected().empty() ? 3 : space.injected().size();
  premeasure::Trace trace(space.kind());
  for (std::uint64_t k = 1; k <= n; ++k) trace.append(space.enumerate(k));
  if (cfg.format == "csv") {
    std::string out = premeasure::report::stage_csv_header();
    for (std::uint64_t k = 1; k <= n; ++k) out += premeasure::report::stage_csv_rows(*trace.stage(k));
    return out;
  }
  Json stages = Json::array();
  for (std::uint64_t k = 1; k <= n; ++k) stages.push_back(premeasure::report::stage_json(*trace.stage(k)));
  return stages.dump(2) + "\n";
}

std::string run_schedule(const RunConfig& cfg, const premeasure::Space& space) {
  const auto run = premeasure::build_schedule(space, cfg.depth, cfg.scan_cap);
  if (cfg.format == "csv") return premeasure::report::schedule_csv(run.schedule);
  return premeasure::report::schedule_json(run.schedule).dump(2) + "\n";
}

std::string run_verify(const RunConfig& cfg, const premeasure::Space& space) {
  require_json(cfg, "verify");
  using namespace premeasure;
  const auto run = build_schedule(space, cfg.depth, cfg.scan_cap);
  const Schedule& sched = run.schedule;
  const Trace& trace = *run.trace;
  Json out;
  out["adapter"] = std::string(space_kind_name(space.kind()));
  out["depth"] = cfg.depth;
  out["seed"] = cfg.seed;
  out["stages"] = trace.size();

  Json boundary = Json::array();
  for (std::uint64_t i = 1; i <= cfg.depth; ++i) boundary.push_back(report::boundary_json(certify_boundary(sched, trace, i, cfg.depth + 1 - i)));
  out["boundary_certificates"] = boundary;

  Json decay = Json::array();
  for (std::uint64_t m = 1; m <= cfg.depth; ++m) {
    decay.push_back({{"m", m}, {"stage", sched.block(1, m).g}, {"max_cell_mass", report::mass_json(certify_max_decay(sched, trace, m))}});
  }
  out["max_decay"] = decay;

  Json additivity = Json::array();
  for (std::uint64_t k = 1; k <= std::min<std::uint64_t>(12, trace.size()); ++k) {
    if (trace.stage(k)->cell_count() < 2) continue;
    const auto rep = check_additivity(*trace.stage(k), 1000, cfg.seed + k);
    additivity.push_back({{"stage", rep.stage}, {"seed", rep.seed}, {"disjoint_pairs", rep.disjoint_pairs},
                          {"boundary_only", rep.boundary_only}, {"covers", rep.covers}});
  }
  out["additivity"] = additivity;

  const auto cons = check_conservation(trace);
  out["conservation"] = {{"steps", cons.steps}, {"splits", cons.splits}, {"grants", cons.grants}, {"resummed_stages", cons.resummed_stages}};
  const auto consistency = check_consistency(trace, 48, 200, cfg.seed);
  out["consistency"] = {{"elements", consistency.elements}, {"evaluations", consistency.evaluations}};
  check_positivity(trace, 50);
  out["positivity"] = {{"checked", std::min<std::uint64_t>(50, trace.size())}};
  out["status"] = "ok";
  return out.dump(2) + "\n";
}

std::string run_partition(const RunConfig& cfg, const premeasure::Space& space) {
  require_json(cfg, "partition");
  const premeasure::DyadicMass eps = parse_epsilon(cfg.epsilon);
  const auto run = premeasure::build_schedule(space, cfg.depth, cfg.scan_cap);
  const auto cert = premeasure::build_partition(run.schedule, *run.trace, eps);
  if (!cert.valid()) {
    throw premeasure::Error(premeasure::ErrorCode::kDecayViolation, "largest piece " + cert.largest_piece.to_string() + " exceeds epsilon");
  }
  return premeasure::report::partition_json(cert, *run.trace).dump(2) + "\n";
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{"Exact finite-stage premeasure construction"};
  app.require_subcommand(1);
  app.add_option("--adapter", cfg.adapter, "rational-line | cantor")->capture_default_str();
  app.add_option("--basis-file", cfg.basis_file, "injected basis regions, one literal per line");
  app.add_option("--depth", cfg.depth, "complete diagonals to build")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--stages", cfg.stages, "stages for build (default: injected count, or 3)");
  app.add_option("--scan-cap", cfg.scan_cap, "basis indices scanned per search")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed, "random seed for sampled checks")->capture_default_str();
  app.add_option("--out", cfg.out, "output path (default: stdout)");
  app.add_option("--format", cfg.format, "json | csv")->capture_default_str()->check(CLI::IsMember({"json", "csv"}));
  auto* build = app.add_subcommand("build", "emit the stage table of the first stages");
  auto* schedule = app.add_subcommand("schedule", "emit the block table");
  auto* verify = app.add_subcommand("verify", "run every verifier suite");
  auto* partition = app.add_subcommand("partition", "emit a partition certificate for epsilon");
  partition->add_option("epsilon", cfg.epsilon, "dyadic epsilon such as 1/8")->capture_default_str();
  for (auto* sub : {build, schedule, verify, partition}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  std::optional<premeasure::Space> space;
  try {
    space.emplace(make_space(cfg));
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    std::string text;
    if (*build) text = run_build(cfg, *space);
    if (*schedule) text = run_schedule(cfg, *space);
    if (*verify) text = run_verify(cfg, *space);
    if (*partition) text = run_partition(cfg, *space);
    emit(cfg, text);
    return 0;
  } catch (const premeasure::Error& e) {
    if (!e.is_violation()) {
      std::cerr << "config error: " << e.what() << "\n";
      return kExitConfig;
    }
    Json artifact = {{"status", "violation"},
                     {"code", std::string(premeasure::error_code_name(e.code()))},
                     {"message", e.what()},
                     {"adapter", cfg.adapter},
                     {"depth", cfg.depth},
                     {"seed", cfg.seed}};
    std::cerr << "violation: " << e.what() << "\n";
    try {
      emit(cfg, artifact.dump(2) + "\n");
    } catch (const std::exception&) {
    }
    return kExitViolation;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
}
