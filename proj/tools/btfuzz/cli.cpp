// Copyright 2026 The btfuzz Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "btfuzz/analyzer.hpp"
#include "btfuzz/campaign.hpp"
#include "btfuzz/error.hpp"
#include "btfuzz/json_io.hpp"
#include "btfuzz/log2bt.hpp"
#include "btfuzz/scenario.hpp"
#include "btfuzz/trajectory_io.hpp"

namespace btfuzz::cli {

namespace fs = std::filesystem;

namespace {

struct DimensionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NoVariablesError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::kDegeneratePath:
    case ErrorCode::kPointOffPath:
    case ErrorCode::kOutOfRange:
    case ErrorCode::kTooFewStates:
    case ErrorCode::kEmptyOverlap:
      return kProjection;
    case ErrorCode::kParseError:
    case ErrorCode::kIoError:
    case ErrorCode::kDanglingReference:
    case ErrorCode::kDomainError:
    case ErrorCode::kUnresolvedTarget:
    case ErrorCode::kUnknownParticipant:
    case ErrorCode::kUnknownProperty:
    case ErrorCode::kEmptyDistribution:
    case ErrorCode::kInvalidArgument:
      return kParse;
    default:
      return kFailure;
  }
}

void setup_logging() {
  auto logger = spdlog::get("btfuzz");
  if (!logger) {
    logger = spdlog::stderr_logger_mt("btfuzz");
    logger->set_pattern("[%l] %v");
  }
  spdlog::set_default_logger(logger);
  spdlog::level::level_enum level = spdlog::level::warn;
  if (const char* env = std::getenv("BTF_LOG")) level = spdlog::level::from_str(env);
  spdlog::set_level(level);
}

std::string fixed(double v, int digits = 4) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(digits) << v;
  return ss.str();
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (used == 0 || used != item.size()) {
      throw Error(ErrorCode::kParseError, "bad number '" + item + "'");
    }
    out.push_back(v);
  }
  return out;
}

CampaignConfig load_config(const std::string& path) {
  if (path.empty()) return {};
  return campaign_config_from_json(read_json_file(path));
}

void print_metrics(std::ostream& out, const CampaignMetrics& m) {
  out << "total " << m.total << "\ncritical " << m.critical << "\nnon_critical " << m.non_critical
      << "\ninvalid " << m.invalid << "\ntypes " << m.types << "\nCR " << fixed(m.cr) << "\nIR "
      << fixed(m.ir) << "\nTR " << fixed(m.tr) << "\n";
}

struct Log2btArgs {
  std::string log;
  std::string map;
  std::string out;
  bool semantic = true;
  std::optional<double> eps_part;
  std::optional<double> eps_lat;
  std::optional<double> eps_vel;
  std::string ego = "ego";
  std::string emit_ls;
  double lo_q = 0.05;
  double hi_q = 0.95;
};

int cmd_log2bt(const Log2btArgs& a, std::ostream& out) {
  const auto logs = read_log_csv(a.log);
  auto map = std::make_shared<const LaneMap>(load_map(a.map));
  ConvertOptions opt;
  if (a.eps_part) opt.partition.eps_part = *a.eps_part;
  if (a.eps_lat) opt.partition.eps_lat = *a.eps_lat;
  if (a.eps_vel) opt.partition.eps_vel = *a.eps_vel;
  opt.semantic = a.semantic;
  opt.ego = a.ego;
  opt.name = fs::path(a.log).stem().string();
  const fs::path out_path(a.out);
  opt.map_ref = fs::relative(fs::absolute(a.map), fs::absolute(out_path).parent_path()).generic_string();
  spdlog::info("converting {} logs from {}", logs.size(), a.log);
  LogConversion conv = convert_log(logs, map, opt);

  if (!a.emit_ls.empty()) {
    const Json spec = read_json_file(a.emit_ls);
    std::vector<GeneralizeSpec> specs;
    try {
      for (const auto& v : spec.at("variables")) {
        specs.push_back({v.at("name").get<std::string>(), v.at("target").get<std::string>(),
                         v.at("samples").get<std::vector<double>>()});
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParseError, a.emit_ls + ": " + e.what());
    }
    conv.scenario = generalize(conv.scenario, specs, a.lo_q, a.hi_q);
  }

  if (out_path.has_parent_path()) fs::create_directories(out_path.parent_path());
  save_scenario(out_path, conv.scenario);
  for (const auto& ag : conv.agents) {
    out << "agent " << ag.id << " lane " << ag.lane << " samples " << ag.samples << " segments "
        << ag.segments;
    for (const auto& [kind, n] : ag.kinds) out << " " << kind << "=" << n;
    out << "\n  ADE_s " << fixed(ag.error.ade_s) << " ADE_l " << fixed(ag.error.ade_l)
        << " compression " << fixed(ag.compression, 1) << "\n";
  }
  out << "wrote " << out_path.string() << "\n";
  return kOk;
}

struct FuzzArgs {
  std::string scenario;
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
  std::optional<std::size_t> budget;
  std::string algorithm;
};

int cmd_fuzz(const FuzzArgs& a, std::ostream& out) {
  const LogicalScenario ls = load_scenario(a.scenario);
  CampaignConfig cfg = load_config(a.config);
  if (a.seed) cfg.seed = *a.seed;
  if (a.workers) cfg.workers = *a.workers;
  if (a.budget) cfg.budget = *a.budget;
  if (!a.algorithm.empty()) cfg.algorithm = algorithm_from_string(a.algorithm);
  if (effective_dimension(ls) == 0) throw NoVariablesError("scenario has no free variables");
  spdlog::info("fuzzing {} with budget {} seed {}", ls.name, cfg.budget, cfg.seed);
  const CampaignLedger ledger = run_campaign(ls, cfg);
  const fs::path dir(a.out);
  fs::create_directories(dir);
  write_text_file(dir / "ledger.ndjson", ledger_to_ndjson(ledger));
  write_text_file(dir / "config.json", canonical_dump(to_json(cfg)));
  out << "algorithm " << ledger.algorithm << "\nstop " << ledger.stop_reason << "\n";
  print_metrics(out, campaign_metrics(ledger));
  out << "wrote " << (dir / "ledger.ndjson").string() << "\n";
  return kOk;
}

struct ReplayArgs {
  std::string scenario;
  std::string values;
  std::string ledger;
  std::optional<std::size_t> record;
  std::string config;
  std::string out;
};

int cmd_replay(const ReplayArgs& a, std::ostream& out) {
  const LogicalScenario ls = load_scenario(a.scenario);
  const CampaignConfig cfg = load_config(a.config);
  const std::size_t n = effective_dimension(ls);
  ConcreteTestScenario cts;
  std::optional<LedgerRecord> stored;
  if (!a.ledger.empty()) {
    if (!a.record) throw Error(ErrorCode::kParseError, "--ledger needs --record");
    const CampaignLedger ledger = ledger_from_ndjson(read_text_file(a.ledger));
    for (const auto& r : ledger.records) {
      if (r.index == *a.record) stored = r;
    }
    if (!stored) throw Error(ErrorCode::kParseError, "no record " + std::to_string(*a.record));
    if (stored->u.size() != n) {
      throw DimensionError("record has " + std::to_string(stored->u.size()) + " values, scenario has " +
                           std::to_string(n) + " variables");
    }
    cts = sample(ls, stored->u);
  } else {
    const std::vector<double> values = parse_list(a.values);
    if (values.size() != n) {
      throw DimensionError("got " + std::to_string(values.size()) + " values, scenario has " +
                           std::to_string(n) + " variables");
    }
    cts = make_cts(ls, values);
  }
  const PointRun pr = run_point(cts, cfg);
  const FitnessResult& f = pr.fitness;

  const fs::path dir(a.out);
  fs::create_directories(dir);
  for (const auto& id : pr.trace.participants()) {
    write_text_file(dir / ("trace_" + id + ".csv"), trace_agent_csv(pr.trace, id));
  }
  write_text_file(dir / "events.json", canonical_dump(events_to_json(pr.trace)));

  for (std::size_t i = 0; i < ls.variables.size() && i < cts.values.size(); ++i) {
    out << ls.variables[i].name << " = " << fixed(cts.values[i]) << "\n";
  }
  out << "branch " << f.branch << "\nverdict " << to_string(f.verdict) << "\nscore "
      << fixed(f.score, 6) << "\nego_score " << fixed(f.ego_score, 2) << "\nagent_score "
      << fixed(f.agent_score, 2) << "\ndist_score " << fixed(f.dist_score, 6) << "\nmin_dist "
      << fixed(pr.trace.min_dist) << "\ntermination " << pr.trace.termination << "\n";
  for (const auto& e : pr.trace.events) {
    out << "event " << to_string(e.kind) << " t=" << fixed(e.time, 2);
    for (const auto& p : e.participants) out << " " << p;
    out << "\n";
  }
  if (stored) {
    const bool same = stored->score == f.score && stored->verdict == f.verdict;
    out << "ledger score " << fixed(stored->score, 6) << (same ? " (reproduced)" : " (differs)") << "\n";
  }
  return kOk;
}

struct ReportArgs {
  std::string ledger;
  std::string out;
  std::optional<std::size_t> k;
  std::string projection;
};

int cmd_report(const ReportArgs& a, std::ostream& out) {
  const CampaignLedger ledger = ledger_from_ndjson(read_text_file(a.ledger));
  ReportOptions opt;
  opt.k = a.k;
  if (!a.projection.empty()) {
    const auto axes = parse_list(a.projection);
    if (axes.size() != 3) throw Error(ErrorCode::kParseError, "--projection needs 3 indices");
    for (std::size_t i = 0; i < 3; ++i) opt.projection[i] = static_cast<std::size_t>(axes[i]);
  }
  const ReportBundle bundle = report(ledger, a.out, opt);
  print_metrics(out, bundle.metrics);
  if (bundle.clustering) {
    for (const auto& t : bundle.clustering->types) {
      out << "type " << t.id + 1 << " size " << t.members.size() << " root cause";
      if (t.root_cause.empty()) out << " -";
      for (const std::size_t d : t.root_cause) {
        out << " " << (d < ledger.variables.size() ? ledger.variables[d] : std::to_string(d));
      }
      out << "\n";
    }
  }
  for (const auto& note : bundle.notes) out << "note: " << note << "\n";
  for (const auto& f : bundle.files) out << "wrote " << f.string() << "\n";
  return kOk;
}

int cmd_validate(const std::string& path, std::ostream& out) {
  const LogicalScenario ls = load_scenario(path);
  const auto diags = validate_scenario(ls);
  for (const auto& d : diags) out << d.code << " " << d.node << ": " << d.message << "\n";
  if (!diags.empty()) return kParse;
  out << "ok: " << ls.agents.size() << " agents, " << ls.variables.size() << " variables, "
      << ls.relative_variables.size() << " relative variables\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  setup_logging();
  CLI::App app{"Behavior-tree scenario fuzzing for automated driving"};
  app.require_subcommand(1);

  Log2btArgs l2b;
  auto* log2bt = app.add_subcommand("log2bt", "Convert a driving log into a scenario");
  log2bt->add_option("log", l2b.log, "CSV log (id,t,x,y,z)")->required();
  log2bt->add_option("--map", l2b.map, "Lane map JSON")->required();
  log2bt->add_option("--out", l2b.out, "Scenario file to write")->required();
  log2bt->add_option("--semantic", l2b.semantic, "Emit semantic leaves (false: follow_log only)");
  log2bt->add_option("--eps-part", l2b.eps_part, "Partition cost threshold");
  log2bt->add_option("--eps-lat", l2b.eps_lat, "Lateral change threshold for change_lane");
  log2bt->add_option("--eps-vel", l2b.eps_vel, "Speed change threshold for cruise");
  log2bt->add_option("--ego", l2b.ego, "Log id of the ego vehicle");
  log2bt->add_option("--emit-ls", l2b.emit_ls, "Distribution file; adds generalized variables");
  log2bt->add_option("--lo-q", l2b.lo_q, "Lower quantile for generalized ranges");
  log2bt->add_option("--hi-q", l2b.hi_q, "Upper quantile for generalized ranges");

  FuzzArgs fz;
  auto* fuzz = app.add_subcommand("fuzz", "Run a fuzzing campaign");
  fuzz->add_option("scenario", fz.scenario, "Scenario JSON")->required();
  fuzz->add_option("--config", fz.config, "Campaign config JSON");
  fuzz->add_option("--out", fz.out, "Output directory")->required();
  fuzz->add_option("--seed", fz.seed, "Random seed");
  fuzz->add_option("--workers", fz.workers, "Parallel simulations");
  fuzz->add_option("--budget", fz.budget, "Maximum evaluations");
  fuzz->add_option("--algorithm", fz.algorithm, "Force bo or ga")->check(CLI::IsMember({"bo", "ga"}));

  ReplayArgs rp;
  auto* replay = app.add_subcommand("replay", "Simulate one concrete scenario");
  replay->add_option("scenario", rp.scenario, "Scenario JSON")->required();
  auto* values = replay->add_option("--values", rp.values, "Comma-separated variable values");
  auto* ledger = replay->add_option("--ledger", rp.ledger, "Ledger to take a record from");
  replay->add_option("--record", rp.record, "Record index in the ledger");
  replay->add_option("--config", rp.config, "Campaign config JSON");
  replay->add_option("--out", rp.out, "Output directory")->required();
  values->excludes(ledger);
  ledger->excludes(values);
  replay->require_option(1, 0);

  ReportArgs rep;
  auto* rpt = app.add_subcommand("report", "Analyze a campaign ledger");
  rpt->add_option("ledger", rep.ledger, "Ledger NDJSON")->required();
  rpt->add_option("--out", rep.out, "Report directory")->required();
  rpt->add_option("--k", rep.k, "Force the number of violation types")->check(CLI::PositiveNumber);
  rpt->add_option("--projection", rep.projection, "Three variable indices for the 3D plot");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check a scenario file");
  validate->add_option("scenario", validate_path, "Scenario JSON")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kOk : kParse;
  }

  try {
    if (*log2bt) return cmd_log2bt(l2b, out);
    if (*fuzz) return cmd_fuzz(fz, out);
    if (*replay) {
      if (rp.values.empty() && rp.ledger.empty()) {
        err << "replay needs --values or --ledger\n";
        return kParse;
      }
      return cmd_replay(rp, out);
    }
    if (*rpt) return cmd_report(rep, out);
    if (*validate) return cmd_validate(validate_path, out);
  } catch (const DimensionError& e) {
    err << "error: " << e.what() << "\n";
    return kDimension;
  } catch (const NoVariablesError& e) {
    err << "error: " << e.what() << "\n";
    return kNoVariables;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return code_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}

}  // namespace btfuzz::cli
