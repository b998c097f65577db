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

#include "btfuzz/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <set>
#include <sstream>
#include <thread>

#include "btfuzz/error.hpp"

namespace btfuzz {

void check_config(const CampaignConfig& cfg) {
  if (cfg.budget == 0) throw Error(ErrorCode::kInvalidArgument, "budget must be positive");
  if (cfg.patience == 0) throw Error(ErrorCode::kInvalidArgument, "patience must be >= 1");
  if (cfg.eps_n == 0) throw Error(ErrorCode::kInvalidArgument, "eps_n must be >= 1");
  if (!(cfg.mutation_rate >= 0.0 && cfg.mutation_rate <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "mutation rate must lie in [0, 1]");
  }
  if (cfg.bo_starts < 1) throw Error(ErrorCode::kInvalidArgument, "bo_starts must be >= 1");
  if (cfg.gp_max_train < 2) throw Error(ErrorCode::kInvalidArgument, "gp_max_train must be >= 2");
  if (cfg.gp_refit_interval < 1) throw Error(ErrorCode::kInvalidArgument, "gp_refit_interval must be >= 1");
  check_weights(cfg.weights);
}

SimConfig sim_config(const CampaignConfig& cfg) {
  SimConfig sim;
  sim.dt = cfg.dt;
  sim.horizon = cfg.horizon;
  sim.ego_policy = cfg.ego_policy;
  return sim;
}

PointRun run_point(const ConcreteTestScenario& cts, const CampaignConfig& cfg) {
  PointRun pr;
  pr.cts = cts;
  const LogicalScenario bound = bind(cts);
  pr.trace = run(bound, sim_config(cfg));
  pr.fitness = fitness(pr.trace, cfg.weights, cfg.thresholds);
  return pr;
}

LedgerRecord evaluate_point(const LogicalScenario& ls, const std::vector<double>& u,
                            const CampaignConfig& cfg) {
  LedgerRecord r;
  r.u = u;
  try {
    const ConcreteTestScenario cts = sample(ls, u);
    r.values = cts.values;
    r.relative_values = cts.relative_values;
    const PointRun pr = run_point(cts, cfg);
    const SimulationTrace& trace = pr.trace;
    const FitnessResult& f = pr.fitness;
    r.score = f.score;
    r.verdict = f.verdict;
    r.branch = f.branch;
    r.ego_score = f.ego_score;
    r.agent_score = f.agent_score;
    r.dist_score = f.dist_score;
    r.min_dist = trace.min_dist;
    r.min_ttc = trace.min_ttc;
    r.termination = trace.termination;
    for (const auto& e : trace.events) ++r.events[std::string(to_string(e.kind))];
  } catch (const std::exception& e) {
    r.score = cfg.failure_score;
    r.verdict = Verdict::kInvalid;
    r.branch = "error";
    r.error = e.what();
  }
  return r;
}

std::vector<LedgerRecord> evaluate_batch(const LogicalScenario& ls,
                                         const std::vector<std::vector<double>>& points,
                                         const CampaignConfig& cfg) {
  std::vector<LedgerRecord> out(points.size());
  const std::size_t workers = std::clamp<std::size_t>(cfg.workers, 1, std::max<std::size_t>(points.size(), 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < points.size(); ++i) out[i] = evaluate_point(ls, points[i], cfg);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < points.size(); i = next++) {
        out[i] = evaluate_point(ls, points[i], cfg);
      }
    });
  }
  for (auto& t : pool) t.join();
  return out;
}

namespace {

CampaignLedger new_ledger(const LogicalScenario& ls, const CampaignConfig& cfg,
                          std::string algorithm) {
  CampaignLedger ledger;
  ledger.scenario = ls.name;
  ledger.algorithm = std::move(algorithm);
  ledger.seed = cfg.seed;
  ledger.budget = cfg.budget;
  for (const auto& v : ls.variables) ledger.variables.push_back(v.name);
  for (const auto& v : ls.relative_variables) ledger.relative_variables.push_back(v.name);
  return ledger;
}

void append(CampaignLedger& ledger, LedgerRecord r, std::string phase) {
  r.index = ledger.records.size();
  r.phase = std::move(phase);
  ledger.records.push_back(std::move(r));
}

std::size_t require_dimension(const LogicalScenario& ls) {
  const std::size_t n = effective_dimension(ls);
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "scenario has no free variables");
  return n;
}

}  // namespace

CampaignLedger run_campaign(const LogicalScenario& ls, const CampaignConfig& cfg) {
  check_config(cfg);
  const std::size_t n = require_dimension(ls);
  const Algorithm algo = cfg.algorithm.value_or(choose_algorithm(n, cfg.eps_n));
  CampaignLedger ledger = new_ledger(ls, cfg, std::string(to_string(algo)));
  Rng rng(cfg.seed);
  std::size_t since_critical = 0;
  const auto track = [&](const LedgerRecord& r) {
    since_critical = r.verdict == Verdict::kValidCritical ? 0 : since_critical + 1;
  };

  if (algo == Algorithm::kBO) {
    const auto seeds = adaptive_random_search(n, std::min(bo_seed_count(n), cfg.budget), rng);
    for (auto& r : evaluate_batch(ls, seeds, cfg)) append(ledger, std::move(r), "seed");
    BoOptions opt;
    opt.xi = cfg.xi;
    opt.starts = cfg.bo_starts;
    opt.max_train = cfg.gp_max_train;
    BayesOptimizer bo(opt);
    std::size_t calls = 0;
    while (ledger.records.size() < cfg.budget) {
      if (since_critical >= cfg.patience) {
        ledger.stop_reason = "early_stop";
        return ledger;
      }
      std::vector<Point> pts;
      std::vector<double> fit;
      for (const auto& r : ledger.records) {
        pts.push_back(r.u);
        fit.push_back(r.score);
      }
      Point u;
      std::string phase = "bo";
      try {
        u = bo.suggest(pts, fit, rng, calls % cfg.gp_refit_interval == 0);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kDegenerateSurrogate) throw;
        u = adaptive_random_search(n, 1, rng, pts).front();
        phase = "fallback";
      }
      ++calls;
      LedgerRecord r = evaluate_point(ls, u, cfg);
      track(r);
      append(ledger, std::move(r), phase);
    }
  } else {
    const auto init = adaptive_random_search(n, std::min(ga_population_size(n), cfg.budget), rng);
    std::vector<Individual> population;
    for (auto& r : evaluate_batch(ls, init, cfg)) {
      population.push_back({r.u, r.score});
      append(ledger, std::move(r), "seed");
    }
    while (ledger.records.size() < cfg.budget) {
      if (since_critical >= cfg.patience) {
        ledger.stop_reason = "early_stop";
        return ledger;
      }
      std::vector<Point> next = ga_step(population, cfg.mutation_rate, rng);
      std::vector<Point> children(next.begin() + 1, next.end());
      children.resize(std::min(children.size(), cfg.budget - ledger.records.size()));
      std::vector<Individual> successor{*std::max_element(
          population.begin(), population.end(),
          [](const Individual& a, const Individual& b) { return a.fitness < b.fitness; })};
      for (auto& r : evaluate_batch(ls, children, cfg)) {
        successor.push_back({r.u, r.score});
        track(r);
        append(ledger, std::move(r), "ga");
      }
      population = std::move(successor);
    }
  }
  ledger.stop_reason = "budget_exhausted";
  return ledger;
}

CampaignLedger run_grid(const LogicalScenario& ls, std::size_t steps, const CampaignConfig& cfg) {
  check_config(cfg);
  if (steps < 2) throw Error(ErrorCode::kInvalidArgument, "grid needs at least two levels per axis");
  const std::size_t n = require_dimension(ls);
  CampaignLedger ledger = new_ledger(ls, cfg, "grid");
  std::vector<Point> points;
  std::vector<std::size_t> level(n, 0);
  for (;;) {
    Point u(n);
    for (std::size_t d = 0; d < n; ++d) {
      u[d] = static_cast<double>(level[d]) / static_cast<double>(steps - 1);
    }
    points.push_back(std::move(u));
    std::size_t d = n;
    while (d > 0 && ++level[d - 1] == steps) level[--d] = 0;
    if (d == 0) break;
  }
  for (auto& r : evaluate_batch(ls, points, cfg)) append(ledger, std::move(r), "grid");
  ledger.stop_reason = "grid_complete";
  return ledger;
}

CampaignLedger run_random(const LogicalScenario& ls, const CampaignConfig& cfg) {
  check_config(cfg);
  const std::size_t n = require_dimension(ls);
  CampaignLedger ledger = new_ledger(ls, cfg, "random");
  Rng rng(cfg.seed);
  std::vector<Point> points(cfg.budget, Point(n));
  for (auto& p : points) {
    for (double& v : p) v = rng.uniform();
  }
  for (auto& r : evaluate_batch(ls, points, cfg)) append(ledger, std::move(r), "random");
  ledger.stop_reason = "budget_exhausted";
  return ledger;
}

Json to_json(const CampaignConfig& cfg) {
  Json j;
  j["budget"] = cfg.budget;
  j["eps_n"] = cfg.eps_n;
  j["xi"] = cfg.xi;
  j["mutation_rate"] = cfg.mutation_rate;
  j["patience"] = cfg.patience;
  j["seed"] = cfg.seed;
  if (cfg.algorithm) j["algorithm"] = to_string(*cfg.algorithm);
  j["workers"] = cfg.workers;
  j["bo_starts"] = cfg.bo_starts;
  j["gp_max_train"] = cfg.gp_max_train;
  j["gp_refit_interval"] = cfg.gp_refit_interval;
  j["failure_score"] = cfg.failure_score;
  j["dt"] = cfg.dt;
  if (cfg.horizon) j["horizon"] = *cfg.horizon;
  j["weights"] = {{"a", cfg.weights.a},
                  {"b", cfg.weights.b},
                  {"alpha1", cfg.weights.alpha1},
                  {"alpha2", cfg.weights.alpha2},
                  {"alpha3", cfg.weights.alpha3},
                  {"critical_threshold", cfg.weights.critical_threshold}};
  const auto& th = cfg.thresholds;
  j["thresholds"] = {{"line_pressure_warning", th.line_pressure_warning},
                     {"line_pressure_fail", th.line_pressure_fail},
                     {"harsh_warning", th.harsh_warning},
                     {"harsh_fail", th.harsh_fail},
                     {"accel_fail", th.accel_fail},
                     {"min_response_time", th.min_response_time}};
  return j;
}

namespace {

template <typename T>
void read(const Json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("config '") + key + "': " + e.what());
  }
}

const std::set<std::string> kConfigKeys{"budget", "eps_n", "xi", "mutation_rate", "patience",
                                        "seed", "algorithm", "workers", "bo_starts",
                                        "gp_max_train", "gp_refit_interval", "failure_score",
                                        "dt", "horizon", "weights", "thresholds"};

}  // namespace

CampaignConfig campaign_config_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kParseError, "config must be an object");
  for (const auto& [key, _] : j.items()) {
    if (!kConfigKeys.contains(key)) throw Error(ErrorCode::kParseError, "unknown config key '" + key + "'");
  }
  CampaignConfig cfg;
  read(j, "budget", cfg.budget);
  read(j, "eps_n", cfg.eps_n);
  read(j, "xi", cfg.xi);
  read(j, "mutation_rate", cfg.mutation_rate);
  read(j, "patience", cfg.patience);
  read(j, "seed", cfg.seed);
  if (j.contains("algorithm") && !j.at("algorithm").is_null()) {
    std::string a;
    read(j, "algorithm", a);
    cfg.algorithm = algorithm_from_string(a);
  }
  read(j, "workers", cfg.workers);
  read(j, "bo_starts", cfg.bo_starts);
  read(j, "gp_max_train", cfg.gp_max_train);
  read(j, "gp_refit_interval", cfg.gp_refit_interval);
  read(j, "failure_score", cfg.failure_score);
  read(j, "dt", cfg.dt);
  if (j.contains("horizon") && !j.at("horizon").is_null()) {
    double h = 0.0;
    read(j, "horizon", h);
    cfg.horizon = h;
  }
  if (j.contains("weights")) {
    const Json& w = j.at("weights");
    read(w, "a", cfg.weights.a);
    read(w, "b", cfg.weights.b);
    read(w, "alpha1", cfg.weights.alpha1);
    read(w, "alpha2", cfg.weights.alpha2);
    read(w, "alpha3", cfg.weights.alpha3);
    read(w, "critical_threshold", cfg.weights.critical_threshold);
  }
  if (j.contains("thresholds")) {
    const Json& t = j.at("thresholds");
    auto& th = cfg.thresholds;
    read(t, "line_pressure_warning", th.line_pressure_warning);
    read(t, "line_pressure_fail", th.line_pressure_fail);
    read(t, "harsh_warning", th.harsh_warning);
    read(t, "harsh_fail", th.harsh_fail);
    read(t, "accel_fail", th.accel_fail);
    read(t, "min_response_time", th.min_response_time);
  }
  check_config(cfg);
  return cfg;
}

namespace {

Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

double number_or_inf(const Json& j) { return j.is_null() ? kInfinity : j.get<double>(); }

Json record_to_json(const LedgerRecord& r, const CampaignLedger& ledger) {
  Json j;
  j["type"] = "point";
  j["index"] = r.index;
  j["phase"] = r.phase;
  j["u"] = r.u;
  Json values = Json::object();
  for (std::size_t i = 0; i < r.values.size() && i < ledger.variables.size(); ++i) {
    values[ledger.variables[i]] = r.values[i];
  }
  j["values"] = values;
  Json rel = Json::object();
  for (std::size_t i = 0; i < r.relative_values.size() && i < ledger.relative_variables.size(); ++i) {
    rel[ledger.relative_variables[i]] = r.relative_values[i];
  }
  j["relative"] = rel;
  j["score"] = r.score;
  j["verdict"] = to_string(r.verdict);
  j["branch"] = r.branch;
  j["ego_score"] = r.ego_score;
  j["agent_score"] = r.agent_score;
  j["dist_score"] = r.dist_score;
  j["min_dist"] = finite_or_null(r.min_dist);
  j["min_ttc"] = finite_or_null(r.min_ttc);
  j["termination"] = r.termination;
  Json events = Json::object();
  for (const auto& [k, v] : r.events) events[k] = v;
  j["events"] = events;
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

}  // namespace

std::string ledger_to_ndjson(const CampaignLedger& ledger) {
  std::string out;
  Json head;
  head["type"] = "campaign";
  head["scenario"] = ledger.scenario;
  head["algorithm"] = ledger.algorithm;
  head["seed"] = ledger.seed;
  head["budget"] = ledger.budget;
  head["variables"] = ledger.variables;
  head["relative_variables"] = ledger.relative_variables;
  out += head.dump() + "\n";
  for (const auto& r : ledger.records) out += record_to_json(r, ledger).dump() + "\n";
  Json tail;
  tail["type"] = "summary";
  tail["evaluations"] = ledger.records.size();
  tail["stop_reason"] = ledger.stop_reason;
  out += tail.dump() + "\n";
  return out;
}

CampaignLedger ledger_from_ndjson(const std::string& text) {
  CampaignLedger ledger;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const Json j = Json::parse(line);
      const std::string type = j.at("type").get<std::string>();
      if (type == "campaign") {
        header = true;
        ledger.scenario = j.at("scenario").get<std::string>();
        ledger.algorithm = j.at("algorithm").get<std::string>();
        ledger.seed = j.at("seed").get<std::uint64_t>();
        ledger.budget = j.at("budget").get<std::size_t>();
        ledger.variables = j.at("variables").get<std::vector<std::string>>();
        ledger.relative_variables = j.at("relative_variables").get<std::vector<std::string>>();
      } else if (type == "point") {
        LedgerRecord r;
        r.index = j.at("index").get<std::size_t>();
        r.phase = j.at("phase").get<std::string>();
        r.u = j.at("u").get<std::vector<double>>();
        for (const auto& name : ledger.variables) {
          const Json& v = j.at("values");
          if (v.contains(name)) r.values.push_back(v.at(name).get<double>());
        }
        for (const auto& name : ledger.relative_variables) {
          const Json& v = j.at("relative");
          if (v.contains(name)) r.relative_values.push_back(v.at(name).get<double>());
        }
        r.score = j.at("score").get<double>();
        r.verdict = verdict_from_string(j.at("verdict").get<std::string>());
        r.branch = j.at("branch").get<std::string>();
        r.ego_score = j.at("ego_score").get<double>();
        r.agent_score = j.at("agent_score").get<double>();
        r.dist_score = j.at("dist_score").get<double>();
        r.min_dist = number_or_inf(j.at("min_dist"));
        r.min_ttc = number_or_inf(j.at("min_ttc"));
        r.termination = j.at("termination").get<std::string>();
        for (const auto& [k, v] : j.at("events").items()) r.events[k] = v.get<int>();
        if (j.contains("error")) r.error = j.at("error").get<std::string>();
        ledger.records.push_back(std::move(r));
      } else if (type == "summary") {
        ledger.stop_reason = j.at("stop_reason").get<std::string>();
      } else {
        throw Error(ErrorCode::kParseError, "unknown record type '" + type + "'");
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParseError, "ledger line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!header) throw Error(ErrorCode::kParseError, "ledger has no campaign header");
  return ledger;
}

}  // namespace btfuzz
