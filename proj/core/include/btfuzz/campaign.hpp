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

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "btfuzz/evaluation.hpp"
#include "btfuzz/fuzzing.hpp"
#include "btfuzz/json_io.hpp"
#include "btfuzz/scenario.hpp"
#include "btfuzz/simulator.hpp"

namespace btfuzz {

struct CampaignConfig {
  std::size_t budget = 500;
  std::size_t eps_n = 10;
  double xi = 5.0;
  double mutation_rate = 0.5;
  /// Search-phase evaluations without a new ValidCritical before stopping.
  std::size_t patience = 50;
  std::uint64_t seed = 1;
  std::optional<Algorithm> algorithm;
  std::size_t workers = 1;
  int bo_starts = 64;
  std::size_t gp_max_train = 200;
  /// GP hyperparameters are refitted every this many BO suggestions.
  std::size_t gp_refit_interval = 5;
  /// Score recorded when a point cannot be bound or simulated.
  double failure_score = -5.0;
  ScoreWeights weights;
  MetricThresholds thresholds;
  double dt = 0.1;
  std::optional<double> horizon;
  /// Not serialized; replaces the baseline ego when set.
  EgoPolicy ego_policy;
};

/// Throws Error(kInvalidArgument) on out-of-range settings.
void check_config(const CampaignConfig& cfg);

struct LedgerRecord {
  std::size_t index = 0;
  /// "seed", "bo", "ga", "fallback" or "grid".
  std::string phase;
  std::vector<double> u;
  std::vector<double> values;
  std::vector<double> relative_values;
  double score = 0.0;
  Verdict verdict = Verdict::kInvalid;
  std::string branch;
  double ego_score = 0.0;
  double agent_score = 0.0;
  double dist_score = 0.0;
  double min_dist = kInfinity;
  double min_ttc = kInfinity;
  std::string termination;
  std::map<std::string, int> events;
  /// Set when binding or simulation failed.
  std::string error;
};

struct CampaignLedger {
  std::string scenario;
  std::string algorithm;
  std::uint64_t seed = 0;
  std::size_t budget = 0;
  std::vector<std::string> variables;
  std::vector<std::string> relative_variables;
  std::vector<LedgerRecord> records;
  /// "budget_exhausted", "early_stop" or "grid_complete".
  std::string stop_reason;
};

SimConfig sim_config(const CampaignConfig& cfg);

struct PointRun {
  ConcreteTestScenario cts;
  SimulationTrace trace;
  FitnessResult fitness;
};

/// Binds, simulates and scores one concrete scenario.
PointRun run_point(const ConcreteTestScenario& cts, const CampaignConfig& cfg);

/// Samples, binds, simulates and scores one unit-cube point. Failures are
/// recorded as Invalid with `cfg.failure_score`.
LedgerRecord evaluate_point(const LogicalScenario& ls, const std::vector<double>& u,
                            const CampaignConfig& cfg);

/// Evaluates `points` with up to `cfg.workers` threads; results keep input order.
std::vector<LedgerRecord> evaluate_batch(const LogicalScenario& ls,
                                         const std::vector<std::vector<double>>& points,
                                         const CampaignConfig& cfg);

/// Throws Error(kInvalidArgument) when the scenario has no free variables.
CampaignLedger run_campaign(const LogicalScenario& ls, const CampaignConfig& cfg);

/// Full factorial design with `steps` levels per axis (0, 1/(steps-1), ..., 1).
CampaignLedger run_grid(const LogicalScenario& ls, std::size_t steps, const CampaignConfig& cfg);

/// Uniform random baseline over the budget.
CampaignLedger run_random(const LogicalScenario& ls, const CampaignConfig& cfg);

Json to_json(const CampaignConfig& cfg);
/// Missing keys keep their defaults. Throws Error(kParseError).
CampaignConfig campaign_config_from_json(const Json& j);

/// Newline-delimited JSON: a campaign header, one record per point, a summary.
std::string ledger_to_ndjson(const CampaignLedger& ledger);
CampaignLedger ledger_from_ndjson(const std::string& text);

}  // namespace btfuzz
