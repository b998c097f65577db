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

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "btfuzz/simulator.hpp"

namespace btfuzz {

enum class MetricId { kCollision, kLinePressure, kAggressiveDriving, kOffRoad };
enum class VerdictState { kSuccess, kWarning, kFail };

std::string_view to_string(MetricId id);
std::string_view to_string(VerdictState state);

struct MetricVerdict {
  MetricId metric = MetricId::kCollision;
  VerdictState state = VerdictState::kSuccess;
  /// Indices into SimulationTrace::events.
  std::vector<std::size_t> evidence;
};

struct MetricThresholds {
  double line_pressure_warning = 3.0;
  double line_pressure_fail = 6.0;
  int harsh_warning = 1;
  int harsh_fail = 3;
  double accel_fail = 6.0;
  /// Cut-ins whose collision follows the encroachment sooner than this
  /// leave the ego no feasible response.
  double min_response_time = 0.5;
};

struct ScoreWeights {
  double a = -0.2;
  double b = 5.0;
  double alpha1 = 1.0;
  double alpha2 = -1.0;
  double alpha3 = 0.2;
  double critical_threshold = 5.0;
};

/// Throws Error(kInvalidArgument) on violated sign constraints
/// (a < 0, alpha1 > 0, alpha2 < 0, alpha3 > 0).
void check_weights(const ScoreWeights& w);

/// One verdict per metric in MetricId order. Throws Error(kUnknownParticipant).
std::vector<MetricVerdict> evaluate_metrics(const SimulationTrace& trace,
                                            const std::string& participant,
                                            const MetricThresholds& th = {});

/// 0 / 2 / 5 for success / warning / fail.
double verdict_score(VerdictState state);
double participant_score(std::span<const MetricVerdict> verdicts);

/// max(0, a * min_dist + b); an infinite distance scores 0.
double distance_score(double min_dist, const ScoreWeights& w);

/// Whether the ego caused the collision. Throws Error(kNotEgoCollision)
/// unless `event` is a collision carrying ego collision info.
bool is_responsibility(const Event& event, const MetricThresholds& th = {});

enum class Verdict { kValidCritical, kValidNonCritical, kInvalid };

std::string_view to_string(Verdict v);
Verdict verdict_from_string(std::string_view text);

/// Everything the scoring rule looks at, separated from the trace so that
/// it can be checked independently.
struct FitnessInputs {
  std::vector<VerdictState> ego;
  /// One verdict list per non-ego agent.
  std::vector<std::vector<VerdictState>> agents;
  bool agent_unreasonable = false;
  bool ego_collision = false;
  bool ego_responsible = false;
  double min_dist = kInfinity;
};

struct FitnessResult {
  double score = 0.0;
  Verdict verdict = Verdict::kValidNonCritical;
  double ego_score = 0.0;
  /// Sum over the non-ego agents.
  double agent_score = 0.0;
  double dist_score = 0.0;
  std::map<std::string, double> participant_scores;
  bool ego_collision = false;
  bool responsibility = false;
  /// "unreasonable_agent", "ego_responsible" or "weighted".
  std::string branch;
};

FitnessResult score_inputs(const FitnessInputs& in, const ScoreWeights& w = {});

/// Builds the inputs from `trace` and scores them.
FitnessInputs fitness_inputs(const SimulationTrace& trace, const MetricThresholds& th = {});
FitnessResult fitness(const SimulationTrace& trace, const ScoreWeights& w = {},
                      const MetricThresholds& th = {});

}  // namespace btfuzz
