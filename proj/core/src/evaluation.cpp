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

#include "btfuzz/evaluation.hpp"

#include <algorithm>
#include <cmath>

#include "btfuzz/error.hpp"

namespace btfuzz {

std::string_view to_string(MetricId id) {
  switch (id) {
    case MetricId::kCollision: return "collision";
    case MetricId::kLinePressure: return "line_pressure";
    case MetricId::kAggressiveDriving: return "aggressive_driving";
    case MetricId::kOffRoad: return "off_road";
  }
  return "collision";
}

std::string_view to_string(VerdictState state) {
  switch (state) {
    case VerdictState::kSuccess: return "success";
    case VerdictState::kWarning: return "warning";
    case VerdictState::kFail: return "fail";
  }
  return "success";
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::kValidCritical: return "ValidCritical";
    case Verdict::kValidNonCritical: return "ValidNonCritical";
    case Verdict::kInvalid: return "Invalid";
  }
  return "Invalid";
}

Verdict verdict_from_string(std::string_view text) {
  if (text == "ValidCritical") return Verdict::kValidCritical;
  if (text == "ValidNonCritical") return Verdict::kValidNonCritical;
  if (text == "Invalid") return Verdict::kInvalid;
  throw Error(ErrorCode::kParseError, "unknown verdict '" + std::string(text) + "'");
}

void check_weights(const ScoreWeights& w) {
  if (!(w.a < 0.0) || !(w.alpha1 > 0.0) || !(w.alpha2 < 0.0) || !(w.alpha3 > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "weights need a < 0, alpha1 > 0, alpha2 < 0, alpha3 > 0");
  }
}

namespace {

bool involves(const Event& e, const std::string& id) {
  return std::find(e.participants.begin(), e.participants.end(), id) != e.participants.end();
}

}  // namespace

std::vector<MetricVerdict> evaluate_metrics(const SimulationTrace& trace,
                                            const std::string& participant,
                                            const MetricThresholds& th) {
  const auto ids = trace.participants();
  if (std::find(ids.begin(), ids.end(), participant) == ids.end()) {
    throw Error(ErrorCode::kUnknownParticipant, participant);
  }
  MetricVerdict collision{MetricId::kCollision, VerdictState::kSuccess, {}};
  MetricVerdict line{MetricId::kLinePressure, VerdictState::kSuccess, {}};
  MetricVerdict aggressive{MetricId::kAggressiveDriving, VerdictState::kSuccess, {}};
  MetricVerdict off_road{MetricId::kOffRoad, VerdictState::kSuccess, {}};
  const auto raise = [](MetricVerdict& v, VerdictState s) {
    if (static_cast<int>(s) > static_cast<int>(v.state)) v.state = s;
  };

  int harsh = 0;
  for (std::size_t i = 0; i < trace.events.size(); ++i) {
    const Event& e = trace.events[i];
    // Obstacle ids share the participant list; only the agent slot counts.
    const bool mine = e.with_obstacle ? e.participants.front() == participant
                                      : involves(e, participant);
    if (!mine) continue;
    switch (e.kind) {
      case EventKind::kCollision:
        raise(collision, VerdictState::kFail);
        collision.evidence.push_back(i);
        break;
      case EventKind::kOffRoad:
        raise(off_road, VerdictState::kFail);
        off_road.evidence.push_back(i);
        break;
      case EventKind::kLinePressure:
        if (e.duration >= th.line_pressure_fail) {
          raise(line, VerdictState::kFail);
          line.evidence.push_back(i);
        } else if (e.duration >= th.line_pressure_warning) {
          raise(line, VerdictState::kWarning);
          line.evidence.push_back(i);
        }
        break;
      case EventKind::kHarshEpisode:
        ++harsh;
        aggressive.evidence.push_back(i);
        break;
    }
  }
  if (harsh >= th.harsh_fail) {
    raise(aggressive, VerdictState::kFail);
  } else if (harsh >= th.harsh_warning) {
    raise(aggressive, VerdictState::kWarning);
  }
  for (const auto& frame : trace.frames) {
    for (const auto& a : frame.agents) {
      if (a.id == participant && std::abs(a.accel) > th.accel_fail) raise(aggressive, VerdictState::kFail);
    }
  }
  return {collision, line, aggressive, off_road};
}

double verdict_score(VerdictState state) {
  switch (state) {
    case VerdictState::kSuccess: return 0.0;
    case VerdictState::kWarning: return 2.0;
    case VerdictState::kFail: return 5.0;
  }
  return 0.0;
}

double participant_score(std::span<const MetricVerdict> verdicts) {
  double sum = 0.0;
  for (const auto& v : verdicts) sum += verdict_score(v.state);
  return sum;
}

double distance_score(double min_dist, const ScoreWeights& w) {
  if (!std::isfinite(min_dist)) return 0.0;
  return std::max(0.0, w.a * std::max(min_dist, 0.0) + w.b);
}

bool is_responsibility(const Event& event, const MetricThresholds& th) {
  if (event.kind != EventKind::kCollision || !event.collision) {
    throw Error(ErrorCode::kNotEgoCollision, "event does not involve the ego");
  }
  const CollisionInfo& c = *event.collision;
  if (c.other_is_obstacle) return true;
  if (c.ego_changing_lane) return true;
  if (c.longitudinal_offset < 0.0) return false;
  if (c.encroachment_time && event.time - *c.encroachment_time < th.min_response_time) return false;
  return true;
}

FitnessResult score_inputs(const FitnessInputs& in, const ScoreWeights& w) {
  FitnessResult r;
  for (const auto s : in.ego) r.ego_score += verdict_score(s);
  for (const auto& agent : in.agents) {
    for (const auto s : agent) r.agent_score += verdict_score(s);
  }
  r.dist_score = distance_score(in.min_dist, w);
  r.ego_collision = in.ego_collision;
  r.responsibility = in.ego_collision && in.ego_responsible;
  if (in.agent_unreasonable) {
    r.score = -r.agent_score;
    r.verdict = Verdict::kInvalid;
    r.branch = "unreasonable_agent";
  } else if (r.responsibility) {
    r.score = r.ego_score;
    r.verdict = Verdict::kValidCritical;
    r.branch = "ego_responsible";
  } else {
    r.score = w.alpha1 * r.ego_score + w.alpha2 * r.agent_score + w.alpha3 * r.dist_score;
    r.verdict = r.score >= w.critical_threshold ? Verdict::kValidCritical : Verdict::kValidNonCritical;
    r.branch = "weighted";
  }
  return r;
}

FitnessInputs fitness_inputs(const SimulationTrace& trace, const MetricThresholds& th) {
  FitnessInputs in;
  const auto ids = trace.participants();
  if (ids.empty()) return in;
  const std::string& ego = ids.front();
  const auto states = [&](const std::string& id) {
    std::vector<VerdictState> out;
    for (const auto& v : evaluate_metrics(trace, id, th)) out.push_back(v.state);
    return out;
  };
  in.ego = states(ego);
  for (std::size_t i = 1; i < ids.size(); ++i) {
    auto s = states(ids[i]);
    if (s[static_cast<std::size_t>(MetricId::kOffRoad)] == VerdictState::kFail) {
      in.agent_unreasonable = true;
    }
    in.agents.push_back(std::move(s));
  }
  for (const auto& e : trace.events) {
    if (e.kind != EventKind::kCollision) continue;
    if (e.participants.front() != ego) {
      in.agent_unreasonable = true;
      continue;
    }
    in.ego_collision = true;
    if (is_responsibility(e, th)) {
      in.ego_responsible = true;
    } else {
      in.agent_unreasonable = true;
    }
  }
  in.min_dist = trace.min_dist;
  return in;
}

FitnessResult fitness(const SimulationTrace& trace, const ScoreWeights& w,
                      const MetricThresholds& th) {
  FitnessResult r = score_inputs(fitness_inputs(trace, th), w);
  const auto ids = trace.participants();
  for (const auto& id : ids) {
    const auto v = evaluate_metrics(trace, id, th);
    r.participant_scores[id] = participant_score(v);
  }
  return r;
}

}  // namespace btfuzz
