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

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "btfuzz/scenario.hpp"
#include "btfuzz/world.hpp"

namespace btfuzz {

inline constexpr double kMinAccel = -8.0;
inline constexpr double kMaxAccel = 4.0;
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class EventKind { kCollision, kOffRoad, kLinePressure, kHarshEpisode };

std::string_view to_string(EventKind kind);

/// Kinematic context of a collision that involves the ego.
struct CollisionInfo {
  std::string other;
  bool other_is_obstacle = false;
  /// Center offset of the other party along the ego's lane frame (+ ahead).
  double longitudinal_offset = 0.0;
  double lateral_offset = 0.0;
  std::string ego_lane;
  std::string other_lane;
  double ego_speed = 0.0;
  double other_speed = 0.0;
  bool ego_changing_lane = false;
  bool other_changing_lane = false;
  /// When the other party's footprint last entered the ego's lane; absent if
  /// it was already there at the start of the run.
  std::optional<double> encroachment_time;
};

struct Event {
  EventKind kind = EventKind::kCollision;
  double time = 0.0;
  /// Interval length for line pressure and harsh episodes.
  double duration = 0.0;
  /// Agent ids; for obstacle collisions the obstacle id comes second.
  std::vector<std::string> participants;
  bool with_obstacle = false;
  double peak_accel = 0.0;
  std::optional<CollisionInfo> collision;
};

struct TraceFrame {
  double time = 0.0;
  std::vector<AgentState> agents;
};

struct SimulationTrace {
  double dt = 0.1;
  std::vector<TraceFrame> frames;
  std::vector<Event> events;
  double min_dist = kInfinity;
  double min_ttc = kInfinity;
  /// "horizon", "ego_collision" or "scenario_end".
  std::string termination;

  std::vector<std::string> participants() const;
};

using EgoPolicy = std::function<AgentCommand(const WorldState&, const IdmParams&)>;

struct SimConfig {
  double dt = 0.1;
  /// Overrides the scenario horizon when set.
  std::optional<double> horizon;
  double harsh_accel = 3.5;
  double harsh_min_duration = 0.5;
  /// Replaces the baseline ego controller when set.
  EgoPolicy ego_policy;
};

/// Baseline ego: IDM car following against the nearest in-lane leader,
/// clamped at comfort braking, emergency braking below the TTC threshold.
AgentCommand ego_controller(const WorldState& world, const IdmParams& params);

/// Plain IDM acceleration (no clamps). gap <= 0 or infinite leader handled
/// by the caller.
double idm_accel(double speed, double gap, double leader_speed, const IdmParams& p);

/// Footprint lateral extent [min, max] of `agent` in the frame of `path`.
std::pair<double, double> lateral_extent(const AgentState& agent, const ReferencePath& path);

/// Frame-to-world mapping that extrapolates linearly past either path end.
Vec2 frame_to_world(const ReferencePath& path, double s, double d);

/// Recomputes pose, speed, acceleration and occupied lane from the frame state.
void place_agent(AgentState& agent, const LaneMap& map);

/// One step of the point-mass dynamics in the agent's lane frame followed by
/// place_agent().
void advance_agent(AgentState& agent, const AgentCommand& cmd, double dt, const LaneMap& map);

/// Initial world for a bound scenario (time 0, ego first).
WorldState initial_world(const LogicalScenario& scenario);

/// Throws Error(kScenarioUnboundVariables) if variables remain unbound and
/// Error(kInvalidArgument) for dt outside (0, 0.2] or horizon above 300 s.
SimulationTrace run(const LogicalScenario& scenario, const SimConfig& config = {});

}  // namespace btfuzz
