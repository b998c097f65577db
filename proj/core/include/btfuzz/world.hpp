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
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "btfuzz/frenet.hpp"
#include "btfuzz/geometry.hpp"
#include "btfuzz/lane_map.hpp"

namespace btfuzz {

enum class AgentKind { kEgo, kVehicle, kBicycle, kHuman };

std::string_view to_string(AgentKind kind);
/// Throws Error(kParseError) for unknown names.
AgentKind agent_kind_from_string(std::string_view name);

struct AgentState {
  std::string id;
  AgentKind kind = AgentKind::kVehicle;
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;
  /// Longitudinal speed and acceleration in the agent's lane frame.
  double speed = 0.0;
  double accel = 0.0;
  /// Lane whose centerline is nearest to the footprint center.
  std::string lane;
  double length = 4.8;
  double width = 1.9;

  /// Lane that defines the agent's motion frame (its initial lane).
  std::string frame_lane;
  FrenetState frenet;

  Vec2 position() const { return {x, y}; }
  OrientedBox footprint() const { return {{x, y}, heading, length, width}; }
};

struct WorldState {
  double time = 0.0;
  std::vector<AgentState> agents;
  const LaneMap* map = nullptr;
  /// Behavior-node ids each agent has completed so far.
  std::map<std::string, std::set<std::string>> completed;

  const AgentState* find(std::string_view id) const;
  AgentState* find(std::string_view id);
};

/// Per-step output of a behavior tree or the ego controller.
///
/// With a plan present the agent follows the segment evaluated at
/// `plan_tau` (start of step) and `plan_tau + dt`; the simulator falls back
/// to `accel` when the plan is longitudinally infeasible or the agent has
/// drifted off it. Without a plan the lateral offset is held.
struct AgentCommand {
  double accel = 0.0;
  std::optional<PlannedSegment> plan;
  double plan_tau = 0.0;
};

}  // namespace btfuzz
