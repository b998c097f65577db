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

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "btfuzz/behavior_tree.hpp"
#include "btfuzz/lane_map.hpp"
#include "btfuzz/scenario.hpp"

namespace btfuzz::testing {

/// Straight two-lane road along +x: "right" at y = 0, "left" at y = 3.5.
inline std::shared_ptr<const LaneMap> two_lane_map(double length = 1200.0,
                                                   std::vector<Obstacle> obstacles = {}) {
  std::vector<Lane> lanes;
  lanes.push_back(Lane{"right", ReferencePath({{0.0, 0.0}, {length, 0.0}}), 3.5, "left", {}});
  lanes.push_back(Lane{"left", ReferencePath({{0.0, 3.5}, {length, 3.5}}), 3.5, {}, "right"});
  return std::make_shared<const LaneMap>(std::move(lanes), std::move(obstacles));
}

inline BehaviorNode leaf(std::string id, LeafBehavior b,
                         std::optional<TriggerCondition> c = std::nullopt) {
  BehaviorNode n;
  n.id = std::move(id);
  n.condition = std::move(c);
  n.payload = std::move(b);
  return n;
}

inline BehaviorNode sequence(std::string id, std::vector<BehaviorNode> children) {
  BehaviorNode n;
  n.id = std::move(id);
  n.payload = Composite{CompositeKind::kSequence, std::move(children)};
  return n;
}

/// Ego in the right lane at s = 100 and one agent with `tree`.
inline LogicalScenario two_agent_scenario(BehaviorNode tree, InitialState agent_init,
                                          double ego_speed = 20.0) {
  LogicalScenario ls;
  ls.name = "test";
  ls.map = two_lane_map();
  ls.ego.init = InitialState{"right", 100.0, 0.0, ego_speed, 0.0, 4.8, 1.9};
  ls.ego.controller.desired_speed = ego_speed;
  AgentSpec a;
  a.id = "agent";
  a.init = agent_init;
  a.tree = BehaviorTree{"agent", std::move(tree)};
  ls.agents.push_back(std::move(a));
  ls.horizon = 20.0;
  return ls;
}

}  // namespace btfuzz::testing
