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

#include "btfuzz/world.hpp"

#include "btfuzz/error.hpp"

namespace btfuzz {

std::string_view to_string(AgentKind kind) {
  switch (kind) {
    case AgentKind::kEgo: return "ego";
    case AgentKind::kVehicle: return "vehicle";
    case AgentKind::kBicycle: return "bicycle";
    case AgentKind::kHuman: return "human";
  }
  return "vehicle";
}

AgentKind agent_kind_from_string(std::string_view name) {
  if (name == "ego") return AgentKind::kEgo;
  if (name == "vehicle") return AgentKind::kVehicle;
  if (name == "bicycle") return AgentKind::kBicycle;
  if (name == "human") return AgentKind::kHuman;
  throw Error(ErrorCode::kParseError, "unknown agent kind '" + std::string(name) + "'");
}

const AgentState* WorldState::find(std::string_view id) const {
  for (const auto& a : agents) {
    if (a.id == id) return &a;
  }
  return nullptr;
}

AgentState* WorldState::find(std::string_view id) {
  for (auto& a : agents) {
    if (a.id == id) return &a;
  }
  return nullptr;
}

}  // namespace btfuzz
