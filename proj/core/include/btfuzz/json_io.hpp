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

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "btfuzz/behavior_tree.hpp"
#include "btfuzz/lane_map.hpp"
#include "btfuzz/scenario.hpp"
#include "btfuzz/simulator.hpp"

namespace btfuzz {

using Json = nlohmann::ordered_json;

// All *_from_json functions throw Error(kParseError) on schema violations.

Json to_json(const FrenetState& st);
FrenetState frenet_from_json(const Json& j);

Json to_json(const TriggerCondition& c);
TriggerCondition condition_from_json(const Json& j);

Json to_json(const BehaviorNode& node);
BehaviorNode node_from_json(const Json& j);

Json to_json(const LaneMap& map);
LaneMap map_from_json(const Json& j);

Json to_json(const Domain& d);
Domain domain_from_json(const Json& j);

/// Maps loaded by reference keep `map_ref` and serialize as that string.
Json to_json(const LogicalScenario& ls);
LogicalScenario scenario_from_json(const Json& j,
                                   const std::filesystem::path& base_dir = {});

Json events_to_json(const SimulationTrace& trace);

/// File helpers. Throw Error(kIoError) when the file cannot be read or
/// written and Error(kParseError) on malformed content.
Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

LaneMap load_map(const std::filesystem::path& path);
LogicalScenario load_scenario(const std::filesystem::path& path);
void save_scenario(const std::filesystem::path& path, const LogicalScenario& ls);

/// Canonical text form: 2-space indent, trailing newline.
std::string canonical_dump(const Json& j);

}  // namespace btfuzz
