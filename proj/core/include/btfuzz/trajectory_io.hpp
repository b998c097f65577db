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
#include <string_view>
#include <vector>

#include "btfuzz/frenet.hpp"
#include "btfuzz/simulator.hpp"

namespace btfuzz {

struct AgentLog {
  std::string id;
  std::vector<TrajectoryPoint> points;
};

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double v);

/// Parses `id,t,x,y,z` CSV text; rows are grouped per id in first-seen
/// order. Throws Error(kParseError) on malformed rows or non-increasing t.
std::vector<AgentLog> parse_log_csv(std::string_view text);
std::vector<AgentLog> read_log_csv(const std::filesystem::path& path);

/// Canonical log serialization (header plus one row per sample).
std::string log_to_csv(const AgentLog& log);

/// `t,x,y,heading,speed,accel,lane` rows for one agent of a trace.
std::string trace_agent_csv(const SimulationTrace& trace, const std::string& agent);

}  // namespace btfuzz
