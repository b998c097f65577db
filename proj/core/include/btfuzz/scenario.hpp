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
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "btfuzz/behavior_tree.hpp"
#include "btfuzz/lane_map.hpp"
#include "btfuzz/world.hpp"

namespace btfuzz {

struct UniformDomain {
  double lo = 0.0;
  double hi = 1.0;
};

/// Normal distribution truncated to [lo, hi].
struct NormalDomain {
  double mean = 0.0;
  double std = 1.0;
  double lo = -1.0;
  double hi = 1.0;
};

struct DiscreteDomain {
  std::vector<double> values;
};

using Domain = std::variant<UniformDomain, NormalDomain, DiscreteDomain>;

/// Maps u in [0,1] through the domain's inverse CDF.
double map_unit(const Domain& domain, double u);
/// Inverse of map_unit (for uniform/normal; discrete returns the bucket center).
double to_unit(const Domain& domain, double value);
bool contains(const Domain& domain, double value);
/// Throws Error(kInvalidArgument) when lo >= hi, std <= 0 or the list is empty.
void check_domain(const Domain& domain, const std::string& name);

/// Dotted property path, e.g. "agent.cutin.end_speed",
/// "agent.cutin.condition.threshold", "agent.init.s", "ego.cruise_speed".
struct Variable {
  std::string name;
  std::string target;
  Domain domain;
};

/// f(base) = clamp(scale * g(base) + offset, clamp_lo, clamp_hi), where g
/// is the identity or a registered named function.
struct Transform {
  std::string function;
  double scale = 1.0;
  double offset = 0.0;
  std::optional<double> clamp_lo;
  std::optional<double> clamp_hi;
};

struct RelativeVariable {
  std::string name;
  std::string base;
  std::string target;
  Transform transform;
  /// Declared bounds; a transformed value outside them is a DomainError.
  std::optional<double> lo;
  std::optional<double> hi;
};

using NamedFunction = std::function<double(double)>;
/// Process-wide registry; "abs", "neg", "square" and "sqrt" are built in.
void register_function(const std::string& name, NamedFunction fn);
double apply_transform(const Transform& t, double base);

struct InitialState {
  std::string lane;
  double s = 0.0;
  double d = 0.0;
  double speed = 0.0;
  double accel = 0.0;
  double length = 4.8;
  double width = 1.9;
};

struct IdmParams {
  double desired_speed = 22.0;
  double max_accel = 1.5;
  double comfort_decel = 3.0;
  double min_gap = 2.0;
  double time_headway = 1.5;
  double exponent = 4.0;
  double emergency_decel = 8.0;
  double emergency_ttc = 1.2;
  /// Lateral intrusion into the ego lane before another vehicle counts as a leader.
  double perception_overlap = 0.0;
};

struct EgoSpec {
  InitialState init;
  IdmParams controller;
};

struct AgentSpec {
  std::string id;
  AgentKind kind = AgentKind::kVehicle;
  InitialState init;
  std::optional<BehaviorTree> tree;
};

struct LogicalScenario {
  std::string name;
  std::string map_ref;
  std::shared_ptr<const LaneMap> map;
  EgoSpec ego;
  std::vector<AgentSpec> agents;
  std::vector<Variable> variables;
  std::vector<RelativeVariable> relative_variables;
  std::map<std::string, std::vector<double>> distributions;
  double horizon = 30.0;
  /// Run ends early once every tree finished and ego passed this arc length.
  std::optional<double> end_s;
};

struct ConcreteTestScenario {
  const LogicalScenario* parent = nullptr;
  /// Free variables in declaration order.
  std::vector<double> values;
  /// Relative variables in declaration order.
  std::vector<double> relative_values;
};

std::size_t effective_dimension(const LogicalScenario& ls);

/// Relative variables in dependency order. Throws Error(kInvalidArgument) on
/// unknown bases, duplicate names or cycles.
std::vector<std::size_t> relative_order(const LogicalScenario& ls);

/// Throws Error(kInvalidArgument) when u has the wrong size or leaves [0,1],
/// Error(kDomainError) when a relative variable violates its bounds.
ConcreteTestScenario sample(const LogicalScenario& ls, std::span<const double> u);

/// Pins free variables to explicit values (each must lie in its domain).
ConcreteTestScenario make_cts(const LogicalScenario& ls, std::span<const double> values);

/// Substitutes every variable into a copy of the parent; the result has no
/// variables left. Throws Error(kUnresolvedTarget).
LogicalScenario bind(const ConcreteTestScenario& cts);

/// Reference to the numeric property named by a dotted path.
/// Throws Error(kUnresolvedTarget).
double& resolve_target(LogicalScenario& ls, const std::string& path);

/// Structural checks: unique agent ids, resolvable targets, valid domains,
/// acyclic relative variables, tree diagnostics. Empty when well formed.
std::vector<Diagnostic> validate_scenario(const LogicalScenario& ls);

}  // namespace btfuzz
