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

#include "btfuzz/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <set>
#include <sstream>

#include <boost/math/distributions/normal.hpp>

#include "btfuzz/error.hpp"

namespace btfuzz {

namespace {

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::stringstream ss(path);
  std::string item;
  while (std::getline(ss, item, '.')) parts.push_back(item);
  return parts;
}

[[noreturn]] void unresolved(const std::string& path, const std::string& why) {
  throw Error(ErrorCode::kUnresolvedTarget, "'" + path + "': " + why);
}

BehaviorNode* find_node(BehaviorNode& node, const std::string& id) {
  if (node.id == id) return &node;
  if (auto* comp = std::get_if<Composite>(&node.payload)) {
    for (auto& c : comp->children) {
      if (BehaviorNode* hit = find_node(c, id)) return hit;
    }
  }
  return nullptr;
}

double& init_field(InitialState& init, const std::string& field, const std::string& path) {
  if (field == "s") return init.s;
  if (field == "d") return init.d;
  if (field == "speed") return init.speed;
  if (field == "accel") return init.accel;
  if (field == "length") return init.length;
  if (field == "width") return init.width;
  unresolved(path, "unknown initial-state field '" + field + "'");
}

double& controller_field(IdmParams& p, const std::string& field, const std::string& path) {
  if (field == "desired_speed" || field == "cruise_speed") return p.desired_speed;
  if (field == "max_accel") return p.max_accel;
  if (field == "comfort_decel") return p.comfort_decel;
  if (field == "min_gap") return p.min_gap;
  if (field == "time_headway") return p.time_headway;
  if (field == "emergency_decel") return p.emergency_decel;
  if (field == "emergency_ttc") return p.emergency_ttc;
  unresolved(path, "unknown controller parameter '" + field + "'");
}

double& optional_field(std::optional<double>& v) {
  if (!v) v = 0.0;
  return *v;
}

double& condition_field(TriggerCondition& c, const std::vector<std::string>& parts, std::size_t at,
                        const std::string& path) {
  if (at >= parts.size()) unresolved(path, "missing condition parameter");
  const std::string& p = parts[at];
  if (auto* comb = std::get_if<CombinedCondition>(&c.value)) {
    std::size_t idx = 0;
    try {
      idx = std::stoul(p);
    } catch (const std::exception&) {
      unresolved(path, "combined conditions are addressed by index");
    }
    if (idx >= comb->conditions.size()) unresolved(path, "condition index out of range");
    return condition_field(comb->conditions[idx], parts, at + 1, path);
  }
  if (at + 1 != parts.size()) unresolved(path, "trailing path components");
  if (auto* t = std::get_if<TimeCondition>(&c.value)) {
    if (p == "at") return t->at;
  } else if (auto* d = std::get_if<DistanceCondition>(&c.value)) {
    if (p == "threshold") return d->threshold;
    if (p == "x") return d->point.x;
    if (p == "y") return d->point.y;
  } else if (auto* r = std::get_if<RelativePositionCondition>(&c.value)) {
    if (p == "longitudinal") return optional_field(r->longitudinal);
    if (p == "lateral") return optional_field(r->lateral);
  }
  unresolved(path, "condition has no numeric parameter '" + p + "'");
}

double& leaf_field(LeafBehavior& leaf, const std::string& p, const std::string& path) {
  if (auto* v = std::get_if<TrackBehavior>(&leaf)) {
    if (p == "gap") return optional_field(v->gap);
  } else if (auto* v = std::get_if<ChangeLaneBehavior>(&leaf)) {
    if (p == "duration") return v->duration;
    if (p == "offset") return v->offset;
    if (p == "end_speed") return v->end_speed;
    if (p == "lateral_duration") return optional_field(v->lateral_duration);
  } else if (auto* v = std::get_if<CruiseBehavior>(&leaf)) {
    if (p == "speed") return v->speed;
    if (p == "duration") return optional_field(v->duration);
    if (p == "offset") return optional_field(v->offset);
  } else if (auto* v = std::get_if<FollowLogBehavior>(&leaf)) {
    if (p == "end_speed") return v->end.s_dot;
    if (p == "end_d") return v->end.d;
    if (p == "end_time") return v->end.t;
  } else if (auto* v = std::get_if<MergeInBehavior>(&leaf)) {
    if (p == "duration") return v->duration;
  } else if (auto* v = std::get_if<MergeOutBehavior>(&leaf)) {
    if (p == "duration") return v->duration;
  }
  unresolved(path, "behavior has no numeric property '" + p + "'");
}

std::map<std::string, NamedFunction>& registry() {
  static std::map<std::string, NamedFunction> fns = {
      {"abs", [](double x) { return std::abs(x); }},
      {"neg", [](double x) { return -x; }},
      {"square", [](double x) { return x * x; }},
      {"sqrt", [](double x) { return std::sqrt(x); }},
  };
  return fns;
}

std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

double map_unit(const Domain& domain, double u) {
  return std::visit(
      [u](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, UniformDomain>) {
          if (u >= 1.0) return d.hi;
          return d.lo + u * (d.hi - d.lo);
        } else if constexpr (std::is_same_v<T, NormalDomain>) {
          const boost::math::normal_distribution<double> nd(d.mean, d.std);
          const double plo = boost::math::cdf(nd, d.lo);
          const double phi = boost::math::cdf(nd, d.hi);
          const double p = plo + u * (phi - plo);
          if (p <= 0.0 || u <= 0.0) return d.lo;
          if (p >= 1.0 || u >= 1.0) return d.hi;
          return std::clamp(boost::math::quantile(nd, p), d.lo, d.hi);
        } else {
          const std::size_t k = d.values.size();
          const auto idx = static_cast<std::size_t>(std::floor(u * static_cast<double>(k)));
          return d.values[std::min(idx, k - 1)];
        }
      },
      domain);
}

double to_unit(const Domain& domain, double value) {
  return std::visit(
      [value](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, UniformDomain>) {
          return std::clamp((value - d.lo) / (d.hi - d.lo), 0.0, 1.0);
        } else if constexpr (std::is_same_v<T, NormalDomain>) {
          const boost::math::normal_distribution<double> nd(d.mean, d.std);
          const double plo = boost::math::cdf(nd, d.lo);
          const double phi = boost::math::cdf(nd, d.hi);
          const double v = std::clamp(value, d.lo, d.hi);
          return std::clamp((boost::math::cdf(nd, v) - plo) / (phi - plo), 0.0, 1.0);
        } else {
          const auto it = std::find(d.values.begin(), d.values.end(), value);
          const auto idx = static_cast<double>(std::distance(d.values.begin(), it));
          const auto k = static_cast<double>(d.values.size());
          return std::min(1.0, (idx + 0.5) / k);
        }
      },
      domain);
}

bool contains(const Domain& domain, double value) {
  return std::visit(
      [value](const auto& d) -> bool {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, DiscreteDomain>) {
          return std::find(d.values.begin(), d.values.end(), value) != d.values.end();
        } else {
          return value >= d.lo && value <= d.hi;
        }
      },
      domain);
}

void check_domain(const Domain& domain, const std::string& name) {
  std::visit(
      [&name](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, UniformDomain>) {
          if (!(d.lo < d.hi)) throw Error(ErrorCode::kInvalidArgument, name + ": need lo < hi");
        } else if constexpr (std::is_same_v<T, NormalDomain>) {
          if (!(d.std > 0.0)) throw Error(ErrorCode::kInvalidArgument, name + ": need std > 0");
          if (!(d.lo < d.hi)) throw Error(ErrorCode::kInvalidArgument, name + ": need lo < hi");
        } else {
          if (d.values.empty()) {
            throw Error(ErrorCode::kInvalidArgument, name + ": discrete domain is empty");
          }
        }
      },
      domain);
}

void register_function(const std::string& name, NamedFunction fn) {
  std::lock_guard lock(registry_mutex());
  registry()[name] = std::move(fn);
}

double apply_transform(const Transform& t, double base) {
  double g = base;
  if (!t.function.empty()) {
    NamedFunction fn;
    {
      std::lock_guard lock(registry_mutex());
      const auto it = registry().find(t.function);
      if (it == registry().end()) {
        throw Error(ErrorCode::kInvalidArgument, "unknown function '" + t.function + "'");
      }
      fn = it->second;
    }
    g = fn(base);
  }
  double v = t.scale * g + t.offset;
  if (t.clamp_lo) v = std::max(v, *t.clamp_lo);
  if (t.clamp_hi) v = std::min(v, *t.clamp_hi);
  return v;
}

std::size_t effective_dimension(const LogicalScenario& ls) { return ls.variables.size(); }

std::vector<std::size_t> relative_order(const LogicalScenario& ls) {
  std::map<std::string, std::size_t> rel_index;
  std::set<std::string> free_names;
  for (const auto& v : ls.variables) {
    if (!free_names.insert(v.name).second) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate variable '" + v.name + "'");
    }
  }
  for (std::size_t i = 0; i < ls.relative_variables.size(); ++i) {
    const auto& name = ls.relative_variables[i].name;
    if (free_names.contains(name) || !rel_index.emplace(name, i).second) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate variable '" + name + "'");
    }
  }
  // Depth-first topological sort with three-color cycle detection.
  std::vector<int> color(ls.relative_variables.size(), 0);
  std::vector<std::size_t> order;
  std::function<void(std::size_t)> visit = [&](std::size_t i) {
    if (color[i] == 2) return;
    if (color[i] == 1) {
      throw Error(ErrorCode::kInvalidArgument,
                  "relative variables form a cycle at '" + ls.relative_variables[i].name + "'");
    }
    color[i] = 1;
    const auto& base = ls.relative_variables[i].base;
    if (const auto it = rel_index.find(base); it != rel_index.end()) {
      visit(it->second);
    } else if (!free_names.contains(base)) {
      throw Error(ErrorCode::kInvalidArgument, "relative variable '" +
                                                   ls.relative_variables[i].name +
                                                   "' has unknown base '" + base + "'");
    }
    color[i] = 2;
    order.push_back(i);
  };
  for (std::size_t i = 0; i < ls.relative_variables.size(); ++i) visit(i);
  return order;
}

namespace {

ConcreteTestScenario finish_cts(const LogicalScenario& ls, std::vector<double> values) {
  ConcreteTestScenario cts;
  cts.parent = &ls;
  cts.values = std::move(values);
  cts.relative_values.assign(ls.relative_variables.size(), 0.0);
  std::map<std::string, double> known;
  for (std::size_t i = 0; i < ls.variables.size(); ++i) known[ls.variables[i].name] = cts.values[i];
  for (std::size_t i : relative_order(ls)) {
    const auto& rv = ls.relative_variables[i];
    const double v = apply_transform(rv.transform, known.at(rv.base));
    if ((rv.lo && v < *rv.lo) || (rv.hi && v > *rv.hi) || !std::isfinite(v)) {
      throw Error(ErrorCode::kDomainError,
                  "relative variable '" + rv.name + "' = " + std::to_string(v) + " out of bounds");
    }
    cts.relative_values[i] = v;
    known[rv.name] = v;
  }
  return cts;
}

}  // namespace

ConcreteTestScenario sample(const LogicalScenario& ls, std::span<const double> u) {
  if (u.size() != ls.variables.size()) {
    throw Error(ErrorCode::kInvalidArgument, "expected " + std::to_string(ls.variables.size()) +
                                                 " unit coordinates, got " +
                                                 std::to_string(u.size()));
  }
  std::vector<double> values(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!(u[i] >= 0.0 && u[i] <= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument, "unit coordinate outside [0,1]");
    }
    values[i] = map_unit(ls.variables[i].domain, u[i]);
  }
  return finish_cts(ls, std::move(values));
}

ConcreteTestScenario make_cts(const LogicalScenario& ls, std::span<const double> values) {
  if (values.size() != ls.variables.size()) {
    throw Error(ErrorCode::kInvalidArgument, "expected " + std::to_string(ls.variables.size()) +
                                                 " values, got " + std::to_string(values.size()));
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!contains(ls.variables[i].domain, values[i])) {
      throw Error(ErrorCode::kDomainError, "value " + std::to_string(values[i]) +
                                               " outside the domain of '" +
                                               ls.variables[i].name + "'");
    }
  }
  return finish_cts(ls, std::vector<double>(values.begin(), values.end()));
}

double& resolve_target(LogicalScenario& ls, const std::string& path) {
  const auto parts = split_path(path);
  if (parts.size() < 2) unresolved(path, "expected <participant>.<property>");
  if (parts[0] == "ego") {
    if (parts[1] == "init" && parts.size() == 3) return init_field(ls.ego.init, parts[2], path);
    if (parts[1] == "controller" && parts.size() == 3) {
      return controller_field(ls.ego.controller, parts[2], path);
    }
    if (parts.size() == 2) return controller_field(ls.ego.controller, parts[1], path);
    unresolved(path, "unknown ego property");
  }
  if (parts[0] == "scenario" && parts.size() == 2) {
    if (parts[1] == "horizon") return ls.horizon;
    if (parts[1] == "end_s") return optional_field(ls.end_s);
    unresolved(path, "unknown scenario property");
  }
  auto agent = std::find_if(ls.agents.begin(), ls.agents.end(),
                            [&](const AgentSpec& a) { return a.id == parts[0]; });
  if (agent == ls.agents.end()) unresolved(path, "unknown participant '" + parts[0] + "'");
  if (parts[1] == "init") {
    if (parts.size() != 3) unresolved(path, "expected <agent>.init.<field>");
    return init_field(agent->init, parts[2], path);
  }
  if (!agent->tree) unresolved(path, "participant has no behavior tree");
  BehaviorNode* node = find_node(agent->tree->root, parts[1]);
  if (!node) unresolved(path, "unknown node '" + parts[1] + "'");
  if (parts.size() < 3) unresolved(path, "missing property");
  if (parts[2] == "condition") {
    if (!node->condition) unresolved(path, "node has no condition");
    return condition_field(*node->condition, parts, 3, path);
  }
  if (parts.size() != 3) unresolved(path, "trailing path components");
  auto* leaf = std::get_if<LeafBehavior>(&node->payload);
  if (!leaf) unresolved(path, "composite nodes have no behavior properties");
  return leaf_field(*leaf, parts[2], path);
}

LogicalScenario bind(const ConcreteTestScenario& cts) {
  if (!cts.parent) throw Error(ErrorCode::kInvalidArgument, "CTS without a parent scenario");
  const LogicalScenario& ls = *cts.parent;
  LogicalScenario out = ls;
  for (std::size_t i = 0; i < ls.variables.size(); ++i) {
    if (!ls.variables[i].target.empty()) resolve_target(out, ls.variables[i].target) = cts.values[i];
  }
  for (std::size_t i : relative_order(ls)) {
    const auto& rv = ls.relative_variables[i];
    if (!rv.target.empty()) resolve_target(out, rv.target) = cts.relative_values[i];
  }
  out.variables.clear();
  out.relative_variables.clear();
  return out;
}

std::vector<Diagnostic> validate_scenario(const LogicalScenario& ls) {
  std::vector<Diagnostic> out;
  ValidationContext ctx;
  ctx.agents.insert("ego");
  for (const auto& a : ls.agents) {
    if (a.id == "ego" || !ctx.agents.insert(a.id).second) {
      out.push_back({"DuplicateId", a.id, "participant id '" + a.id + "' is not unique"});
    }
    if (a.tree) {
      const auto ids = node_ids(*a.tree);
      ctx.nodes[a.id].insert(ids.begin(), ids.end());
    }
  }
  if (ls.map) {
    for (const auto& lane : ls.map->lanes()) ctx.lanes.insert(lane.id);
    for (const auto& ob : ls.map->obstacles()) ctx.obstacles.insert(ob.id);
  } else {
    out.push_back({"MissingMap", "", "scenario has no map"});
  }
  const auto check_lane = [&](const std::string& who, const std::string& lane) {
    if (ls.map && !ctx.lanes.contains(lane)) {
      out.push_back({"DanglingReference", who, "unknown lane '" + lane + "'"});
    }
  };
  check_lane("ego", ls.ego.init.lane);
  for (const auto& a : ls.agents) {
    check_lane(a.id, a.init.lane);
    if (a.init.speed < 0.0) out.push_back({"NegativeSpeed", a.id, "initial speed must be >= 0"});
    if (a.tree) {
      for (auto& d : validate(*a.tree, ctx)) out.push_back(std::move(d));
    }
  }
  LogicalScenario probe = ls;
  for (const auto& v : ls.variables) {
    try {
      check_domain(v.domain, v.name);
      if (!v.target.empty()) resolve_target(probe, v.target);
    } catch (const Error& e) {
      out.push_back({std::string(to_string(e.code())), v.name, e.what()});
    }
  }
  try {
    relative_order(ls);
    for (const auto& rv : ls.relative_variables) {
      if (!rv.target.empty()) resolve_target(probe, rv.target);
    }
  } catch (const Error& e) {
    out.push_back({std::string(to_string(e.code())), "", e.what()});
  }
  return out;
}

}  // namespace btfuzz
