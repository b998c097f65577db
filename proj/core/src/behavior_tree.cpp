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

#include "btfuzz/behavior_tree.hpp"

#include <cmath>
#include <functional>

#include "btfuzz/error.hpp"
#include "btfuzz/geometry.hpp"

namespace btfuzz {

std::string_view to_string(Comparator cmp) {
  switch (cmp) {
    case Comparator::kLess: return "<";
    case Comparator::kLessEqual: return "<=";
    case Comparator::kGreater: return ">";
    case Comparator::kGreaterEqual: return ">=";
  }
  return "<=";
}

Comparator comparator_from_string(std::string_view text) {
  if (text == "<") return Comparator::kLess;
  if (text == "<=") return Comparator::kLessEqual;
  if (text == ">") return Comparator::kGreater;
  if (text == ">=") return Comparator::kGreaterEqual;
  throw Error(ErrorCode::kParseError, "unknown comparator '" + std::string(text) + "'");
}

bool compare(double lhs, Comparator cmp, double rhs) {
  switch (cmp) {
    case Comparator::kLess: return lhs < rhs;
    case Comparator::kLessEqual: return lhs <= rhs;
    case Comparator::kGreater: return lhs > rhs;
    case Comparator::kGreaterEqual: return lhs >= rhs;
  }
  return false;
}

std::string_view to_string(CompositeKind kind) {
  switch (kind) {
    case CompositeKind::kSequence: return "sequence";
    case CompositeKind::kParallel: return "parallel";
    case CompositeKind::kCyclic: return "cyclic";
    case CompositeKind::kSequentialSelection: return "selection";
  }
  return "sequence";
}

namespace {

const AgentState& require_agent(const WorldState& world, std::string_view id) {
  const AgentState* a = world.find(id);
  if (!a) throw Error(ErrorCode::kDanglingReference, "unknown agent '" + std::string(id) + "'");
  return *a;
}

const ReferencePath* frame_path(const WorldState& world, const AgentState& agent) {
  if (!world.map) return nullptr;
  const Lane* lane = world.map->find_lane(agent.frame_lane);
  return lane ? &lane->centerline : nullptr;
}

// Time comparisons tolerate accumulated step rounding.
constexpr double kTimeSlack = 1e-9;

struct Evaluator {
  const WorldState& world;
  std::string_view self;
  const std::set<std::string>* self_completed;

  bool operator()(const TimeCondition& c) const { return world.time >= c.at - kTimeSlack; }

  bool operator()(const DistanceCondition& c) const {
    const AgentState& me = require_agent(world, self);
    double dist = 0.0;
    switch (c.target_kind) {
      case DistanceCondition::TargetKind::kAgent:
        dist = norm(require_agent(world, c.target).position() - me.position());
        break;
      case DistanceCondition::TargetKind::kPoint:
        dist = norm(c.point - me.position());
        break;
      case DistanceCondition::TargetKind::kObstacle: {
        const Obstacle* ob = world.map ? world.map->find_obstacle(c.target) : nullptr;
        if (!ob) throw Error(ErrorCode::kDanglingReference, "unknown obstacle '" + c.target + "'");
        dist = distance_point_polygon(me.position(), ob->polygon);
        break;
      }
    }
    return compare(dist, c.cmp, c.threshold);
  }

  bool operator()(const AreaCondition& c) const {
    return point_in_polygon(require_agent(world, self).position(), c.polygon);
  }

  bool operator()(const RelativePositionCondition& c) const {
    const AgentState& me = require_agent(world, self);
    const AgentState& target = require_agent(world, c.target);
    double ds = 0.0;
    double dd = 0.0;
    if (const ReferencePath* path = frame_path(world, target)) {
      const auto fm = path->foot_of(me.position());
      const auto ft = path->foot_of(target.position());
      ds = fm.s - ft.s;
      dd = fm.d - ft.d;
    } else {
      const Vec2 f{std::cos(target.heading), std::sin(target.heading)};
      const Vec2 rel = me.position() - target.position();
      ds = dot(rel, f);
      dd = cross(f, rel);
    }
    bool ok = true;
    if (c.longitudinal) ok = ok && compare(ds, c.cmp, *c.longitudinal);
    if (c.lateral) ok = ok && compare(dd, c.cmp, *c.lateral);
    return ok;
  }

  bool operator()(const EndsByBehaviorCondition& c) const {
    const std::string_view agent = c.agent.empty() ? self : std::string_view(c.agent);
    if (agent == self && self_completed) return self_completed->contains(c.node);
    require_agent(world, agent);
    const auto it = world.completed.find(std::string(agent));
    return it != world.completed.end() && it->second.contains(c.node);
  }

  bool operator()(const CombinedCondition& c) const {
    if (c.mode == CombinedCondition::Mode::kAllOf) {
      for (const auto& sub : c.conditions) {
        if (!std::visit(*this, sub.value)) return false;
      }
      return true;
    }
    for (const auto& sub : c.conditions) {
      if (std::visit(*this, sub.value)) return true;
    }
    return false;
  }
};

int condition_depth(const TriggerCondition& c) {
  if (const auto* comb = std::get_if<CombinedCondition>(&c.value)) {
    int deepest = 0;
    for (const auto& sub : comb->conditions) deepest = std::max(deepest, condition_depth(sub));
    return deepest + 1;
  }
  return 0;
}

}  // namespace

bool evaluate_condition(const TriggerCondition& c, const WorldState& world, std::string_view self,
                        const std::set<std::string>* self_completed) {
  return std::visit(Evaluator{world, self, self_completed}, c.value);
}

std::vector<std::string> node_ids(const BehaviorTree& tree) {
  std::vector<std::string> ids;
  std::function<void(const BehaviorNode&)> walk = [&](const BehaviorNode& n) {
    ids.push_back(n.id);
    if (const auto* comp = std::get_if<Composite>(&n.payload)) {
      for (const auto& c : comp->children) walk(c);
    }
  };
  walk(tree.root);
  return ids;
}

namespace {

struct Validator {
  const BehaviorTree& tree;
  const ValidationContext& ctx;
  std::set<std::string> own_ids;
  std::vector<Diagnostic> out;

  void add(std::string code, const std::string& node, std::string message) {
    out.push_back({std::move(code), node, std::move(message)});
  }

  bool node_exists(const std::string& agent, const std::string& node) const {
    if (agent.empty() || agent == tree.agent) return own_ids.contains(node);
    const auto it = ctx.nodes.find(agent);
    return it != ctx.nodes.end() && it->second.contains(node);
  }

  void check_agent(const std::string& node, const std::string& agent) {
    if (!ctx.agents.contains(agent)) add("DanglingReference", node, "unknown agent '" + agent + "'");
  }

  void check_condition(const std::string& node, const TriggerCondition& c) {
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, DistanceCondition>) {
            if (v.target_kind == DistanceCondition::TargetKind::kAgent) check_agent(node, v.target);
            if (v.target_kind == DistanceCondition::TargetKind::kObstacle &&
                !ctx.obstacles.contains(v.target)) {
              add("DanglingReference", node, "unknown obstacle '" + v.target + "'");
            }
          } else if constexpr (std::is_same_v<T, AreaCondition>) {
            if (v.polygon.size() < 3) add("InvalidPolygon", node, "area needs >= 3 vertices");
          } else if constexpr (std::is_same_v<T, RelativePositionCondition>) {
            check_agent(node, v.target);
          } else if constexpr (std::is_same_v<T, EndsByBehaviorCondition>) {
            if (!v.agent.empty() && v.agent != tree.agent && !ctx.agents.contains(v.agent)) {
              add("DanglingReference", node, "unknown agent '" + v.agent + "'");
            } else if (!node_exists(v.agent, v.node)) {
              add("DanglingReference", node, "unknown node '" + v.node + "'");
            }
          } else if constexpr (std::is_same_v<T, CombinedCondition>) {
            for (const auto& sub : v.conditions) check_condition(node, sub);
          }
        },
        c.value);
  }

  void check_lane(const std::string& node, const std::string& lane) {
    if (!ctx.lanes.contains(lane)) add("DanglingReference", node, "unknown lane '" + lane + "'");
  }

  void check_duration(const std::string& node, double duration) {
    if (!(duration > 0.0)) add("NonpositiveDuration", node, "duration must be > 0");
  }

  void check_leaf(const std::string& node, const LeafBehavior& leaf) {
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, TrackBehavior>) {
            check_agent(node, v.target);
            if (v.gap && *v.gap < 0.0) add("NegativeGap", node, "track gap must be >= 0");
          } else if constexpr (std::is_same_v<T, ChangeLaneBehavior>) {
            check_duration(node, v.duration);
            if (v.lateral_duration) check_duration(node, *v.lateral_duration);
            if (v.end_speed < 0.0) add("NegativeSpeed", node, "end speed must be >= 0");
          } else if constexpr (std::is_same_v<T, CruiseBehavior>) {
            if (v.duration) check_duration(node, *v.duration);
            if (v.speed < 0.0) add("NegativeSpeed", node, "speed must be >= 0");
          } else if constexpr (std::is_same_v<T, FollowLogBehavior>) {
            check_duration(node, v.end.t - v.start.t);
          } else {
            check_duration(node, v.duration);
            check_lane(node, v.target_lane);
          }
        },
        leaf);
  }

  void walk(const BehaviorNode& n) {
    if (n.condition) {
      if (condition_depth(*n.condition) > kMaxConditionDepth) {
        add("ConditionTooDeep", n.id, "combined nesting exceeds " + std::to_string(kMaxConditionDepth));
      }
      check_condition(n.id, *n.condition);
    }
    if (const auto* comp = std::get_if<Composite>(&n.payload)) {
      if (comp->children.empty()) add("EmptyComposite", n.id, "composite has no children");
      for (const auto& c : comp->children) walk(c);
    } else {
      check_leaf(n.id, std::get<LeafBehavior>(n.payload));
    }
  }
};

}  // namespace

std::vector<Diagnostic> validate(const BehaviorTree& tree, const ValidationContext& ctx) {
  Validator v{tree, ctx, {}, {}};
  for (const auto& id : node_ids(tree)) {
    if (id.empty()) {
      v.add("MissingId", id, "node without id");
    } else if (!v.own_ids.insert(id).second) {
      v.add("DuplicateId", id, "node id '" + id + "' is not unique");
    }
  }
  v.walk(tree.root);
  return v.out;
}

}  // namespace btfuzz
