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

#include "btfuzz/json_io.hpp"

#include <fstream>
#include <sstream>

#include "btfuzz/error.hpp"

namespace btfuzz {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::kParseError, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) bad(std::string("expected an object holding '") + key + "'");
  const auto it = j.find(key);
  if (it == j.end()) bad(std::string("missing field '") + key + "'");
  return *it;
}

double number(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number()) bad(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

double number_or(const Json& j, const char* key, double fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  return number(j, key);
}

std::optional<double> optional_number(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return number(j, key);
}

std::string text(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_string()) bad(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

std::string text_or(const Json& j, const char* key, const std::string& fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  return text(j, key);
}

Json point_json(Vec2 p) { return Json::array({p.x, p.y}); }

Vec2 point_from(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    bad("points are [x, y] number pairs");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

Json points_json(const std::vector<Vec2>& pts) {
  Json arr = Json::array();
  for (const Vec2 p : pts) arr.push_back(point_json(p));
  return arr;
}

std::vector<Vec2> points_from(const Json& j) {
  if (!j.is_array()) bad("expected a point list");
  std::vector<Vec2> pts;
  for (const auto& p : j) pts.push_back(point_from(p));
  return pts;
}

Json init_json(const InitialState& s) {
  Json j;
  j["lane"] = s.lane;
  j["s"] = s.s;
  j["d"] = s.d;
  j["speed"] = s.speed;
  j["accel"] = s.accel;
  j["length"] = s.length;
  j["width"] = s.width;
  return j;
}

InitialState init_from(const Json& j) {
  InitialState s;
  s.lane = text(j, "lane");
  s.s = number(j, "s");
  s.d = number_or(j, "d", 0.0);
  s.speed = number_or(j, "speed", 0.0);
  s.accel = number_or(j, "accel", 0.0);
  s.length = number_or(j, "length", s.length);
  s.width = number_or(j, "width", s.width);
  return s;
}

Json idm_json(const IdmParams& p) {
  Json j;
  j["desired_speed"] = p.desired_speed;
  j["max_accel"] = p.max_accel;
  j["comfort_decel"] = p.comfort_decel;
  j["min_gap"] = p.min_gap;
  j["time_headway"] = p.time_headway;
  j["exponent"] = p.exponent;
  j["emergency_decel"] = p.emergency_decel;
  j["emergency_ttc"] = p.emergency_ttc;
  j["perception_overlap"] = p.perception_overlap;
  return j;
}

IdmParams idm_from(const Json& j) {
  IdmParams p;
  p.desired_speed = number_or(j, "desired_speed", p.desired_speed);
  p.max_accel = number_or(j, "max_accel", p.max_accel);
  p.comfort_decel = number_or(j, "comfort_decel", p.comfort_decel);
  p.min_gap = number_or(j, "min_gap", p.min_gap);
  p.time_headway = number_or(j, "time_headway", p.time_headway);
  p.exponent = number_or(j, "exponent", p.exponent);
  p.emergency_decel = number_or(j, "emergency_decel", p.emergency_decel);
  p.emergency_ttc = number_or(j, "emergency_ttc", p.emergency_ttc);
  p.perception_overlap = number_or(j, "perception_overlap", p.perception_overlap);
  return p;
}

TriggerCondition parse_condition(const Json& j, int depth);

}  // namespace

Json to_json(const FrenetState& st) {
  Json j;
  j["s"] = st.s;
  j["s_dot"] = st.s_dot;
  j["s_ddot"] = st.s_ddot;
  j["d"] = st.d;
  j["d_dot"] = st.d_dot;
  j["d_ddot"] = st.d_ddot;
  j["t"] = st.t;
  return j;
}

FrenetState frenet_from_json(const Json& j) {
  FrenetState st;
  st.s = number(j, "s");
  st.s_dot = number_or(j, "s_dot", 0.0);
  st.s_ddot = number_or(j, "s_ddot", 0.0);
  st.d = number_or(j, "d", 0.0);
  st.d_dot = number_or(j, "d_dot", 0.0);
  st.d_ddot = number_or(j, "d_ddot", 0.0);
  st.t = number(j, "t");
  return st;
}

Json to_json(const TriggerCondition& c) {
  return std::visit(
      [](const auto& v) -> Json {
        using T = std::decay_t<decltype(v)>;
        Json j;
        if constexpr (std::is_same_v<T, TimeCondition>) {
          j["type"] = "time";
          j["at"] = v.at;
        } else if constexpr (std::is_same_v<T, DistanceCondition>) {
          j["type"] = "distance";
          Json to;
          switch (v.target_kind) {
            case DistanceCondition::TargetKind::kAgent: to["agent"] = v.target; break;
            case DistanceCondition::TargetKind::kObstacle: to["obstacle"] = v.target; break;
            case DistanceCondition::TargetKind::kPoint: to["point"] = point_json(v.point); break;
          }
          j["to"] = to;
          j["threshold"] = v.threshold;
          j["comparator"] = std::string(to_string(v.cmp));
        } else if constexpr (std::is_same_v<T, AreaCondition>) {
          j["type"] = "area";
          j["polygon"] = points_json(v.polygon);
        } else if constexpr (std::is_same_v<T, RelativePositionCondition>) {
          j["type"] = "relative_position";
          j["target"] = v.target;
          if (v.longitudinal) j["longitudinal"] = *v.longitudinal;
          if (v.lateral) j["lateral"] = *v.lateral;
          j["comparator"] = std::string(to_string(v.cmp));
        } else if constexpr (std::is_same_v<T, EndsByBehaviorCondition>) {
          j["type"] = "ends_by_behavior";
          j["node"] = v.node;
          if (!v.agent.empty()) j["agent"] = v.agent;
        } else {
          j["type"] = v.mode == CombinedCondition::Mode::kAllOf ? "all_of" : "any_of";
          Json arr = Json::array();
          for (const auto& sub : v.conditions) arr.push_back(to_json(sub));
          j["conditions"] = arr;
        }
        return j;
      },
      c.value);
}

TriggerCondition condition_from_json(const Json& j) { return parse_condition(j, 0); }

namespace {

TriggerCondition parse_condition(const Json& j, int depth) {
  const std::string type = text(j, "type");
  TriggerCondition c;
  if (type == "time") {
    c.value = TimeCondition{number(j, "at")};
  } else if (type == "distance") {
    DistanceCondition d;
    const Json& to = field(j, "to");
    if (to.contains("agent")) {
      d.target_kind = DistanceCondition::TargetKind::kAgent;
      d.target = text(to, "agent");
    } else if (to.contains("obstacle")) {
      d.target_kind = DistanceCondition::TargetKind::kObstacle;
      d.target = text(to, "obstacle");
    } else if (to.contains("point")) {
      d.target_kind = DistanceCondition::TargetKind::kPoint;
      d.point = point_from(to.at("point"));
    } else {
      bad("distance target needs 'agent', 'obstacle' or 'point'");
    }
    d.threshold = number(j, "threshold");
    d.cmp = comparator_from_string(text_or(j, "comparator", "<="));
    c.value = d;
  } else if (type == "area") {
    c.value = AreaCondition{points_from(field(j, "polygon"))};
  } else if (type == "relative_position") {
    RelativePositionCondition r;
    r.target = text(j, "target");
    r.longitudinal = optional_number(j, "longitudinal");
    r.lateral = optional_number(j, "lateral");
    r.cmp = comparator_from_string(text_or(j, "comparator", ">="));
    c.value = r;
  } else if (type == "ends_by_behavior") {
    c.value = EndsByBehaviorCondition{text(j, "node"), text_or(j, "agent", "")};
  } else if (type == "all_of" || type == "any_of") {
    if (depth + 1 > kMaxConditionDepth) {
      bad("combined conditions nest deeper than " + std::to_string(kMaxConditionDepth));
    }
    CombinedCondition comb;
    comb.mode = type == "all_of" ? CombinedCondition::Mode::kAllOf : CombinedCondition::Mode::kAnyOf;
    const Json& subs = field(j, "conditions");
    if (!subs.is_array()) bad("'conditions' must be an array");
    for (const auto& s : subs) comb.conditions.push_back(parse_condition(s, depth + 1));
    c.value = std::move(comb);
  } else {
    bad("unknown condition type '" + type + "'");
  }
  return c;
}

}  // namespace

Json to_json(const BehaviorNode& node) {
  Json j;
  j["id"] = node.id;
  if (const auto* comp = std::get_if<Composite>(&node.payload)) {
    j["type"] = std::string(to_string(comp->kind));
    if (node.condition) j["condition"] = to_json(*node.condition);
    Json kids = Json::array();
    for (const auto& c : comp->children) kids.push_back(to_json(c));
    j["children"] = kids;
    return j;
  }
  std::visit(
      [&j](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, TrackBehavior>) {
          j["type"] = "track";
          j["target"] = v.target;
          j["side"] = v.side == TrackBehavior::Side::kAhead ? "ahead" : "behind";
          if (v.gap) j["gap"] = *v.gap;
        } else if constexpr (std::is_same_v<T, ChangeLaneBehavior>) {
          j["type"] = "change_lane";
          j["duration"] = v.duration;
          j["offset"] = v.offset;
          j["end_speed"] = v.end_speed;
          if (v.lateral_duration) j["lateral_duration"] = *v.lateral_duration;
        } else if constexpr (std::is_same_v<T, CruiseBehavior>) {
          j["type"] = "cruise";
          j["speed"] = v.speed;
          if (v.duration) j["duration"] = *v.duration;
          if (v.offset) j["offset"] = *v.offset;
        } else if constexpr (std::is_same_v<T, FollowLogBehavior>) {
          j["type"] = "follow_log";
          j["start"] = to_json(v.start);
          j["end"] = to_json(v.end);
        } else if constexpr (std::is_same_v<T, MergeInBehavior>) {
          j["type"] = "merge_in";
          j["target_lane"] = v.target_lane;
          j["duration"] = v.duration;
        } else {
          j["type"] = "merge_out";
          j["target_lane"] = v.target_lane;
          j["duration"] = v.duration;
        }
      },
      std::get<LeafBehavior>(node.payload));
  if (node.condition) j["condition"] = to_json(*node.condition);
  return j;
}

BehaviorNode node_from_json(const Json& j) {
  BehaviorNode node;
  node.id = text(j, "id");
  const std::string type = text(j, "type");
  if (j.contains("condition") && !j.at("condition").is_null()) {
    node.condition = condition_from_json(j.at("condition"));
  }
  const auto composite = [&](CompositeKind kind) {
    Composite comp;
    comp.kind = kind;
    const Json& kids = field(j, "children");
    if (!kids.is_array()) bad("'children' must be an array");
    for (const auto& k : kids) comp.children.push_back(node_from_json(k));
    node.payload = std::move(comp);
  };
  if (type == "sequence") {
    composite(CompositeKind::kSequence);
  } else if (type == "parallel") {
    composite(CompositeKind::kParallel);
  } else if (type == "cyclic") {
    composite(CompositeKind::kCyclic);
  } else if (type == "selection" || type == "sequential_selection") {
    composite(CompositeKind::kSequentialSelection);
  } else if (type == "track") {
    TrackBehavior t;
    t.target = text(j, "target");
    const std::string side = text_or(j, "side", "behind");
    if (side != "ahead" && side != "behind") bad("track side must be 'ahead' or 'behind'");
    t.side = side == "ahead" ? TrackBehavior::Side::kAhead : TrackBehavior::Side::kBehind;
    t.gap = optional_number(j, "gap");
    node.payload = LeafBehavior{t};
  } else if (type == "change_lane") {
    ChangeLaneBehavior c;
    c.duration = number(j, "duration");
    c.offset = number(j, "offset");
    c.end_speed = number(j, "end_speed");
    c.lateral_duration = optional_number(j, "lateral_duration");
    if (j.contains("direction")) {
      const std::string dir = text(j, "direction");
      if (dir == "left") {
        c.offset = std::abs(c.offset);
      } else if (dir == "right") {
        c.offset = -std::abs(c.offset);
      } else {
        bad("direction must be 'left' or 'right'");
      }
    }
    node.payload = LeafBehavior{c};
  } else if (type == "cruise") {
    node.payload = LeafBehavior{CruiseBehavior{number(j, "speed"), optional_number(j, "duration"),
                                                optional_number(j, "offset")}};
  } else if (type == "follow_log") {
    node.payload = LeafBehavior{
        FollowLogBehavior{frenet_from_json(field(j, "start")), frenet_from_json(field(j, "end"))}};
  } else if (type == "merge_in") {
    node.payload = LeafBehavior{MergeInBehavior{text(j, "target_lane"), number(j, "duration")}};
  } else if (type == "merge_out") {
    node.payload = LeafBehavior{MergeOutBehavior{text(j, "target_lane"), number(j, "duration")}};
  } else {
    bad("unknown node type '" + type + "'");
  }
  return node;
}

Json to_json(const LaneMap& map) {
  Json lanes = Json::array();
  for (const auto& lane : map.lanes()) {
    Json l;
    l["id"] = lane.id;
    l["width"] = lane.width;
    l["centerline"] = points_json(lane.centerline.samples());
    if (lane.left) l["left"] = *lane.left;
    if (lane.right) l["right"] = *lane.right;
    lanes.push_back(l);
  }
  Json obstacles = Json::array();
  for (const auto& ob : map.obstacles()) {
    Json o;
    o["id"] = ob.id;
    o["polygon"] = points_json(ob.polygon);
    obstacles.push_back(o);
  }
  Json j;
  j["lanes"] = lanes;
  j["obstacles"] = obstacles;
  return j;
}

LaneMap map_from_json(const Json& j) {
  std::vector<Lane> lanes;
  const Json& ls = field(j, "lanes");
  if (!ls.is_array()) bad("'lanes' must be an array");
  for (const auto& l : ls) {
    Lane lane{text(l, "id"), ReferencePath(points_from(field(l, "centerline"))),
              number_or(l, "width", 3.5), std::nullopt, std::nullopt};
    if (l.contains("left") && !l.at("left").is_null()) lane.left = text(l, "left");
    if (l.contains("right") && !l.at("right").is_null()) lane.right = text(l, "right");
    lanes.push_back(std::move(lane));
  }
  std::vector<Obstacle> obstacles;
  if (j.contains("obstacles")) {
    for (const auto& o : j.at("obstacles")) {
      obstacles.push_back({text(o, "id"), points_from(field(o, "polygon"))});
    }
  }
  return LaneMap(std::move(lanes), std::move(obstacles));
}

Json to_json(const Domain& d) {
  return std::visit(
      [](const auto& v) -> Json {
        using T = std::decay_t<decltype(v)>;
        Json j;
        if constexpr (std::is_same_v<T, UniformDomain>) {
          j["type"] = "uniform";
          j["lo"] = v.lo;
          j["hi"] = v.hi;
        } else if constexpr (std::is_same_v<T, NormalDomain>) {
          j["type"] = "normal";
          j["mean"] = v.mean;
          j["std"] = v.std;
          j["lo"] = v.lo;
          j["hi"] = v.hi;
        } else {
          j["type"] = "discrete";
          j["values"] = v.values;
        }
        return j;
      },
      d);
}

Domain domain_from_json(const Json& j) {
  const std::string type = text(j, "type");
  if (type == "uniform") return UniformDomain{number(j, "lo"), number(j, "hi")};
  if (type == "normal") {
    return NormalDomain{number(j, "mean"), number(j, "std"), number(j, "lo"), number(j, "hi")};
  }
  if (type == "discrete") {
    const Json& vals = field(j, "values");
    if (!vals.is_array()) bad("'values' must be an array");
    DiscreteDomain d;
    for (const auto& v : vals) {
      if (!v.is_number()) bad("discrete values must be numbers");
      d.values.push_back(v.get<double>());
    }
    return d;
  }
  bad("unknown domain type '" + type + "'");
}

Json to_json(const LogicalScenario& ls) {
  Json j;
  j["name"] = ls.name;
  if (!ls.map_ref.empty()) {
    j["map"] = ls.map_ref;
  } else if (ls.map) {
    j["map"] = to_json(*ls.map);
  }
  j["horizon"] = ls.horizon;
  if (ls.end_s) j["end_s"] = *ls.end_s;
  Json ego;
  ego["init"] = init_json(ls.ego.init);
  ego["controller"] = idm_json(ls.ego.controller);
  j["ego"] = ego;
  Json agents = Json::array();
  for (const auto& a : ls.agents) {
    Json aj;
    aj["id"] = a.id;
    aj["kind"] = std::string(to_string(a.kind));
    aj["init"] = init_json(a.init);
    if (a.tree) aj["tree"] = to_json(a.tree->root);
    agents.push_back(aj);
  }
  j["agents"] = agents;
  Json vars = Json::array();
  for (const auto& v : ls.variables) {
    Json vj;
    vj["name"] = v.name;
    vj["target"] = v.target;
    vj["domain"] = to_json(v.domain);
    vars.push_back(vj);
  }
  j["variables"] = vars;
  Json rels = Json::array();
  for (const auto& r : ls.relative_variables) {
    Json rj;
    rj["name"] = r.name;
    rj["base"] = r.base;
    rj["target"] = r.target;
    Json t;
    if (!r.transform.function.empty()) t["function"] = r.transform.function;
    t["scale"] = r.transform.scale;
    t["offset"] = r.transform.offset;
    if (r.transform.clamp_lo) t["clamp_lo"] = *r.transform.clamp_lo;
    if (r.transform.clamp_hi) t["clamp_hi"] = *r.transform.clamp_hi;
    rj["transform"] = t;
    if (r.lo) rj["lo"] = *r.lo;
    if (r.hi) rj["hi"] = *r.hi;
    rels.push_back(rj);
  }
  j["relative_variables"] = rels;
  Json dists = Json::object();
  for (const auto& [name, values] : ls.distributions) dists[name] = values;
  j["distributions"] = dists;
  return j;
}

LogicalScenario scenario_from_json(const Json& j, const std::filesystem::path& base_dir) {
  try {
    LogicalScenario ls;
    ls.name = text_or(j, "name", "");
    const Json& m = field(j, "map");
    if (m.is_string()) {
      ls.map_ref = m.get<std::string>();
      const std::filesystem::path p = base_dir.empty() ? std::filesystem::path(ls.map_ref)
                                                        : base_dir / ls.map_ref;
      ls.map = std::make_shared<const LaneMap>(load_map(p));
    } else {
      ls.map = std::make_shared<const LaneMap>(map_from_json(m));
    }
    ls.horizon = number_or(j, "horizon", ls.horizon);
    ls.end_s = optional_number(j, "end_s");
    const Json& ego = field(j, "ego");
    ls.ego.init = init_from(field(ego, "init"));
    if (ego.contains("controller")) ls.ego.controller = idm_from(ego.at("controller"));
    if (j.contains("agents")) {
      for (const auto& aj : j.at("agents")) {
        AgentSpec a;
        a.id = text(aj, "id");
        a.kind = agent_kind_from_string(text_or(aj, "kind", "vehicle"));
        a.init = init_from(field(aj, "init"));
        if (aj.contains("tree") && !aj.at("tree").is_null()) {
          a.tree = BehaviorTree{a.id, node_from_json(aj.at("tree"))};
        }
        ls.agents.push_back(std::move(a));
      }
    }
    if (j.contains("variables")) {
      for (const auto& vj : j.at("variables")) {
        ls.variables.push_back(
            {text(vj, "name"), text_or(vj, "target", ""), domain_from_json(field(vj, "domain"))});
      }
    }
    if (j.contains("relative_variables")) {
      for (const auto& rj : j.at("relative_variables")) {
        RelativeVariable r;
        r.name = text(rj, "name");
        r.base = text(rj, "base");
        r.target = text_or(rj, "target", "");
        if (rj.contains("transform")) {
          const Json& t = rj.at("transform");
          r.transform.function = text_or(t, "function", "");
          r.transform.scale = number_or(t, "scale", 1.0);
          r.transform.offset = number_or(t, "offset", 0.0);
          r.transform.clamp_lo = optional_number(t, "clamp_lo");
          r.transform.clamp_hi = optional_number(t, "clamp_hi");
        }
        r.lo = optional_number(rj, "lo");
        r.hi = optional_number(rj, "hi");
        ls.relative_variables.push_back(std::move(r));
      }
    }
    if (j.contains("distributions")) {
      for (const auto& [name, vals] : j.at("distributions").items()) {
        ls.distributions[name] = vals.get<std::vector<double>>();
      }
    }
    return ls;
  } catch (const nlohmann::json::exception& e) {
    bad(e.what());
  }
}

Json events_to_json(const SimulationTrace& trace) {
  Json events = Json::array();
  for (const auto& e : trace.events) {
    Json ej;
    ej["kind"] = std::string(to_string(e.kind));
    ej["time"] = e.time;
    if (e.kind == EventKind::kLinePressure || e.kind == EventKind::kHarshEpisode) {
      ej["duration"] = e.duration;
    }
    ej["participants"] = e.participants;
    if (e.with_obstacle) ej["with_obstacle"] = true;
    if (e.kind == EventKind::kHarshEpisode) ej["peak_accel"] = e.peak_accel;
    if (e.collision) {
      const auto& c = *e.collision;
      Json cj;
      cj["other"] = c.other;
      cj["other_is_obstacle"] = c.other_is_obstacle;
      if (std::isfinite(c.longitudinal_offset)) cj["longitudinal_offset"] = c.longitudinal_offset;
      cj["lateral_offset"] = c.lateral_offset;
      cj["ego_lane"] = c.ego_lane;
      cj["other_lane"] = c.other_lane;
      cj["ego_speed"] = c.ego_speed;
      cj["other_speed"] = c.other_speed;
      cj["ego_changing_lane"] = c.ego_changing_lane;
      cj["other_changing_lane"] = c.other_changing_lane;
      if (c.encroachment_time) cj["encroachment_time"] = *c.encroachment_time;
      ej["collision"] = cj;
    }
    events.push_back(ej);
  }
  Json j;
  j["termination"] = trace.termination;
  j["min_dist"] = std::isfinite(trace.min_dist) ? Json(trace.min_dist) : Json(nullptr);
  j["min_ttc"] = std::isfinite(trace.min_ttc) ? Json(trace.min_ttc) : Json(nullptr);
  j["events"] = events;
  return j;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::kIoError, "failed writing " + path.string());
}

Json read_json_file(const std::filesystem::path& path) {
  const std::string content = read_text_file(path);
  try {
    return Json::parse(content);
  } catch (const nlohmann::json::exception& e) {
    bad(path.string() + ": " + e.what());
  }
}

LaneMap load_map(const std::filesystem::path& path) {
  try {
    return map_from_json(read_json_file(path));
  } catch (const nlohmann::json::exception& e) {
    bad(path.string() + ": " + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kIoError || e.code() == ErrorCode::kParseError) throw;
    bad(path.string() + ": " + e.what());
  }
}

LogicalScenario load_scenario(const std::filesystem::path& path) {
  return scenario_from_json(read_json_file(path), path.parent_path());
}

void save_scenario(const std::filesystem::path& path, const LogicalScenario& ls) {
  write_text_file(path, canonical_dump(to_json(ls)));
}

std::string canonical_dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace btfuzz
