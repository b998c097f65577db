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

#include "btfuzz/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "btfuzz/error.hpp"
#include "btfuzz/geometry.hpp"

namespace btfuzz {

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::kCollision: return "collision";
    case EventKind::kOffRoad: return "off_road";
    case EventKind::kLinePressure: return "line_pressure";
    case EventKind::kHarshEpisode: return "harsh_episode";
  }
  return "collision";
}

std::vector<std::string> SimulationTrace::participants() const {
  std::vector<std::string> ids;
  if (!frames.empty()) {
    for (const auto& a : frames.front().agents) ids.push_back(a.id);
  }
  return ids;
}

Vec2 frame_to_world(const ReferencePath& path, double s, double d) {
  if (s < 0.0) {
    return path.point_at(0.0) + s * path.tangent_at(0.0) + d * path.normal_at(0.0);
  }
  if (s > path.length()) {
    const double L = path.length();
    return path.point_at(L) + (s - L) * path.tangent_at(L) + d * path.normal_at(L);
  }
  return path.point_at(s) + d * path.normal_at(s);
}

namespace {

constexpr double kPlanTolerance = 1e-6;
constexpr double kPlanVelocityGain = 1.5;
constexpr double kLaneChangeRate = 0.05;

}  // namespace

void place_agent(AgentState& a, const LaneMap& map) {
  const ReferencePath& path = map.lane(a.frame_lane).centerline;
  const Vec2 p = frame_to_world(path, a.frenet.s, a.frenet.d);
  a.x = p.x;
  a.y = p.y;
  const Vec2 t = path.tangent_at(std::clamp(a.frenet.s, 0.0, path.length()));
  double heading = std::atan2(t.y, t.x);
  if (std::abs(a.frenet.d_dot) > 1e-12) heading += std::atan2(a.frenet.d_dot, std::max(a.frenet.s_dot, 0.1));
  a.heading = heading;
  a.speed = a.frenet.s_dot;
  a.accel = a.frenet.s_ddot;
  if (const auto match = map.nearest_lane(p)) a.lane = match->lane->id;
}

namespace {

AgentState make_agent(const std::string& id, AgentKind kind, const InitialState& init,
                      const LaneMap& map) {
  AgentState a;
  a.id = id;
  a.kind = kind;
  a.length = init.length;
  a.width = init.width;
  a.frame_lane = init.lane;
  a.frenet.s = init.s;
  a.frenet.d = init.d;
  a.frenet.s_dot = init.speed;
  a.frenet.s_ddot = init.accel;
  place_agent(a, map);
  return a;
}

void integrate(FrenetState& f, double accel, double dt) {
  const double a = std::clamp(accel, kMinAccel, kMaxAccel);
  const double v = f.s_dot;
  const double v1 = v + a * dt;
  if (v1 >= 0.0) {
    f.s += v * dt + 0.5 * a * dt * dt;
    f.s_dot = v1;
    f.s_ddot = a;
  } else {
    const double stop = a < 0.0 ? -v / a : 0.0;
    f.s += 0.5 * v * stop;
    f.s_dot = 0.0;
    f.s_ddot = -v / dt;
  }
}

void advance(AgentState& a, const AgentCommand& cmd, double dt) {
  FrenetState& f = a.frenet;
  double accel = cmd.accel;
  bool adopted = false;
  if (cmd.plan) {
    const PlannedSegment& plan = *cmd.plan;
    const FrenetState p0 = plan.at(cmd.plan_tau);
    const FrenetState pm = plan.at(cmd.plan_tau + 0.5 * dt);
    const FrenetState p1 = plan.at(cmd.plan_tau + dt);
    const bool on_plan = std::abs(f.s - p0.s) <= kPlanTolerance * (1.0 + std::abs(p0.s)) &&
                         std::abs(f.s_dot - p0.s_dot) <= kPlanTolerance;
    const auto within = [](double x) { return x >= kMinAccel - 1e-9 && x <= kMaxAccel + 1e-9; };
    const bool feasible = p1.s_dot >= 0.0 && within(p0.s_ddot) && within(pm.s_ddot) &&
                          within(p1.s_ddot);
    if (on_plan && feasible) {
      f.s = p1.s;
      f.s_dot = p1.s_dot;
      f.s_ddot = p1.s_ddot;
      adopted = true;
    } else {
      accel = p0.s_ddot + kPlanVelocityGain * (p0.s_dot - f.s_dot);
    }
    f.d = p1.d;
    f.d_dot = p1.d_dot;
    f.d_ddot = p1.d_ddot;
  } else {
    f.d_dot = 0.0;
    f.d_ddot = 0.0;
  }
  if (!adopted) integrate(f, accel, dt);
}

}  // namespace

void advance_agent(AgentState& agent, const AgentCommand& cmd, double dt, const LaneMap& map) {
  advance(agent, cmd, dt);
  place_agent(agent, map);
}

namespace {

struct Tracker {
  bool frozen = false;
  bool off_road = false;
  std::optional<double> straddle_start;
  int harsh_frames = 0;
  double harsh_start = 0.0;
  double harsh_peak = 0.0;
  bool in_ego_lane = false;
  std::optional<double> entered_ego_lane;
};

class Observer {
 public:
  Observer(const LaneMap& map, const SimConfig& cfg, std::size_t agents)
      : map_(map), cfg_(cfg), trackers_(agents) {}

  std::vector<Tracker>& trackers() { return trackers_; }

  /// Records events for the current state; returns true on a new ego collision.
  bool observe(const WorldState& w, std::size_t step, SimulationTrace& trace) {
    const auto& agents = w.agents;
    bool ego_hit = false;
    const AgentState& ego = agents.front();
    const Lane* ego_lane = map_.find_lane(ego.lane);
    if (!ego_lane) ego_lane = map_.find_lane(ego.frame_lane);

    std::vector<std::array<Vec2, 4>> boxes;
    boxes.reserve(agents.size());
    for (const auto& a : agents) boxes.push_back(a.footprint().corners());

    // Encroachment bookkeeping precedes collision checks so that an agent
    // entering the ego lane on the contact step carries that time.
    for (std::size_t i = 1; i < agents.size(); ++i) {
      auto& tr = trackers_[i];
      const auto [lo, hi] = lateral_extent(agents[i], ego_lane->centerline);
      const double half = 0.5 * ego_lane->width;
      const bool inside = hi > -half && lo < half;
      if (inside && !tr.in_ego_lane && step > 0) tr.entered_ego_lane = w.time;
      tr.in_ego_lane = inside;
    }

    for (std::size_t i = 0; i < agents.size(); ++i) {
      for (std::size_t j = i + 1; j < agents.size(); ++j) {
        const bool overlap = convex_overlap(boxes[i], boxes[j]);
        const auto key = agents[i].id + "\n" + agents[j].id;
        if (!overlap) {
          touching_.erase(key);
          continue;
        }
        if (!touching_.insert(key).second) continue;
        Event e;
        e.kind = EventKind::kCollision;
        e.time = w.time;
        e.participants = {agents[i].id, agents[j].id};
        if (i == 0) {
          e.collision = collision_info(w, agents[j], trackers_[j], ego_lane);
          ego_hit = true;
        } else {
          trackers_[i].frozen = true;
          trackers_[j].frozen = true;
        }
        trace.events.push_back(std::move(e));
      }
      for (const auto& ob : map_.obstacles()) {
        const bool overlap = convex_overlap(boxes[i], ob.polygon);
        const auto key = agents[i].id + "\n#" + ob.id;
        if (!overlap) {
          touching_.erase(key);
          continue;
        }
        if (!touching_.insert(key).second) continue;
        Event e;
        e.kind = EventKind::kCollision;
        e.time = w.time;
        e.participants = {agents[i].id, ob.id};
        e.with_obstacle = true;
        if (i == 0) {
          CollisionInfo info;
          info.other = ob.id;
          info.other_is_obstacle = true;
          info.ego_lane = ego.lane;
          info.ego_speed = ego.speed;
          info.longitudinal_offset = kInfinity;
          e.collision = info;
          ego_hit = true;
        } else {
          trackers_[i].frozen = true;
        }
        trace.events.push_back(std::move(e));
      }
    }

    for (std::size_t j = 1; j < agents.size(); ++j) {
      trace.min_dist = std::min(trace.min_dist, convex_gap(boxes[0], boxes[j]));
      trace.min_ttc = std::min(trace.min_ttc, ttc(ego, agents[j], *ego_lane));
    }

    for (std::size_t i = 0; i < agents.size(); ++i) {
      const auto& a = agents[i];
      auto& tr = trackers_[i];
      const bool off = !map_.on_road(a.position());
      if (off && !tr.off_road) {
        Event e;
        e.kind = EventKind::kOffRoad;
        e.time = w.time;
        e.participants = {a.id};
        trace.events.push_back(std::move(e));
      }
      tr.off_road = off;

      bool straddling = false;
      if (const Lane* lane = map_.find_lane(a.lane)) {
        const auto [lo, hi] = lateral_extent(a, lane->centerline);
        const double half = 0.5 * lane->width;
        straddling = hi > half || lo < -half;
      }
      if (straddling && !tr.straddle_start) tr.straddle_start = w.time;
      if (!straddling && tr.straddle_start) close_straddle(a.id, tr, w.time, trace);

      if (std::abs(a.accel) > cfg_.harsh_accel) {
        if (tr.harsh_frames == 0) {
          tr.harsh_start = w.time;
          tr.harsh_peak = 0.0;
        }
        ++tr.harsh_frames;
        if (std::abs(a.accel) > std::abs(tr.harsh_peak)) tr.harsh_peak = a.accel;
      } else {
        close_harsh(a.id, tr, trace);
      }
    }
    return ego_hit;
  }

  void finish(const WorldState& w, SimulationTrace& trace) {
    for (std::size_t i = 0; i < w.agents.size(); ++i) {
      auto& tr = trackers_[i];
      if (tr.straddle_start) close_straddle(w.agents[i].id, tr, w.time, trace);
      close_harsh(w.agents[i].id, tr, trace);
    }
  }

 private:
  static void close_straddle(const std::string& id, Tracker& tr, double now,
                             SimulationTrace& trace) {
    Event e;
    e.kind = EventKind::kLinePressure;
    e.time = *tr.straddle_start;
    e.duration = now - *tr.straddle_start;
    e.participants = {id};
    tr.straddle_start.reset();
    if (e.duration > 0.0) trace.events.push_back(std::move(e));
  }

  void close_harsh(const std::string& id, Tracker& tr, SimulationTrace& trace) const {
    if (tr.harsh_frames == 0) return;
    const double duration = tr.harsh_frames * trace.dt;
    if (duration >= cfg_.harsh_min_duration - 1e-9) {
      Event e;
      e.kind = EventKind::kHarshEpisode;
      e.time = tr.harsh_start;
      e.duration = duration;
      e.participants = {id};
      e.peak_accel = tr.harsh_peak;
      trace.events.push_back(std::move(e));
    }
    tr.harsh_frames = 0;
  }

  static double ttc(const AgentState& ego, const AgentState& other, const Lane& lane) {
    const auto [lo, hi] = lateral_extent(other, lane.centerline);
    const double half = 0.5 * lane.width;
    if (hi <= -half || lo >= half) return kInfinity;
    const double ds = lane.centerline.foot_of(other.position()).s -
                      lane.centerline.foot_of(ego.position()).s;
    const double gap = std::abs(ds) - 0.5 * (ego.length + other.length);
    const double closing = ds >= 0.0 ? ego.speed - other.speed : other.speed - ego.speed;
    if (gap <= 0.0) return 0.0;
    if (closing <= 0.0) return kInfinity;
    return gap / closing;
  }

  CollisionInfo collision_info(const WorldState& w, const AgentState& other, const Tracker& tr,
                               const Lane* ego_lane) const {
    const AgentState& ego = w.agents.front();
    CollisionInfo info;
    info.other = other.id;
    const auto fe = ego_lane->centerline.foot_of(ego.position());
    const auto fo = ego_lane->centerline.foot_of(other.position());
    info.longitudinal_offset = fo.s - fe.s;
    info.lateral_offset = fo.d - fe.d;
    info.ego_lane = ego.lane;
    info.other_lane = other.lane;
    info.ego_speed = ego.speed;
    info.other_speed = other.speed;
    info.ego_changing_lane = std::abs(ego.frenet.d_dot) > kLaneChangeRate;
    info.other_changing_lane = std::abs(other.frenet.d_dot) > kLaneChangeRate;
    info.encroachment_time = tr.entered_ego_lane;
    return info;
  }

  const LaneMap& map_;
  const SimConfig& cfg_;
  std::vector<Tracker> trackers_;
  std::set<std::string> touching_;
};

}  // namespace

WorldState initial_world(const LogicalScenario& scenario) {
  if (!scenario.map) throw Error(ErrorCode::kInvalidArgument, "scenario has no map");
  WorldState w;
  w.map = scenario.map.get();
  w.agents.push_back(make_agent("ego", AgentKind::kEgo, scenario.ego.init, *w.map));
  for (const auto& spec : scenario.agents) {
    w.agents.push_back(make_agent(spec.id, spec.kind, spec.init, *w.map));
  }
  return w;
}

SimulationTrace run(const LogicalScenario& scenario, const SimConfig& config) {
  if (!scenario.variables.empty() || !scenario.relative_variables.empty()) {
    throw Error(ErrorCode::kScenarioUnboundVariables,
                std::to_string(scenario.variables.size() + scenario.relative_variables.size()) +
                    " variables are unbound");
  }
  const double dt = config.dt;
  if (!(dt > 0.0 && dt <= 0.2)) throw Error(ErrorCode::kInvalidArgument, "dt must lie in (0, 0.2]");
  const double horizon = config.horizon.value_or(scenario.horizon);
  if (!(horizon >= 0.0 && horizon <= 300.0)) {
    throw Error(ErrorCode::kInvalidArgument, "horizon must lie in [0, 300] s");
  }

  WorldState world = initial_world(scenario);
  const LaneMap& map = *world.map;
  std::vector<std::optional<TreeRunner>> runners(world.agents.size());
  for (std::size_t i = 0; i < scenario.agents.size(); ++i) {
    if (scenario.agents[i].tree) runners[i + 1].emplace(*scenario.agents[i].tree);
  }

  SimulationTrace trace;
  trace.dt = dt;
  Observer observer(map, config, world.agents.size());
  const auto steps = static_cast<std::size_t>(std::llround(horizon / dt));
  trace.frames.reserve(steps + 1);
  std::vector<AgentCommand> commands(world.agents.size());

  for (std::size_t k = 0;; ++k) {
    world.time = static_cast<double>(k) * dt;
    const bool ego_hit = observer.observe(world, k, trace);
    trace.frames.push_back({world.time, world.agents});
    if (ego_hit) {
      trace.termination = "ego_collision";
      break;
    }
    if (k >= steps) {
      trace.termination = "horizon";
      break;
    }
    if (scenario.end_s && world.agents.front().frenet.s >= *scenario.end_s &&
        std::all_of(runners.begin(), runners.end(),
                    [](const auto& r) { return !r || r->finished(); })) {
      trace.termination = "scenario_end";
      break;
    }

    auto& trackers = observer.trackers();
    for (std::size_t i = 1; i < world.agents.size(); ++i) {
      commands[i] = AgentCommand{};
      if (!trackers[i].frozen && runners[i]) commands[i] = runners[i]->tick(world, dt);
    }
    for (std::size_t i = 1; i < world.agents.size(); ++i) {
      if (runners[i]) world.completed[world.agents[i].id] = runners[i]->completed();
    }
    commands[0] = config.ego_policy ? config.ego_policy(world, scenario.ego.controller)
                                    : ego_controller(world, scenario.ego.controller);
    for (std::size_t i = 0; i < world.agents.size(); ++i) {
      AgentState& a = world.agents[i];
      if (trackers[i].frozen) {
        a.frenet.s_dot = 0.0;
        a.frenet.s_ddot = 0.0;
        a.frenet.d_dot = 0.0;
        a.frenet.d_ddot = 0.0;
      } else {
        advance(a, commands[i], dt);
      }
      place_agent(a, map);
    }
  }
  observer.finish(world, trace);
  std::stable_sort(trace.events.begin(), trace.events.end(),
                   [](const Event& a, const Event& b) { return a.time < b.time; });
  return trace;
}

}  // namespace btfuzz
