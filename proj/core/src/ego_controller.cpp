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

#include <algorithm>
#include <cmath>

#include "btfuzz/error.hpp"
#include "btfuzz/simulator.hpp"

namespace btfuzz {

double idm_accel(double speed, double gap, double leader_speed, const IdmParams& p) {
  const double free_term = 1.0 - std::pow(speed / p.desired_speed, p.exponent);
  if (!std::isfinite(gap)) return p.max_accel * free_term;
  const double dv = speed - leader_speed;
  const double desired =
      p.min_gap + std::max(0.0, speed * p.time_headway +
                                    speed * dv / (2.0 * std::sqrt(p.max_accel * p.comfort_decel)));
  const double ratio = desired / std::max(gap, 1e-3);
  return p.max_accel * (free_term - ratio * ratio);
}

std::pair<double, double> lateral_extent(const AgentState& agent, const ReferencePath& path) {
  double lo = kInfinity;
  double hi = -kInfinity;
  for (const Vec2 c : agent.footprint().corners()) {
    const double d = path.foot_of(c).d;
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  return {lo, hi};
}

AgentCommand ego_controller(const WorldState& world, const IdmParams& params) {
  const AgentState* ego = world.find("ego");
  if (!ego) throw Error(ErrorCode::kUnknownParticipant, "world has no ego");
  AgentCommand cmd;
  const Lane* lane = nullptr;
  if (world.map) {
    lane = world.map->find_lane(ego->lane);
    if (!lane) lane = world.map->find_lane(ego->frame_lane);
  }
  double gap = kInfinity;
  double leader_speed = 0.0;
  if (lane) {
    const ReferencePath& path = lane->centerline;
    const double half = 0.5 * lane->width;
    const double s_ego = path.foot_of(ego->position()).s;
    for (const auto& other : world.agents) {
      if (other.id == ego->id) continue;
      const auto [lo, hi] = lateral_extent(other, path);
      if (hi <= -half + params.perception_overlap || lo >= half - params.perception_overlap) continue;
      const double ds = path.foot_of(other.position()).s - s_ego;
      if (ds <= 0.0) continue;
      const double g = ds - 0.5 * (ego->length + other.length);
      if (g < gap) {
        gap = g;
        leader_speed = other.speed;
      }
    }
    for (const auto& ob : world.map->obstacles()) {
      double lo = kInfinity;
      double hi = -kInfinity;
      double s_min = kInfinity;
      for (const Vec2 v : ob.polygon) {
        const auto f = path.foot_of(v);
        lo = std::min(lo, f.d);
        hi = std::max(hi, f.d);
        s_min = std::min(s_min, f.s);
      }
      if (hi <= -half || lo >= half) continue;
      const double g = s_min - s_ego - 0.5 * ego->length;
      if (g > -0.5 * ego->length && g < gap) {
        gap = g;
        leader_speed = 0.0;
      }
    }
  }

  const double v = ego->speed;
  if (!std::isfinite(gap)) {
    cmd.accel = std::max(idm_accel(v, gap, 0.0, params), -params.comfort_decel);
    return cmd;
  }
  const double closing = v - leader_speed;
  if (gap <= 0.0 || (closing > 0.0 && gap / closing < params.emergency_ttc)) {
    cmd.accel = -params.emergency_decel;
    return cmd;
  }
  cmd.accel = std::max(idm_accel(v, gap, leader_speed, params), -params.comfort_decel);
  return cmd;
}

}  // namespace btfuzz
