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
#include <limits>

#include "btfuzz/behavior_tree.hpp"
#include "btfuzz/error.hpp"

namespace btfuzz {

namespace {

constexpr double kCompletionSlack = 1e-6;
constexpr std::size_t kNoChoice = std::numeric_limits<std::size_t>::max();
constexpr int kMaxTransitionsPerTick = 256;
constexpr double kCruiseRampAccel = 2.0;
constexpr double kCruiseHoldGain = 2.0;

const AgentState& self_state(const WorldState& world, const std::string& id) {
  const AgentState* a = world.find(id);
  if (!a) throw Error(ErrorCode::kDanglingReference, "tree owner '" + id + "' not in world");
  return *a;
}

FrenetState current_state(const WorldState& world, const AgentState& me) {
  FrenetState st = me.frenet;
  st.t = world.time;
  return st;
}

}  // namespace

TreeRunner::TreeRunner(const BehaviorTree& tree) : tree_(&tree) {
  flatten(tree.root);
  state_.resize(flat_.size());
  reset(0);
}

std::size_t TreeRunner::flatten(const BehaviorNode& node) {
  const std::size_t index = flat_.size();
  flat_.push_back({&node, {}});
  if (const auto* comp = std::get_if<Composite>(&node.payload)) {
    for (const auto& c : comp->children) {
      const std::size_t child = flatten(c);
      flat_[index].children.push_back(child);
    }
  }
  return index;
}

void TreeRunner::reset(std::size_t index) {
  auto& st = state_[index];
  st = NodeState{};
  const auto* comp = std::get_if<Composite>(&flat_[index].node->payload);
  if (comp && comp->kind == CompositeKind::kSequentialSelection) st.cursor = kNoChoice;
  for (std::size_t c : flat_[index].children) reset(c);
}

void TreeRunner::complete(std::size_t index) {
  state_[index].status = Status::kDone;
  completed_.insert(flat_[index].node->id);
}

bool TreeRunner::finished() const { return state_[0].status == Status::kDone; }

bool TreeRunner::open_ended(std::size_t index) const {
  const auto* leaf = std::get_if<LeafBehavior>(&flat_[index].node->payload);
  if (!leaf) return false;
  if (std::holds_alternative<TrackBehavior>(*leaf)) return true;
  if (const auto* c = std::get_if<CruiseBehavior>(leaf)) return !c->duration.has_value();
  return false;
}

bool TreeRunner::gate(std::size_t index, const WorldState& world) const {
  const auto& cond = flat_[index].node->condition;
  return !cond || evaluate_condition(*cond, world, tree_->agent, &completed_);
}

void TreeRunner::activate_leaf(std::size_t index, const WorldState& world) {
  auto& st = state_[index];
  const auto& leaf = std::get<LeafBehavior>(flat_[index].node->payload);
  const AgentState& me = self_state(world, tree_->agent);
  const FrenetState start = current_state(world, me);
  st.hold_d = start.d;

  const auto lateral_target = [&](const std::string& lane_id) {
    if (!world.map) throw Error(ErrorCode::kDanglingReference, "merge without a map");
    const Lane& lane = world.map->lane(lane_id);
    return start.d - lane.centerline.foot_of(me.position()).d;
  };

  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        FrenetState end;
        end.s = start.s;
        end.d = start.d;
        if constexpr (std::is_same_v<T, TrackBehavior>) {
          return;
        } else if constexpr (std::is_same_v<T, ChangeLaneBehavior>) {
          end.s_dot = v.end_speed;
          end.d = start.d + v.offset;
          end.t = start.t + v.duration;
          st.plan = plan_segment(start, end, v.lateral_duration.value_or(0.0));
          return;
        } else if constexpr (std::is_same_v<T, CruiseBehavior>) {
          end.s_dot = v.speed;
          end.d = start.d + v.offset.value_or(0.0);
          const double ramp =
              std::clamp(std::abs(v.speed - start.s_dot) / kCruiseRampAccel, 1.0, 10.0);
          end.t = start.t + v.duration.value_or(ramp);
        } else if constexpr (std::is_same_v<T, FollowLogBehavior>) {
          end = v.end;
          end.t = start.t + (v.end.t - v.start.t);
        } else {
          end.s_dot = start.s_dot;
          end.d = lateral_target(v.target_lane);
          end.t = start.t + v.duration;
        }
        st.plan = plan_segment(start, end);
      },
      leaf);
}

void TreeRunner::emit_leaf(std::size_t index, const WorldState& world, double dt) {
  (void)dt;
  if (command_) return;
  auto& st = state_[index];
  const auto& leaf = std::get<LeafBehavior>(flat_[index].node->payload);
  const AgentState& me = self_state(world, tree_->agent);
  AgentCommand cmd;
  active_leaf_ = flat_[index].node->id;

  if (const auto* track = std::get_if<TrackBehavior>(&leaf)) {
    const AgentState* target = world.find(track->target);
    if (!target) {
      throw Error(ErrorCode::kDanglingReference, "track target '" + track->target + "'");
    }
    double target_s = target->frenet.s;
    if (world.map) {
      if (const Lane* lane = world.map->find_lane(me.frame_lane)) {
        target_s = lane->centerline.foot_of(target->position()).s;
      }
    }
    const double gap = track->gap.value_or(std::max(kTrackMinGap, kTrackTimeGap * me.speed));
    const double offset = gap + 0.5 * (me.length + target->length);
    const double desired = track->side == TrackBehavior::Side::kAhead ? offset : -offset;
    const double err = (me.frenet.s - target_s) - desired;
    cmd.accel = -kTrackGain * err + kTrackDamping * (target->speed - me.speed);
    command_ = cmd;
    return;
  }

  if (st.plan) {
    const double tau = world.time - st.plan->start_time;
    if (tau < st.plan->duration - kCompletionSlack) {
      cmd.plan = st.plan;
      cmd.plan_tau = tau;
      cmd.accel = st.plan->at(tau).s_ddot;
      command_ = cmd;
      return;
    }
  }
  // Open-ended cruise after its ramp.
  if (const auto* cruise = std::get_if<CruiseBehavior>(&leaf)) {
    cmd.accel = kCruiseHoldGain * (cruise->speed - me.speed);
  }
  command_ = cmd;
}

TreeRunner::Status TreeRunner::step(std::size_t index, const WorldState& world, double dt) {
  auto& st = state_[index];
  if (st.status == Status::kDone) return Status::kDone;
  if (st.status == Status::kPending) {
    if (!gate(index, world)) return Status::kPending;
    st.status = Status::kRunning;
    if (flat_[index].node->is_leaf()) activate_leaf(index, world);
  }

  const BehaviorNode& node = *flat_[index].node;
  if (node.is_leaf()) {
    if (!open_ended(index) && st.plan &&
        world.time - st.plan->start_time >= st.plan->duration - kCompletionSlack) {
      complete(index);
      return Status::kDone;
    }
    emit_leaf(index, world, dt);
    return Status::kRunning;
  }

  const auto& comp = std::get<Composite>(node.payload);
  const auto& kids = flat_[index].children;
  switch (comp.kind) {
    case CompositeKind::kSequence:
    case CompositeKind::kCyclic:
      while (true) {
        if (++transitions_ > kMaxTransitionsPerTick) return Status::kRunning;
        if (st.cursor == kids.size()) {
          if (comp.kind == CompositeKind::kCyclic && !kids.empty()) {
            for (std::size_t c : kids) reset(c);
            st.cursor = 0;
            continue;
          }
          complete(index);
          return Status::kDone;
        }
        const std::size_t child = kids[st.cursor];
        if (state_[child].status == Status::kRunning && open_ended(child) &&
            st.cursor + 1 < kids.size() && flat_[kids[st.cursor + 1]].node->condition &&
            gate(kids[st.cursor + 1], world)) {
          complete(child);
          ++st.cursor;
          continue;
        }
        if (step(child, world, dt) == Status::kDone) {
          ++st.cursor;
          continue;
        }
        return Status::kRunning;
      }
    case CompositeKind::kParallel: {
      bool all_done = true;
      for (std::size_t c : kids) {
        if (step(c, world, dt) != Status::kDone) all_done = false;
      }
      if (all_done) {
        complete(index);
        return Status::kDone;
      }
      return Status::kRunning;
    }
    case CompositeKind::kSequentialSelection: {
      if (st.cursor == kNoChoice) {
        for (std::size_t i = 0; i < kids.size(); ++i) {
          if (gate(kids[i], world)) {
            st.cursor = i;
            break;
          }
        }
        if (st.cursor == kNoChoice) return Status::kRunning;
      }
      if (step(kids[st.cursor], world, dt) == Status::kDone) {
        complete(index);
        return Status::kDone;
      }
      return Status::kRunning;
    }
  }
  return Status::kRunning;
}

AgentCommand TreeRunner::tick(const WorldState& world, double dt) {
  command_.reset();
  active_leaf_.clear();
  transitions_ = 0;
  step(0, world, dt);
  if (!command_) command_ = AgentCommand{};
  return *command_;
}

}  // namespace btfuzz
