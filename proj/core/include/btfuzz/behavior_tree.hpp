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

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "btfuzz/frenet.hpp"
#include "btfuzz/world.hpp"

namespace btfuzz {

enum class Comparator { kLess, kLessEqual, kGreater, kGreaterEqual };

std::string_view to_string(Comparator cmp);
Comparator comparator_from_string(std::string_view text);
bool compare(double lhs, Comparator cmp, double rhs);

struct TimeCondition {
  double at = 0.0;
};

struct DistanceCondition {
  enum class TargetKind { kAgent, kPoint, kObstacle };
  TargetKind target_kind = TargetKind::kAgent;
  std::string target;  // agent or obstacle id
  Vec2 point;
  double threshold = 0.0;
  Comparator cmp = Comparator::kLessEqual;
};

struct AreaCondition {
  std::vector<Vec2> polygon;
};

/// Gaps are self minus target, measured in the target's lane frame.
struct RelativePositionCondition {
  std::string target;
  std::optional<double> longitudinal;
  std::optional<double> lateral;
  Comparator cmp = Comparator::kGreaterEqual;
};

struct EndsByBehaviorCondition {
  std::string node;
  std::string agent;  // empty: the owning agent
};

struct TriggerCondition;

struct CombinedCondition {
  enum class Mode { kAllOf, kAnyOf };
  Mode mode = Mode::kAllOf;
  std::vector<TriggerCondition> conditions;
};

struct TriggerCondition {
  std::variant<TimeCondition, DistanceCondition, AreaCondition, RelativePositionCondition,
               EndsByBehaviorCondition, CombinedCondition>
      value;
};

inline constexpr int kMaxConditionDepth = 8;

struct TrackBehavior {
  enum class Side { kBehind, kAhead };
  std::string target;
  Side side = Side::kBehind;
  /// Bumper-to-bumper gap; absent means max(2 m, 1.2 s * speed).
  std::optional<double> gap;
};

/// Positive offsets move left.
struct ChangeLaneBehavior {
  double duration = 4.0;
  double offset = 3.5;
  double end_speed = 0.0;
  /// Lateral motion completes after this time when shorter than `duration`.
  std::optional<double> lateral_duration;
};

struct CruiseBehavior {
  double speed = 0.0;
  std::optional<double> duration;
  /// Lateral drift over the segment; absent means the lateral position is held.
  std::optional<double> offset;
};

/// Re-plans from the agent's state at activation to `end` over
/// end.t - start.t. `start` is kept for provenance and reconstruction.
struct FollowLogBehavior {
  FrenetState start;
  FrenetState end;
};

struct MergeInBehavior {
  std::string target_lane;
  double duration = 4.0;
};

struct MergeOutBehavior {
  std::string target_lane;
  double duration = 4.0;
};

using LeafBehavior = std::variant<TrackBehavior, ChangeLaneBehavior, CruiseBehavior,
                                  FollowLogBehavior, MergeInBehavior, MergeOutBehavior>;

enum class CompositeKind { kSequence, kParallel, kCyclic, kSequentialSelection };

std::string_view to_string(CompositeKind kind);

struct BehaviorNode;

struct Composite {
  CompositeKind kind = CompositeKind::kSequence;
  std::vector<BehaviorNode> children;
};

struct BehaviorNode {
  std::string id;
  std::optional<TriggerCondition> condition;
  std::variant<Composite, LeafBehavior> payload;

  bool is_leaf() const { return std::holds_alternative<LeafBehavior>(payload); }
};

struct BehaviorTree {
  std::string agent;
  BehaviorNode root;
};

/// Evaluates `c` for agent `self`. `self_completed` overrides the world's
/// completed-node set for the owning agent (live runner state).
/// Throws Error(kDanglingReference) for unknown agents or obstacles.
bool evaluate_condition(const TriggerCondition& c, const WorldState& world, std::string_view self,
                        const std::set<std::string>* self_completed = nullptr);

struct Diagnostic {
  std::string code;  // DanglingReference, DuplicateId, EmptyComposite, ...
  std::string node;
  std::string message;
};

struct ValidationContext {
  std::set<std::string> agents;
  std::set<std::string> obstacles;
  std::set<std::string> lanes;
  /// Node ids per agent, for cross-agent ends-by-behavior references.
  std::map<std::string, std::set<std::string>> nodes;
};

/// Collects every node id in preorder.
std::vector<std::string> node_ids(const BehaviorTree& tree);

std::vector<Diagnostic> validate(const BehaviorTree& tree, const ValidationContext& ctx);

/// Mutable execution state for one tree, owned by one simulation.
class TreeRunner {
 public:
  explicit TreeRunner(const BehaviorTree& tree);

  /// Advances one step and returns the command for [world.time, world.time + dt].
  AgentCommand tick(const WorldState& world, double dt);

  bool finished() const;
  const std::set<std::string>& completed() const { return completed_; }
  /// Id of the leaf that produced the last command (empty when holding).
  const std::string& active_leaf() const { return active_leaf_; }

 private:
  enum class Status { kPending, kRunning, kDone };
  struct NodeState {
    Status status = Status::kPending;
    std::size_t cursor = 0;
    std::optional<PlannedSegment> plan;
    double hold_d = 0.0;
  };
  struct Flat {
    const BehaviorNode* node = nullptr;
    std::vector<std::size_t> children;
  };

  std::size_t flatten(const BehaviorNode& node);
  void reset(std::size_t index);
  void complete(std::size_t index);
  bool open_ended(std::size_t index) const;
  void activate_leaf(std::size_t index, const WorldState& world);
  Status step(std::size_t index, const WorldState& world, double dt);
  bool gate(std::size_t index, const WorldState& world) const;
  void emit_leaf(std::size_t index, const WorldState& world, double dt);

  const BehaviorTree* tree_;
  std::vector<Flat> flat_;
  std::vector<NodeState> state_;
  std::set<std::string> completed_;
  std::optional<AgentCommand> command_;
  std::string active_leaf_;
  int transitions_ = 0;
};

/// Track-law constants.
inline constexpr double kTrackGain = 0.4;
inline constexpr double kTrackDamping = 1.3;
inline constexpr double kTrackMinGap = 2.0;
inline constexpr double kTrackTimeGap = 1.2;

}  // namespace btfuzz
