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

#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "btfuzz/behavior_tree.hpp"
#include "btfuzz/error.hpp"
#include "btfuzz/simulator.hpp"
#include "support/fixtures.hpp"

namespace btfuzz {
namespace {

using testing::leaf;
using testing::sequence;

AgentState at(std::string id, double x, double y) {
  AgentState a;
  a.id = std::move(id);
  a.x = x;
  a.y = y;
  return a;
}

TEST(Comparator, RoundTripAndSemantics) {
  for (auto c : {Comparator::kLess, Comparator::kLessEqual, Comparator::kGreater,
                 Comparator::kGreaterEqual}) {
    EXPECT_EQ(comparator_from_string(to_string(c)), c);
  }
  EXPECT_TRUE(compare(1.0, Comparator::kLess, 2.0));
  EXPECT_FALSE(compare(2.0, Comparator::kLess, 2.0));
  EXPECT_TRUE(compare(2.0, Comparator::kLessEqual, 2.0));
  EXPECT_TRUE(compare(3.0, Comparator::kGreater, 2.0));
  EXPECT_TRUE(compare(2.0, Comparator::kGreaterEqual, 2.0));
  EXPECT_THROW(comparator_from_string("=="), Error);
}

TEST(Conditions, TimeDistanceAndCombined) {
  WorldState w;
  w.time = 3.0;
  w.agents = {at("ego", 0, 0), at("a", 30, 0)};
  EXPECT_TRUE(evaluate_condition({TimeCondition{3.0}}, w, "a"));
  EXPECT_FALSE(evaluate_condition({TimeCondition{3.5}}, w, "a"));

  DistanceCondition near_ego;
  near_ego.target = "ego";
  near_ego.threshold = 40.0;
  EXPECT_TRUE(evaluate_condition({near_ego}, w, "a"));
  near_ego.threshold = 20.0;
  EXPECT_FALSE(evaluate_condition({near_ego}, w, "a"));

  DistanceCondition point;
  point.target_kind = DistanceCondition::TargetKind::kPoint;
  point.point = {30, 4};
  point.threshold = 5.0;
  EXPECT_TRUE(evaluate_condition({point}, w, "a"));

  CombinedCondition all{CombinedCondition::Mode::kAllOf,
                        {TriggerCondition{TimeCondition{1.0}}, TriggerCondition{near_ego}}};
  CombinedCondition any{CombinedCondition::Mode::kAnyOf,
                        {TriggerCondition{TimeCondition{1.0}}, TriggerCondition{near_ego}}};
  EXPECT_FALSE(evaluate_condition({all}, w, "a"));
  EXPECT_TRUE(evaluate_condition({any}, w, "a"));

  DistanceCondition ghost;
  ghost.target = "ghost";
  EXPECT_THROW(evaluate_condition({ghost}, w, "a"), Error);
}

TEST(Conditions, AreaAndEndsByBehavior) {
  WorldState w;
  w.agents = {at("ego", 0, -5), at("a", 5, 1)};
  AreaCondition area{{{0, 0}, {10, 0}, {10, 2}, {0, 2}}};
  EXPECT_TRUE(evaluate_condition({area}, w, "a"));
  EXPECT_FALSE(evaluate_condition({area}, w, "ego"));

  w.completed["ego"] = {"brake"};
  EXPECT_TRUE(evaluate_condition({EndsByBehaviorCondition{"brake", "ego"}}, w, "a"));
  EXPECT_FALSE(evaluate_condition({EndsByBehaviorCondition{"seg0", ""}}, w, "a"));
  const std::set<std::string> live{"seg0"};
  EXPECT_TRUE(evaluate_condition({EndsByBehaviorCondition{"seg0", ""}}, w, "a", &live));
}

std::set<std::string> codes(const std::vector<Diagnostic>& ds) {
  std::set<std::string> out;
  for (const auto& d : ds) out.insert(d.code);
  return out;
}

TEST(Validate, ReportsStructuralProblems) {
  ValidationContext ctx;
  ctx.agents = {"ego", "a"};
  ctx.lanes = {"right"};

  BehaviorTree ok{"a", sequence("root", {leaf("c", CruiseBehavior{10.0, 2.0, {}})})};
  EXPECT_TRUE(validate(ok, ctx).empty());

  BehaviorTree dup{"a", sequence("root", {leaf("x", CruiseBehavior{10.0, {}, {}}),
                                          leaf("x", CruiseBehavior{10.0, {}, {}})})};
  EXPECT_TRUE(codes(validate(dup, ctx)).contains("DuplicateId"));

  BehaviorTree dangling{"a", sequence("root", {leaf("t", TrackBehavior{"ghost", {}, {}})})};
  EXPECT_TRUE(codes(validate(dangling, ctx)).contains("DanglingReference"));

  BehaviorTree bad_node{
      "a", sequence("root", {leaf("c", CruiseBehavior{10.0, {}, {}},
                                  TriggerCondition{EndsByBehaviorCondition{"nowhere", ""}})})};
  EXPECT_TRUE(codes(validate(bad_node, ctx)).contains("DanglingReference"));

  BehaviorTree empty{"a", sequence("root", {})};
  EXPECT_TRUE(codes(validate(empty, ctx)).contains("EmptyComposite"));

  BehaviorTree zero{"a", sequence("root", {leaf("c", ChangeLaneBehavior{0.0, 3.5, 10.0, {}})})};
  EXPECT_TRUE(codes(validate(zero, ctx)).contains("NonpositiveDuration"));

  BehaviorTree negative{"a", sequence("root", {leaf("c", CruiseBehavior{-1.0, {}, {}})})};
  EXPECT_TRUE(codes(validate(negative, ctx)).contains("NegativeSpeed"));
}

TEST(Validate, NodeIdsInPreorder) {
  BehaviorTree t{"a", sequence("root", {leaf("x", CruiseBehavior{}),
                                        sequence("inner", {leaf("y", CruiseBehavior{})})})};
  EXPECT_EQ(node_ids(t), (std::vector<std::string>{"root", "x", "inner", "y"}));
}

double agent_speed(const SimulationTrace& tr, std::size_t frame) {
  return tr.frames.at(frame).agents.at(1).speed;
}

TEST(TreeExecution, CruiseReachesTargetSpeed) {
  auto ls = testing::two_agent_scenario(
      sequence("root", {leaf("c", CruiseBehavior{25.0, 5.0, {}})}),
      InitialState{"left", 150.0, 0.0, 15.0, 0.0, 4.8, 1.9});
  const auto tr = run(ls);
  // Speed changes within the duration, then holds.
  EXPECT_NEAR(agent_speed(tr, 60), 25.0, 0.05);
  EXPECT_NEAR(agent_speed(tr, tr.frames.size() - 1), 25.0, 0.05);
}

TEST(TreeExecution, SequenceChainsLeaves) {
  auto ls = testing::two_agent_scenario(
      sequence("root",
               {leaf("c", CruiseBehavior{15.0, 2.0, {}}),
                leaf("lc", ChangeLaneBehavior{3.0, -3.5, 15.0, {}},
                     TriggerCondition{EndsByBehaviorCondition{"c", ""}})}),
      InitialState{"left", 300.0, 0.0, 15.0, 0.0, 4.8, 1.9});
  const auto tr = run(ls);
  const auto& first = tr.frames.front().agents.at(1);
  const auto& last = tr.frames.back().agents.at(1);
  EXPECT_EQ(first.lane, "left");
  EXPECT_EQ(last.lane, "right");
  EXPECT_NEAR(last.y, 0.0, 0.05);
  // Still in the left lane while the first leaf runs.
  EXPECT_NEAR(tr.frames.at(15).agents.at(1).y, 3.5, 1e-6);
}

TEST(TreeExecution, TrackKeepsGapAheadOfEgo) {
  auto ls = testing::two_agent_scenario(
      sequence("root", {leaf("t", TrackBehavior{"ego", TrackBehavior::Side::kAhead, 10.0})}),
      InitialState{"left", 140.0, 0.0, 20.0, 0.0, 4.8, 1.9});
  const auto tr = run(ls);
  const auto& f = tr.frames.back();
  const double gap = f.agents.at(1).x - f.agents.at(0).x - 4.8;
  EXPECT_NEAR(gap, 10.0, 0.5);
}

}  // namespace
}  // namespace btfuzz
