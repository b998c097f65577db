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
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "btfuzz/error.hpp"
#include "btfuzz/json_io.hpp"
#include "btfuzz/log2bt.hpp"
#include "support/fixtures.hpp"
#include "support/synthetic.hpp"

namespace btfuzz {
namespace {

using testing::PieceSpec;
using testing::straight_path;
using testing::synthesize;

CharacteristicState cs(double s_dot, double d, double t, std::size_t index) {
  return CharacteristicState{FrenetState{0.0, s_dot, 0.0, d, 0.0, 0.0, t}, index, false};
}

TEST(Estimator, NoiseEstimateTracksGeneratingSigma) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> N(0.0, 0.1);
  std::vector<double> clean;
  std::vector<double> noisy;
  for (int i = 0; i < 600; ++i) {
    const double t = 0.1 * i;
    clean.push_back(3.0 + 2.0 * t + 0.1 * t * t);
    noisy.push_back(clean.back() + N(rng));
  }
  EXPECT_LT(estimate_noise(clean), 1e-6);
  EXPECT_NEAR(estimate_noise(noisy), 0.1, 0.02);
}

TEST(Estimator, WhittakerKeepsQuadratics) {
  std::vector<double> y;
  for (int i = 0; i < 50; ++i) y.push_back(1.0 - 0.5 * i + 0.02 * i * i);
  const auto z = whittaker_smooth(y, 1e6);
  ASSERT_EQ(z.size(), y.size());
  for (std::size_t i = 0; i < y.size(); ++i) EXPECT_NEAR(z[i], y[i], 1e-6);
}

TEST(Estimator, RecoversStatesOfCleanLog) {
  const auto path = straight_path(3000);
  const auto log = synthesize({50, 20, 0, 0, 0, 0, 0},
                              {{4.0, 22.0, 0.5, 3.5, 0.0, 0.0}, {5.0, 18.0, 0.0, 1.0, 0.2, 0.0}},
                              path);
  const auto states = estimate_states(log.points, path);
  ASSERT_EQ(states.size(), log.states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    EXPECT_NEAR(states[i].s, log.states[i].s, 1e-6);
    EXPECT_NEAR(states[i].s_dot, log.states[i].s_dot, 1e-4);
    EXPECT_NEAR(states[i].d, log.states[i].d, 1e-6);
    EXPECT_NEAR(states[i].d_dot, log.states[i].d_dot, 1e-4);
  }
  EXPECT_THROW(estimate_states(std::span(log.points).first(1), path), Error);
}

TEST(Partition, SinglePieceIsOneSegment) {
  const auto path = straight_path(3000);
  const auto log = synthesize({50, 20, 0, 0, 0, 0, 0}, {{6.0, 24.0, 0.0, 3.5, 0.0, 0.0}}, path);
  PartitionConfig cfg;
  cfg.eps_part = 1e-6;
  const auto css = partition(log.points, path, cfg);
  ASSERT_EQ(css.size(), 2u);
  EXPECT_EQ(css.front().index, 0u);
  EXPECT_EQ(css.back().index, log.points.size() - 1);
}

TEST(Partition, RejectsNonpositiveThresholds) {
  PartitionConfig cfg;
  cfg.eps_vel = 0.0;
  EXPECT_THROW(check_config(cfg), Error);
}

TEST(Classify, LateralThenVelocityRule) {
  EXPECT_EQ(classify_segment(cs(20, 0, 0, 0), cs(20, 3.5, 4, 40)).kind, SegmentKind::kChangeLane);
  EXPECT_EQ(classify_segment(cs(20, 0, 0, 0), cs(25, -3.5, 4, 40)).kind,
            SegmentKind::kChangeLane);
  EXPECT_EQ(classify_segment(cs(20, 0, 0, 0), cs(20.5, 0.3, 4, 40)).kind, SegmentKind::kCruise);
  EXPECT_EQ(classify_segment(cs(20, 0, 0, 0), cs(25, 0.3, 4, 40)).kind, SegmentKind::kFollowLog);
}

TEST(BuildBt, ChainsLeavesAndGatesTheFirstOnTime) {
  std::vector<CharacteristicState> css{cs(20, 0, 1.5, 0), cs(20.2, 0, 5, 35), cs(22, 3.5, 9, 75)};
  const auto tree = build_bt(css);
  const auto& root = std::get<Composite>(tree.root.payload);
  ASSERT_EQ(root.children.size(), 2u);
  const auto& first = root.children[0];
  EXPECT_EQ(first.id, "seg0");
  ASSERT_TRUE(first.condition.has_value());
  EXPECT_DOUBLE_EQ(std::get<TimeCondition>(first.condition->value).at, 0.0);
  EXPECT_TRUE(std::holds_alternative<CruiseBehavior>(std::get<LeafBehavior>(first.payload)));
  const auto& second = root.children[1];
  EXPECT_EQ(std::get<EndsByBehaviorCondition>(second.condition->value).node, "seg0");
  EXPECT_TRUE(std::holds_alternative<ChangeLaneBehavior>(std::get<LeafBehavior>(second.payload)));

  const auto raw = build_bt(css, {}, BuildOptions{"agent", false});
  for (const auto& c : std::get<Composite>(raw.root.payload).children) {
    EXPECT_TRUE(std::holds_alternative<FollowLogBehavior>(std::get<LeafBehavior>(c.payload)));
  }
  EXPECT_THROW(build_bt(std::span(css).first(1)), Error);
}

TEST(Reconstruct, ExactOnCanonicalLog) {
  const auto path = straight_path(3000);
  const auto log = synthesize({50, 20, 0, 0, 0, 0, 0},
                              {{5.0, 20.0, 0, 0, 0, 0}, {5.0, 24.0, 0, 3.5, 0, 0}, {5.0, 24.0, 0, 3.5, 0, 0}},
                              path);
  PartitionConfig cfg;
  cfg.eps_part = 1e-6;
  const auto css = partition(log.points, path, cfg);
  const auto tree = build_bt(css, cfg);
  const auto rec = reconstruct(tree, css.front().state, path, 0.0, log.points.back().t, 0.1);
  const auto err = reconstruction_error(log.points, rec, path);
  EXPECT_LT(err.ade_s, 1e-3);
  EXPECT_LT(err.ade_l, 1e-3);
  EXPECT_EQ(err.samples, log.points.size());
}

TEST(Reconstruct, EmptyOverlapThrows) {
  const auto path = straight_path(100);
  std::vector<TrajectoryPoint> a{{1, 0, 0, 0}, {2, 0, 0, 0.1}};
  std::vector<TrajectoryPoint> b{{1, 0, 0, 5}, {2, 0, 0, 5.1}};
  try {
    reconstruction_error(a, b, path);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyOverlap);
  }
}

TEST(Quantile, Type7AgainstHandComputedValues) {
  EXPECT_DOUBLE_EQ(quantile({4, 1, 3, 2}, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(quantile({1, 2, 3, 4}, 0.1), 1.3);
  EXPECT_DOUBLE_EQ(quantile({1, 2, 3, 4}, 1.0), 4.0);
  EXPECT_THROW(quantile({}, 0.5), Error);
}

TEST(Quantile, UniformSampleBounds) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> U(0.0, 10.0);
  std::vector<double> xs(10000);
  for (auto& x : xs) x = U(rng);
  EXPECT_NEAR(quantile(xs, 0.05), 0.5, 0.2);
  EXPECT_NEAR(quantile(xs, 0.95), 9.5, 0.2);
}

TEST(Generalize, AddsQuantileRanges) {
  auto ls = testing::two_agent_scenario(
      testing::sequence("root", {testing::leaf("seg0", CruiseBehavior{20.0, {}, {}})}),
      InitialState{"left", 150.0, 0.0, 20.0, 0.0, 4.8, 1.9});
  std::vector<double> speeds;
  for (int i = 0; i <= 100; ++i) speeds.push_back(10.0 + 0.1 * i);
  const std::vector<GeneralizeSpec> specs{{"v", "agent.seg0.speed", speeds}};
  const auto out = generalize(ls, specs);
  ASSERT_EQ(out.variables.size(), 1u);
  const auto& dom = std::get<UniformDomain>(out.variables[0].domain);
  EXPECT_NEAR(dom.lo, 10.5, 1e-9);
  EXPECT_NEAR(dom.hi, 19.5, 1e-9);
  EXPECT_EQ(out.distributions.at("v").size(), speeds.size());

  const std::vector<GeneralizeSpec> flat{{"v", "agent.seg0.speed", {3.0, 3.0, 3.0}}};
  EXPECT_THROW(generalize(ls, flat), Error);
  const std::vector<GeneralizeSpec> bad{{"v", "agent.seg9.speed", speeds}};
  EXPECT_THROW(generalize(ls, bad), Error);
}

TEST(Compression, MonotoneInLogLengthForFixedTree) {
  const auto path = straight_path(5000);
  const auto log = synthesize({50, 20, 0, 0, 0, 0, 0}, {{60.0, 20.0, 0, 0, 0, 0}}, path);
  PartitionConfig cfg;
  const auto tree = build_bt(partition(log.points, path, cfg), cfg);
  double prev = 0.0;
  for (std::size_t n : {2u, 10u, 100u, 300u, 601u}) {
    const double r = compression_ratio(std::span(log.points).first(n), tree);
    EXPECT_GT(r, prev);
    prev = r;
  }
  EXPECT_LT(compression_ratio(std::span(log.points).first(2), tree), 1.0);
}

TEST(Compression, SerializedTreeParsesBack) {
  const auto path = straight_path(3000);
  const auto log = synthesize({50, 20, 0, 0, 0, 0, 0}, {{8.0, 24.0, 0, 3.5, 0, 0}}, path);
  const auto tree = build_bt(partition(log.points, path));
  const auto text = serialize_tree(tree);
  EXPECT_EQ(text.find('\n'), std::string::npos);
  const auto node = node_from_json(Json::parse(text));
  EXPECT_EQ(node.id, "root");
}

std::vector<AgentLog> cut_in_logs() {
  const auto map = testing::two_lane_map();
  const auto& right = map->lane("right").centerline;
  AgentLog ego{"ego", {}};
  for (int i = 0; i <= 150; ++i) ego.points.push_back({100.0 + 20.0 * 0.1 * i, 0.0, 0.0, 0.1 * i});
  const auto agent = synthesize({130, 22, 0, 3.5, 0, 0, 0},
                                {{4.0, 22, 0, 3.5, 0, 0}, {4.0, 22, 0, 0.0, 0, 0}, {7.0, 22, 0, 0, 0, 0}},
                                right);
  return {ego, AgentLog{"cutter", agent.points}};
}

TEST(ConvertLog, BuildsScenarioFromLogs) {
  const auto map = testing::two_lane_map();
  const auto logs = cut_in_logs();
  const auto conv = convert_log(logs, map);
  ASSERT_EQ(conv.agents.size(), 1u);
  const auto& a = conv.agents[0];
  EXPECT_EQ(a.id, "cutter");
  EXPECT_EQ(a.lane, "left");
  EXPECT_GE(a.kinds.count("change_lane"), 1u);
  EXPECT_LT(a.error.ade_s, 0.05);
  EXPECT_LT(a.error.ade_l, 0.05);
  EXPECT_GT(a.compression, 1.0);
  EXPECT_EQ(conv.scenario.ego.init.lane, "right");
  EXPECT_NEAR(conv.scenario.ego.init.s, 100.0, 1e-6);
  EXPECT_NEAR(conv.scenario.horizon, 15.0, 1e-9);
  EXPECT_TRUE(validate_scenario(conv.scenario).empty());
}

TEST(ConvertLog, RequiresEgoAndOnRoadStart) {
  const auto map = testing::two_lane_map();
  auto logs = cut_in_logs();
  ConvertOptions opts;
  opts.ego = "nobody";
  EXPECT_THROW(convert_log(logs, map, opts), Error);
  logs[1].points.front().y = 200.0;
  try {
    convert_log(logs, map);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kPointOffPath);
  }
}

}  // namespace
}  // namespace btfuzz
