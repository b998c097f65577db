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

#include <cmath>
#include <filesystem>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "btfuzz/error.hpp"
#include "btfuzz/json_io.hpp"
#include "btfuzz/trajectory_io.hpp"
#include "support/fixtures.hpp"

namespace btfuzz {
namespace {

const std::string kFixtures = BTFUZZ_FIXTURE_DIR;

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no Error thrown";
  return ErrorCode::kInvalidArgument;
}

TEST(FormatDouble, ShortestRoundTripProperty) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(50.0), "50");
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> U(-1e4, 1e4);
  for (int i = 0; i < 2000; ++i) {
    const double v = U(rng);
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
}

TEST(LogCsv, RoundTripAndGrouping) {
  AgentLog a{"a", {{1, 2, 0, 0.0}, {1.5, 2.25, 0, 0.1}}};
  AgentLog b{"b", {{-3, 0.125, 1, 0.0}}};
  std::string text = log_to_csv(a);
  text += log_to_csv(b).substr(11);
  const auto logs = parse_log_csv(text);
  ASSERT_EQ(logs.size(), 2u);
  EXPECT_EQ(logs[0].id, "a");
  EXPECT_EQ(logs[0].points.size(), 2u);
  EXPECT_EQ(logs[0].points[1].y, 2.25);
  EXPECT_EQ(logs[1].points[0].z, 1.0);
  EXPECT_EQ(log_to_csv(logs[0]), log_to_csv(a));
}

TEST(LogCsv, RejectsMalformedRows) {
  EXPECT_EQ(code_of([] { parse_log_csv("id,t,x,y,z\na,0,1\n"); }), ErrorCode::kParseError);
  EXPECT_EQ(code_of([] { parse_log_csv("id,t,x,y,z\na,0,1,x,0\n"); }), ErrorCode::kParseError);
  EXPECT_EQ(code_of([] { parse_log_csv("id,t,x,y,z\na,1,1,1,0\na,1,2,1,0\n"); }),
            ErrorCode::kParseError);
  EXPECT_EQ(code_of([] { read_log_csv("/nonexistent/log.csv"); }), ErrorCode::kIoError);
}

TEST(Json, ConditionRoundTrip) {
  DistanceCondition d;
  d.target_kind = DistanceCondition::TargetKind::kObstacle;
  d.target = "cone";
  d.threshold = 12.5;
  d.cmp = Comparator::kLess;
  RelativePositionCondition r{"ego", 5.0, std::nullopt, Comparator::kGreater};
  CombinedCondition c{CombinedCondition::Mode::kAnyOf,
                      {TriggerCondition{TimeCondition{3.4}}, TriggerCondition{d},
                       TriggerCondition{r},
                       TriggerCondition{AreaCondition{{{0, 0}, {1, 0}, {1, 1}}}},
                       TriggerCondition{EndsByBehaviorCondition{"seg0", "other"}}}};
  const Json j = to_json(TriggerCondition{c});
  EXPECT_EQ(to_json(condition_from_json(j)).dump(), j.dump());
}

TEST(Json, NodeRoundTripAllLeafKinds) {
  using testing::leaf;
  FollowLogBehavior f{{1, 2, 3, 4, 5, 6, 7}, {8, 9, 10, 11, 12, 13, 14}};
  const auto root = testing::sequence(
      "root",
      {leaf("t", TrackBehavior{"ego", TrackBehavior::Side::kAhead, 4.0}),
       leaf("t2", TrackBehavior{"ego", TrackBehavior::Side::kBehind, std::nullopt}),
       leaf("c", ChangeLaneBehavior{3.0, -3.5, 20.0, 1.5}),
       leaf("cr", CruiseBehavior{15.0, 2.0, 0.5}, TriggerCondition{TimeCondition{1.0}}),
       leaf("f", f), leaf("mi", MergeInBehavior{"left", 5.0}),
       leaf("mo", MergeOutBehavior{"right", 3.0})});
  BehaviorNode par;
  par.id = "par";
  par.payload = Composite{CompositeKind::kParallel, {root}};
  const Json j = to_json(par);
  EXPECT_EQ(to_json(node_from_json(j)).dump(), j.dump());
}

TEST(Json, DomainRoundTripAndErrors) {
  for (const Domain& d : {Domain{UniformDomain{1, 2}}, Domain{NormalDomain{0, 1, -2, 2}},
                          Domain{DiscreteDomain{{1, 3}}}}) {
    EXPECT_EQ(to_json(domain_from_json(to_json(d))).dump(), to_json(d).dump());
  }
  EXPECT_EQ(code_of([] { domain_from_json(Json{{"type", "cauchy"}}); }), ErrorCode::kParseError);
  EXPECT_EQ(code_of([] { node_from_json(Json{{"id", "x"}, {"type", "teleport"}}); }),
            ErrorCode::kParseError);
  EXPECT_EQ(code_of([] { condition_from_json(Json::array()); }), ErrorCode::kParseError);
}

TEST(Json, MapRoundTrip) {
  const auto map = load_map(kFixtures + "/example1/map.json");
  ASSERT_EQ(map.lanes().size(), 2u);
  ASSERT_EQ(map.obstacles().size(), 1u);
  const Json j = to_json(map);
  EXPECT_EQ(to_json(map_from_json(j)).dump(), j.dump());
}

TEST(Json, ScenarioRoundTripThroughFile) {
  const auto ls = load_scenario(kFixtures + "/example1/scenario.json");
  const auto dir = std::filesystem::temp_directory_path() / "btfuzz_io_test";
  std::filesystem::create_directories(dir);
  std::filesystem::copy_file(kFixtures + "/example1/map.json", dir / "map.json",
                             std::filesystem::copy_options::overwrite_existing);
  save_scenario(dir / "scenario.json", ls);
  const auto back = load_scenario(dir / "scenario.json");
  EXPECT_EQ(canonical_dump(to_json(back)), canonical_dump(to_json(ls)));
  EXPECT_EQ(read_text_file(dir / "scenario.json").back(), '\n');
  std::filesystem::remove_all(dir);
}

TEST(Json, FileErrors) {
  EXPECT_EQ(code_of([] { read_json_file("/nonexistent/x.json"); }), ErrorCode::kIoError);
  const auto p = std::filesystem::temp_directory_path() / "btfuzz_bad.json";
  write_text_file(p, "{ nope");
  EXPECT_EQ(code_of([&] { read_json_file(p); }), ErrorCode::kParseError);
  std::filesystem::remove(p);
}

TEST(Json, EventsListTraceEvents) {
  auto ls = testing::two_agent_scenario(
      testing::sequence("root", {testing::leaf("stop", CruiseBehavior{0.0, {}, {}})}),
      InitialState{"right", 180.0, 0.0, 0.0, 0.0, 4.8, 1.9});
  SimConfig cfg;
  cfg.ego_policy = [](const WorldState&, const IdmParams&) { return AgentCommand{}; };
  const auto tr = run(ls, cfg);
  const Json j = events_to_json(tr);
  ASSERT_TRUE(j.is_object() || j.is_array());
  EXPECT_NE(j.dump().find("collision"), std::string::npos);
  const auto csv = trace_agent_csv(tr, "ego");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,x,y,heading,speed,accel,lane");
}

}  // namespace
}  // namespace btfuzz
