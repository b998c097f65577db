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
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "btfuzz/error.hpp"
#include "btfuzz/json_io.hpp"
#include "btfuzz/scenario.hpp"
#include "support/fixtures.hpp"

namespace btfuzz {
namespace {

const std::string kExample1 = std::string(BTFUZZ_FIXTURE_DIR) + "/example1/scenario.json";

TEST(Domain, UniformMapping) {
  const Domain d = UniformDomain{3.0, 20.0};
  EXPECT_DOUBLE_EQ(map_unit(d, 0.0), 3.0);
  EXPECT_DOUBLE_EQ(map_unit(d, 1.0), 20.0);
  EXPECT_DOUBLE_EQ(map_unit(d, 0.25), 7.25);
  EXPECT_NEAR(to_unit(d, 7.25), 0.25, 1e-12);
  EXPECT_TRUE(contains(d, 3.0));
  EXPECT_FALSE(contains(d, 20.5));
}

TEST(Domain, TruncatedNormalStaysInBounds) {
  const Domain d = NormalDomain{0.0, 1.0, -1.0, 2.0};
  EXPECT_NEAR(map_unit(d, 0.0), -1.0, 1e-9);
  EXPECT_NEAR(map_unit(d, 1.0), 2.0, 1e-9);
  double prev = -2.0;
  for (int i = 0; i <= 100; ++i) {
    const double u = i / 100.0;
    const double x = map_unit(d, u);
    EXPECT_GE(x, prev);
    prev = x;
    EXPECT_NEAR(to_unit(d, x), u, 1e-6);
  }
  // Symmetric truncation puts the median on the mean.
  EXPECT_NEAR(map_unit(NormalDomain{5.0, 2.0, 1.0, 9.0}, 0.5), 5.0, 1e-9);
}

TEST(Domain, DiscreteBuckets) {
  const Domain d = DiscreteDomain{{1.0, 2.0, 4.0}};
  EXPECT_EQ(map_unit(d, 0.0), 1.0);
  EXPECT_EQ(map_unit(d, 0.5), 2.0);
  EXPECT_EQ(map_unit(d, 1.0), 4.0);
  EXPECT_TRUE(contains(d, 4.0));
  EXPECT_FALSE(contains(d, 3.0));
}

TEST(Domain, CheckRejectsEmptyRanges) {
  EXPECT_THROW(check_domain(UniformDomain{1.0, 1.0}, "x"), Error);
  EXPECT_THROW(check_domain(NormalDomain{0.0, 0.0, -1.0, 1.0}, "x"), Error);
  EXPECT_THROW(check_domain(DiscreteDomain{}, "x"), Error);
  EXPECT_NO_THROW(check_domain(UniformDomain{0.0, 1.0}, "x"));
}

TEST(Transform, ClampAndNamedFunctions) {
  Transform t;
  t.scale = 2.0;
  t.offset = 1.0;
  EXPECT_DOUBLE_EQ(apply_transform(t, 3.0), 7.0);
  t.clamp_hi = 5.0;
  EXPECT_DOUBLE_EQ(apply_transform(t, 3.0), 5.0);
  t.function = "neg";
  t.clamp_hi.reset();
  EXPECT_DOUBLE_EQ(apply_transform(t, 3.0), -5.0);
  register_function("triple", [](double x) { return 3.0 * x; });
  t.function = "triple";
  EXPECT_DOUBLE_EQ(apply_transform(t, 1.0), 7.0);
  t.function = "unknown_fn";
  EXPECT_THROW(apply_transform(t, 1.0), Error);
}

TEST(Scenario, Example1Loads) {
  const auto ls = load_scenario(kExample1);
  EXPECT_EQ(effective_dimension(ls), 4u);
  EXPECT_TRUE(validate_scenario(ls).empty());
  ASSERT_EQ(ls.relative_variables.size(), 2u);
}

TEST(Scenario, SampleBindProperty) {
  const auto ls = load_scenario(kExample1);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    std::vector<double> u{U(rng), U(rng), U(rng), U(rng)};
    const auto cts = sample(ls, u);
    ASSERT_EQ(cts.values.size(), 4u);
    EXPECT_NEAR(cts.values[0], 3.0 + 17.0 * u[0], 1e-12);
    EXPECT_NEAR(cts.values[1], 10.0 + 50.0 * u[1], 1e-12);
    auto bound = bind(cts);
    EXPECT_TRUE(bound.variables.empty());
    EXPECT_TRUE(bound.relative_variables.empty());
    EXPECT_DOUBLE_EQ(resolve_target(bound, "agent.track.gap"), cts.values[0]);
    EXPECT_DOUBLE_EQ(resolve_target(bound, "agent.cutin.condition.threshold"), cts.values[1]);
    EXPECT_DOUBLE_EQ(resolve_target(bound, "agent.cutin.end_speed"), cts.values[2]);
    EXPECT_DOUBLE_EQ(resolve_target(bound, "agent.cutin.duration"), cts.values[3]);
    EXPECT_DOUBLE_EQ(resolve_target(bound, "agent.init.s"), cts.values[0] + 204.8);
    EXPECT_DOUBLE_EQ(resolve_target(bound, "agent.cruise.speed"), cts.values[2]);
  }
}

TEST(Scenario, SampleRejectsBadPoints) {
  const auto ls = load_scenario(kExample1);
  EXPECT_THROW(sample(ls, std::vector<double>{0.5, 0.5}), Error);
  EXPECT_THROW(sample(ls, std::vector<double>{0.5, 0.5, 1.5, 0.5}), Error);
  EXPECT_THROW(make_cts(ls, std::vector<double>{100.0, 20.0, 20.0, 3.0}), Error);
}

TEST(Scenario, EmptyVariationSetBindsToOriginal) {
  auto ls = load_scenario(kExample1);
  ls.variables.clear();
  ls.relative_variables.clear();
  EXPECT_EQ(effective_dimension(ls), 0u);
  const auto cts = sample(ls, std::vector<double>{});
  const auto bound = bind(cts);
  EXPECT_EQ(to_json(bound).dump(), to_json(ls).dump());
}

TEST(Scenario, RelativeVariableCyclesAndBounds) {
  auto ls = load_scenario(kExample1);
  ls.relative_variables.push_back(RelativeVariable{"r1", "r2", "agent.init.d", {}, {}, {}});
  ls.relative_variables.push_back(RelativeVariable{"r2", "r1", "agent.init.accel", {}, {}, {}});
  EXPECT_THROW(relative_order(ls), Error);

  auto bounded = load_scenario(kExample1);
  bounded.relative_variables[0].hi = 210.0;
  try {
    sample(bounded, std::vector<double>{1.0, 0.5, 0.5, 0.5});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDomainError);
  }
}

TEST(Scenario, ResolveTargetErrors) {
  auto ls = load_scenario(kExample1);
  for (const char* bad : {"agent.nope.gap", "ghost.init.s", "agent.track.speed", "ego.init"}) {
    try {
      resolve_target(ls, bad);
      ADD_FAILURE() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kUnresolvedTarget) << bad;
    }
  }
  EXPECT_DOUBLE_EQ(resolve_target(ls, "ego.init.speed"), 22.0);
  EXPECT_DOUBLE_EQ(resolve_target(ls, "ego.controller.desired_speed"), 22.0);
}

TEST(Scenario, ValidationFindsProblems) {
  auto ls = load_scenario(kExample1);
  ls.agents.push_back(ls.agents.front());
  ls.variables.push_back(Variable{"bad", "agent.ghost.speed", UniformDomain{0.0, 1.0}});
  const auto ds = validate_scenario(ls);
  EXPECT_GE(ds.size(), 2u);
}

}  // namespace
}  // namespace btfuzz
