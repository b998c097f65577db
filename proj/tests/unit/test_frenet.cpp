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
#include "btfuzz/frenet.hpp"
#include "support/synthetic.hpp"

namespace btfuzz {
namespace {

using testing::arc_path;
using testing::straight_path;

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no Error thrown";
  return ErrorCode::kIoError;
}

TEST(ReferencePath, RejectsDegenerateInput) {
  EXPECT_EQ(code_of([] { ReferencePath({{0, 0}}); }), ErrorCode::kDegeneratePath);
  EXPECT_EQ(code_of([] { ReferencePath({{0, 0}, {0, 0}}); }), ErrorCode::kDegeneratePath);
}

TEST(ReferencePath, ArcLengthOfStraightPath) {
  const ReferencePath p({{0, 0}, {3, 4}, {3, 10}});
  EXPECT_NEAR(p.length(), 11.0, 1e-12);
  EXPECT_EQ(p.segment_index(4.9), 0u);
  EXPECT_EQ(p.segment_index(5.1), 1u);
  EXPECT_EQ(p.segment_index(11.0), 1u);
  const Vec2 q = p.point_at(8.0);
  EXPECT_NEAR(q.x, 3.0, 1e-12);
  EXPECT_NEAR(q.y, 7.0, 1e-12);
}

TEST(Projection, StraightPathCoordinates) {
  const auto path = straight_path(100);
  const FrenetState st = project_position({10.0, 2.0}, path);
  EXPECT_NEAR(st.s, 10.0, 1e-12);
  EXPECT_NEAR(st.d, 2.0, 1e-12);
  const FrenetState right = project_position({10.0, -1.5}, path);
  EXPECT_NEAR(right.d, -1.5, 1e-12);
}

TEST(Projection, VelocityDecomposition) {
  const auto path = straight_path(100);
  const FrenetState st = project({10, 1, 0, 2}, {5, 1}, {0.5, -0.2}, path);
  EXPECT_NEAR(st.s_dot, 5.0, 1e-12);
  EXPECT_NEAR(st.d_dot, 1.0, 1e-12);
  EXPECT_NEAR(st.s_ddot, 0.5, 1e-12);
  EXPECT_NEAR(st.d_ddot, -0.2, 1e-12);
  EXPECT_EQ(st.t, 2.0);
}

TEST(Projection, OffPathAndOutOfRange) {
  const auto path = straight_path(100);
  EXPECT_EQ(code_of([&] { project_position({10, 60}, path); }), ErrorCode::kPointOffPath);
  EXPECT_EQ(code_of([&] { project_position({10, 6}, path, 5.0); }), ErrorCode::kPointOffPath);
  FrenetState st;
  st.s = 150.0;
  EXPECT_EQ(code_of([&] { unproject(st, path); }), ErrorCode::kOutOfRange);
}

TEST(Projection, RoundTripOnArcProperty) {
  const auto path = arc_path(400.0, 1500.0, 600);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> S(1.0, path.length() - 1.0);
  std::uniform_real_distribution<double> D(-8.0, 8.0);
  for (int i = 0; i < 2000; ++i) {
    FrenetState st;
    st.s = S(rng);
    st.d = D(rng);
    const Vec2 p = unproject(st, path);
    const FrenetState back = project_position(p, path);
    ASSERT_NEAR(back.s, st.s, 1e-8);
    ASSERT_NEAR(back.d, st.d, 1e-8);
  }
}

TEST(PlanSegment, RejectsNonpositiveDuration) {
  FrenetState a;
  FrenetState b;
  EXPECT_EQ(code_of([&] { plan_segment(a, b); }), ErrorCode::kNonpositiveDuration);
}

TEST(PlanSegment, BoundaryConditionsProperty) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const FrenetState a{10 * U(rng), 15 + 5 * U(rng), U(rng), 2 * U(rng), U(rng), U(rng), 3.0};
    const FrenetState b{0.0, 15 + 5 * U(rng), U(rng), 2 * U(rng), U(rng), U(rng),
                        3.0 + 2.5 + 2.0 * U(rng)};
    const PlannedSegment seg = plan_segment(a, b);
    const double T = b.t - a.t;
    ASSERT_NEAR(seg.duration, T, 1e-12);
    const FrenetState s0 = seg.at(0.0);
    ASSERT_NEAR(s0.s, a.s, 1e-9);
    ASSERT_NEAR(s0.s_dot, a.s_dot, 1e-9);
    ASSERT_NEAR(s0.s_ddot, a.s_ddot, 1e-9);
    ASSERT_NEAR(s0.d, a.d, 1e-9);
    ASSERT_NEAR(s0.d_dot, a.d_dot, 1e-9);
    ASSERT_NEAR(s0.d_ddot, a.d_ddot, 1e-9);
    const FrenetState s1 = seg.at(T);
    ASSERT_NEAR(s1.s_dot, b.s_dot, 1e-8);
    ASSERT_NEAR(s1.s_ddot, b.s_ddot, 1e-8);
    ASSERT_NEAR(s1.d, b.d, 1e-8);
    ASSERT_NEAR(s1.d_dot, b.d_dot, 1e-8);
    ASSERT_NEAR(s1.d_ddot, b.d_ddot, 1e-8);
    ASSERT_NEAR(s1.t, b.t, 1e-12);
  }
}

TEST(PlanSegment, DerivativesMatchFiniteDifferences) {
  const FrenetState a{0, 10, 0.5, 0, 0.2, 0, 0};
  const FrenetState b{0, 14, -0.3, 3.5, 0, 0, 5};
  const PlannedSegment seg = plan_segment(a, b);
  const double h = 1e-5;
  for (double tau : {0.5, 1.7, 3.2, 4.4}) {
    const FrenetState m = seg.at(tau - h);
    const FrenetState c = seg.at(tau);
    const FrenetState p = seg.at(tau + h);
    EXPECT_NEAR((p.s - m.s) / (2 * h), c.s_dot, 1e-6);
    EXPECT_NEAR((p.s_dot - m.s_dot) / (2 * h), c.s_ddot, 1e-6);
    EXPECT_NEAR((p.d - m.d) / (2 * h), c.d_dot, 1e-6);
    EXPECT_NEAR((p.d_dot - m.d_dot) / (2 * h), c.d_ddot, 1e-6);
  }
}

TEST(PlanSegment, LateralDurationHoldsOffset) {
  const FrenetState a{0, 20, 0, 0, 0, 0, 0};
  const FrenetState b{0, 25, 0, -3.5, 0, 0, 6};
  const PlannedSegment seg = plan_segment(a, b, 2.0);
  EXPECT_NEAR(seg.at(2.0).d, -3.5, 1e-9);
  EXPECT_NEAR(seg.at(4.0).d, -3.5, 1e-12);
  EXPECT_EQ(seg.at(4.0).d_dot, 0.0);
  EXPECT_NEAR(seg.at(6.0).s_dot, 25.0, 1e-9);
  // A lateral duration at or beyond the segment is the plain plan.
  const PlannedSegment plain = plan_segment(a, b);
  const PlannedSegment same = plan_segment(a, b, 8.0);
  EXPECT_NEAR(plain.at(3.0).d, same.at(3.0).d, 1e-12);
}

TEST(PartitionCost, ZeroOnPlanSamplesAndPositiveOtherwise) {
  const FrenetState a{0, 10, 0, 0, 0, 0, 0};
  const FrenetState b{0, 12, 0, 1, 0, 0, 4};
  const PlannedSegment seg = plan_segment(a, b);
  std::vector<FrenetState> states;
  for (int k = 0; k <= 40; ++k) states.push_back(seg.at(0.1 * k));
  EXPECT_NEAR(partition_cost(states, seg), 0.0, 1e-18);
  states[20].d += 0.5;
  EXPECT_NEAR(partition_cost(states, seg), 0.25, 1e-12);
  StateWeights w = kUnitWeights;
  w[3] = 4.0;
  EXPECT_NEAR(partition_cost(states, seg, w), 1.0, 1e-12);
}

}  // namespace
}  // namespace btfuzz
