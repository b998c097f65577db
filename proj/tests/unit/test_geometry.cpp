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
#include <vector>

#include <gtest/gtest.h>

#include "btfuzz/error.hpp"
#include "btfuzz/geometry.hpp"
#include "btfuzz/lane_map.hpp"
#include "support/fixtures.hpp"

namespace btfuzz {
namespace {

std::vector<Vec2> square(double x0, double y0, double side) {
  return {{x0, y0}, {x0 + side, y0}, {x0 + side, y0 + side}, {x0, y0 + side}};
}

TEST(Geometry, PointInPolygon) {
  const auto sq = square(0, 0, 2);
  EXPECT_TRUE(point_in_polygon({1, 1}, sq));
  EXPECT_FALSE(point_in_polygon({3, 1}, sq));
  EXPECT_FALSE(point_in_polygon({-0.1, 1}, sq));
}

TEST(Geometry, DistancePointSegment) {
  EXPECT_NEAR(distance_point_segment({0, 1}, {-1, 0}, {1, 0}), 1.0, 1e-12);
  EXPECT_NEAR(distance_point_segment({3, 4}, {0, 0}, {0, 0}), 5.0, 1e-12);
  EXPECT_NEAR(distance_point_segment({4, 4}, {0, 0}, {1, 0}), 5.0, 1e-12);
}

TEST(Geometry, DistancePointPolygonIsZeroInside) {
  const auto sq = square(0, 0, 2);
  EXPECT_EQ(distance_point_polygon({1, 1}, sq), 0.0);
  EXPECT_NEAR(distance_point_polygon({5, 1}, sq), 3.0, 1e-12);
}

TEST(Geometry, ConvexOverlapAndGap) {
  const auto a = square(0, 0, 1);
  const auto b = square(2, 0, 1);
  const auto c = square(0.5, 0.5, 1);
  const auto touching = square(1, 0, 1);
  EXPECT_FALSE(convex_overlap(a, b));
  EXPECT_NEAR(convex_gap(a, b), 1.0, 1e-12);
  EXPECT_TRUE(convex_overlap(a, c));
  EXPECT_EQ(convex_gap(a, c), 0.0);
  EXPECT_TRUE(convex_overlap(a, touching));
  // Diagonal separation.
  const auto d = square(2, 2, 1);
  EXPECT_NEAR(convex_gap(a, d), std::sqrt(2.0), 1e-12);
}

TEST(Geometry, OrientedBoxCorners) {
  const OrientedBox box{{0, 0}, 0.0, 4.0, 2.0};
  const auto c = box.corners();
  EXPECT_NEAR(c[0].x, -2.0, 1e-12);
  EXPECT_NEAR(c[0].y, -1.0, 1e-12);
  EXPECT_NEAR(c[2].x, 2.0, 1e-12);
  EXPECT_NEAR(c[2].y, 1.0, 1e-12);

  const OrientedBox turned{{10, 0}, M_PI / 2, 4.0, 2.0};
  double min_y = 1e9;
  double max_y = -1e9;
  for (const auto& p : turned.corners()) {
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
    EXPECT_NEAR(std::abs(p.x - 10.0), 1.0, 1e-12);
  }
  EXPECT_NEAR(min_y, -2.0, 1e-12);
  EXPECT_NEAR(max_y, 2.0, 1e-12);
}

TEST(LaneMap, RejectsBadLanes) {
  auto path = [] { return ReferencePath({{0, 0}, {10, 0}}); };
  EXPECT_THROW(LaneMap({Lane{"a", path(), 0.0, {}, {}}}, {}), Error);
  EXPECT_THROW(LaneMap({Lane{"a", path(), 3.5, {}, {}}, Lane{"a", path(), 3.5, {}, {}}}, {}),
               Error);
  EXPECT_THROW(LaneMap({Lane{"a", path(), 3.5, "missing", {}}}, {}), Error);
  // Asymmetric adjacency.
  EXPECT_THROW(LaneMap({Lane{"a", path(), 3.5, "b", {}}, Lane{"b", path(), 3.5, {}, {}}}, {}),
               Error);
}

TEST(LaneMap, NearestLaneAndOnRoad) {
  const auto map = testing::two_lane_map();
  const auto m = map->nearest_lane({50.0, 3.0});
  ASSERT_TRUE(m.has_value());
  EXPECT_EQ(m->lane->id, "left");
  EXPECT_NEAR(m->foot.s, 50.0, 1e-9);
  EXPECT_NEAR(m->foot.d, -0.5, 1e-9);
  EXPECT_TRUE(map->on_road({50.0, 5.0}));
  EXPECT_FALSE(map->on_road({50.0, 5.5}));
  EXPECT_FALSE(map->on_road({50.0, -2.0}));
  EXPECT_EQ(map->find_lane("nope"), nullptr);
  EXPECT_FALSE(LaneMap().nearest_lane({0, 0}).has_value());
}

}  // namespace
}  // namespace btfuzz
