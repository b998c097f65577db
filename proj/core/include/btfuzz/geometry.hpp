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

#include <array>
#include <span>
#include <vector>

#include "btfuzz/frenet.hpp"

namespace btfuzz {

/// Oriented rectangle footprint.
struct OrientedBox {
  Vec2 center;
  double heading = 0.0;
  double length = 0.0;
  double width = 0.0;

  /// Corners in counter-clockwise order starting at rear-right.
  std::array<Vec2, 4> corners() const;
};

bool point_in_polygon(Vec2 p, std::span<const Vec2> polygon);

double distance_point_segment(Vec2 p, Vec2 a, Vec2 b);

/// Zero when p lies inside the polygon.
double distance_point_polygon(Vec2 p, std::span<const Vec2> polygon);

/// Separating-axis test for two convex polygons (touching counts as overlap).
bool convex_overlap(std::span<const Vec2> a, std::span<const Vec2> b);

/// Euclidean gap between two convex polygons; zero when they overlap.
double convex_gap(std::span<const Vec2> a, std::span<const Vec2> b);

}  // namespace btfuzz
