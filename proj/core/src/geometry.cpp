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

#include "btfuzz/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace btfuzz {

std::array<Vec2, 4> OrientedBox::corners() const {
  const Vec2 f{std::cos(heading), std::sin(heading)};
  const Vec2 l{-f.y, f.x};
  const double hl = 0.5 * length;
  const double hw = 0.5 * width;
  return {center - hl * f - hw * l, center + hl * f - hw * l, center + hl * f + hw * l,
          center - hl * f + hw * l};
}

bool point_in_polygon(Vec2 p, std::span<const Vec2> polygon) {
  bool inside = false;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2 a = polygon[i];
    const Vec2 b = polygon[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

double distance_point_segment(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return norm(p - (a + t * ab));
}

double distance_point_polygon(Vec2 p, std::span<const Vec2> polygon) {
  if (point_in_polygon(p, polygon)) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n = polygon.size();
  for (std::size_t i = 0; i < n; ++i) {
    best = std::min(best, distance_point_segment(p, polygon[i], polygon[(i + 1) % n]));
  }
  return best;
}

namespace {

bool separated_on_edges(std::span<const Vec2> a, std::span<const Vec2> b) {
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 e = a[(i + 1) % n] - a[i];
    const Vec2 axis{-e.y, e.x};
    double amin = std::numeric_limits<double>::infinity();
    double amax = -amin;
    for (const Vec2 v : a) {
      const double p = dot(v, axis);
      amin = std::min(amin, p);
      amax = std::max(amax, p);
    }
    double bmin = std::numeric_limits<double>::infinity();
    double bmax = -bmin;
    for (const Vec2 v : b) {
      const double p = dot(v, axis);
      bmin = std::min(bmin, p);
      bmax = std::max(bmax, p);
    }
    if (amax < bmin || bmax < amin) return true;
  }
  return false;
}

}  // namespace

bool convex_overlap(std::span<const Vec2> a, std::span<const Vec2> b) {
  return !separated_on_edges(a, b) && !separated_on_edges(b, a);
}

double convex_gap(std::span<const Vec2> a, std::span<const Vec2> b) {
  if (convex_overlap(a, b)) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Vec2 a0 = a[i];
    const Vec2 a1 = a[(i + 1) % a.size()];
    for (const Vec2 v : b) best = std::min(best, distance_point_segment(v, a0, a1));
  }
  for (std::size_t i = 0; i < b.size(); ++i) {
    const Vec2 b0 = b[i];
    const Vec2 b1 = b[(i + 1) % b.size()];
    for (const Vec2 v : a) best = std::min(best, distance_point_segment(v, b0, b1));
  }
  return best;
}

}  // namespace btfuzz
