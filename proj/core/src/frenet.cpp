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

#include "btfuzz/frenet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "btfuzz/error.hpp"

namespace btfuzz {

double norm(Vec2 a) { return std::hypot(a.x, a.y); }

namespace {

Vec2 normalized(Vec2 v) {
  const double n = norm(v);
  return {v.x / n, v.y / n};
}

Vec2 left_normal(Vec2 dir) { return {-dir.y, dir.x}; }

// Roots of a*x^2 + b*x + c = 0; degenerates to the linear case.
int solve_quadratic(double a, double b, double c, double roots[2]) {
  const double scale = std::max({std::abs(a), std::abs(b), std::abs(c)});
  if (scale == 0.0) return 0;
  if (std::abs(a) <= 1e-14 * scale) {
    if (b == 0.0) return 0;
    roots[0] = -c / b;
    return 1;
  }
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return 0;
  const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  int n = 0;
  if (q != 0.0) roots[n++] = c / q;
  roots[n++] = q / a;
  return n;
}

}  // namespace

ReferencePath::ReferencePath(std::vector<Vec2> samples) : samples_(std::move(samples)) {
  if (samples_.size() < 2) {
    throw Error(ErrorCode::kDegeneratePath, "reference path needs at least 2 samples");
  }
  arc_.resize(samples_.size());
  arc_[0] = 0.0;
  for (std::size_t i = 1; i < samples_.size(); ++i) {
    const double len = norm(samples_[i] - samples_[i - 1]);
    if (!(len > 0.0) || !std::isfinite(len)) {
      throw Error(ErrorCode::kDegeneratePath,
                  "arc length must strictly increase at sample " + std::to_string(i));
    }
    arc_[i] = arc_[i - 1] + len;
  }

  const std::size_t n = samples_.size();
  std::vector<Vec2> seg_normals(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    seg_normals[i] = left_normal(normalized(samples_[i + 1] - samples_[i]));
  }
  vertex_normals_.resize(n);
  vertex_normals_[0] = seg_normals.front();
  vertex_normals_[n - 1] = seg_normals.back();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const Vec2 sum = seg_normals[i - 1] + seg_normals[i];
    if (norm(sum) < 1e-9) {
      throw Error(ErrorCode::kDegeneratePath, "path reverses direction at sample " + std::to_string(i));
    }
    vertex_normals_[i] = normalized(sum);
  }
}

std::size_t ReferencePath::segment_index(double s) const {
  if (s <= 0.0) return 0;
  const auto it = std::upper_bound(arc_.begin(), arc_.end(), s);
  const auto idx = static_cast<std::size_t>(std::distance(arc_.begin(), it));
  return std::min(idx == 0 ? 0 : idx - 1, samples_.size() - 2);
}

Vec2 ReferencePath::frame_normal(std::size_t segment, double lambda) const {
  const Vec2 n0 = vertex_normals_[segment];
  const Vec2 n1 = vertex_normals_[segment + 1];
  return normalized(n0 + lambda * (n1 - n0));
}

Vec2 ReferencePath::point_at(double s) const {
  s = std::clamp(s, 0.0, length());
  const std::size_t k = segment_index(s);
  const double lambda = (s - arc_[k]) / (arc_[k + 1] - arc_[k]);
  return samples_[k] + lambda * (samples_[k + 1] - samples_[k]);
}

Vec2 ReferencePath::normal_at(double s) const {
  s = std::clamp(s, 0.0, length());
  const std::size_t k = segment_index(s);
  return frame_normal(k, (s - arc_[k]) / (arc_[k + 1] - arc_[k]));
}

Vec2 ReferencePath::tangent_at(double s) const {
  const Vec2 n = normal_at(s);
  return {n.y, -n.x};
}

ReferencePath::Foot ReferencePath::foot_of(Vec2 p) const {
  const std::size_t segments = samples_.size() - 1;
  double best_dist = std::numeric_limits<double>::infinity();
  Foot best;
  for (std::size_t k = 0; k < segments; ++k) {
    const Vec2 a = samples_[k];
    const Vec2 dvec = samples_[k + 1] - a;
    const Vec2 n0 = vertex_normals_[k];
    const Vec2 m = vertex_normals_[k + 1] - n0;
    const Vec2 r = p - a;
    // cross(n0 + l*m, r - l*d) == 0
    double roots[2];
    const int count = solve_quadratic(-cross(m, dvec), cross(m, r) - cross(n0, dvec), cross(n0, r), roots);
    for (int i = 0; i < count; ++i) {
      double lambda = roots[i];
      constexpr double kTol = 1e-12;
      if (lambda < -kTol) {
        if (k != 0) continue;
        lambda = 0.0;
      } else if (lambda > 1.0 + kTol) {
        if (k + 1 != segments) continue;
        lambda = 1.0;
      }
      lambda = std::clamp(lambda, 0.0, 1.0);
      const Vec2 c = a + lambda * dvec;
      const double dist = norm(p - c);
      if (dist < best_dist) {
        best_dist = dist;
        best.s = arc_[k] + lambda * (arc_[k + 1] - arc_[k]);
        best.d = dot(p - c, frame_normal(k, lambda));
      }
    }
  }
  if (!std::isfinite(best_dist)) {
    // No foot on any segment: fall back to the nearer endpoint.
    const double d0 = norm(p - samples_.front());
    const double d1 = norm(p - samples_.back());
    if (d0 <= d1) {
      best = {0.0, dot(p - samples_.front(), vertex_normals_.front())};
    } else {
      best = {length(), dot(p - samples_.back(), vertex_normals_.back())};
    }
  }
  return best;
}

FrenetState project_position(Vec2 p, const ReferencePath& path, double lateral_bound) {
  const auto foot = path.foot_of(p);
  const double dist = norm(p - path.point_at(foot.s));
  if (!(dist <= lateral_bound)) {
    throw Error(ErrorCode::kPointOffPath, "point is " + std::to_string(dist) +
                                              " m from the path (bound " +
                                              std::to_string(lateral_bound) + " m)");
  }
  FrenetState st;
  st.s = foot.s;
  st.d = foot.d;
  return st;
}

FrenetState project(const TrajectoryPoint& p, Vec2 velocity, Vec2 acceleration,
                    const ReferencePath& path, double lateral_bound) {
  FrenetState st = project_position({p.x, p.y}, path, lateral_bound);
  const Vec2 t = path.tangent_at(st.s);
  const Vec2 n = path.normal_at(st.s);
  st.s_dot = dot(velocity, t);
  st.s_ddot = dot(acceleration, t);
  st.d_dot = dot(velocity, n);
  st.d_ddot = dot(acceleration, n);
  st.t = p.t;
  return st;
}

Vec2 unproject(const FrenetState& st, const ReferencePath& path) {
  constexpr double kSlack = 1e-9;
  if (!(st.s >= -kSlack && st.s <= path.length() + kSlack)) {
    throw Error(ErrorCode::kOutOfRange, "s=" + std::to_string(st.s) + " outside [0, " +
                                            std::to_string(path.length()) + "]");
  }
  return path.point_at(st.s) + st.d * path.normal_at(st.s);
}

FrenetState PlannedSegment::at(double tau) const {
  const auto& a = longitudinal;
  const auto& b = lateral;
  const double t2 = tau * tau;
  const double t3 = t2 * tau;
  const double t4 = t3 * tau;
  const double t5 = t4 * tau;
  FrenetState st;
  st.s = a[0] + a[1] * tau + a[2] * t2 + a[3] * t3 + a[4] * t4;
  st.s_dot = a[1] + 2.0 * a[2] * tau + 3.0 * a[3] * t2 + 4.0 * a[4] * t3;
  st.s_ddot = 2.0 * a[2] + 6.0 * a[3] * tau + 12.0 * a[4] * t2;
  st.t = start_time + tau;
  if (lateral_duration > 0.0 && tau > lateral_duration) {
    const FrenetState held = at(lateral_duration);
    st.d = held.d;
    return st;
  }
  st.d = b[0] + b[1] * tau + b[2] * t2 + b[3] * t3 + b[4] * t4 + b[5] * t5;
  st.d_dot = b[1] + 2.0 * b[2] * tau + 3.0 * b[3] * t2 + 4.0 * b[4] * t3 + 5.0 * b[5] * t4;
  st.d_ddot = 2.0 * b[2] + 6.0 * b[3] * tau + 12.0 * b[4] * t2 + 20.0 * b[5] * t3;
  return st;
}

PlannedSegment plan_segment(const FrenetState& start, const FrenetState& end,
                            double lateral_duration) {
  double T = end.t - start.t;
  if (!(T > 0.0)) {
    throw Error(ErrorCode::kNonpositiveDuration, "segment duration " + std::to_string(T));
  }
  PlannedSegment seg;
  seg.duration = T;
  seg.start_time = start.t;
  if (lateral_duration > 0.0 && lateral_duration < T) seg.lateral_duration = lateral_duration;

  double T2 = T * T;
  double T3 = T2 * T;
  double T4 = T3 * T;
  double T5 = T4 * T;

  auto& a = seg.longitudinal;
  a[0] = start.s;
  a[1] = start.s_dot;
  a[2] = 0.5 * start.s_ddot;
  {
    const double rv = end.s_dot - a[1] - 2.0 * a[2] * T;
    const double ra = end.s_ddot - 2.0 * a[2];
    a[3] = (3.0 * rv - ra * T) / (3.0 * T2);
    a[4] = (ra * T - 2.0 * rv) / (4.0 * T3);
  }

  if (seg.lateral_duration > 0.0) {
    T = seg.lateral_duration;
    T2 = T * T;
    T3 = T2 * T;
    T4 = T3 * T;
    T5 = T4 * T;
  }
  auto& b = seg.lateral;
  b[0] = start.d;
  b[1] = start.d_dot;
  b[2] = 0.5 * start.d_ddot;
  {
    const double r0 = end.d - (b[0] + b[1] * T + b[2] * T2);
    const double r1 = end.d_dot - (b[1] + 2.0 * b[2] * T);
    const double r2 = end.d_ddot - 2.0 * b[2];
    b[3] = (20.0 * r0 - 8.0 * r1 * T + r2 * T2) / (2.0 * T3);
    b[4] = (-30.0 * r0 + 14.0 * r1 * T - 2.0 * r2 * T2) / (2.0 * T4);
    b[5] = (12.0 * r0 - 6.0 * r1 * T + r2 * T2) / (2.0 * T5);
  }
  return seg;
}

double squared_state_distance(const FrenetState& a, const FrenetState& b, const StateWeights& w) {
  const double ds = a.s - b.s;
  const double dv = a.s_dot - b.s_dot;
  const double da = a.s_ddot - b.s_ddot;
  const double dd = a.d - b.d;
  const double ddv = a.d_dot - b.d_dot;
  const double dda = a.d_ddot - b.d_ddot;
  return w[0] * ds * ds + w[1] * dv * dv + w[2] * da * da + w[3] * dd * dd + w[4] * ddv * ddv +
         w[5] * dda * dda;
}

double partition_cost(std::span<const FrenetState> original, const PlannedSegment& planned,
                      const StateWeights& weights) {
  double cost = 0.0;
  for (const auto& st : original) {
    cost += squared_state_distance(st, planned.at(st.t - planned.start_time), weights);
  }
  return cost;
}

}  // namespace btfuzz
