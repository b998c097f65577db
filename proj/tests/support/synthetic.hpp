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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include "btfuzz/frenet.hpp"
#include "btfuzz/simulator.hpp"

namespace btfuzz::testing {

/// Target state of one generating piece; `duration` in seconds.
struct PieceSpec {
  double duration = 4.0;
  double s_dot = 20.0;
  double s_ddot = 0.0;
  double d = 0.0;
  double d_dot = 0.0;
  double d_ddot = 0.0;
};

struct SyntheticLog {
  std::vector<TrajectoryPoint> points;
  std::vector<FrenetState> states;
  /// Sample index where each piece ends (last entry is the final sample).
  std::vector<std::size_t> breaks;
  FrenetState initial;
};

inline ReferencePath straight_path(double length = 2000.0) {
  return ReferencePath({{0.0, 0.0}, {length, 0.0}});
}

/// Polyline through a circular arc of radius `radius` (left turn).
inline ReferencePath arc_path(double radius = 400.0, double length = 1500.0, std::size_t n = 600) {
  std::vector<Vec2> pts;
  for (std::size_t i = 0; i <= n; ++i) {
    const double a = length / radius * static_cast<double>(i) / static_cast<double>(n);
    pts.push_back({radius * std::sin(a), radius * (1.0 - std::cos(a))});
  }
  return ReferencePath(std::move(pts));
}

/// Chains planned pieces from `initial`, sampling every `dt`. Durations are
/// rounded to whole steps so that piece ends fall on samples.
inline SyntheticLog synthesize(const FrenetState& initial, const std::vector<PieceSpec>& pieces,
                               const ReferencePath& path, double dt = 0.1) {
  SyntheticLog log;
  log.initial = initial;
  FrenetState cur = initial;
  std::size_t index = 0;
  log.states.push_back(cur);
  for (const auto& p : pieces) {
    const auto steps = static_cast<std::size_t>(std::llround(p.duration / dt));
    FrenetState end{0.0, p.s_dot, p.s_ddot, p.d, p.d_dot, p.d_ddot,
                    cur.t + static_cast<double>(steps) * dt};
    const PlannedSegment seg = plan_segment(cur, end);
    for (std::size_t k = 1; k <= steps; ++k) {
      FrenetState st = seg.at(static_cast<double>(k) * dt);
      st.t = initial.t + static_cast<double>(index + k) * dt;
      log.states.push_back(st);
    }
    index += steps;
    cur = log.states.back();
    log.breaks.push_back(index);
  }
  for (const auto& st : log.states) {
    const Vec2 p = frame_to_world(path, st.s, st.d);
    log.points.push_back({p.x, p.y, 0.0, st.t});
  }
  return log;
}

/// True when every sampled state respects the simulator envelope.
inline bool feasible(const SyntheticLog& log, double dt = 0.1) {
  for (std::size_t i = 1; i < log.states.size(); ++i) {
    const auto& st = log.states[i];
    if (st.s_dot < 0.0 || st.s_ddot < kMinAccel || st.s_ddot > kMaxAccel) return false;
  }
  // Mid-step envelope.
  for (std::size_t i = 0; i + 1 < log.states.size(); ++i) {
    const double a = 0.5 * (log.states[i].s_ddot + log.states[i + 1].s_ddot);
    if (a < kMinAccel + 0.5 || a > kMaxAccel - 0.5) return false;
  }
  (void)dt;
  return true;
}

/// Random general pieces (non-zero end accelerations and lateral rates).
inline SyntheticLog random_general(std::mt19937_64& rng, const ReferencePath& path,
                                   std::size_t pieces) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (;;) {
    FrenetState init{50.0 + 50.0 * U(rng), 10.0 + 10.0 * U(rng), 0.0, -1.0 + 2.0 * U(rng), 0.0,
                     0.0, 0.0};
    std::vector<PieceSpec> spec;
    double d = init.d;
    for (std::size_t k = 0; k < pieces; ++k) {
      PieceSpec p;
      p.duration = 2.0 + std::round(40.0 * U(rng)) / 10.0;
      p.s_dot = 8.0 + 16.0 * U(rng);
      p.s_ddot = -1.0 + 2.0 * U(rng);
      d = std::clamp(d + (-3.0 + 6.0 * U(rng)), -4.0, 4.0);
      p.d = d;
      p.d_dot = -0.3 + 0.6 * U(rng);
      p.d_ddot = -0.2 + 0.4 * U(rng);
      spec.push_back(p);
    }
    auto log = synthesize(init, spec, path);
    if (feasible(log)) return log;
  }
}

/// Random canonical pieces: rest end conditions, lateral either held or a
/// full lane change, speed either held within 1 m/s or changed by >= 2 m/s.
inline SyntheticLog random_canonical(std::mt19937_64& rng, const ReferencePath& path,
                                     std::size_t pieces) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (;;) {
    FrenetState init{50.0 + 50.0 * U(rng), 12.0 + 10.0 * U(rng), 0.0, 0.0, 0.0, 0.0, 0.0};
    std::vector<PieceSpec> spec;
    double d = 0.0;
    double v = init.s_dot;
    for (std::size_t k = 0; k < pieces; ++k) {
      PieceSpec p;
      p.duration = 3.0 + std::round(30.0 * U(rng)) / 10.0;
      if (U(rng) < 0.5) d = d > 1.0 ? 0.0 : 3.5;
      p.d = d;
      const double dv = U(rng) < 0.5 ? -0.8 + 1.6 * U(rng) : (U(rng) < 0.5 ? -1.0 : 1.0) * (2.0 + 3.0 * U(rng));
      v = std::clamp(v + dv, 8.0, 28.0);
      p.s_dot = v;
      spec.push_back(p);
    }
    auto log = synthesize(init, spec, path);
    if (feasible(log)) return log;
  }
}

/// Cruise, lane change, cruise (the shape used for noisy reconstruction).
inline SyntheticLog random_cut_in(std::mt19937_64& rng, const ReferencePath& path) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (;;) {
    const double v0 = 15.0 + 10.0 * U(rng);
    const double v2 = v0 - 4.0 + 8.0 * U(rng);
    const double lat = (U(rng) < 0.5 ? -1.0 : 1.0) * 3.5;
    FrenetState init{50.0, v0, 0.0, 0.0, 0.0, 0.0, 0.0};
    std::vector<PieceSpec> spec{
        {3.0 + std::round(30.0 * U(rng)) / 10.0, v0, 0.0, 0.0, 0.0, 0.0},
        {3.0 + std::round(30.0 * U(rng)) / 10.0, v2, 0.0, lat, 0.0, 0.0},
        {3.0 + std::round(30.0 * U(rng)) / 10.0, v2, 0.0, lat, 0.0, 0.0},
    };
    auto log = synthesize(init, spec, path);
    if (feasible(log)) return log;
  }
}

/// Adds i.i.d. Gaussian noise to x and y.
inline std::vector<TrajectoryPoint> add_noise(std::vector<TrajectoryPoint> pts, double sigma,
                                              std::mt19937_64& rng) {
  std::normal_distribution<double> N(0.0, sigma);
  for (auto& p : pts) {
    p.x += N(rng);
    p.y += N(rng);
  }
  return pts;
}

}  // namespace btfuzz::testing
