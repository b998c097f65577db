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
#include <cstddef>
#include <span>
#include <vector>

namespace btfuzz {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double k, Vec2 a) { return {k * a.x, k * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
double norm(Vec2 a);

/// A logged sample. `z` is carried through but never used by planar math.
struct TrajectoryPoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double t = 0.0;
};

struct FrenetState {
  double s = 0.0;
  double s_dot = 0.0;
  double s_ddot = 0.0;
  double d = 0.0;
  double d_dot = 0.0;
  double d_ddot = 0.0;
  double t = 0.0;
};

/// Polyline centerline with arc-length parameterization.
///
/// The Frenet frame uses a continuous normal field: the unit normal at each
/// sample is the normalized sum of the adjacent segment normals, and the
/// normal along a segment is the (renormalized) linear blend of the two
/// sample normals. On a straight path this is the ordinary segment normal;
/// on a sampled arc it keeps project() and unproject() exact inverses inside
/// the tube where the normals do not cross.
class ReferencePath {
 public:
  /// Throws Error(kDegeneratePath) unless there are >= 2 samples with
  /// strictly increasing arc length.
  explicit ReferencePath(std::vector<Vec2> samples);

  const std::vector<Vec2>& samples() const { return samples_; }
  const std::vector<double>& arc_lengths() const { return arc_; }
  double length() const { return arc_.back(); }

  /// Centerline point at arc length s (clamped to the path).
  Vec2 point_at(double s) const;
  /// Unit tangent / left normal of the continuous frame at arc length s.
  Vec2 tangent_at(double s) const;
  Vec2 normal_at(double s) const;

  /// Index of the segment containing s (last segment for s == length()).
  std::size_t segment_index(double s) const;

  struct Foot {
    double s = 0.0;
    double d = 0.0;
  };
  /// Frame coordinates of a point: the foot along the frame normal with the
  /// smallest |d|. Points beyond either end are clamped to that end.
  Foot foot_of(Vec2 p) const;

 private:
  Vec2 frame_normal(std::size_t segment, double lambda) const;

  std::vector<Vec2> samples_;
  std::vector<double> arc_;
  std::vector<Vec2> vertex_normals_;
};

inline constexpr double kDefaultLateralBound = 50.0;

/// Projects a Cartesian sample into the path frame. Velocity and
/// acceleration are decomposed into the tangent and normal components of
/// the frame at the foot point. Throws Error(kPointOffPath) if the lateral
/// offset exceeds `lateral_bound`.
FrenetState project(const TrajectoryPoint& p, Vec2 velocity, Vec2 acceleration,
                    const ReferencePath& path, double lateral_bound = kDefaultLateralBound);

/// Position-only projection (derivative fields are zero).
FrenetState project_position(Vec2 p, const ReferencePath& path,
                             double lateral_bound = kDefaultLateralBound);

/// Inverse of project() for the position. Throws Error(kOutOfRange) when
/// s is outside [0, length].
Vec2 unproject(const FrenetState& st, const ReferencePath& path);

/// Quartic longitudinal / quintic lateral motion between two states.
/// Coefficients are in ascending powers of time relative to `start_time`.
struct PlannedSegment {
  std::array<double, 5> longitudinal{};
  std::array<double, 6> lateral{};
  double duration = 0.0;
  double start_time = 0.0;
  /// Lateral motion ends here and is held afterwards; 0 means `duration`.
  double lateral_duration = 0.0;

  /// Evaluates the segment at relative time tau (not clamped).
  FrenetState at(double tau) const;
};

/// Throws Error(kNonpositiveDuration) unless end.t > start.t. The end
/// displacement s is free (velocity-keeping quartic).
/// A positive `lateral_duration` below the segment duration finishes the
/// lateral quintic early.
PlannedSegment plan_segment(const FrenetState& start, const FrenetState& end,
                            double lateral_duration = 0.0);

/// Per-component weights for the partition cost, in the order
/// (s, s_dot, s_ddot, d, d_dot, d_ddot).
using StateWeights = std::array<double, 6>;
inline constexpr StateWeights kUnitWeights{1.0, 1.0, 1.0, 1.0, 1.0, 1.0};

/// Sum over the states of the weighted squared distance to the plan
/// evaluated at each state's timestamp.
double partition_cost(std::span<const FrenetState> original, const PlannedSegment& planned,
                      const StateWeights& weights = kUnitWeights);

double squared_state_distance(const FrenetState& a, const FrenetState& b,
                              const StateWeights& weights = kUnitWeights);

}  // namespace btfuzz
