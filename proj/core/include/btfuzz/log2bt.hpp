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

#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "btfuzz/behavior_tree.hpp"
#include "btfuzz/frenet.hpp"
#include "btfuzz/lane_map.hpp"
#include "btfuzz/scenario.hpp"
#include "btfuzz/trajectory_io.hpp"

namespace btfuzz {

struct PartitionConfig {
  double eps_part = 1.0;
  double eps_lat = 2.0;
  double eps_vel = 1.0;
  StateWeights weights = kUnitWeights;
};

/// Throws Error(kInvalidArgument) unless every threshold is positive.
void check_config(const PartitionConfig& cfg);

/// Derivative estimation for logged positions.
///
/// The noise level is estimated from third differences. Below
/// `noise_floor` the samples are used as they are; otherwise they are
/// smoothed by a third-order Whittaker smoother whose weight grows with the
/// squared noise estimate. Each state then comes from a local least-squares
/// polynomial of degree `degree` over the `window`-sample stencil (among
/// those containing the sample) with the smallest residual.
struct EstimatorConfig {
  std::size_t window = 7;
  int degree = 5;
  double noise_floor = 0.01;
  double reference_sigma = 0.1;
  double reference_lambda = 1e4;
};

/// Robust estimate of the i.i.d. noise standard deviation of `y`.
double estimate_noise(std::span<const double> y);

/// Whittaker smoother: argmin |y - z|^2 + lambda |D3 z|^2.
std::vector<double> whittaker_smooth(std::span<const double> y, double lambda);

/// Frenet states (with derivatives) for every sample of `traj`.
/// Throws Error(kTooFewStates) below two samples and propagates projection errors.
std::vector<FrenetState> estimate_states(std::span<const TrajectoryPoint> traj,
                                         const ReferencePath& path,
                                         const EstimatorConfig& est = {});

struct CharacteristicState {
  FrenetState state;
  std::size_t index = 0;
  /// Set when the greedy loop could not grow past a single step; the
  /// segment ending here is replayed verbatim.
  bool forced = false;
};

/// Greedy partition of already estimated states.
std::vector<CharacteristicState> partition_states(std::span<const FrenetState> states,
                                                  const PartitionConfig& cfg = {});

std::vector<CharacteristicState> partition(std::span<const TrajectoryPoint> traj,
                                           const ReferencePath& path,
                                           const PartitionConfig& cfg = {},
                                           const EstimatorConfig& est = {});

enum class SegmentKind { kChangeLane, kCruise, kFollowLog };

std::string_view to_string(SegmentKind kind);

struct SegmentLabel {
  SegmentKind kind = SegmentKind::kFollowLog;
  CharacteristicState from;
  CharacteristicState to;
};

SegmentLabel classify_segment(const CharacteristicState& a, const CharacteristicState& b,
                              const PartitionConfig& cfg = {});

struct BuildOptions {
  std::string agent = "agent";
  /// false emits FollowLog leaves only.
  bool semantic = true;
};

/// Sequence of one leaf per consecutive pair (ids seg0, seg1, ...). The
/// first leaf waits for the time of the first state relative to the log
/// start; later leaves chain on the end of their predecessor.
/// Throws Error(kTooFewStates) below two states.
BehaviorTree build_bt(std::span<const CharacteristicState> css, const PartitionConfig& cfg = {},
                      const BuildOptions& opts = {});

/// Open-loop replay of `tree` on a single-lane map along `path`, starting
/// from `initial` at time `t0` and sampling every `dt` until `t_end`.
std::vector<TrajectoryPoint> reconstruct(const BehaviorTree& tree, const FrenetState& initial,
                                         const ReferencePath& path, double t0, double t_end,
                                         double dt);

struct ReconstructionError {
  double ade_s = 0.0;
  double ade_l = 0.0;
  std::size_t samples = 0;
};

/// Mean absolute frame errors over the timestamps of `original` inside the
/// time range of `reconstructed` (linearly interpolated).
/// Throws Error(kEmptyOverlap) when no timestamp qualifies.
ReconstructionError reconstruction_error(std::span<const TrajectoryPoint> original,
                                         std::span<const TrajectoryPoint> reconstructed,
                                         const ReferencePath& path);

/// Type-7 sample quantile, q in [0, 1]. Throws Error(kEmptyDistribution).
double quantile(std::vector<double> samples, double q);

struct GeneralizeSpec {
  std::string name;
  /// Dotted property path, e.g. `agent.seg0.speed`.
  std::string target;
  std::vector<double> samples;
};

/// Copy of `ls` with one uniform variable per spec over the central
/// quantile interval [lo_q, hi_q] of its samples. The samples are kept as a
/// named distribution. Throws Error(kUnknownProperty), Error(kEmptyDistribution).
LogicalScenario generalize(const LogicalScenario& ls, std::span<const GeneralizeSpec> specs,
                           double lo_q = 0.05, double hi_q = 0.95);

/// Canonical tree text: the tree object of the scenario file format, compact,
/// numbers rounded to 6 significant digits.
std::string serialize_tree(const BehaviorTree& tree);

/// Bytes of the canonical log CSV over bytes of the canonical tree.
double compression_ratio(std::span<const TrajectoryPoint> traj, const BehaviorTree& tree,
                         const std::string& log_id = "agent");

struct ConvertOptions {
  PartitionConfig partition;
  EstimatorConfig estimator;
  bool semantic = true;
  /// Log id whose first sample becomes the ego initial state.
  std::string ego = "ego";
  std::string name = "log2bt";
  std::string map_ref;
};

struct AgentConversion {
  std::string id;
  std::string lane;
  std::size_t samples = 0;
  std::size_t segments = 0;
  std::map<std::string, std::size_t> kinds;
  ReconstructionError error;
  double compression = 0.0;
};

struct LogConversion {
  LogicalScenario scenario;
  std::vector<AgentConversion> agents;
};

/// Scenario with one tree per non-ego log, each in the frame of the lane
/// nearest to its first sample. Throws Error(kUnknownParticipant) without an
/// ego log, Error(kPointOffPath) when a first sample is off every lane.
LogConversion convert_log(std::span<const AgentLog> logs, std::shared_ptr<const LaneMap> map,
                          const ConvertOptions& options = {});

}  // namespace btfuzz
