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

#include "btfuzz/log2bt.hpp"

#include <cstdio>
#include <cstdlib>
#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "btfuzz/error.hpp"
#include "btfuzz/json_io.hpp"
#include "btfuzz/lane_map.hpp"
#include "btfuzz/simulator.hpp"
#include "btfuzz/trajectory_io.hpp"

namespace btfuzz {

void check_config(const PartitionConfig& cfg) {
  if (!(cfg.eps_part > 0.0) || !(cfg.eps_lat > 0.0) || !(cfg.eps_vel > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "partition thresholds must be positive");
  }
}

namespace {

double median(std::vector<double> v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) {
    m = 0.5 * (m + *std::max_element(v.begin(), v.begin() + mid));
  }
  return m;
}

struct LocalFit {
  double value = 0.0;
  double first = 0.0;
  double second = 0.0;
  double residual = 0.0;
};

/// Least-squares polynomial through samples [lo, lo + count) evaluated at t[i].
LocalFit fit_window(std::span<const double> t, std::span<const double> y, std::size_t lo,
                    std::size_t count, std::size_t i, int degree) {
  const int deg = std::min<int>(degree, static_cast<int>(count) - 1);
  double scale = 0.0;
  for (std::size_t k = lo; k < lo + count; ++k) scale = std::max(scale, std::abs(t[k] - t[i]));
  if (scale <= 0.0) scale = 1.0;
  Eigen::MatrixXd A(count, deg + 1);
  Eigen::VectorXd b(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double tau = (t[lo + k] - t[i]) / scale;
    double p = 1.0;
    for (int c = 0; c <= deg; ++c) {
      A(k, c) = p;
      p *= tau;
    }
    b(k) = y[lo + k];
  }
  const Eigen::VectorXd coef = A.colPivHouseholderQr().solve(b);
  LocalFit f;
  f.value = coef(0);
  f.first = deg >= 1 ? coef(1) / scale : 0.0;
  f.second = deg >= 2 ? 2.0 * coef(2) / (scale * scale) : 0.0;
  f.residual = (A * coef - b).norm();
  return f;
}

/// Value and derivatives per sample. With `adaptive` the stencil with the
/// smallest residual is used (ties go to the most centered one); otherwise
/// the centered stencil.
std::vector<LocalFit> local_fits(std::span<const double> t, std::span<const double> y,
                                 const EstimatorConfig& est, bool adaptive) {
  const std::size_t n = y.size();
  const std::size_t w = std::min(est.window, n);
  std::vector<LocalFit> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t first = i + 1 >= w ? i + 1 - w : 0;
    const std::size_t last = std::min(i, n - w);
    const double centered = static_cast<double>(i) - 0.5 * static_cast<double>(w - 1);
    const auto offcenter = [&](std::size_t lo) { return std::abs(static_cast<double>(lo) - centered); };
    if (!adaptive) {
      const std::size_t lo =
          std::clamp<std::size_t>(i >= w / 2 ? i - w / 2 : 0, first, last);
      out[i] = fit_window(t, y, lo, w, i, est.degree);
      continue;
    }
    double level = 0.0;
    for (std::size_t k = first; k < std::min(n, last + w); ++k) level = std::max(level, std::abs(y[k]));
    const double tie = 1e-12 * (1.0 + level);
    bool have = false;
    std::size_t best_lo = first;
    LocalFit best;
    for (std::size_t lo = first; lo <= last; ++lo) {
      const LocalFit f = fit_window(t, y, lo, w, i, est.degree);
      const bool better = !have || f.residual < best.residual - tie ||
                          (f.residual <= best.residual + tie && offcenter(lo) < offcenter(best_lo));
      if (better) {
        best = f;
        best_lo = lo;
        have = true;
      }
    }
    out[i] = best;
  }
  return out;
}

std::vector<double> smooth_if_noisy(std::span<const double> y, const EstimatorConfig& est,
                                    bool& smoothed) {
  smoothed = false;
  if (y.size() < 8) return {y.begin(), y.end()};
  const double sigma = estimate_noise(y);
  if (sigma < est.noise_floor) return {y.begin(), y.end()};
  smoothed = true;
  const double ratio = sigma / est.reference_sigma;
  return whittaker_smooth(y, est.reference_lambda * ratio * ratio);
}

}  // namespace

double estimate_noise(std::span<const double> y) {
  if (y.size() < 4) return 0.0;
  std::vector<double> d3(y.size() - 3);
  for (std::size_t i = 0; i + 3 < y.size(); ++i) {
    d3[i] = y[i + 3] - 3.0 * y[i + 2] + 3.0 * y[i + 1] - y[i];
  }
  const double m = median(d3);
  for (double& v : d3) v = std::abs(v - m);
  return median(d3) / 0.6745 / std::sqrt(20.0);
}

std::vector<double> whittaker_smooth(std::span<const double> y, double lambda) {
  const auto n = static_cast<Eigen::Index>(y.size());
  if (n < 4 || lambda <= 0.0) return {y.begin(), y.end()};
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(4 * (n - 3)));
  constexpr double kStencil[4] = {-1.0, 3.0, -3.0, 1.0};
  for (Eigen::Index r = 0; r + 3 < n; ++r) {
    for (int k = 0; k < 4; ++k) trip.emplace_back(r, r + k, kStencil[k]);
  }
  Eigen::SparseMatrix<double> D(n - 3, n);
  D.setFromTriplets(trip.begin(), trip.end());
  Eigen::SparseMatrix<double> I(n, n);
  I.setIdentity();
  const Eigen::SparseMatrix<double> A = I + lambda * Eigen::SparseMatrix<double>(D.transpose() * D);
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(A);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kInvalidArgument, "whittaker factorization failed");
  }
  const Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(y.data(), n);
  const Eigen::VectorXd z = solver.solve(b);
  return {z.data(), z.data() + n};
}

std::vector<FrenetState> estimate_states(std::span<const TrajectoryPoint> traj,
                                         const ReferencePath& path, const EstimatorConfig& est) {
  if (traj.size() < 2) throw Error(ErrorCode::kTooFewStates, "need at least two samples");
  const std::size_t n = traj.size();
  std::vector<double> t(n), s(n), d(n);
  for (std::size_t i = 0; i < n; ++i) {
    const FrenetState f = project_position({traj[i].x, traj[i].y}, path);
    t[i] = traj[i].t;
    s[i] = f.s;
    d[i] = f.d;
  }
  bool s_smoothed = false;
  bool d_smoothed = false;
  const std::vector<double> ss = smooth_if_noisy(s, est, s_smoothed);
  const std::vector<double> ds = smooth_if_noisy(d, est, d_smoothed);
  const auto fs = local_fits(t, ss, est, !s_smoothed);
  const auto fd = local_fits(t, ds, est, !d_smoothed);
  std::vector<FrenetState> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = {fs[i].value, fs[i].first, fs[i].second, fd[i].value, fd[i].first, fd[i].second, t[i]};
  }
  return out;
}

std::vector<CharacteristicState> partition_states(std::span<const FrenetState> states,
                                                  const PartitionConfig& cfg) {
  check_config(cfg);
  const std::size_t n = states.size();
  if (n < 2) throw Error(ErrorCode::kTooFewStates, "need at least two states");
  std::vector<CharacteristicState> css{{states[0], 0, false}};
  std::size_t start = 0;
  std::size_t length = 1;
  while (start + length <= n - 1) {
    const std::size_t curr = start + length;
    const PlannedSegment plan = plan_segment(states[start], states[curr]);
    const double cost = partition_cost(states.subspan(start, curr - start + 1), plan, cfg.weights);
    if (cost > cfg.eps_part) {
      if (curr - 1 == start) {
        css.push_back({states[curr], curr, true});
        start = curr;
      } else {
        css.push_back({states[curr - 1], curr - 1, false});
        start = curr - 1;
      }
      length = 1;
    } else {
      ++length;
    }
  }
  if (css.back().index != n - 1) css.push_back({states[n - 1], n - 1, false});
  return css;
}

std::vector<CharacteristicState> partition(std::span<const TrajectoryPoint> traj,
                                           const ReferencePath& path, const PartitionConfig& cfg,
                                           const EstimatorConfig& est) {
  check_config(cfg);
  const auto states = estimate_states(traj, path, est);
  return partition_states(states, cfg);
}

std::string_view to_string(SegmentKind kind) {
  switch (kind) {
    case SegmentKind::kChangeLane: return "change_lane";
    case SegmentKind::kCruise: return "cruise";
    case SegmentKind::kFollowLog: return "follow_log";
  }
  return "follow_log";
}

SegmentLabel classify_segment(const CharacteristicState& a, const CharacteristicState& b,
                              const PartitionConfig& cfg) {
  SegmentLabel label{SegmentKind::kFollowLog, a, b};
  if (std::abs(a.state.d - b.state.d) > cfg.eps_lat) {
    label.kind = SegmentKind::kChangeLane;
  } else if (std::abs(a.state.s_dot - b.state.s_dot) < cfg.eps_vel) {
    label.kind = SegmentKind::kCruise;
  }
  return label;
}

BehaviorTree build_bt(std::span<const CharacteristicState> css, const PartitionConfig& cfg,
                      const BuildOptions& opts) {
  if (css.size() < 2) throw Error(ErrorCode::kTooFewStates, "need at least two characteristic states");
  Composite seq;
  seq.kind = CompositeKind::kSequence;
  for (std::size_t k = 0; k + 1 < css.size(); ++k) {
    const auto& a = css[k];
    const auto& b = css[k + 1];
    BehaviorNode node;
    node.id = "seg" + std::to_string(k);
    if (k == 0) {
      node.condition = TriggerCondition{TimeCondition{0.0}};
    } else {
      node.condition = TriggerCondition{EndsByBehaviorCondition{"seg" + std::to_string(k - 1), ""}};
    }
    SegmentKind kind = SegmentKind::kFollowLog;
    if (opts.semantic && !b.forced) kind = classify_segment(a, b, cfg).kind;
    const double duration = b.state.t - a.state.t;
    const double offset = b.state.d - a.state.d;
    switch (kind) {
      case SegmentKind::kChangeLane:
        node.payload = LeafBehavior{ChangeLaneBehavior{duration, offset, b.state.s_dot, std::nullopt}};
        break;
      case SegmentKind::kCruise:
        node.payload = LeafBehavior{CruiseBehavior{b.state.s_dot, duration, offset}};
        break;
      case SegmentKind::kFollowLog:
        node.payload = LeafBehavior{FollowLogBehavior{a.state, b.state}};
        break;
    }
    seq.children.push_back(std::move(node));
  }
  BehaviorTree tree;
  tree.agent = opts.agent;
  tree.root.id = "root";
  tree.root.payload = std::move(seq);
  return tree;
}

std::vector<TrajectoryPoint> reconstruct(const BehaviorTree& tree, const FrenetState& initial,
                                         const ReferencePath& path, double t0, double t_end,
                                         double dt) {
  if (!(dt > 0.0)) throw Error(ErrorCode::kInvalidArgument, "dt must be positive");
  const LaneMap map({Lane{"ref", path, 3.5, std::nullopt, std::nullopt}}, {});
  AgentState agent;
  agent.id = tree.agent;
  agent.kind = AgentKind::kVehicle;
  agent.frame_lane = "ref";
  agent.frenet = initial;
  place_agent(agent, map);

  WorldState world;
  world.map = &map;
  world.agents.push_back(agent);
  TreeRunner runner(tree);
  const auto steps = static_cast<std::size_t>(std::max(0.0, std::round((t_end - t0) / dt)));
  std::vector<TrajectoryPoint> out;
  out.reserve(steps + 1);
  for (std::size_t k = 0;; ++k) {
    const AgentState& a = world.agents.front();
    out.push_back({a.x, a.y, 0.0, t0 + static_cast<double>(k) * dt});
    if (k == steps) break;
    const AgentCommand cmd = runner.tick(world, dt);
    advance_agent(world.agents.front(), cmd, dt, map);
    world.time = static_cast<double>(k + 1) * dt;
  }
  return out;
}

ReconstructionError reconstruction_error(std::span<const TrajectoryPoint> original,
                                         std::span<const TrajectoryPoint> reconstructed,
                                         const ReferencePath& path) {
  ReconstructionError err;
  if (original.empty() || reconstructed.empty()) {
    throw Error(ErrorCode::kEmptyOverlap, "empty trajectory");
  }
  constexpr double kSlack = 1e-9;
  const double lo = reconstructed.front().t - kSlack;
  const double hi = reconstructed.back().t + kSlack;
  for (const auto& p : original) {
    if (p.t < lo || p.t > hi) continue;
    const auto it = std::lower_bound(reconstructed.begin(), reconstructed.end(), p.t,
                                     [](const TrajectoryPoint& q, double t) { return q.t < t; });
    Vec2 r;
    if (it == reconstructed.end()) {
      r = {reconstructed.back().x, reconstructed.back().y};
    } else if (it == reconstructed.begin() || it->t == p.t) {
      r = {it->x, it->y};
    } else {
      const auto& q0 = *(it - 1);
      const auto& q1 = *it;
      const double w = (p.t - q0.t) / (q1.t - q0.t);
      r = {q0.x + w * (q1.x - q0.x), q0.y + w * (q1.y - q0.y)};
    }
    const FrenetState fo = project_position({p.x, p.y}, path);
    const FrenetState fr = project_position(r, path);
    err.ade_s += std::abs(fo.s - fr.s);
    err.ade_l += std::abs(fo.d - fr.d);
    ++err.samples;
  }
  if (err.samples == 0) throw Error(ErrorCode::kEmptyOverlap, "time ranges do not intersect");
  err.ade_s /= static_cast<double>(err.samples);
  err.ade_l /= static_cast<double>(err.samples);
  return err;
}

double quantile(std::vector<double> samples, double q) {
  if (samples.empty()) throw Error(ErrorCode::kEmptyDistribution, "no samples");
  if (!(q >= 0.0 && q <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "quantile outside [0, 1]");
  std::sort(samples.begin(), samples.end());
  const double h = q * static_cast<double>(samples.size() - 1);
  const auto k = static_cast<std::size_t>(std::floor(h));
  if (k + 1 >= samples.size()) return samples.back();
  return samples[k] + (h - static_cast<double>(k)) * (samples[k + 1] - samples[k]);
}

LogicalScenario generalize(const LogicalScenario& ls, std::span<const GeneralizeSpec> specs,
                           double lo_q, double hi_q) {
  if (!(lo_q >= 0.0 && lo_q < hi_q && hi_q <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "quantile interval must satisfy 0 <= lo < hi <= 1");
  }
  LogicalScenario out = ls;
  for (const auto& spec : specs) {
    try {
      (void)resolve_target(out, spec.target);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kUnresolvedTarget) throw;
      throw Error(ErrorCode::kUnknownProperty, spec.target);
    }
    if (spec.samples.empty()) throw Error(ErrorCode::kEmptyDistribution, spec.name);
    const double lo = quantile(spec.samples, lo_q);
    const double hi = quantile(spec.samples, hi_q);
    if (!(hi > lo)) {
      throw Error(ErrorCode::kEmptyDistribution, spec.name + ": distribution has no spread");
    }
    out.variables.push_back(Variable{spec.name, spec.target, UniformDomain{lo, hi}});
    out.distributions[spec.name] = spec.samples;
  }
  return out;
}

namespace {

void round_numbers(Json& j) {
  if (j.is_number_float()) {
    if (std::abs(j.get<double>()) < 1e-9) {
      j = 0.0;
      return;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", j.get<double>());
    j = std::strtod(buf, nullptr);
  } else if (j.is_structured()) {
    for (auto& child : j) round_numbers(child);
  }
}

}  // namespace

std::string serialize_tree(const BehaviorTree& tree) {
  Json j = to_json(tree.root);
  round_numbers(j);
  return j.dump();
}

double compression_ratio(std::span<const TrajectoryPoint> traj, const BehaviorTree& tree,
                         const std::string& log_id) {
  const AgentLog log{log_id, {traj.begin(), traj.end()}};
  const double log_bytes = static_cast<double>(log_to_csv(log).size());
  const double tree_bytes = static_cast<double>(serialize_tree(tree).size());
  return log_bytes / tree_bytes;
}

}  // namespace btfuzz

namespace btfuzz {

namespace {

const Lane& start_lane(const LaneMap& map, const AgentLog& log) {
  if (log.points.empty()) throw Error(ErrorCode::kTooFewStates, "log '" + log.id + "' is empty");
  const auto& p = log.points.front();
  const auto match = map.nearest_lane({p.x, p.y});
  if (!match || !match->lane) {
    throw Error(ErrorCode::kPointOffPath, "log '" + log.id + "' starts off every lane");
  }
  return *match->lane;
}

InitialState initial_state(const Lane& lane, const FrenetState& st) {
  InitialState init;
  init.lane = lane.id;
  init.s = st.s;
  init.d = st.d;
  init.speed = st.s_dot;
  init.accel = st.s_ddot;
  return init;
}

}  // namespace

LogConversion convert_log(std::span<const AgentLog> logs, std::shared_ptr<const LaneMap> map,
                          const ConvertOptions& options) {
  if (!map) throw Error(ErrorCode::kInvalidArgument, "conversion needs a map");
  check_config(options.partition);
  LogConversion out;
  LogicalScenario& ls = out.scenario;
  ls.name = options.name;
  ls.map_ref = options.map_ref;
  ls.map = map;

  double t0 = std::numeric_limits<double>::infinity();
  double t1 = -std::numeric_limits<double>::infinity();
  for (const auto& log : logs) {
    if (log.points.empty()) continue;
    t0 = std::min(t0, log.points.front().t);
    t1 = std::max(t1, log.points.back().t);
  }

  bool have_ego = false;
  for (const auto& log : logs) {
    const Lane& lane = start_lane(*map, log);
    const std::vector<FrenetState> states =
        estimate_states(log.points, lane.centerline, options.estimator);
    if (log.id == options.ego) {
      ls.ego.init = initial_state(lane, states.front());
      have_ego = true;
      continue;
    }
    const auto css = partition_states(states, options.partition);
    BuildOptions bo;
    bo.agent = log.id;
    bo.semantic = options.semantic;
    BehaviorTree tree = build_bt(css, options.partition, bo);

    AgentConversion conv;
    conv.id = log.id;
    conv.lane = lane.id;
    conv.samples = log.points.size();
    conv.segments = css.size() - 1;
    for (std::size_t i = 0; i + 1 < css.size(); ++i) {
      ++conv.kinds[std::string(to_string(classify_segment(css[i], css[i + 1], options.partition).kind))];
    }
    if (!options.semantic) conv.kinds = {{"FollowLog", conv.segments}};
    const double dt = log.points.size() > 1
                          ? (log.points.back().t - log.points.front().t) /
                                static_cast<double>(log.points.size() - 1)
                          : 0.1;
    const auto rec = reconstruct(tree, states.front(), lane.centerline, log.points.front().t,
                                 log.points.back().t, dt);
    conv.error = reconstruction_error(log.points, rec, lane.centerline);
    conv.compression = compression_ratio(log.points, tree, log.id);
    out.agents.push_back(std::move(conv));

    AgentSpec agent;
    agent.id = log.id;
    agent.init = initial_state(lane, states.front());
    agent.tree = std::move(tree);
    ls.agents.push_back(std::move(agent));
  }
  if (!have_ego) {
    throw Error(ErrorCode::kUnknownParticipant, "log has no '" + options.ego + "' track");
  }
  if (std::isfinite(t0) && t1 > t0) ls.horizon = t1 - t0;
  return out;
}

}  // namespace btfuzz
