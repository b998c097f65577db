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
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "btfuzz/gaussian_process.hpp"
#include "btfuzz/rng.hpp"

namespace btfuzz {

using Point = std::vector<double>;

enum class Algorithm { kBO, kGA };

std::string_view to_string(Algorithm a);
Algorithm algorithm_from_string(std::string_view text);

/// BO below `eps_n` variables, GA from there on.
Algorithm choose_algorithm(std::size_t n, std::size_t eps_n = 10);

inline std::size_t bo_seed_count(std::size_t n) { return n * 20; }
inline std::size_t ga_population_size(std::size_t n) { return n * 10; }

inline constexpr std::size_t kCandidatePool = 256;

/// Greedy max-min dispersion: each new point is the candidate (out of
/// `pool` uniform draws) farthest from all earlier points. Without earlier
/// points the first draw is taken as is.
std::vector<Point> adaptive_random_search(std::size_t n, std::size_t count, Rng& rng,
                                          std::span<const Point> existing = {},
                                          std::size_t pool = kCandidatePool);

struct BoOptions {
  double xi = 5.0;
  int starts = 64;
  int local_steps = 20;
  /// Training-set cap: the best half by fitness plus the most recent rest.
  std::size_t max_train = 200;
  GpOptions gp;
};

/// Stateful suggester; keeps fitted hyperparameters as a warm start.
class BayesOptimizer {
 public:
  explicit BayesOptimizer(BoOptions options = {}) : options_(options) {}

  /// Maximizer of expected improvement over the observations. Hyperparameters
  /// are refitted when `refit` is set (always on the first call).
  /// Throws Error(kDegenerateSurrogate) when every fitness is identical.
  Point suggest(std::span<const Point> points, std::span<const double> fitness, Rng& rng,
                bool refit = true);

  const std::optional<GpHyper>& hyper() const { return hyper_; }

 private:
  BoOptions options_;
  std::optional<GpHyper> hyper_;
};

/// One-shot convenience wrapper around BayesOptimizer.
Point bo_suggest(std::span<const Point> points, std::span<const double> fitness, double xi,
                 Rng& rng);

struct Individual {
  Point u;
  double fitness = 0.0;
};

struct GaStats {
  std::size_t children = 0;
  std::size_t coordinates = 0;
  std::size_t mutated = 0;
};

/// Roulette selection probabilities. Raw fitness when all are positive,
/// otherwise fitness - min + epsilon.
std::vector<double> roulette_weights(std::span<const Individual> population,
                                     double epsilon = 1e-6);

/// Next generation of equal size. Element 0 is the unchanged best
/// individual; the rest are children from roulette-selected parents with
/// uniform crossover (swap probability 0.5) and per-coordinate uniform
/// redraw with probability `mutation_rate`. Throws Error(kEmptyPopulation).
std::vector<Point> ga_step(std::span<const Individual> population, double mutation_rate, Rng& rng,
                           GaStats* stats = nullptr);

}  // namespace btfuzz
