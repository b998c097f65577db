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

#include "btfuzz/fuzzing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "btfuzz/error.hpp"

namespace btfuzz {

std::string_view to_string(Algorithm a) { return a == Algorithm::kBO ? "bo" : "ga"; }

Algorithm algorithm_from_string(std::string_view text) {
  if (text == "bo" || text == "BO") return Algorithm::kBO;
  if (text == "ga" || text == "GA") return Algorithm::kGA;
  throw Error(ErrorCode::kParseError, "unknown algorithm '" + std::string(text) + "'");
}

Algorithm choose_algorithm(std::size_t n, std::size_t eps_n) {
  return n < eps_n ? Algorithm::kBO : Algorithm::kGA;
}

namespace {

double squared_distance(const Point& a, const Point& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

Point uniform_point(std::size_t n, Rng& rng) {
  Point p(n);
  for (double& v : p) v = rng.uniform();
  return p;
}

}  // namespace

std::vector<Point> adaptive_random_search(std::size_t n, std::size_t count, Rng& rng,
                                          std::span<const Point> existing, std::size_t pool) {
  std::vector<Point> chosen(existing.begin(), existing.end());
  std::vector<Point> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    if (chosen.empty()) {
      Point p = uniform_point(n, rng);
      chosen.push_back(p);
      out.push_back(std::move(p));
      continue;
    }
    Point best;
    double best_d = -1.0;
    for (std::size_t c = 0; c < std::max<std::size_t>(pool, 1); ++c) {
      Point cand = uniform_point(n, rng);
      double nearest = std::numeric_limits<double>::infinity();
      for (const auto& q : chosen) nearest = std::min(nearest, squared_distance(cand, q));
      if (nearest > best_d) {
        best_d = nearest;
        best = std::move(cand);
      }
    }
    chosen.push_back(best);
    out.push_back(std::move(best));
  }
  return out;
}

Point BayesOptimizer::suggest(std::span<const Point> points, std::span<const double> fitness,
                              Rng& rng, bool refit) {
  if (points.empty() || points.size() != fitness.size()) {
    throw Error(ErrorCode::kInvalidArgument, "observations and fitness must match");
  }
  const std::size_t n = points.front().size();

  std::vector<std::size_t> keep(points.size());
  std::iota(keep.begin(), keep.end(), 0);
  if (points.size() > options_.max_train) {
    std::vector<std::size_t> by_fitness = keep;
    std::stable_sort(by_fitness.begin(), by_fitness.end(),
                     [&](std::size_t a, std::size_t b) { return fitness[a] > fitness[b]; });
    std::vector<char> take(points.size(), 0);
    const std::size_t best_half = options_.max_train / 2;
    for (std::size_t i = 0; i < best_half; ++i) take[by_fitness[i]] = 1;
    std::size_t count = best_half;
    for (std::size_t i = points.size(); i-- > 0 && count < options_.max_train;) {
      if (!take[i]) {
        take[i] = 1;
        ++count;
      }
    }
    keep.clear();
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (take[i]) keep.push_back(i);
    }
  }
  std::vector<std::vector<double>> x;
  std::vector<double> y;
  for (const std::size_t i : keep) {
    x.push_back(points[i]);
    y.push_back(fitness[i]);
  }
  const double best = *std::max_element(fitness.begin(), fitness.end());

  GaussianProcess gp(options_.gp);
  gp.fit(x, y, refit || !hyper_, hyper_);
  hyper_ = gp.hyper();

  const auto ei_at = [&](const Point& u) {
    const auto p = gp.predict(u, false);
    return expected_improvement(p.mean, p.variance, best, options_.xi);
  };
  const auto ei_grad = [&](const Point& u, double& value) {
    const auto p = gp.predict(u, true);
    value = expected_improvement(p.mean, p.variance, best, options_.xi);
    Point g(n, 0.0);
    const double sigma = std::sqrt(std::max(p.variance, 0.0));
    if (sigma < 1e-12) return g;
    const double z = (p.mean - best - options_.xi) / sigma;
    const double cdf = 0.5 * std::erfc(-z / std::numbers::sqrt2);
    const double pdf = std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
    for (std::size_t d = 0; d < n; ++d) {
      g[d] = cdf * p.d_mean[d] + pdf * p.d_variance[d] / (2.0 * sigma);
    }
    return g;
  };

  Point best_u;
  double best_ei = -1.0;
  for (int s = 0; s < options_.starts; ++s) {
    Point u = uniform_point(n, rng);
    double value = 0.0;
    Point g = ei_grad(u, value);
    double step = 0.05;
    for (int it = 0; it < options_.local_steps && step > 1e-4; ++it) {
      double gnorm = 0.0;
      for (double v : g) gnorm += v * v;
      gnorm = std::sqrt(gnorm);
      if (gnorm == 0.0 || !std::isfinite(gnorm)) break;
      Point cand(n);
      for (std::size_t d = 0; d < n; ++d) cand[d] = std::clamp(u[d] + step * g[d] / gnorm, 0.0, 1.0);
      const double cv = ei_at(cand);
      if (cv > value) {
        u = std::move(cand);
        g = ei_grad(u, value);
        step *= 1.5;
      } else {
        step *= 0.5;
      }
    }
    if (value > best_ei) {
      best_ei = value;
      best_u = u;
    }
  }
  return best_u;
}

Point bo_suggest(std::span<const Point> points, std::span<const double> fitness, double xi,
                 Rng& rng) {
  BoOptions opt;
  opt.xi = xi;
  BayesOptimizer bo(opt);
  return bo.suggest(points, fitness, rng, true);
}

std::vector<double> roulette_weights(std::span<const Individual> population, double epsilon) {
  if (population.empty()) throw Error(ErrorCode::kEmptyPopulation, "no individuals");
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& ind : population) lo = std::min(lo, ind.fitness);
  std::vector<double> w;
  w.reserve(population.size());
  for (const auto& ind : population) w.push_back(lo > 0.0 ? ind.fitness : ind.fitness - lo + epsilon);
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& v : w) v /= total;
  return w;
}

std::vector<Point> ga_step(std::span<const Individual> population, double mutation_rate, Rng& rng,
                           GaStats* stats) {
  if (population.empty()) throw Error(ErrorCode::kEmptyPopulation, "no individuals");
  const std::vector<double> w = roulette_weights(population);
  std::vector<double> cdf(w.size());
  std::partial_sum(w.begin(), w.end(), cdf.begin());
  const auto select = [&]() -> const Point& {
    const double r = rng.uniform() * cdf.back();
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), r);
    const auto k = std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
    return population[k].u;
  };
  std::size_t elite = 0;
  for (std::size_t i = 1; i < population.size(); ++i) {
    if (population[i].fitness > population[elite].fitness) elite = i;
  }
  std::vector<Point> next{population[elite].u};
  const auto mutate = [&](Point& child) {
    for (double& v : child) {
      if (rng.uniform() < mutation_rate) {
        v = rng.uniform();
        if (stats) ++stats->mutated;
      }
    }
    if (stats) {
      ++stats->children;
      stats->coordinates += child.size();
    }
  };
  while (next.size() < population.size()) {
    Point a = select();
    Point b = select();
    for (std::size_t d = 0; d < a.size(); ++d) {
      if (rng.uniform() < 0.5) std::swap(a[d], b[d]);
    }
    mutate(a);
    next.push_back(std::move(a));
    if (next.size() < population.size()) {
      mutate(b);
      next.push_back(std::move(b));
    }
  }
  return next;
}

}  // namespace btfuzz
