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

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "btfuzz/campaign.hpp"
#include "btfuzz/fuzzing.hpp"
#include "btfuzz/gaussian_process.hpp"
#include "btfuzz/log2bt.hpp"
#include "support/synthetic.hpp"

namespace {

using namespace btfuzz;

void BM_Partition(benchmark::State& state) {
  const auto path = testing::arc_path();
  std::mt19937_64 rng(1);
  const auto log = testing::random_canonical(rng, path, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(partition(log.points, path));
  state.SetLabel(std::to_string(log.points.size()) + " samples");
}
BENCHMARK(BM_Partition)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_NoisyPartition(benchmark::State& state) {
  const auto path = testing::arc_path();
  std::mt19937_64 rng(2);
  const auto log = testing::random_cut_in(rng, path);
  const auto noisy = testing::add_noise(log.points, 0.1, rng);
  for (auto _ : state) benchmark::DoNotOptimize(partition(noisy, path));
}
BENCHMARK(BM_NoisyPartition)->Unit(benchmark::kMillisecond);

void BM_SimulateExample1(benchmark::State& state) {
  const auto ls = load_scenario(std::string(BTFUZZ_FIXTURE_DIR) + "/example1/scenario.json");
  const std::vector<double> u{0.3, 0.5, 0.5, 0.5};
  const auto bound = bind(sample(ls, u));
  for (auto _ : state) benchmark::DoNotOptimize(run(bound));
}
BENCHMARK(BM_SimulateExample1)->Unit(benchmark::kMillisecond);

void BM_GpFit(benchmark::State& state) {
  Rng rng(3);
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<std::vector<double>> x;
  std::vector<double> y;
  for (std::size_t i = 0; i < n; ++i) {
    x.push_back({rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform()});
    y.push_back(std::sin(5.0 * x.back()[0]) + x.back()[1] * x.back()[2]);
  }
  for (auto _ : state) {
    GaussianProcess gp;
    gp.fit(x, y);
    benchmark::DoNotOptimize(gp.log_marginal_likelihood());
  }
}
BENCHMARK(BM_GpFit)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_BoSuggest(benchmark::State& state) {
  Rng rng(4);
  const auto pts = adaptive_random_search(4, 100, rng);
  std::vector<double> f;
  for (const auto& p : pts) f.push_back(-std::pow(p[0] - 0.7, 2) - std::pow(p[1] - 0.7, 2));
  BayesOptimizer bo;
  bo.suggest(pts, f, rng);
  for (auto _ : state) benchmark::DoNotOptimize(bo.suggest(pts, f, rng, false));
}
BENCHMARK(BM_BoSuggest)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
