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

#include <memory>
#include <optional>
#include <vector>

namespace btfuzz {

/// Squared-exponential kernel hyperparameters in log space.
struct GpHyper {
  std::vector<double> log_length;
  double log_signal = 0.0;  // log signal variance
  double log_noise = -6.0;  // log noise variance
};

struct GpPrediction {
  double mean = 0.0;
  double variance = 0.0;
  std::vector<double> d_mean;
  std::vector<double> d_variance;
};

struct GpOptions {
  double noise_floor = 1e-6;
  int optimizer_iterations = 40;
  double min_length = 0.01;
  double max_length = 10.0;
};

/// Gaussian-process regression on standardized targets with ARD length
/// scales fitted by maximum marginal likelihood (Rprop on the analytic
/// gradient).
class GaussianProcess {
 public:
  explicit GaussianProcess(GpOptions options = {});
  ~GaussianProcess();
  GaussianProcess(GaussianProcess&&) noexcept;
  GaussianProcess& operator=(GaussianProcess&&) noexcept;

  /// Throws Error(kDegenerateSurrogate) when the targets have no spread and
  /// Error(kInvalidArgument) on shape mismatches. Hyperparameters start
  /// from `warm` when given and are optimized when `optimize` is set.
  void fit(const std::vector<std::vector<double>>& x, const std::vector<double>& y,
           bool optimize = true, const std::optional<GpHyper>& warm = std::nullopt);

  /// Posterior in the units of the training targets; gradients w.r.t. x
  /// are filled when `gradients` is set.
  GpPrediction predict(const std::vector<double>& x, bool gradients = false) const;

  const GpHyper& hyper() const;
  double log_marginal_likelihood() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Expected improvement over `best` with trade-off `xi`, for maximization.
double expected_improvement(double mean, double variance, double best, double xi);

}  // namespace btfuzz
