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

#include "btfuzz/gaussian_process.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "btfuzz/error.hpp"

namespace btfuzz {

struct GaussianProcess::Impl {
  GpOptions opt;
  Eigen::MatrixXd X;
  Eigen::VectorXd y;  // standardized
  double y_mean = 0.0;
  double y_scale = 1.0;
  GpHyper hyper;
  Eigen::LLT<Eigen::MatrixXd> llt;
  Eigen::VectorXd alpha;
  double lml = 0.0;

  Eigen::MatrixXd signal_kernel(const GpHyper& h) const {
    const auto m = X.rows();
    const auto n = X.cols();
    Eigen::VectorXd inv_l2(n);
    for (Eigen::Index d = 0; d < n; ++d) inv_l2(d) = std::exp(-2.0 * h.log_length[d]);
    const double sf2 = std::exp(h.log_signal);
    Eigen::MatrixXd K(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
      K(i, i) = sf2;
      for (Eigen::Index j = 0; j < i; ++j) {
        double r2 = 0.0;
        for (Eigen::Index d = 0; d < n; ++d) {
          const double diff = X(i, d) - X(j, d);
          r2 += diff * diff * inv_l2(d);
        }
        K(i, j) = K(j, i) = sf2 * std::exp(-0.5 * r2);
      }
    }
    return K;
  }

  double noise_var(const GpHyper& h) const { return std::max(std::exp(h.log_noise), opt.noise_floor); }

  /// Log marginal likelihood and its gradient w.r.t. (log_length..., log_signal, log_noise).
  double evaluate(const GpHyper& h, Eigen::VectorXd* grad) const {
    const auto m = X.rows();
    const auto n = X.cols();
    const Eigen::MatrixXd Kf = signal_kernel(h);
    Eigen::MatrixXd K = Kf;
    K.diagonal().array() += noise_var(h);
    Eigen::LLT<Eigen::MatrixXd> chol(K);
    if (chol.info() != Eigen::Success) return -std::numeric_limits<double>::infinity();
    const Eigen::VectorXd a = chol.solve(y);
    const Eigen::MatrixXd L = chol.matrixL();
    const double logdet = 2.0 * L.diagonal().array().log().sum();
    const double value = -0.5 * y.dot(a) - 0.5 * logdet -
                         0.5 * static_cast<double>(m) * std::log(2.0 * std::numbers::pi);
    if (grad) {
      const Eigen::MatrixXd W = a * a.transpose() - chol.solve(Eigen::MatrixXd::Identity(m, m));
      grad->resize(n + 2);
      for (Eigen::Index d = 0; d < n; ++d) {
        const double inv_l2 = std::exp(-2.0 * h.log_length[d]);
        double g = 0.0;
        for (Eigen::Index i = 0; i < m; ++i) {
          for (Eigen::Index j = 0; j < i; ++j) {
            const double diff = X(i, d) - X(j, d);
            g += W(i, j) * Kf(i, j) * diff * diff * inv_l2;
          }
        }
        (*grad)(d) = g;  // symmetric off-diagonal pairs: 2 * 0.5
      }
      (*grad)(n) = 0.5 * (W.array() * Kf.array()).sum();
      (*grad)(n + 1) = 0.5 * W.trace() * noise_var(h);
    }
    return value;
  }

  void clamp(GpHyper& h) const {
    for (double& l : h.log_length) l = std::clamp(l, std::log(opt.min_length), std::log(opt.max_length));
    h.log_signal = std::clamp(h.log_signal, std::log(0.05), std::log(20.0));
    h.log_noise = std::clamp(h.log_noise, std::log(opt.noise_floor), 0.0);
  }

  void optimize() {
    const auto n = static_cast<std::size_t>(X.cols());
    const auto pack = [&](const GpHyper& h) {
      Eigen::VectorXd p(n + 2);
      for (std::size_t d = 0; d < n; ++d) p(d) = h.log_length[d];
      p(n) = h.log_signal;
      p(n + 1) = h.log_noise;
      return p;
    };
    const auto unpack = [&](const Eigen::VectorXd& p) {
      GpHyper h;
      h.log_length.resize(n);
      for (std::size_t d = 0; d < n; ++d) h.log_length[d] = p(d);
      h.log_signal = p(n);
      h.log_noise = p(n + 1);
      clamp(h);
      return h;
    };
    GpHyper cur = hyper;
    clamp(cur);
    Eigen::VectorXd grad;
    double value = evaluate(cur, &grad);
    GpHyper best = cur;
    double best_value = value;
    Eigen::VectorXd step = Eigen::VectorXd::Constant(n + 2, 0.2);
    Eigen::VectorXd prev = Eigen::VectorXd::Zero(n + 2);
    for (int it = 0; it < opt.optimizer_iterations && std::isfinite(value); ++it) {
      Eigen::VectorXd p = pack(cur);
      for (Eigen::Index k = 0; k < p.size(); ++k) {
        const double s = grad(k) * prev(k);
        if (s > 0.0) {
          step(k) = std::min(step(k) * 1.2, 1.0);
        } else if (s < 0.0) {
          step(k) = std::max(step(k) * 0.5, 1e-4);
          grad(k) = 0.0;
        }
        if (grad(k) > 0.0) p(k) += step(k);
        if (grad(k) < 0.0) p(k) -= step(k);
      }
      prev = grad;
      cur = unpack(p);
      value = evaluate(cur, &grad);
      if (value > best_value) {
        best_value = value;
        best = cur;
      }
    }
    hyper = best;
  }

  void factor() {
    Eigen::MatrixXd K = signal_kernel(hyper);
    K.diagonal().array() += noise_var(hyper);
    llt.compute(K);
    double jitter = noise_var(hyper);
    while (llt.info() != Eigen::Success && jitter < 1.0) {
      jitter *= 10.0;
      K.diagonal().array() += jitter;
      llt.compute(K);
    }
    if (llt.info() != Eigen::Success) {
      throw Error(ErrorCode::kDegenerateSurrogate, "kernel matrix is not positive definite");
    }
    alpha = llt.solve(y);
    lml = evaluate(hyper, nullptr);
  }
};

GaussianProcess::GaussianProcess(GpOptions options) : impl_(std::make_unique<Impl>()) {
  impl_->opt = options;
}
GaussianProcess::~GaussianProcess() = default;
GaussianProcess::GaussianProcess(GaussianProcess&&) noexcept = default;
GaussianProcess& GaussianProcess::operator=(GaussianProcess&&) noexcept = default;

void GaussianProcess::fit(const std::vector<std::vector<double>>& x, const std::vector<double>& y,
                          bool optimize, const std::optional<GpHyper>& warm) {
  if (x.empty() || x.size() != y.size()) {
    throw Error(ErrorCode::kInvalidArgument, "training inputs and targets must match");
  }
  const std::size_t n = x.front().size();
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "zero-dimensional inputs");
  auto& im = *impl_;
  const auto m = static_cast<Eigen::Index>(x.size());
  im.X.resize(m, static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < m; ++i) {
    if (x[i].size() != n) throw Error(ErrorCode::kInvalidArgument, "ragged training inputs");
    for (std::size_t d = 0; d < n; ++d) im.X(i, static_cast<Eigen::Index>(d)) = x[i][d];
  }
  const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
  if (*hi - *lo < 1e-12 * (1.0 + std::abs(*hi))) {
    throw Error(ErrorCode::kDegenerateSurrogate, "all observed values are identical");
  }
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  double var = 0.0;
  for (double v : y) var += (v - mean) * (v - mean);
  var /= static_cast<double>(y.size());
  im.y_mean = mean;
  im.y_scale = std::sqrt(var);
  im.y.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) im.y(i) = (y[static_cast<std::size_t>(i)] - mean) / im.y_scale;

  if (warm && warm->log_length.size() == n) {
    im.hyper = *warm;
  } else {
    im.hyper.log_length.assign(n, std::log(0.3));
    im.hyper.log_signal = 0.0;
    im.hyper.log_noise = std::log(1e-3);
  }
  im.clamp(im.hyper);
  if (optimize) im.optimize();
  im.factor();
}

GpPrediction GaussianProcess::predict(const std::vector<double>& x, bool gradients) const {
  const auto& im = *impl_;
  const auto m = im.X.rows();
  const auto n = im.X.cols();
  if (static_cast<Eigen::Index>(x.size()) != n) {
    throw Error(ErrorCode::kInvalidArgument, "query dimension mismatch");
  }
  const double sf2 = std::exp(im.hyper.log_signal);
  Eigen::VectorXd inv_l2(n);
  for (Eigen::Index d = 0; d < n; ++d) inv_l2(d) = std::exp(-2.0 * im.hyper.log_length[d]);
  Eigen::VectorXd k(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    double r2 = 0.0;
    for (Eigen::Index d = 0; d < n; ++d) {
      const double diff = x[d] - im.X(i, d);
      r2 += diff * diff * inv_l2(d);
    }
    k(i) = sf2 * std::exp(-0.5 * r2);
  }
  const Eigen::VectorXd kinv = im.llt.solve(k);
  GpPrediction p;
  const double mean_std = k.dot(im.alpha);
  const double var_std = std::max(0.0, sf2 - k.dot(kinv));
  p.mean = im.y_mean + im.y_scale * mean_std;
  p.variance = var_std * im.y_scale * im.y_scale;
  if (gradients) {
    p.d_mean.assign(n, 0.0);
    p.d_variance.assign(n, 0.0);
    for (Eigen::Index d = 0; d < n; ++d) {
      double dm = 0.0;
      double dv = 0.0;
      for (Eigen::Index i = 0; i < m; ++i) {
        const double dk = -k(i) * (x[d] - im.X(i, d)) * inv_l2(d);
        dm += im.alpha(i) * dk;
        dv += kinv(i) * dk;
      }
      p.d_mean[d] = im.y_scale * dm;
      p.d_variance[d] = -2.0 * dv * im.y_scale * im.y_scale;
    }
  }
  return p;
}

const GpHyper& GaussianProcess::hyper() const { return impl_->hyper; }

double GaussianProcess::log_marginal_likelihood() const { return impl_->lml; }

double expected_improvement(double mean, double variance, double best, double xi) {
  const double imp = mean - best - xi;
  const double sigma = std::sqrt(std::max(variance, 0.0));
  if (sigma < 1e-12) return std::max(imp, 0.0);
  const double z = imp / sigma;
  const double cdf = 0.5 * std::erfc(-z / std::numbers::sqrt2);
  const double pdf = std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
  return std::max(0.0, imp * cdf + sigma * pdf);
}

}  // namespace btfuzz
