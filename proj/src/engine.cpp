// Copyright 2026 The RMBC Authors
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

#include "rmbc/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "rmbc/clustering.hpp"
#include "rmbc/error.hpp"
#include "rmbc/metric.hpp"
#include "rmbc/scatter.hpp"

namespace rmbc
{

namespace
{

void check_state(const IterationState & state, Eigen::Index p)
{
  const auto k = static_cast<std::size_t>(state.k());
  if (k == 0 || static_cast<std::size_t>(state.alpha.size()) != k || state.sigma.size() != k ||
      state.sigma_star.size() != k || state.s_star.size() != k) {
    throw Error(ErrorCode::kInvalidArgument, "iteration state has inconsistent component counts");
  }
  for (std::size_t j = 0; j < k; ++j) {
    if (state.mu[j].size() != p || state.sigma[j].rows() != p) {
      throw Error(ErrorCode::kDimensionMismatch, "iteration state does not match data dimension");
    }
  }
}

}  // namespace

MixtureModel IterationState::to_model() const
{
  return MixtureModel(alpha, mu, sigma);
}

RowMatrix responsibilities(const IterationState & state, const RowMatrix & x)
{
  check_state(state, x.cols());
  const Eigen::Index n = x.rows();
  const int k = state.k();
  RowMatrix log_num(n, k);
  for (int j = 0; j < k; ++j) {
    const auto idx = static_cast<std::size_t>(j);
    const double a = state.alpha(j);
    if (a > 0.0) {
      log_num.col(j) = GaussianMetric(state.sigma[idx]).log_densities(x, state.mu[idx]).array() + std::log(a);
    } else {
      log_num.col(j).setConstant(-std::numeric_limits<double>::infinity());
    }
  }
  RowMatrix r(n, k);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double top = log_num.row(i).maxCoeff();
    if (!std::isfinite(top)) {
      // Guarded: cannot happen while some α_k > 0 and Σ_k is floored.
      throw Error(ErrorCode::kInvalidArgument, "all component densities vanish at row " + std::to_string(i));
    }
    // Scalar exp: Eigen's packet exp maps -inf to a subnormal, not zero.
    r.row(i) = (log_num.row(i).array() - top).unaryExpr([](double v) { return std::exp(v); });
    r.row(i) /= r.row(i).sum();
  }
  return r;
}

IterationState iterate_once(
  const IterationState & state, const RowMatrix & x, const LossSpec & loss, double min_cluster_weight,
  ScaleStep scale_step)
{
  const RowMatrix r = responsibilities(state, x);
  const Eigen::Index n = x.rows();
  const int k = state.k();

  IterationState next;
  next.iter = state.iter + 1;
  next.alpha = r.colwise().mean().transpose();
  next.alpha /= next.alpha.sum();
  for (int j = 0; j < k; ++j) {
    if (!(next.alpha(j) >= min_cluster_weight) || !(next.alpha(j) > 0.0)) {
      throw CollapsedClusterError(j + 1, "mixture weight fell to " + std::to_string(next.alpha(j)));
    }
  }

  next.mu.resize(static_cast<std::size_t>(k));
  next.sigma.resize(static_cast<std::size_t>(k));
  next.sigma_star.resize(static_cast<std::size_t>(k));
  next.s_star.resize(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) {
    const auto idx = static_cast<std::size_t>(j);
    const Vector w = r.col(j) / (static_cast<double>(n) * next.alpha(j));
    SEstimate step;
    try {
      step = s_fixed_point_step(x, w, loss, state.mu[idx], state.sigma[idx], state.s_star[idx], scale_step);
    } catch (const Error & e) {
      if (e.code() == ErrorCode::kSingularScatter) {
        throw CollapsedClusterError(j + 1, "robustness weights of the component all vanished");
      }
      throw;
    }
    if (!step.mu.allFinite() || !step.sigma_mat.allFinite() || !(step.s_star > 0.0)) {
      throw CollapsedClusterError(j + 1, "component update is not finite");
    }
    next.mu[idx] = std::move(step.mu);
    next.sigma[idx] = std::move(step.sigma_mat);
    next.sigma_star[idx] = std::move(step.sigma_star);
    next.s_star[idx] = step.s_star;
  }
  return next;
}

double kl_gaussian(const Vector & mu0, const Matrix & sigma0, const Vector & mu1, const Matrix & sigma1)
{
  const Eigen::Index p = mu0.size();
  if (mu1.size() != p || sigma0.rows() != p || sigma0.cols() != p || sigma1.rows() != p || sigma1.cols() != p) {
    throw Error(ErrorCode::kDimensionMismatch, "Gaussian components differ in dimension");
  }
  const Eigen::LLT<Matrix> l0(sigma0);
  const Eigen::LLT<Matrix> l1(sigma1);
  if (l0.info() != Eigen::Success || l1.info() != Eigen::Success || !sigma0.allFinite() || !sigma1.allFinite()) {
    throw Error(ErrorCode::kNotPositiveDefinite, "KL requires positive definite scatters");
  }
  const Matrix l1_inv_l0 = l1.matrixL().solve(Matrix(l0.matrixL()));
  const double trace = l1_inv_l0.squaredNorm();
  const Vector z = l1.matrixL().solve(mu1 - mu0);
  const double log_det0 = 2.0 * Matrix(l0.matrixL()).diagonal().array().log().sum();
  const double log_det1 = 2.0 * Matrix(l1.matrixL()).diagonal().array().log().sum();
  const double kl = 0.5 * (trace + z.squaredNorm() - static_cast<double>(p) + log_det1 - log_det0);
  return std::max(kl, 0.0);
}

IterationRun run_iterations(
  IterationState state, const RowMatrix & x, const LossSpec & loss, const FitConfig & config,
  const IterationObserver & observer)
{
  IterationRun run;
  for (int m = 0; m < config.max_iter; ++m) {
    IterationState next = iterate_once(state, x, loss, config.min_cluster_weight, config.scale_step);
    StopMetrics metrics;
    metrics.alpha_change = (next.alpha - state.alpha).norm();
    for (int j = 0; j < state.k(); ++j) {
      const auto idx = static_cast<std::size_t>(j);
      metrics.kl_sum += kl_gaussian(next.mu[idx], next.sigma[idx], state.mu[idx], state.sigma[idx]);
    }
    state = std::move(next);
    run.iterations = m + 1;
    run.stop_metrics = metrics;
    if (observer) {
      observer(state, metrics);
    }
    if (metrics.alpha_change < config.delta_tol && metrics.kl_sum < config.delta_tol) {
      run.converged = true;
      break;
    }
  }
  run.state = std::move(state);
  return run;
}

double mixture_fixed_point_residual(const IterationState & state, const RowMatrix & x, const LossSpec & loss)
{
  const IterationState next = iterate_once(state, x, loss, 0.0);
  double kl = 0.0;
  for (int j = 0; j < state.k(); ++j) {
    const auto idx = static_cast<std::size_t>(j);
    kl += kl_gaussian(next.mu[idx], next.sigma[idx], state.mu[idx], state.sigma[idx]);
  }
  return std::max((next.alpha - state.alpha).norm(), kl);
}

FitResult fit(const Dataset & data, const FitConfig & config, const FitOptions & options)
{
  config.validate();
  const RowMatrix & x = data.observations();
  const LossSpec loss = LossSpec::optimal(static_cast<int>(data.p()), config.b);
  const InitModel init = initialize(data, config, options.initializer);
  IterationRun run = run_iterations(init, x, loss, config, options.observer);

  MixtureModel model = run.state.to_model();
  const OutlierRule rule(static_cast<int>(data.p()), options.outlier_beta);
  RowMatrix post = posterior(model, x);
  std::vector<int> labels = assign(model, x);
  std::vector<bool> flags = flag_outliers(model, x, rule);
  return FitResult{
    std::move(model), std::move(post),     std::move(labels), std::move(flags),
    run.iterations,   run.converged,       run.stop_metrics};
}

}  // namespace rmbc
