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

#include "rmbc/scatter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "rmbc/error.hpp"
#include "rmbc/metric.hpp"

namespace rmbc
{

namespace
{

Vector normalized_weights(const Vector & weights, Eigen::Index n)
{
  if (weights.size() == 0) {
    return Vector::Constant(n, 1.0 / static_cast<double>(n));
  }
  if (weights.size() != n) {
    throw Error(ErrorCode::kLengthMismatch, "weight count differs from observation count");
  }
  if (!weights.allFinite() || weights.minCoeff() < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "weights must be finite and nonnegative");
  }
  const double total = weights.sum();
  if (!(total > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "weights must not all vanish");
  }
  return weights / total;
}

double weighted_rho_mean(const Vector & d, const Vector & w, const LossSpec & loss, double sigma)
{
  double sum = 0.0;
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (w(i) > 0.0) {
      sum += w(i) * loss.rho(d(i) / sigma);
    }
  }
  return sum;
}

Vector distances(const RowMatrix & x, const Vector & mu, const Matrix & sigma)
{
  return GaussianMetric(sigma).squared_distances(x, mu).cwiseSqrt();
}

double median_of(std::vector<double> values)
{
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>(values.size() / 2);
  std::nth_element(values.begin(), mid, values.end());
  double upper = *mid;
  if (values.size() % 2 == 1) {
    return upper;
  }
  const double lower = *std::max_element(values.begin(), mid);
  return 0.5 * (lower + upper);
}

// Indices of the h smallest entries of `score`, ties broken by index.
std::vector<Eigen::Index> smallest(const Vector & score, Eigen::Index h)
{
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(score.size()));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) { return score(a) < score(b); });
  idx.resize(static_cast<std::size_t>(h));
  return idx;
}

void subset_moments(const RowMatrix & x, const std::vector<Eigen::Index> & rows, Vector & mu, Matrix & sigma)
{
  const auto h = static_cast<double>(rows.size());
  mu = Vector::Zero(x.cols());
  for (Eigen::Index i : rows) {
    mu += x.row(i).transpose();
  }
  mu /= h;
  sigma = Matrix::Zero(x.cols(), x.cols());
  for (Eigen::Index i : rows) {
    const Vector diff = x.row(i).transpose() - mu;
    sigma.noalias() += diff * diff.transpose();
  }
  sigma /= std::max(h - 1.0, 1.0);
}

}  // namespace

double mahalanobis(const Vector & x, const Vector & mu, const Matrix & sigma)
{
  if (x.size() != mu.size() || x.size() != sigma.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "x, mu and sigma dimensions differ");
  }
  return std::sqrt(GaussianMetric(sigma).squared_distance(x - mu));
}

double mahalanobis_degenerate(const Vector & x, const Vector & mu, const Matrix & sigma)
{
  // GaussianMetric already floors small eigenvalues; the two entry points
  // differ only in the contract they document.
  return mahalanobis(x, mu, sigma);
}

ScaleSolution m_scale(const Vector & distances, const LossSpec & loss, const Vector & weights)
{
  const Eigen::Index n = distances.size();
  if (n == 0) {
    throw Error(ErrorCode::kEmptyData, "no distances");
  }
  if (!distances.allFinite() || distances.minCoeff() < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "distances must be finite and nonnegative");
  }
  const Vector w = normalized_weights(weights, n);
  const double b = loss.b();

  double zero_mass = 0.0;
  double min_positive = std::numeric_limits<double>::infinity();
  double max_d = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (w(i) <= 0.0) {
      continue;
    }
    if (distances(i) == 0.0) {
      zero_mass += w(i);
    } else {
      min_positive = std::min(min_positive, distances(i));
      max_d = std::max(max_d, distances(i));
    }
  }
  if (1.0 - zero_mass <= b) {
    throw Error(ErrorCode::kDegenerateScale, "at least 1-b of the weight sits at distance zero");
  }

  const auto excess = [&](double sigma) { return weighted_rho_mean(distances, w, loss, sigma) - b; };
  double hi = max_d;
  double lo = min_positive;
  for (int i = 0; excess(hi) > 0.0; ++i) {
    if (i == 2000) {
      throw Error(ErrorCode::kNoBracket, "scale bracket: upper end not found");
    }
    hi *= 2.0;
  }
  for (int i = 0; excess(lo) < 0.0; ++i) {
    if (i == 2000) {
      throw Error(ErrorCode::kNoBracket, "scale bracket: lower end not found");
    }
    lo *= 0.5;
  }
  // excess is nonincreasing in σ: excess(lo) >= 0 >= excess(hi).
  for (int iter = 0; iter < 2000 && hi - lo > 1e-15 * hi; ++iter) {
    const double mid = hi > 4.0 * lo ? std::sqrt(lo) * std::sqrt(hi) : 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) {
      break;
    }
    if (excess(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double e_lo = std::abs(excess(lo));
  const double e_hi = std::abs(excess(hi));
  return e_lo < e_hi ? ScaleSolution{lo, e_lo} : ScaleSolution{hi, e_hi};
}

SEstimate s_fixed_point_step(
  const RowMatrix & x, const Vector & w, const LossSpec & loss, const Vector & mu,
  const Matrix & sigma, double s_star, ScaleStep step)
{
  const Eigen::Index n = x.rows();
  const Vector d = distances(x, mu, sigma);
  Vector omega(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    omega(i) = w(i) > 0.0 ? w(i) * loss.weight(d(i)) : 0.0;
  }
  const double total = omega.sum();
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw Error(ErrorCode::kSingularScatter, "all robustness weights vanished");
  }

  SEstimate next;
  next.mu = (x.transpose() * omega) / total;
  const RowMatrix centered = x.rowwise() - next.mu.transpose();
  next.sigma_star = (centered.transpose() * omega.asDiagonal() * centered) / total;
  next.sigma_star = 0.5 * (next.sigma_star + next.sigma_star.transpose());

  const Vector d_star = distances(x, next.mu, next.sigma_star);
  const double ratio = weighted_rho_mean(d_star, w, loss, s_star) / loss.b();
  next.s_star = s_star * (step == ScaleStep::kLinear ? ratio : std::sqrt(ratio));
  next.sigma_mat = next.s_star * next.s_star * next.sigma_star;
  return next;
}

SEstimate s_estimate(
  const RowMatrix & x, const LossSpec & loss, const Vector & mu0, const Matrix & sigma0,
  const std::optional<Vector> & weights, const SEstimateOptions & options)
{
  const Eigen::Index n = x.rows();
  const Eigen::Index p = x.cols();
  if (mu0.size() != p || sigma0.rows() != p || sigma0.cols() != p) {
    throw Error(ErrorCode::kDimensionMismatch, "initial location/scatter do not match data");
  }
  const double effective = weights ? weights->sum() : static_cast<double>(n);
  if (!(effective > static_cast<double>(p + 1))) {
    throw Error(ErrorCode::kTooFewPoints, "effective sample size must exceed p + 1");
  }
  const Vector w = normalized_weights(weights ? *weights : Vector(), n);

  SEstimate state;
  state.mu = mu0;
  state.sigma_mat = sigma0;
  state.sigma_star = sigma0;
  state.s_star = 1.0;
  for (int iter = 1; iter <= options.max_iter; ++iter) {
    SEstimate next = s_fixed_point_step(x, w, loss, state.mu, state.sigma_mat, state.s_star, options.step);
    const Vector scale = next.sigma_mat.diagonal().cwiseMax(0.0).cwiseSqrt();
    double mu_change = 0.0;
    for (Eigen::Index j = 0; j < p; ++j) {
      const double diff = std::abs(next.mu(j) - state.mu(j));
      mu_change = std::max(mu_change, scale(j) > 0.0 ? diff / scale(j) : diff);
    }
    const double sigma_change = (next.sigma_mat - state.sigma_mat).norm() / state.sigma_mat.norm();
    next.iterations = iter;
    state = std::move(next);
    if (std::max(mu_change, sigma_change) < options.tol) {
      state.converged = true;
      break;
    }
  }
  return state;
}

double FixedPointResiduals::max() const
{
  return std::max({mu, sigma_star, s_star, sigma});
}

FixedPointResiduals s_fixed_point_residuals(
  const RowMatrix & x, const LossSpec & loss, const SEstimate & est,
  const std::optional<Vector> & weights)
{
  const Vector w = normalized_weights(weights ? *weights : Vector(), x.rows());
  const SEstimate next = s_fixed_point_step(x, w, loss, est.mu, est.sigma_mat, est.s_star);
  FixedPointResiduals r;
  const Vector scale = est.sigma_mat.diagonal().cwiseSqrt();
  r.mu = ((next.mu - est.mu).cwiseAbs().array() / scale.array()).maxCoeff();
  r.sigma_star = (next.sigma_star - est.sigma_star).norm() / est.sigma_star.norm();
  r.s_star = std::abs(next.s_star - est.s_star) / est.s_star;
  r.sigma = (next.sigma_mat - est.sigma_mat).norm() / est.sigma_mat.norm();
  return r;
}

RobustStart robust_start(const RowMatrix & x)
{
  const Eigen::Index n = x.rows();
  const Eigen::Index p = x.cols();
  if (n < 1) {
    throw Error(ErrorCode::kEmptyData, "no observations");
  }
  Vector center(p);
  Vector spread(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    std::vector<double> column(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
      column[static_cast<std::size_t>(i)] = x(i, j);
    }
    center(j) = median_of(column);
    for (double & v : column) {
      v = std::abs(v - center(j));
    }
    double mad = 1.4826 * median_of(column);
    if (!(mad > 0.0)) {
      const double mean = x.col(j).mean();
      mad = std::sqrt((x.col(j).array() - mean).square().sum() / static_cast<double>(n));
    }
    spread(j) = mad > 0.0 ? mad : 1.0;
  }

  const Eigen::Index h = std::min(n, (n + p + 1) / 2);
  const Vector standardized =
    ((x.rowwise() - center.transpose()).array().rowwise() / spread.transpose().array())
      .matrix()
      .rowwise()
      .squaredNorm();
  std::vector<Eigen::Index> subset = smallest(standardized, h);

  RobustStart start;
  subset_moments(x, subset, start.mu, start.sigma);
  for (int step = 0; step < 3; ++step) {
    const Vector d2 = GaussianMetric(start.sigma).squared_distances(x, start.mu);
    subset = smallest(d2, h);
    subset_moments(x, subset, start.mu, start.sigma);
  }
  if (!is_spd(start.sigma)) {
    start.sigma = spread.cwiseAbs2().asDiagonal();
  }
  return start;
}

}  // namespace rmbc
