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

#include "rmbc/metric.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rmbc/error.hpp"

namespace rmbc
{

namespace
{

constexpr double kMinFloor = 1e-300;

bool is_symmetric(const Matrix & sigma)
{
  if (sigma.rows() != sigma.cols() || sigma.size() == 0 || !sigma.allFinite()) {
    return false;
  }
  const double scale = std::max(1.0, sigma.cwiseAbs().maxCoeff());
  return (sigma - sigma.transpose()).cwiseAbs().maxCoeff() <= 1e-10 * scale;
}

}  // namespace

double eigenvalue_floor(const Matrix & sigma)
{
  const double p = static_cast<double>(sigma.rows());
  return std::max(1e-10 * sigma.trace() / p, kMinFloor);
}

bool is_spd(const Matrix & sigma)
{
  if (!is_symmetric(sigma)) {
    return false;
  }
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(sigma, Eigen::EigenvaluesOnly);
  return eig.info() == Eigen::Success && eig.eigenvalues().minCoeff() > eigenvalue_floor(sigma);
}

GaussianMetric::GaussianMetric(const Matrix & sigma) : dim_(sigma.rows())
{
  if (!is_symmetric(sigma)) {
    throw Error(ErrorCode::kNotPositiveDefinite, "scatter matrix is not square, finite and symmetric");
  }
  const Matrix sym = 0.5 * (sigma + sigma.transpose());
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
  if (eig.info() != Eigen::Success) {
    throw Error(ErrorCode::kNotPositiveDefinite, "eigendecomposition failed");
  }
  const double floor = eigenvalue_floor(sym);
  if (eig.eigenvalues().minCoeff() > floor) {
    llt_.compute(sym);
    if (llt_.info() == Eigen::Success) {
      log_det_ = 2.0 * llt_.matrixLLT().diagonal().array().log().sum();
      return;
    }
  }
  repaired_ = true;
  const Vector lambda = eig.eigenvalues().cwiseMax(floor);
  log_det_ = lambda.array().log().sum();
  inv_sqrt_ = lambda.cwiseSqrt().cwiseInverse().asDiagonal() * eig.eigenvectors().transpose();
}

Matrix GaussianMetric::whiten(const Matrix & diff_t) const
{
  if (repaired_) {
    return inv_sqrt_ * diff_t;
  }
  return llt_.matrixL().solve(diff_t);
}

double GaussianMetric::squared_distance(const Vector & diff) const
{
  if (diff.size() != dim_) {
    throw Error(ErrorCode::kDimensionMismatch, "vector length does not match scatter dimension");
  }
  return whiten(diff).squaredNorm();
}

Vector GaussianMetric::squared_distances(const RowMatrix & x, const Vector & mu) const
{
  if (x.cols() != dim_ || mu.size() != dim_) {
    throw Error(ErrorCode::kDimensionMismatch, "data columns do not match scatter dimension");
  }
  const Matrix diff_t = (x.rowwise() - mu.transpose()).transpose();
  return whiten(diff_t).colwise().squaredNorm().transpose();
}

Vector GaussianMetric::log_densities(const RowMatrix & x, const Vector & mu) const
{
  const double constant =
    -0.5 * (static_cast<double>(dim_) * std::log(2.0 * std::numbers::pi) + log_det_);
  return (constant - 0.5 * squared_distances(x, mu).array()).matrix();
}

}  // namespace rmbc
