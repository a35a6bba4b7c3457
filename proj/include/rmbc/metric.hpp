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

#ifndef RMBC_METRIC_HPP_
#define RMBC_METRIC_HPP_

#include "rmbc/types.hpp"

namespace rmbc
{

/// Eigenvalue floor used to decide positive definiteness and to repair
/// near-singular scatter matrices: 1e-10 * trace / p (never below 1e-300).
double eigenvalue_floor(const Matrix & sigma);

/// True when `sigma` is square, finite, symmetric to 1e-10 (relative to its
/// largest entry) and every eigenvalue exceeds `eigenvalue_floor`.
bool is_spd(const Matrix & sigma);

/// Mahalanobis metric of a fixed scatter matrix.
///
/// A well-conditioned matrix is factored by Cholesky and distances come from a
/// triangular solve. When an eigenvalue is at or below `eigenvalue_floor` the
/// metric switches to the eigendecomposition with those eigenvalues raised to
/// the floor, so the distance is always finite. `repaired()` reports which
/// path was taken.
class GaussianMetric
{
public:
  /// Throws kNotPositiveDefinite if `sigma` is not square, finite and
  /// symmetric.
  explicit GaussianMetric(const Matrix & sigma);

  Eigen::Index dim() const { return dim_; }
  bool repaired() const { return repaired_; }
  /// log|Σ| of the matrix actually used (floored when repaired).
  double log_det() const { return log_det_; }

  double squared_distance(const Vector & diff) const;
  /// Squared distances of every row of `x` to `mu`.
  Vector squared_distances(const RowMatrix & x, const Vector & mu) const;

  /// log N(x; mu, Σ) for every row of `x`.
  Vector log_densities(const RowMatrix & x, const Vector & mu) const;

private:
  /// Rows of `diff` mapped to whitened coordinates (p × n).
  Matrix whiten(const Matrix & diff_t) const;

  Eigen::Index dim_ = 0;
  bool repaired_ = false;
  double log_det_ = 0.0;
  Eigen::LLT<Matrix> llt_;
  // Repaired path: Σ⁻¹ᐟ² = diag(λ^-½) Vᵀ.
  Matrix inv_sqrt_;
};

}  // namespace rmbc

#endif  // RMBC_METRIC_HPP_
