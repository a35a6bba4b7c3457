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

#ifndef RMBC_SCATTER_HPP_
#define RMBC_SCATTER_HPP_

#include <optional>

#include "rmbc/robust_loss.hpp"
#include "rmbc/types.hpp"

namespace rmbc
{

/// d(x, μ, Σ) = √((x−μ)ᵀ Σ⁻¹ (x−μ)) by a triangular solve. Falls back to the
/// floored eigen-metric when Σ is near singular; throws kNotPositiveDefinite
/// only for non-symmetric or non-finite Σ.
double mahalanobis(const Vector & x, const Vector & mu, const Matrix & sigma);

/// Same distance with eigenvalues below 1e-10·trace/p raised to that floor.
/// Total on symmetric input; equals `mahalanobis` for well-conditioned Σ.
double mahalanobis_degenerate(const Vector & x, const Vector & mu, const Matrix & sigma);

struct ScaleSolution
{
  double sigma = 0.0;
  double residual = 0.0;  ///< |Σ w_i ρ_c(d_i/σ) − b|
};

/// M-scale: the σ > 0 with Σ w_i ρ_c(d_i / σ) = b (uniform weights when
/// `weights` is empty). Solved by bisection on a bracket where the left end
/// exceeds b and the right end falls below it.
///
/// Throws kDegenerateScale when at least 1 − b of the weight sits at d = 0,
/// kNoBracket if no bracket is found and kInvalidArgument on negative or
/// non-finite inputs.
ScaleSolution m_scale(const Vector & distances, const LossSpec & loss, const Vector & weights = Vector());

/// (μ, Σ, Σ*, s*) of the S-functional, with Σ = s*² Σ*.
struct SEstimate
{
  Vector mu;
  Matrix sigma_mat;
  Matrix sigma_star;
  double s_star = 1.0;
  int iterations = 0;
  bool converged = false;
};

struct SEstimateOptions
{
  double tol = 1e-8;
  int max_iter = 200;
  ScaleStep step = ScaleStep::kSquareRoot;
};

/// One sweep of the weighted S fixed point with normalized weights `w`:
///   μ'  = Σ ω_i x_i / Σ ω_i,  ω_i = w_i W_c(d(x_i, μ, Σ))
///   Σ*' = Σ ω_i (x_i−μ')(x_i−μ')ᵀ / Σ ω_i
///   s*' = s* · Σ w_i ρ_c(d(x_i, μ', Σ*') / s*) / b   (or its square root, see ScaleStep)
///   Σ'  = s*'² Σ*'
/// Throws kSingularScatter when every ω_i vanishes.
SEstimate s_fixed_point_step(
  const RowMatrix & x, const Vector & w, const LossSpec & loss, const Vector & mu,
  const Matrix & sigma, double s_star, ScaleStep step = ScaleStep::kSquareRoot);

/// Multivariate S-estimate of location and scatter by iterating
/// `s_fixed_point_step` from (mu0, sigma0, s* = 1) until the change in μ
/// (per coordinate, scaled by √diag Σ) and the relative Frobenius change in Σ
/// both fall below `options.tol`.
///
/// `weights` are nonnegative case weights such as responsibilities; their sum
/// must exceed p + 1 (without weights, n must), otherwise kTooFewPoints. When the
/// iteration budget runs out the last iterate is returned with
/// `converged = false`.
SEstimate s_estimate(
  const RowMatrix & x, const LossSpec & loss, const Vector & mu0, const Matrix & sigma0,
  const std::optional<Vector> & weights = std::nullopt, const SEstimateOptions & options = {});

/// Absolute residuals of the four fixed-point equations at `est`.
struct FixedPointResiduals
{
  double mu = 0.0;          ///< max_j |μ'_j − μ_j| / √Σ_jj
  double sigma_star = 0.0;  ///< ‖Σ*' − Σ*‖_F / ‖Σ*‖_F
  double s_star = 0.0;      ///< |s*' − s*| / s*
  double sigma = 0.0;       ///< ‖Σ' − Σ‖_F / ‖Σ‖_F
  double max() const;
};

FixedPointResiduals s_fixed_point_residuals(
  const RowMatrix & x, const LossSpec & loss, const SEstimate & est,
  const std::optional<Vector> & weights = std::nullopt);

/// Deterministic high-breakdown starting point for `s_estimate`: coordinatewise
/// median, then the half-sample closest to it in MAD-standardized distance,
/// refined by three concentration steps (mean and covariance of the h points
/// with smallest Mahalanobis distance, h = ⌊(n+p+1)/2⌋).
struct RobustStart
{
  Vector mu;
  Matrix sigma;
};
RobustStart robust_start(const RowMatrix & x);

}  // namespace rmbc

#endif  // RMBC_SCATTER_HPP_
