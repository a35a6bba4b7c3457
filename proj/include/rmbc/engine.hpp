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

#ifndef RMBC_ENGINE_HPP_
#define RMBC_ENGINE_HPP_

#include <cstdint>
#include <functional>
#include <vector>

#include "rmbc/core_model.hpp"
#include "rmbc/initializer.hpp"
#include "rmbc/robust_loss.hpp"

namespace rmbc
{

/// Current mixture parameters plus the auxiliary (Σ*_k, s*_k) of each
/// component's S-functional. Invariant after every sweep: Σ_k = s*_k² Σ*_k.
struct IterationState
{
  Vector alpha;
  std::vector<Vector> mu;
  std::vector<Matrix> sigma;
  std::vector<Matrix> sigma_star;
  std::vector<double> s_star;
  int iter = 0;

  int k() const { return static_cast<int>(mu.size()); }
  MixtureModel to_model() const;
};

/// Starting state (iter = 0).
using InitModel = IterationState;

/// Initial state:
///  1. centers from `initializer` (trimmed k-means++ by default);
///  2. every point goes to its nearest center (Euclidean);
///  3. α_k = relative group sizes;
///  4. (μ_k, Σ_k) = S-estimate on group k started from `robust_start`;
///  5. s*_k = 1, Σ*_k = Σ_k.
/// If a group holds fewer than p + 2 points the centers are redrawn once with
/// a derived seed before kEmptyInitialCluster is raised. Requires n > K(p+1)
/// (kTooFewPoints).
InitModel initialize(
  const Dataset & data, const FitConfig & config,
  const CenterInitializer & initializer = default_center_initializer());

/// α̃_ki = α_k f(x_i; μ_k, Σ_k) / Σ_l α_l f(x_i; μ_l, Σ_l), evaluated in log
/// space. Rows sum to one.
RowMatrix responsibilities(const IterationState & state, const RowMatrix & x);

/// One sweep: responsibilities (a), weights (b), then per component the
/// weighted S fixed-point step for μ (c), Σ* (d), s* (e) and Σ (f), with case
/// weights α̃_ki / (n α_k^{m+1}). `step` selects the s* update, see
/// ScaleStep. Throws CollapsedClusterError when a weight drops below
/// `min_cluster_weight` or a component's robustness weights all vanish.
IterationState iterate_once(
  const IterationState & state, const RowMatrix & x, const LossSpec & loss,
  double min_cluster_weight = 1e-3, ScaleStep step = ScaleStep::kSquareRoot);

/// KL(N(μ0, Σ0) ‖ N(μ1, Σ1)), closed form. Throws kNotPositiveDefinite.
double kl_gaussian(const Vector & mu0, const Matrix & sigma0, const Vector & mu1, const Matrix & sigma1);

/// Called after every sweep with the new state and its stopping metrics.
using IterationObserver = std::function<void(const IterationState &, const StopMetrics &)>;

struct IterationRun
{
  IterationState state;
  int iterations = 0;
  bool converged = false;
  StopMetrics stop_metrics;
};

/// Sweeps `iterate_once` until ‖α^{m+1} − α^m‖₂ < δ and
/// Σ_k KL(F_k^{m+1} ‖ F_k^m) < δ, or `config.max_iter` sweeps.
IterationRun run_iterations(
  IterationState state, const RowMatrix & x, const LossSpec & loss, const FitConfig & config,
  const IterationObserver & observer = {});

/// Residual of the mixture fixed-point equations at `state`, in the units of
/// the stopping rule: one more sweep is applied and
/// max(‖α' − α‖₂, Σ_k KL(F'_k ‖ F_k)) is returned.
double mixture_fixed_point_residual(const IterationState & state, const RowMatrix & x, const LossSpec & loss);

struct FitOptions
{
  CenterInitializer initializer = default_center_initializer();
  double outlier_beta = 1e-3;
  IterationObserver observer;
};

/// Full pipeline: initialize, iterate, then posterior responsibilities, hard
/// labels and outlier flags from the fitted model. Non-convergence is
/// reported through `converged = false`.
FitResult fit(const Dataset & data, const FitConfig & config, const FitOptions & options = {});

}  // namespace rmbc

#endif  // RMBC_ENGINE_HPP_
