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

#ifndef RMBC_CORE_MODEL_HPP_
#define RMBC_CORE_MODEL_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "rmbc/metric.hpp"
#include "rmbc/random.hpp"
#include "rmbc/robust_loss.hpp"
#include "rmbc/types.hpp"

namespace rmbc
{

/// Label reserved for contamination points in ground truth.
inline constexpr int kOutlierLabel = 0;

class Dataset;

/// Checks finiteness and label conventions.
///
/// When `k` is given every non-outlier label must lie in 1..k. When labels are
/// given without a mask, rows labelled `kOutlierLabel` form the mask. When a
/// mask is given, masked rows must carry `kOutlierLabel` and unmasked rows a
/// positive label.
Dataset validate_dataset(
  RowMatrix raw, std::optional<std::vector<int>> labels = std::nullopt,
  std::optional<std::vector<bool>> outlier_mask = std::nullopt, std::optional<int> k = std::nullopt);

/// Validated n×p sample with optional ground truth. Construct through
/// `validate_dataset`; immutable afterwards.
class Dataset
{
public:
  const RowMatrix & observations() const { return observations_; }
  Eigen::Index n() const { return observations_.rows(); }
  Eigen::Index p() const { return observations_.cols(); }
  auto row(Eigen::Index i) const { return observations_.row(i); }

  /// Cluster ids in 1..K, `kOutlierLabel` on contamination rows.
  const std::optional<std::vector<int>> & true_labels() const { return true_labels_; }
  const std::optional<std::vector<bool>> & outlier_mask() const { return outlier_mask_; }

private:
  friend Dataset validate_dataset(
    RowMatrix raw, std::optional<std::vector<int>> labels,
    std::optional<std::vector<bool>> outlier_mask, std::optional<int> k);

  RowMatrix observations_;
  std::optional<std::vector<int>> true_labels_;
  std::optional<std::vector<bool>> outlier_mask_;
};

/// Gaussian mixture Σ_k α_k N(μ_k, Σ_k). Immutable; each component's metric is
/// factored once at construction.
class MixtureModel
{
public:
  /// Throws kInvalidArgument on shape or weight problems and
  /// kNotPositiveDefinite when a scatter fails `is_spd`.
  MixtureModel(Vector weights, std::vector<Vector> means, std::vector<Matrix> scatters);

  int k() const { return static_cast<int>(means_.size()); }
  Eigen::Index p() const { return means_.front().size(); }
  const Vector & weights() const { return weights_; }
  double weight(int k) const { return weights_(k); }
  const std::vector<Vector> & means() const { return means_; }
  const Vector & mean(int k) const { return means_[static_cast<std::size_t>(k)]; }
  const std::vector<Matrix> & scatters() const { return scatters_; }
  const Matrix & scatter(int k) const { return scatters_[static_cast<std::size_t>(k)]; }
  const GaussianMetric & metric(int k) const { return metrics_[static_cast<std::size_t>(k)]; }

  /// n×K matrix of log α_k + log N(x_i; μ_k, Σ_k). Zero-weight components give -inf.
  RowMatrix log_joint(const RowMatrix & x) const;
  /// log h(x_i) for every row, by log-sum-exp over `log_joint`.
  Vector log_density(const RowMatrix & x) const;

private:
  Vector weights_;
  std::vector<Vector> means_;
  std::vector<Matrix> scatters_;
  std::vector<GaussianMetric> metrics_;
};

/// h(x) = Σ_k α_k N(x; μ_k, Σ_k).
double model_density(const MixtureModel & model, const Vector & x);

/// Draws `n` points; component ids (0-based) go to `components` if non-null.
RowMatrix sample_mixture(
  const MixtureModel & model, Eigen::Index n, RandomStream & rng,
  std::vector<int> * components = nullptr);

struct FitConfig
{
  int k = 1;
  double b = 0.5;
  double delta_tol = 1e-4;
  int max_iter = 80;
  std::uint64_t seed = 0;
  double min_cluster_weight = 1e-3;
  ScaleStep scale_step = ScaleStep::kSquareRoot;

  /// Throws kInvalidArgument on k < 1, b outside (0, 0.5], delta_tol <= 0,
  /// max_iter < 1 or min_cluster_weight outside [0, 1).
  void validate() const;
};

struct StopMetrics
{
  double alpha_change = 0.0;  ///< ‖α^{m+1} − α^m‖₂
  double kl_sum = 0.0;        ///< Σ_k KL(F_k^{m+1} ‖ F_k^m)
};

struct FitResult
{
  MixtureModel model;
  RowMatrix responsibilities;  ///< n×K, rows on the simplex
  std::vector<int> labels;     ///< 1..K
  std::vector<bool> outlier_flags;
  int iterations = 0;
  bool converged = false;
  StopMetrics stop_metrics;
};

/// Index in 1..K of the row maximum; ties go to the lowest index.
int argmax_label(const Eigen::Ref<const Eigen::RowVectorXd> & row);

}  // namespace rmbc

#endif  // RMBC_CORE_MODEL_HPP_
