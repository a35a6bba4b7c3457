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

#include "rmbc/core_model.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "rmbc/error.hpp"

namespace rmbc
{

std::string_view to_string(ErrorCode code)
{
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kNonFiniteEntry: return "NonFiniteEntry";
    case ErrorCode::kEmptyData: return "EmptyData";
    case ErrorCode::kLabelOutOfRange: return "LabelOutOfRange";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kNegativeArgument: return "NegativeArgument";
    case ErrorCode::kBracketFailure: return "BracketFailure";
    case ErrorCode::kNoBracket: return "NoBracket";
    case ErrorCode::kNotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::kDegenerateScale: return "DegenerateScale";
    case ErrorCode::kSingularScatter: return "SingularScatter";
    case ErrorCode::kTooFewPoints: return "TooFewPoints";
    case ErrorCode::kEmptyInitialCluster: return "EmptyInitialCluster";
    case ErrorCode::kCollapsedCluster: return "CollapsedCluster";
    case ErrorCode::kNoTrueOutliers: return "NoTrueOutliers";
    case ErrorCode::kRejectionExhausted: return "RejectionExhausted";
    case ErrorCode::kParseError: return "ParseError";
  }
  return "Unknown";
}

Dataset validate_dataset(
  RowMatrix raw, std::optional<std::vector<int>> labels,
  std::optional<std::vector<bool>> outlier_mask, std::optional<int> k)
{
  if (raw.rows() < 1 || raw.cols() < 1) {
    throw Error(ErrorCode::kEmptyData, "dataset needs at least one row and one column");
  }
  for (Eigen::Index i = 0; i < raw.rows(); ++i) {
    for (Eigen::Index j = 0; j < raw.cols(); ++j) {
      if (!std::isfinite(raw(i, j))) {
        throw Error(
          ErrorCode::kNonFiniteEntry,
          "row " + std::to_string(i) + ", column " + std::to_string(j));
      }
    }
  }
  const auto n = static_cast<std::size_t>(raw.rows());
  if (outlier_mask && outlier_mask->size() != n) {
    throw Error(ErrorCode::kLengthMismatch, "outlier mask length differs from row count");
  }
  if (labels) {
    if (labels->size() != n) {
      throw Error(ErrorCode::kLengthMismatch, "label count differs from row count");
    }
    if (!outlier_mask) {
      std::vector<bool> derived(n);
      for (std::size_t i = 0; i < n; ++i) {
        derived[i] = (*labels)[i] == kOutlierLabel;
      }
      outlier_mask = std::move(derived);
    }
    for (std::size_t i = 0; i < n; ++i) {
      const int label = (*labels)[i];
      const bool ok = (*outlier_mask)[i] ? label == kOutlierLabel
                                          : label >= 1 && (!k || label <= *k);
      if (!ok) {
        throw Error(
          ErrorCode::kLabelOutOfRange,
          "row " + std::to_string(i) + " has label " + std::to_string(label));
      }
    }
  }

  Dataset data;
  data.observations_ = std::move(raw);
  data.true_labels_ = std::move(labels);
  data.outlier_mask_ = std::move(outlier_mask);
  return data;
}

MixtureModel::MixtureModel(Vector weights, std::vector<Vector> means, std::vector<Matrix> scatters)
: weights_(std::move(weights)), means_(std::move(means)), scatters_(std::move(scatters))
{
  const auto k = static_cast<Eigen::Index>(means_.size());
  if (k < 1 || weights_.size() != k || static_cast<Eigen::Index>(scatters_.size()) != k) {
    throw Error(ErrorCode::kInvalidArgument, "mixture needs K >= 1 weights, means and scatters");
  }
  const Eigen::Index p = means_.front().size();
  if (p < 1) {
    throw Error(ErrorCode::kInvalidArgument, "mean vectors must be non-empty");
  }
  if (!weights_.allFinite() || weights_.minCoeff() < 0.0 || weights_.maxCoeff() > 1.0 ||
      std::abs(weights_.sum() - 1.0) > 1e-12) {
    throw Error(ErrorCode::kInvalidArgument, "mixture weights must lie in [0,1] and sum to 1");
  }
  metrics_.reserve(means_.size());
  for (Eigen::Index j = 0; j < k; ++j) {
    const auto idx = static_cast<std::size_t>(j);
    if (means_[idx].size() != p || !means_[idx].allFinite()) {
      throw Error(ErrorCode::kDimensionMismatch, "component means must share length p");
    }
    if (scatters_[idx].rows() != p || scatters_[idx].cols() != p) {
      throw Error(ErrorCode::kDimensionMismatch, "component scatters must be p x p");
    }
    if (!is_spd(scatters_[idx])) {
      throw Error(
        ErrorCode::kNotPositiveDefinite, "scatter of component " + std::to_string(j + 1));
    }
    metrics_.emplace_back(scatters_[idx]);
  }
}

RowMatrix MixtureModel::log_joint(const RowMatrix & x) const
{
  if (x.cols() != p()) {
    throw Error(ErrorCode::kDimensionMismatch, "observation length does not match model");
  }
  RowMatrix out(x.rows(), k());
  for (int j = 0; j < k(); ++j) {
    if (weights_(j) <= 0.0) {
      out.col(j).setConstant(-std::numeric_limits<double>::infinity());
      continue;
    }
    out.col(j) = metric(j).log_densities(x, mean(j)).array() + std::log(weights_(j));
  }
  return out;
}

Vector MixtureModel::log_density(const RowMatrix & x) const
{
  const RowMatrix joint = log_joint(x);
  const Vector top = joint.rowwise().maxCoeff();
  return top.array() + ((joint.colwise() - top).array().exp().rowwise().sum()).log();
}

double model_density(const MixtureModel & model, const Vector & x)
{
  if (x.size() != model.p()) {
    throw Error(ErrorCode::kDimensionMismatch, "observation length does not match model");
  }
  return std::exp(model.log_density(x.transpose())(0));
}

RowMatrix sample_mixture(
  const MixtureModel & model, Eigen::Index n, RandomStream & rng, std::vector<int> * components)
{
  const Eigen::Index p = model.p();
  std::vector<Matrix> factors;
  factors.reserve(static_cast<std::size_t>(model.k()));
  for (const Matrix & s : model.scatters()) {
    factors.emplace_back(Eigen::LLT<Matrix>(s).matrixL());
  }
  if (components) {
    components->assign(static_cast<std::size_t>(n), 0);
  }
  RowMatrix out(n, p);
  Vector z(p);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double u = rng.uniform();
    int comp = model.k() - 1;
    double cumulative = 0.0;
    for (int j = 0; j < model.k(); ++j) {
      cumulative += model.weight(j);
      if (u < cumulative) {
        comp = j;
        break;
      }
    }
    for (Eigen::Index d = 0; d < p; ++d) {
      z(d) = rng.normal();
    }
    out.row(i) = (model.mean(comp) + factors[static_cast<std::size_t>(comp)] * z).transpose();
    if (components) {
      (*components)[static_cast<std::size_t>(i)] = comp;
    }
  }
  return out;
}

void FitConfig::validate() const
{
  if (k < 1) {
    throw Error(ErrorCode::kInvalidArgument, "k must be at least 1");
  }
  if (!(b > 0.0 && b <= 0.5)) {
    throw Error(ErrorCode::kInvalidArgument, "b must lie in (0, 0.5]");
  }
  if (!(delta_tol > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "delta_tol must be positive");
  }
  if (max_iter < 1) {
    throw Error(ErrorCode::kInvalidArgument, "max_iter must be at least 1");
  }
  if (!(min_cluster_weight >= 0.0 && min_cluster_weight < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "min_cluster_weight must lie in [0, 1)");
  }
}

int argmax_label(const Eigen::Ref<const Eigen::RowVectorXd> & row)
{
  Eigen::Index best = 0;
  for (Eigen::Index j = 1; j < row.size(); ++j) {
    if (row(j) > row(best)) {
      best = j;
    }
  }
  return static_cast<int>(best) + 1;
}

}  // namespace rmbc
