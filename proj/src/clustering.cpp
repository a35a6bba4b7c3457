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

#include "rmbc/clustering.hpp"

#include <cmath>
#include <limits>

#include "rmbc/error.hpp"
#include "rmbc/stats.hpp"

namespace rmbc
{

namespace
{

void check_dim(const MixtureModel & model, Eigen::Index p)
{
  if (model.p() != p) {
    throw Error(ErrorCode::kDimensionMismatch, "data dimension differs from model dimension");
  }
}

// n×K matrix of δ_k(x_i).
RowMatrix discriminants(const MixtureModel & model, const RowMatrix & x)
{
  check_dim(model, x.cols());
  RowMatrix out(x.rows(), model.k());
  for (int j = 0; j < model.k(); ++j) {
    const GaussianMetric & metric = model.metric(j);
    const double a = model.weight(j);
    const double shift = a > 0.0 ? std::log(a) - 0.5 * metric.log_det() : -std::numeric_limits<double>::infinity();
    out.col(j) = shift - 0.5 * metric.squared_distances(x, model.mean(j)).array();
  }
  return out;
}

}  // namespace

OutlierRule::OutlierRule(int p, double beta) : p_(p), beta_(beta)
{
  if (p < 1) {
    throw Error(ErrorCode::kInvalidArgument, "dimension must be at least 1");
  }
  if (!(beta > 0.0 && beta < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "beta must lie in (0, 1)");
  }
  radius_squared_ = chi_square_quantile(p, 1.0 - beta);
}

RowMatrix posterior(const MixtureModel & model, const RowMatrix & x)
{
  check_dim(model, x.cols());
  const RowMatrix log_joint = model.log_joint(x);
  RowMatrix out(x.rows(), model.k());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double top = log_joint.row(i).maxCoeff();
    // Scalar exp: Eigen's packet exp maps -inf to a subnormal, not zero.
    out.row(i) = (log_joint.row(i).array() - top).unaryExpr([](double v) { return std::exp(v); });
    out.row(i) /= out.row(i).sum();
  }
  return out;
}

Vector posterior(const MixtureModel & model, const Vector & x)
{
  if (x.size() != model.p()) {
    throw Error(ErrorCode::kDimensionMismatch, "point dimension differs from model dimension");
  }
  const RowMatrix row = x.transpose();
  return posterior(model, row).row(0).transpose();
}

double discriminant(const MixtureModel & model, const Vector & x, int component)
{
  if (x.size() != model.p()) {
    throw Error(ErrorCode::kDimensionMismatch, "point dimension differs from model dimension");
  }
  if (component < 0 || component >= model.k()) {
    throw Error(ErrorCode::kInvalidArgument, "component index out of range");
  }
  const RowMatrix row = x.transpose();
  return discriminants(model, row)(0, component);
}

std::vector<int> assign(const MixtureModel & model, const RowMatrix & x)
{
  const RowMatrix delta = discriminants(model, x);
  std::vector<int> labels(static_cast<std::size_t>(x.rows()));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    labels[static_cast<std::size_t>(i)] = argmax_label(delta.row(i));
  }
  return labels;
}

std::vector<int> assign(const MixtureModel & model, const Dataset & data)
{
  return assign(model, data.observations());
}

std::vector<bool> flag_outliers(const MixtureModel & model, const RowMatrix & x, const OutlierRule & rule)
{
  check_dim(model, x.cols());
  if (rule.p() != model.p()) {
    throw Error(ErrorCode::kDimensionMismatch, "outlier rule dimension differs from model dimension");
  }
  std::vector<bool> flags(static_cast<std::size_t>(x.rows()), true);
  for (int j = 0; j < model.k(); ++j) {
    const Vector d2 = model.metric(j).squared_distances(x, model.mean(j));
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      if (d2(i) <= rule.radius_squared()) {
        flags[static_cast<std::size_t>(i)] = false;
      }
    }
  }
  return flags;
}

std::vector<bool> flag_outliers(const MixtureModel & model, const Dataset & data, const OutlierRule & rule)
{
  return flag_outliers(model, data.observations(), rule);
}

}  // namespace rmbc
