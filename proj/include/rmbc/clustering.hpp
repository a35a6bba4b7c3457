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

#ifndef RMBC_CLUSTERING_HPP_
#define RMBC_CLUSTERING_HPP_

#include <vector>

#include "rmbc/core_model.hpp"

namespace rmbc
{

/// Outlier ellipsoids 𝓔_k = {x : d²(x, μ_k, Σ_k) ≤ χ²_{p,1−β}}.
class OutlierRule
{
public:
  /// Throws kInvalidArgument unless 0 < beta < 1 and p >= 1.
  explicit OutlierRule(int p, double beta = 1e-3);

  int p() const { return p_; }
  double beta() const { return beta_; }
  /// χ²_{p,1−β}
  double radius_squared() const { return radius_squared_; }

private:
  int p_;
  double beta_;
  double radius_squared_;
};

/// P(x ∈ G_k) for every component, via log-sum-exp. Throws kDimensionMismatch.
Vector posterior(const MixtureModel & model, const Vector & x);
/// Row-wise posterior for a data matrix (n×K).
RowMatrix posterior(const MixtureModel & model, const RowMatrix & x);

/// δ_k(x) = log α_k − ½ log|Σ_k| − ½ d²(x, μ_k, Σ_k), component index 0-based.
double discriminant(const MixtureModel & model, const Vector & x, int component);

/// Labels 1..K by the largest discriminant; ties go to the lowest index.
std::vector<int> assign(const MixtureModel & model, const RowMatrix & x);
std::vector<int> assign(const MixtureModel & model, const Dataset & data);

/// Flags rows lying outside every ellipsoid of `rule`.
std::vector<bool> flag_outliers(const MixtureModel & model, const RowMatrix & x, const OutlierRule & rule);
std::vector<bool> flag_outliers(const MixtureModel & model, const Dataset & data, const OutlierRule & rule);

}  // namespace rmbc

#endif  // RMBC_CLUSTERING_HPP_
