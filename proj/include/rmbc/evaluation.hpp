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

#ifndef RMBC_EVALUATION_HPP_
#define RMBC_EVALUATION_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "rmbc/core_model.hpp"

namespace rmbc
{

struct McrResult
{
  double rate = 0.0;
  /// matching[j − 1] is the true cluster paired with predicted cluster j, or 0
  /// when predicted cluster j is left unmatched.
  std::vector<int> matching;
  std::size_t mismatches = 0;
  std::size_t counted = 0;  ///< rows entering the denominator
};

/// Misclassification rate under the best injective matching of predicted to
/// true clusters. Rows whose true label is `kOutlierLabel` or whose
/// `exclude` entry is set are skipped. A predicted label of 0 never matches.
/// Exhaustive over permutations when max(K_true, K_pred) ≤ 8, Hungarian
/// assignment above. Throws kLengthMismatch and kLabelOutOfRange (negative
/// labels).
McrResult mcr(
  const std::vector<int> & truth, const std::vector<int> & pred,
  const std::optional<std::vector<bool>> & exclude = std::nullopt);

struct KldEstimate
{
  double value = 0.0;
  double std_error = 0.0;
};

/// Monte Carlo E_{x∼truth}[log h_truth(x) − log h_est(x)]. Throws
/// kDimensionMismatch and kInvalidArgument for mc_samples < 2.
KldEstimate mixture_kld(
  const MixtureModel & truth, const MixtureModel & est, std::size_t mc_samples = 100000, std::uint64_t seed = 0);

/// |flagged ∧ true| / |true|. Throws kLengthMismatch and kNoTrueOutliers.
double sensitivity(const std::vector<bool> & true_outliers, const std::vector<bool> & flagged);

struct EvalReport
{
  McrResult mcr;
  std::optional<KldEstimate> kld;
  std::optional<double> sensitivity;
};

}  // namespace rmbc

#endif  // RMBC_EVALUATION_HPP_
