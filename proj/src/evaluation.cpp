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

#include "rmbc/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rmbc/error.hpp"
#include "rmbc/random.hpp"

namespace rmbc
{

namespace
{

using Counts = std::vector<std::vector<long long>>;

// Best assignment for a square gain matrix by enumerating permutations.
std::vector<int> best_permutation(const Counts & gain)
{
  const int k = static_cast<int>(gain.size());
  std::vector<int> perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> best = perm;
  long long best_gain = -1;
  do {
    long long g = 0;
    for (int j = 0; j < k; ++j) {
      g += gain[static_cast<std::size_t>(j)][static_cast<std::size_t>(perm[static_cast<std::size_t>(j)])];
    }
    if (g > best_gain) {
      best_gain = g;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Hungarian method (potentials form) maximizing total gain on a square matrix.
std::vector<int> hungarian(const Counts & gain)
{
  const int k = static_cast<int>(gain.size());
  long long top = 0;
  for (const auto & row : gain) {
    top = std::max(top, *std::max_element(row.begin(), row.end()));
  }
  const auto cost = [&](int r, int c) {
    return top - gain[static_cast<std::size_t>(r - 1)][static_cast<std::size_t>(c - 1)];
  };
  constexpr long long kInf = std::numeric_limits<long long>::max() / 4;
  std::vector<long long> u(static_cast<std::size_t>(k + 1), 0);
  std::vector<long long> v(static_cast<std::size_t>(k + 1), 0);
  std::vector<int> match(static_cast<std::size_t>(k + 1), 0);
  std::vector<int> way(static_cast<std::size_t>(k + 1), 0);
  for (int r = 1; r <= k; ++r) {
    match[0] = r;
    int c0 = 0;
    std::vector<long long> minv(static_cast<std::size_t>(k + 1), kInf);
    std::vector<bool> used(static_cast<std::size_t>(k + 1), false);
    do {
      used[static_cast<std::size_t>(c0)] = true;
      const int r0 = match[static_cast<std::size_t>(c0)];
      long long delta = kInf;
      int c1 = 0;
      for (int c = 1; c <= k; ++c) {
        const auto cs = static_cast<std::size_t>(c);
        if (used[cs]) {
          continue;
        }
        const long long cur = cost(r0, c) - u[static_cast<std::size_t>(r0)] - v[cs];
        if (cur < minv[cs]) {
          minv[cs] = cur;
          way[cs] = c0;
        }
        if (minv[cs] < delta) {
          delta = minv[cs];
          c1 = c;
        }
      }
      for (int c = 0; c <= k; ++c) {
        const auto cs = static_cast<std::size_t>(c);
        if (used[cs]) {
          u[static_cast<std::size_t>(match[cs])] += delta;
          v[cs] -= delta;
        } else {
          minv[cs] -= delta;
        }
      }
      c0 = c1;
    } while (match[static_cast<std::size_t>(c0)] != 0);
    do {
      const int c1 = way[static_cast<std::size_t>(c0)];
      match[static_cast<std::size_t>(c0)] = match[static_cast<std::size_t>(c1)];
      c0 = c1;
    } while (c0 != 0);
  }
  std::vector<int> assignment(static_cast<std::size_t>(k), 0);
  for (int c = 1; c <= k; ++c) {
    assignment[static_cast<std::size_t>(match[static_cast<std::size_t>(c)] - 1)] = c - 1;
  }
  return assignment;
}

}  // namespace

McrResult mcr(
  const std::vector<int> & truth, const std::vector<int> & pred, const std::optional<std::vector<bool>> & exclude)
{
  if (truth.size() != pred.size() || (exclude && exclude->size() != truth.size())) {
    throw Error(ErrorCode::kLengthMismatch, "label vectors differ in length");
  }
  int k_true = 0;
  int k_pred = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] < 0 || pred[i] < 0) {
      throw Error(ErrorCode::kLabelOutOfRange, "negative label at row " + std::to_string(i));
    }
    k_true = std::max(k_true, truth[i]);
    k_pred = std::max(k_pred, pred[i]);
  }
  const int k = std::max({k_true, k_pred, 1});
  Counts gain(static_cast<std::size_t>(k), std::vector<long long>(static_cast<std::size_t>(k), 0));
  McrResult result;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] == kOutlierLabel || (exclude && (*exclude)[i])) {
      continue;
    }
    ++result.counted;
    if (pred[i] != kOutlierLabel) {
      ++gain[static_cast<std::size_t>(pred[i] - 1)][static_cast<std::size_t>(truth[i] - 1)];
    }
  }
  const std::vector<int> assignment = k <= 8 ? best_permutation(gain) : hungarian(gain);
  long long agree = 0;
  result.matching.assign(static_cast<std::size_t>(k_pred), 0);
  for (int j = 0; j < k; ++j) {
    const int t = assignment[static_cast<std::size_t>(j)];
    agree += gain[static_cast<std::size_t>(j)][static_cast<std::size_t>(t)];
    if (j < k_pred && t < k_true) {
      result.matching[static_cast<std::size_t>(j)] = t + 1;
    }
  }
  result.mismatches = result.counted - static_cast<std::size_t>(agree);
  result.rate = result.counted > 0 ? static_cast<double>(result.mismatches) / static_cast<double>(result.counted) : 0.0;
  return result;
}

KldEstimate mixture_kld(const MixtureModel & truth, const MixtureModel & est, std::size_t mc_samples, std::uint64_t seed)
{
  if (truth.p() != est.p()) {
    throw Error(ErrorCode::kDimensionMismatch, "models differ in dimension");
  }
  if (mc_samples < 2) {
    throw Error(ErrorCode::kInvalidArgument, "need at least two Monte Carlo samples");
  }
  RandomStream rng = RandomStream::from_seed(seed);
  const RowMatrix x = sample_mixture(truth, static_cast<Eigen::Index>(mc_samples), rng);
  const Vector diff = truth.log_density(x) - est.log_density(x);
  const double n = static_cast<double>(mc_samples);
  const double mean = diff.mean();
  const double var = (diff.array() - mean).square().sum() / (n - 1.0);
  return KldEstimate{mean, std::sqrt(var / n)};
}

double sensitivity(const std::vector<bool> & true_outliers, const std::vector<bool> & flagged)
{
  if (true_outliers.size() != flagged.size()) {
    throw Error(ErrorCode::kLengthMismatch, "outlier vectors differ in length");
  }
  std::size_t total = 0;
  std::size_t hit = 0;
  for (std::size_t i = 0; i < true_outliers.size(); ++i) {
    if (true_outliers[i]) {
      ++total;
      hit += flagged[i] ? 1 : 0;
    }
  }
  if (total == 0) {
    throw Error(ErrorCode::kNoTrueOutliers, "sensitivity is undefined without true outliers");
  }
  return static_cast<double>(hit) / static_cast<double>(total);
}

}  // namespace rmbc
