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

#include "rmbc/initializer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "rmbc/engine.hpp"
#include "rmbc/error.hpp"
#include "rmbc/metric.hpp"
#include "rmbc/random.hpp"
#include "rmbc/scatter.hpp"

namespace rmbc
{

namespace
{

constexpr std::uint64_t kReseedSalt = 0x5eed5eed5eed5eedULL;

// Value at the q-quantile (lower order statistic) of `values`.
double quantile_of(std::vector<double> values, double q)
{
  const auto pos = static_cast<std::size_t>(std::floor(q * static_cast<double>(values.size() - 1)));
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(pos), values.end());
  return values[pos];
}

double median_of(std::vector<double> values)
{
  const auto mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) {
    return upper;
  }
  return 0.5 * (upper + *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid)));
}

// Squared MAD-standardized distance of every row from the coordinatewise median.
std::vector<double> outlyingness(const RowMatrix & x)
{
  const Eigen::Index n = x.rows();
  std::vector<double> score(static_cast<std::size_t>(n), 0.0);
  std::vector<double> column(static_cast<std::size_t>(n));
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      column[static_cast<std::size_t>(i)] = x(i, j);
    }
    const double med = median_of(column);
    for (double & v : column) {
      v = std::abs(v - med);
    }
    double mad = median_of(column);
    if (!(mad > 0.0)) {
      mad = 1.0;
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      const double z = (x(i, j) - med) / mad;
      score[static_cast<std::size_t>(i)] += z * z;
    }
  }
  return score;
}

// Index of the nearest center (Euclidean), ties to the lowest index, and the
// squared distance to it.
std::pair<int, double> nearest(const RowMatrix & x, Eigen::Index i, const std::vector<Vector> & centers)
{
  int best = 0;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < centers.size(); ++j) {
    const double d2 = (x.row(i).transpose() - centers[j]).squaredNorm();
    if (d2 < best_d2) {
      best_d2 = d2;
      best = static_cast<int>(j);
    }
  }
  return {best, best_d2};
}

std::vector<Vector> seed_centers(
  const RowMatrix & x, int k, RandomStream & rng, double trim, const std::vector<double> & score)
{
  const Eigen::Index n = x.rows();
  const double keep = 1.0 - trim;

  const double core_cut = quantile_of(score, keep);
  std::vector<Eigen::Index> core;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (score[static_cast<std::size_t>(i)] <= core_cut) {
      core.push_back(i);
    }
  }
  std::vector<Vector> centers;
  centers.push_back(x.row(core[rng.uniform_index(core.size())]).transpose());

  std::vector<double> d2(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    d2[static_cast<std::size_t>(i)] = (x.row(i).transpose() - centers.front()).squaredNorm();
  }
  for (int j = 1; j < k; ++j) {
    const double cut = quantile_of(d2, keep);
    double total = 0.0;
    for (double v : d2) {
      if (v <= cut) {
        total += v;
      }
    }
    Eigen::Index pick = n - 1;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double acc = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double v = d2[static_cast<std::size_t>(i)];
        if (v <= cut) {
          acc += v;
          if (acc > target && v > 0.0) {
            pick = i;
            break;
          }
        }
      }
    } else {
      pick = static_cast<Eigen::Index>(rng.uniform_index(static_cast<std::uint64_t>(n)));
    }
    centers.push_back(x.row(pick).transpose());
    for (Eigen::Index i = 0; i < n; ++i) {
      auto & v = d2[static_cast<std::size_t>(i)];
      v = std::min(v, (x.row(i).transpose() - centers.back()).squaredNorm());
    }
  }
  return centers;
}

void refine(const RowMatrix & x, std::vector<Vector> & centers, const LossSpec & loss, int rounds)
{
  const Eigen::Index n = x.rows();
  const auto k = centers.size();
  std::vector<int> owner(static_cast<std::size_t>(n));
  for (int round = 0; round < rounds; ++round) {
    for (Eigen::Index i = 0; i < n; ++i) {
      owner[static_cast<std::size_t>(i)] = nearest(x, i, centers).first;
    }
    for (std::size_t j = 0; j < k; ++j) {
      std::vector<Eigen::Index> members;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (owner[static_cast<std::size_t>(i)] == static_cast<int>(j)) {
          members.push_back(i);
        }
      }
      if (members.size() < 2) {
        continue;
      }
      Vector e(static_cast<Eigen::Index>(members.size()));
      for (std::size_t m = 0; m < members.size(); ++m) {
        e(static_cast<Eigen::Index>(m)) = (x.row(members[m]).transpose() - centers[j]).norm();
      }
      double scale = 0.0;
      try {
        scale = m_scale(e, loss).sigma;
      } catch (const Error &) {
        continue;
      }
      Vector sum = Vector::Zero(x.cols());
      double total = 0.0;
      for (std::size_t m = 0; m < members.size(); ++m) {
        const double w = loss.weight(e(static_cast<Eigen::Index>(m)) / scale);
        sum += w * x.row(members[m]).transpose();
        total += w;
      }
      if (total > 0.0) {
        centers[j] = sum / total;
      }
    }
  }
}

double trimmed_cost(const RowMatrix & x, const std::vector<Vector> & centers, double trim)
{
  std::vector<double> d2(static_cast<std::size_t>(x.rows()));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    d2[static_cast<std::size_t>(i)] = nearest(x, i, centers).second;
  }
  std::sort(d2.begin(), d2.end());
  const auto keep = static_cast<std::size_t>(std::ceil((1.0 - trim) * static_cast<double>(d2.size())));
  return std::accumulate(d2.begin(), d2.begin() + static_cast<std::ptrdiff_t>(keep), 0.0);
}

}  // namespace

std::vector<Vector> trimmed_kmeanspp_centers(
  const RowMatrix & x, int k, std::uint64_t seed, const TrimmedKMeansOptions & options)
{
  if (k < 1) {
    throw Error(ErrorCode::kInvalidArgument, "k must be at least 1");
  }
  if (x.rows() < k) {
    throw Error(ErrorCode::kTooFewPoints, "fewer observations than clusters");
  }
  if (!(options.trim >= 0.0 && options.trim < 1.0) || options.restarts < 1 || options.refine_rounds < 0) {
    throw Error(ErrorCode::kInvalidArgument, "invalid trimmed k-means options");
  }
  const LossSpec loss = LossSpec::optimal(static_cast<int>(x.cols()));
  const std::vector<double> score = outlyingness(x);
  std::vector<Vector> best;
  double best_cost = std::numeric_limits<double>::infinity();
  for (int r = 0; r < options.restarts; ++r) {
    RandomStream rng = RandomStream::substream(seed, static_cast<std::uint64_t>(r));
    std::vector<Vector> centers = seed_centers(x, k, rng, options.trim, score);
    refine(x, centers, loss, options.refine_rounds);
    const double cost = trimmed_cost(x, centers, options.trim);
    if (cost < best_cost) {
      best_cost = cost;
      best = std::move(centers);
    }
  }
  return best;
}

CenterInitializer default_center_initializer()
{
  return [](const RowMatrix & x, int k, std::uint64_t seed) { return trimmed_kmeanspp_centers(x, k, seed); };
}

InitModel initialize(const Dataset & data, const FitConfig & config, const CenterInitializer & initializer)
{
  config.validate();
  const RowMatrix & x = data.observations();
  const Eigen::Index n = data.n();
  const Eigen::Index p = data.p();
  const int k = config.k;
  if (n <= static_cast<Eigen::Index>(k) * (p + 1)) {
    throw Error(ErrorCode::kTooFewPoints, "need n > K(p+1) observations");
  }
  if (!initializer) {
    throw Error(ErrorCode::kInvalidArgument, "no center initializer");
  }
  const LossSpec loss = LossSpec::optimal(static_cast<int>(p), config.b);

  std::uint64_t seed = config.seed;
  for (int attempt = 0; attempt < 2; ++attempt, seed = splitmix64(config.seed ^ kReseedSalt)) {
    const std::vector<Vector> centers = initializer(x, k, seed);
    if (static_cast<int>(centers.size()) != k) {
      throw Error(ErrorCode::kInvalidArgument, "initializer returned the wrong number of centers");
    }
    for (const Vector & c : centers) {
      if (c.size() != p || !c.allFinite()) {
        throw Error(ErrorCode::kDimensionMismatch, "initializer returned an invalid center");
      }
    }
    std::vector<std::vector<Eigen::Index>> groups(static_cast<std::size_t>(k));
    for (Eigen::Index i = 0; i < n; ++i) {
      groups[static_cast<std::size_t>(nearest(x, i, centers).first)].push_back(i);
    }
    int short_group = 0;
    for (int j = 0; j < k && short_group == 0; ++j) {
      if (static_cast<Eigen::Index>(groups[static_cast<std::size_t>(j)].size()) < p + 2) {
        short_group = j + 1;
      }
    }
    if (short_group != 0) {
      if (attempt == 0) {
        continue;
      }
      throw Error(
        ErrorCode::kEmptyInitialCluster,
        "initial center " + std::to_string(short_group) + " captured fewer than p + 2 points");
    }

    InitModel state;
    state.alpha.resize(k);
    for (int j = 0; j < k; ++j) {
      const auto& rows = groups[static_cast<std::size_t>(j)];
      state.alpha(j) = static_cast<double>(rows.size()) / static_cast<double>(n);
      RowMatrix sub(static_cast<Eigen::Index>(rows.size()), p);
      for (std::size_t m = 0; m < rows.size(); ++m) {
        sub.row(static_cast<Eigen::Index>(m)) = x.row(rows[m]);
      }
      const RobustStart start = robust_start(sub);
      Vector mu = start.mu;
      Matrix sigma = start.sigma;
      try {
        const SEstimate est = s_estimate(sub, loss, start.mu, start.sigma);
        if (est.mu.allFinite() && is_spd(est.sigma_mat)) {
          mu = est.mu;
          sigma = est.sigma_mat;
        }
      } catch (const Error &) {
        // keep the concentration-step start
      }
      state.mu.push_back(mu);
      state.sigma.push_back(sigma);
      state.sigma_star.push_back(sigma);
      state.s_star.push_back(1.0);
    }
    state.alpha /= state.alpha.sum();
    return state;
  }
  throw Error(ErrorCode::kEmptyInitialCluster, "unreachable");
}

}  // namespace rmbc
