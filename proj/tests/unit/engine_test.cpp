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

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "rmbc/benchmark.hpp"
#include "rmbc/clustering.hpp"
#include "rmbc/engine.hpp"
#include "rmbc/error.hpp"
#include "rmbc/evaluation.hpp"
#include "rmbc/random.hpp"
#include "rmbc/scatter.hpp"
#include "rmbc/scenarios.hpp"

namespace rmbc
{
namespace
{

// Two spherical clouds of `per` points each at ±(5, 5).
RowMatrix two_clouds(Eigen::Index per, std::uint64_t seed)
{
  RandomStream rng = RandomStream::from_seed(seed);
  RowMatrix x(2 * per, 2);
  for (Eigen::Index i = 0; i < 2 * per; ++i) {
    const double sign = i < per ? 1.0 : -1.0;
    x(i, 0) = 5.0 * sign + rng.normal();
    x(i, 1) = 5.0 * sign + rng.normal();
  }
  return x;
}

IterationState two_component_state(double a1, const Vector & m1, const Vector & m2)
{
  IterationState s;
  s.alpha = Vector(2);
  s.alpha << a1, 1.0 - a1;
  s.mu = {m1, m2};
  s.sigma = {Matrix::Identity(2, 2), Matrix::Identity(2, 2)};
  s.sigma_star = s.sigma;
  s.s_star = {1.0, 1.0};
  return s;
}

Vector vec2(double a, double b)
{
  Vector v(2);
  v << a, b;
  return v;
}

TEST(Initialize, FindsTwoSeparatedClouds)
{
  const Dataset data = validate_dataset(two_clouds(200, 1));
  FitConfig config;
  config.k = 2;
  config.seed = 3;
  const InitModel init = initialize(data, config);
  ASSERT_EQ(init.k(), 2);
  const int hi = init.mu[0](0) > 0.0 ? 0 : 1;
  const auto h = static_cast<std::size_t>(hi);
  const auto l = static_cast<std::size_t>(1 - hi);
  // Oracle: the sample means of the true halves.
  const Vector top = data.observations().topRows(200).colwise().mean().transpose();
  const Vector bottom = data.observations().bottomRows(200).colwise().mean().transpose();
  EXPECT_LE((init.mu[h] - top).norm(), 0.5);
  EXPECT_LE((init.mu[l] - bottom).norm(), 0.5);
  EXPECT_NEAR(init.alpha(0), 0.5, 0.05);
  EXPECT_NEAR(init.alpha(1), 0.5, 0.05);
  for (int j = 0; j < 2; ++j) {
    EXPECT_EQ(init.s_star[static_cast<std::size_t>(j)], 1.0);
    EXPECT_EQ(init.sigma[static_cast<std::size_t>(j)], init.sigma_star[static_cast<std::size_t>(j)]);
  }
  EXPECT_EQ(init.iter, 0);
}

TEST(Initialize, SingleClusterUsesWholeSampleSEstimate)
{
  const RowMatrix x = two_clouds(100, 2);
  const Dataset data = validate_dataset(x);
  FitConfig config;
  config.k = 1;
  const InitModel init = initialize(data, config);
  ASSERT_EQ(init.k(), 1);
  EXPECT_EQ(init.alpha(0), 1.0);
  const RobustStart start = robust_start(x);
  const SEstimate est = s_estimate(x, LossSpec::optimal(2), start.mu, start.sigma);
  EXPECT_LE((init.mu[0] - est.mu).norm(), 1e-12);
  EXPECT_LE((init.sigma[0] - est.sigma_mat).norm(), 1e-12);
}

TEST(Initialize, RequiresMoreThanKTimesPPlusOnePoints)
{
  const Dataset data = validate_dataset(two_clouds(3, 4));  // n = 6 = K(p+1)
  FitConfig config;
  config.k = 2;
  try {
    initialize(data, config);
    FAIL();
  } catch (const Error & e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooFewPoints);
  }
}

TEST(Initialize, CenterStealingTooFewPointsIsAnError)
{
  const Dataset data = validate_dataset(two_clouds(50, 5));
  FitConfig config;
  config.k = 2;
  // Second center far from everything captures no points on either attempt.
  const CenterInitializer lonely = [](const RowMatrix &, int, std::uint64_t) {
    return std::vector<Vector>{vec2(0.0, 0.0), vec2(1e6, 1e6)};
  };
  try {
    initialize(data, config, lonely);
    FAIL();
  } catch (const Error & e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyInitialCluster);
  }
}

TEST(Initialize, ReseedsOnceWithADifferentSeed)
{
  const Dataset data = validate_dataset(two_clouds(50, 6));
  FitConfig config;
  config.k = 2;
  config.seed = 9;
  std::vector<std::uint64_t> seen;
  const CenterInitializer flaky = [&seen](const RowMatrix &, int, std::uint64_t seed) {
    seen.push_back(seed);
    if (seen.size() == 1) {
      return std::vector<Vector>{vec2(0.0, 0.0), vec2(1e6, 1e6)};
    }
    return std::vector<Vector>{vec2(5.0, 5.0), vec2(-5.0, -5.0)};
  };
  const InitModel init = initialize(data, config, flaky);
  ASSERT_EQ(seen.size(), 2u);
  EXPECT_EQ(seen[0], 9u);
  EXPECT_NE(seen[1], 9u);
  EXPECT_NEAR(init.alpha(0), 0.5, 1e-12);
}

TEST(Responsibilities, SymmetricPointSplitsEvenly)
{
  const IterationState s = two_component_state(0.5, vec2(-1.0, 0.0), vec2(1.0, 0.0));
  RowMatrix x(1, 2);
  x << 0.0, 3.0;
  const RowMatrix r = responsibilities(s, x);
  EXPECT_NEAR(r(0, 0), 0.5, 1e-15);
  EXPECT_NEAR(r(0, 1), 0.5, 1e-15);
}

TEST(Responsibilities, ZeroWeightComponentGetsNothing)
{
  IterationState s = two_component_state(1.0, vec2(0.0, 0.0), vec2(0.1, 0.0));
  const RowMatrix x = two_clouds(20, 7);
  const RowMatrix r = responsibilities(s, x);
  EXPECT_TRUE((r.col(0).array() == 1.0).all());
  EXPECT_TRUE((r.col(1).array() == 0.0).all());
}

TEST(Responsibilities, FarTailRowIsStillOnTheSimplex)
{
  const IterationState s = two_component_state(0.3, vec2(0.0, 0.0), vec2(2.0, 0.0));
  RowMatrix x(2, 2);
  x << 1e4, -3e4, -5e3, 0.0;
  const RowMatrix r = responsibilities(s, x);
  ASSERT_TRUE(r.allFinite());
  for (Eigen::Index i = 0; i < 2; ++i) {
    EXPECT_NEAR(r.row(i).sum(), 1.0, 1e-12);
  }
  // Oracle: the log-odds is linear in x for equal Σ, so the far-right point
  // belongs to component 2 and the far-left point to component 1.
  EXPECT_NEAR(r(0, 1), 1.0, 1e-12);
  EXPECT_NEAR(r(1, 0), 1.0, 1e-12);
}

TEST(IterateOnce, QuadraticLossIsOneEmStep)
{
  const RowMatrix x = two_clouds(150, 8);
  const LossSpec loss = LossSpec::quadratic(0.5 / 2.0, 0.5);
  IterationState s = two_component_state(0.4, vec2(3.0, 4.0), vec2(-4.0, -6.0));
  s.sigma[1] << 2.0, 0.3, 0.3, 1.5;
  s.sigma_star[1] = s.sigma[1];
  oracle::EmState em{s.alpha, s.mu, s.sigma};
  for (int m = 0; m < 5; ++m) {
    s = iterate_once(s, x, loss);
    em = oracle::reference_em_step(em, x);
    EXPECT_LE((s.alpha - em.alpha).norm(), 1e-10);
    for (std::size_t j = 0; j < 2; ++j) {
      EXPECT_LE((s.mu[j] - em.mu[j]).norm(), 1e-10);
      EXPECT_LE((s.sigma[j] - em.sigma[j]).norm(), 1e-10);
      EXPECT_NEAR(s.s_star[j], 1.0, 1e-12);
    }
  }
}

TEST(IterateOnce, FixedPointIsReproduced)
{
  const RowMatrix x = two_clouds(200, 9);
  const LossSpec loss = LossSpec::optimal(2);
  IterationState s = two_component_state(0.5, vec2(4.0, 4.0), vec2(-4.0, -4.0));
  for (int m = 0; m < 400; ++m) {
    s = iterate_once(s, x, loss);
  }
  const IterationState again = iterate_once(s, x, loss);
  EXPECT_LE((again.alpha - s.alpha).cwiseAbs().maxCoeff(), 1e-10);
  for (std::size_t j = 0; j < 2; ++j) {
    EXPECT_LE((again.mu[j] - s.mu[j]).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LE((again.sigma[j] - s.sigma[j]).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_NEAR(again.s_star[j], s.s_star[j], 1e-10);
  }
  EXPECT_LE(mixture_fixed_point_residual(s, x, loss), 1e-10);
}

TEST(IterateOnce, FarOutlierDoesNotMoveTheLocation)
{
  RandomStream rng = RandomStream::from_seed(10);
  RowMatrix clean(300, 2);
  for (Eigen::Index i = 0; i < 300; ++i) {
    clean(i, 0) = rng.normal();
    clean(i, 1) = rng.normal();
  }
  RowMatrix dirty(301, 2);
  dirty.topRows(300) = clean;
  dirty.row(300) << 400.0, -300.0;

  IterationState s;
  s.alpha = Vector::Ones(1);
  s.mu = {vec2(0.1, -0.1)};
  s.sigma = {Matrix::Identity(2, 2) * 1.2};
  s.sigma_star = s.sigma;
  s.s_star = {1.0};
  const LossSpec loss = LossSpec::optimal(2);
  const IterationState a = iterate_once(s, clean, loss);
  const IterationState b = iterate_once(s, dirty, loss);
  EXPECT_LE((a.mu[0] - b.mu[0]).norm(), 1e-8);
  EXPECT_LE((a.sigma_star[0] - b.sigma_star[0]).norm(), 1e-8);
}

TEST(IterateOnce, CollapsedClusterNamesTheComponent)
{
  const RowMatrix x = two_clouds(100, 11);
  const IterationState s = two_component_state(0.5, vec2(5.0, 5.0), vec2(1e3, 1e3));
  try {
    iterate_once(s, x, LossSpec::optimal(2));
    FAIL();
  } catch (const CollapsedClusterError & e) {
    EXPECT_EQ(e.cluster(), 2);
    EXPECT_EQ(e.code(), ErrorCode::kCollapsedCluster);
  }
}

TEST(KlGaussian, ClosedFormExamples)
{
  Vector z(1);
  z << 0.0;
  Vector o(1);
  o << 1.0;
  const Matrix one = Matrix::Identity(1, 1);
  EXPECT_NEAR(kl_gaussian(z, one, o, one), 0.5, 1e-15);
  EXPECT_EQ(kl_gaussian(o, one, o, one), 0.0);

  Matrix s0(2, 2);
  s0 << 2.0, 0.5, 0.5, 1.0;
  const Matrix s1 = Matrix::Identity(2, 2);
  const Vector m0 = vec2(0.0, 0.0);
  const Vector m1 = vec2(1.0, -1.0);
  const double pq = kl_gaussian(m0, s0, m1, s1);
  const double qp = kl_gaussian(m1, s1, m0, s0);
  // Oracle: the textbook formula with an explicit inverse.
  const double expect =
    0.5 * ((s1.inverse() * s0).trace() + (m1 - m0).dot(s1.inverse() * (m1 - m0)) - 2.0 +
           std::log(s1.determinant() / s0.determinant()));
  EXPECT_NEAR(pq, expect, 1e-13);
  EXPECT_GT(std::abs(pq - qp), 1e-3);
}

TEST(KlGaussian, RejectsIndefiniteScatter)
{
  Matrix bad(2, 2);
  bad << 1.0, 2.0, 2.0, 1.0;
  try {
    kl_gaussian(vec2(0, 0), bad, vec2(0, 0), Matrix::Identity(2, 2));
    FAIL();
  } catch (const Error & e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotPositiveDefinite);
  }
}

TEST(Fit, BitIdenticalForFixedSeed)
{
  const ScenarioSample sample = generate(ScenarioSpec::make(ScenarioName::kSideNoise2), 21);
  FitConfig config;
  config.k = 2;
  config.seed = 5;
  const FitResult a = fit(sample.data, config);
  const FitResult b = fit(sample.data, config);
  EXPECT_EQ(a.labels, b.labels);
  EXPECT_EQ(a.outlier_flags, b.outlier_flags);
  EXPECT_EQ(a.iterations, b.iterations);
  EXPECT_TRUE(a.model.weights() == b.model.weights());
  for (int j = 0; j < 2; ++j) {
    EXPECT_TRUE(a.model.mean(j) == b.model.mean(j));
    EXPECT_TRUE(a.model.scatter(j) == b.model.scatter(j));
  }
  EXPECT_TRUE(a.responsibilities == b.responsibilities);
}

TEST(Fit, CleanSideNoise2)
{
  const ScenarioSample sample = generate(ScenarioSpec::make(ScenarioName::kSideNoise2, false), 22);
  FitConfig config;
  config.k = 2;
  const FitResult r = fit(sample.data, config);
  EXPECT_TRUE(r.converged);
  EXPECT_LE(mcr(*sample.data.true_labels(), r.labels).rate, 0.01);
}

TEST(Fit, ContaminatedSideNoise2)
{
  const ScenarioSample sample = generate(ScenarioSpec::make(ScenarioName::kSideNoise2), 23);
  FitConfig config;
  config.k = 2;
  const FitResult r = fit(sample.data, config);
  EXPECT_TRUE(r.converged);
  EXPECT_LE(mcr(*sample.data.true_labels(), r.labels).rate, 0.01);
  EXPECT_GE(sensitivity(*sample.data.outlier_mask(), r.outlier_flags), 0.95);
}

TEST(Fit, ResultInvariantsAndCertifiedFixedPoint)
{
  const ScenarioSample sample = generate(ScenarioSpec::make(ScenarioName::kSideNoise3), 24);
  FitConfig config;
  config.k = 3;
  FitOptions options;
  int sweeps = 0;
  IterationState last;
  options.observer = [&sweeps, &last](const IterationState & s, const StopMetrics &) {
    ++sweeps;
    last = s;
    EXPECT_TRUE((s.alpha.array() >= 0.0).all() && (s.alpha.array() <= 1.0).all());
    EXPECT_NEAR(s.alpha.sum(), 1.0, 1e-12);
    for (std::size_t j = 0; j < s.mu.size(); ++j) {
      EXPECT_LE((s.sigma[j] - s.s_star[j] * s.s_star[j] * s.sigma_star[j]).norm(), 1e-9 * s.sigma[j].norm());
    }
  };
  const FitResult r = fit(sample.data, config, options);
  ASSERT_TRUE(r.converged);
  EXPECT_EQ(sweeps, r.iterations);
  EXPECT_LT(r.stop_metrics.alpha_change, config.delta_tol);
  EXPECT_LT(r.stop_metrics.kl_sum, config.delta_tol);
  for (Eigen::Index i = 0; i < r.responsibilities.rows(); ++i) {
    ASSERT_NEAR(r.responsibilities.row(i).sum(), 1.0, 1e-10);
    ASSERT_EQ(r.labels[static_cast<std::size_t>(i)], argmax_label(r.responsibilities.row(i)));
  }

  const double residual =
    mixture_fixed_point_residual(last, sample.data.observations(), LossSpec::optimal(2));
  EXPECT_LE(residual, 10.0 * config.delta_tol);
}

TEST(Fit, LinearScaleStepOscillatesWhereSquareRootConverges)
{
  const ScenarioSpec spec = ScenarioSpec::make(ScenarioName::kRandomScatterH);
  const ScenarioSample sample = generate(spec, 0, 0);
  FitConfig config;
  config.k = spec.k;
  config.seed = replication_fit_seed(0, 0);

  config.scale_step = ScaleStep::kSquareRoot;
  const FitResult root = fit(sample.data, config);
  EXPECT_TRUE(root.converged);

  config.scale_step = ScaleStep::kLinear;
  std::vector<double> log_dets;
  FitOptions options;
  options.observer = [&log_dets](const IterationState & s, const StopMetrics &) {
    log_dets.push_back(std::log(s.sigma[0].determinant()));
  };
  const FitResult linear = fit(sample.data, config, options);
  EXPECT_FALSE(linear.converged);
  ASSERT_GE(log_dets.size(), 4u);
  // Late iterates alternate between two distinct, slowly drifting values.
  const std::size_t m = log_dets.size();
  EXPECT_NEAR(log_dets[m - 1], log_dets[m - 3], 1e-2);
  EXPECT_NEAR(log_dets[m - 2], log_dets[m - 4], 1e-2);
  EXPECT_GT(std::abs(log_dets[m - 1] - log_dets[m - 2]), 0.1);
}

}  // namespace
}  // namespace rmbc
