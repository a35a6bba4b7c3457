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
#include <numbers>

#include "oracles.hpp"
#include "rmbc/error.hpp"
#include "rmbc/metric.hpp"
#include "rmbc/scatter.hpp"

namespace rmbc
{
namespace
{

Vector v2(double a, double b)
{
  Vector v(2);
  v << a, b;
  return v;
}

TEST(Mahalanobis, IdentityIsEuclidean)
{
  EXPECT_DOUBLE_EQ(mahalanobis(v2(3, 4), v2(0, 0), Matrix::Identity(2, 2)), 5.0);
}

TEST(Mahalanobis, ZeroAtCenter)
{
  Matrix s(2, 2);
  s << 2, 0.3, 0.3, 1;
  EXPECT_DOUBLE_EQ(mahalanobis(v2(1, -1), v2(1, -1), s), 0.0);
}

TEST(Mahalanobis, DiagonalHandEvaluation)
{
  const Matrix s = v2(4, 1).asDiagonal();
  EXPECT_NEAR(mahalanobis(v2(2, 0), v2(0, 0), s), 1.0, 1e-15);
}

TEST(Mahalanobis, MatchesExplicitInverse)
{
  Matrix s(3, 3);
  s << 2.0, 0.4, -0.3, 0.4, 1.5, 0.2, -0.3, 0.2, 0.8;
  Vector x(3);
  x << 1.0, -2.0, 0.5;
  Vector mu(3);
  mu << 0.1, 0.2, -0.3;
  const Vector d = x - mu;
  EXPECT_NEAR(mahalanobis(x, mu, s), std::sqrt(d.dot(s.inverse() * d)), 1e-12);
}

TEST(Mahalanobis, DimensionMismatchThrows)
{
  Vector x3 = Vector::Zero(3);
  try {
    mahalanobis(x3, v2(0, 0), Matrix::Identity(2, 2));
    FAIL();
  } catch (const Error & e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  }
}

TEST(Mahalanobis, NonSymmetricThrows)
{
  Matrix s(2, 2);
  s << 1, 0.5, 0.0, 1;
  try {
    mahalanobis(v2(1, 1), v2(0, 0), s);
    FAIL();
  } catch (const Error & e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotPositiveDefinite);
  }
}

TEST(MahalanobisDegenerate, AgreesOnWellConditioned)
{
  Matrix s(2, 2);
  s << 2, 0.5, 0.5, 1;
  EXPECT_NEAR(mahalanobis_degenerate(v2(1, 2), v2(0, 0), s), mahalanobis(v2(1, 2), v2(0, 0), s), 1e-10);
}

TEST(MahalanobisDegenerate, RangeDirectionOfSingularMatrix)
{
  const Matrix s = v2(1, 0).asDiagonal();
  EXPECT_NEAR(mahalanobis_degenerate(v2(1, 0), v2(0, 0), s), 1.0, 1e-12);
}

TEST(MahalanobisDegenerate, ZeroMatrixIsFinite)
{
  const double d = mahalanobis_degenerate(v2(1, 1), v2(0, 0), Matrix::Zero(2, 2));
  EXPECT_TRUE(std::isfinite(d));
  EXPECT_GT(d, 1e6);
}

TEST(GaussianMetric, LogDensityMatchesFormula)
{
  Matrix s(2, 2);
  s << 1.5, -0.4, -0.4, 0.7;
  RowMatrix x(3, 2);
  x << 0, 0, 1, -1, 2.5, 3;
  const Vector mu = v2(0.2, -0.1);
  const Vector ld = GaussianMetric(s).log_densities(x, mu);
  for (Eigen::Index i = 0; i < 3; ++i) {
    EXPECT_NEAR(ld(i), oracle::gaussian_log_pdf(x.row(i).transpose(), mu, s), 1e-12);
  }
}

TEST(IsSpd, RelativeTolerance)
{
  EXPECT_TRUE(is_spd(1e-8 * Matrix::Identity(3, 3)));
  EXPECT_FALSE(is_spd(v2(1, 0).asDiagonal()));
  Matrix asym(2, 2);
  asym << 1, 0.1, 0.2, 1;
  EXPECT_FALSE(is_spd(asym));
}

}  // namespace
}  // namespace rmbc
