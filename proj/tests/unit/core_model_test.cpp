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
#include <limits>
#include <numbers>

#include "rmbc/core_model.hpp"
#include "rmbc/error.hpp"

namespace rmbc
{
namespace
{

template <typename F>
ErrorCode code_of(F && f)
{
  try {
    f();
  } catch (const Error & e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::kInvalidArgument;
}

Vector v1(double a)
{
  return Vector::Constant(1, a);
}

TEST(ValidateDataset, PlainMatrix)
{
  RowMatrix raw(4, 2);
  raw << 1, 2, 3, 4, 5, 6, 7, 8;
  const Dataset d = validate_dataset(raw);
  EXPECT_EQ(d.n(), 4);
  EXPECT_EQ(d.p(), 2);
  EXPECT_FALSE(d.true_labels().has_value());
}

TEST(ValidateDataset, NanRejected)
{
  RowMatrix raw(2, 2);
  raw << 1, std::numeric_limits<double>::quiet_NaN(), 3, 4;
  EXPECT_EQ(code_of([&] { validate_dataset(raw); }), ErrorCode::kNonFiniteEntry);
}

TEST(ValidateDataset, EmptyRejected)
{
  EXPECT_EQ(code_of([] { validate_dataset(RowMatrix(0, 2)); }), ErrorCode::kEmptyData);
}

TEST(ValidateDataset, OutlierLabelWithMask)
{
  RowMatrix raw(3, 1);
  raw << 0, 1, 2;
  const Dataset d = validate_dataset(raw, std::vector<int>{1, 0, 2}, std::vector<bool>{false, true, false}, 2);
  EXPECT_EQ((*d.outlier_mask())[1], true);
}

TEST(ValidateDataset, MaskDerivedFromLabelZero)
{
  RowMatrix raw(3, 1);
  raw << 0, 1, 2;
  const Dataset d = validate_dataset(raw, std::vector<int>{1, 0, 2});
  ASSERT_TRUE(d.outlier_mask().has_value());
  EXPECT_EQ(*d.outlier_mask(), (std::vector<bool>{false, true, false}));
}

TEST(ValidateDataset, LabelAboveKRejected)
{
  RowMatrix raw(2, 1);
  raw << 0, 1;
  EXPECT_EQ(code_of([&] { validate_dataset(raw, std::vector<int>{1, 3}, std::nullopt, 2); }), ErrorCode::kLabelOutOfRange);
}

TEST(ValidateDataset, LengthMismatch)
{
  RowMatrix raw(2, 1);
  raw << 0, 1;
  EXPECT_EQ(code_of([&] { validate_dataset(raw, std::vector<int>{1}); }), ErrorCode::kLengthMismatch);
}

TEST(MixtureModel, StandardNormalModeDensity)
{
  const MixtureModel m(Vector::Ones(1), {Vector::Zero(2)}, {Matrix::Identity(2, 2)});
  EXPECT_NEAR(model_density(m, Vector::Zero(2)), 1.0 / (2.0 * std::numbers::pi), 1e-15);
}

TEST(MixtureModel, IdenticalComponents)
{
  const MixtureModel m(Vector::Constant(2, 0.5), {Vector::Zero(2), Vector::Zero(2)}, {Matrix::Identity(2, 2), Matrix::Identity(2, 2)});
  EXPECT_NEAR(model_density(m, Vector::Zero(2)), 1.0 / (2.0 * std::numbers::pi), 1e-15);
}

TEST(MixtureModel, ScalarMixture)
{
  Vector a(2);
  a << 0.3, 0.7;
  const MixtureModel m(a, {v1(0), v1(4)}, {Matrix::Identity(1, 1), Matrix::Identity(1, 1)});
  const double phi0 = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  const double phi4 = phi0 * std::exp(-8.0);
  EXPECT_NEAR(model_density(m, v1(0)), 0.3 * phi0 + 0.7 * phi4, 1e-15);
}

TEST(MixtureModel, RejectsBadWeights)
{
  Vector a(2);
  a << 0.3, 0.6;
  EXPECT_EQ(
    code_of([&] { MixtureModel(a, {v1(0), v1(1)}, {Matrix::Identity(1, 1), Matrix::Identity(1, 1)}); }),
    ErrorCode::kInvalidArgument);
}

TEST(MixtureModel, RejectsIndefiniteScatter)
{
  Matrix s(2, 2);
  s << 1, 2, 2, 1;
  EXPECT_EQ(code_of([&] { MixtureModel(Vector::Ones(1), {Vector::Zero(2)}, {s}); }), ErrorCode::kNotPositiveDefinite);
}

TEST(MixtureModel, LogDensityTailIsFinite)
{
  const MixtureModel m(Vector::Ones(1), {Vector::Zero(2)}, {Matrix::Identity(2, 2)});
  RowMatrix far(1, 2);
  far << 1e3, 1e3;
  const Vector ld = m.log_density(far);
  EXPECT_TRUE(std::isfinite(ld(0)));
  EXPECT_NEAR(ld(0), -std::log(2.0 * std::numbers::pi) - 1e6, 1e-6);
}

TEST(MixtureModel, SamplerMatchesWeightsAndMean)
{
  Vector a(2);
  a << 0.4, 0.6;
  Matrix s2(2, 2);
  s2 << 1.0, 0.3, 0.3, 0.5;
  const MixtureModel m(a, {Vector::Zero(2), Vector::Constant(2, 3.0)}, {Matrix::Identity(2, 2), s2});
  RandomStream rng = RandomStream::from_seed(5);
  std::vector<int> comp;
  const RowMatrix x = sample_mixture(m, 20000, rng, &comp);
  int first = 0;
  for (int c : comp) {
    first += c == 0 ? 1 : 0;
  }
  EXPECT_NEAR(first / 20000.0, 0.4, 4.0 * std::sqrt(0.24 / 20000.0));
  // Sample mean is the mixture mean 0.6·3 = 1.8 per coordinate.
  const Vector mean = x.colwise().mean().transpose();
  EXPECT_NEAR(mean(0), 1.8, 0.05);
  EXPECT_NEAR(mean(1), 1.8, 0.05);
}

TEST(FitConfig, Validation)
{
  FitConfig c;
  EXPECT_NO_THROW(c.validate());
  c.k = 0;
  EXPECT_EQ(code_of([&] { c.validate(); }), ErrorCode::kInvalidArgument);
  c = FitConfig{};
  c.b = 0.7;
  EXPECT_EQ(code_of([&] { c.validate(); }), ErrorCode::kInvalidArgument);
  c = FitConfig{};
  c.delta_tol = 0.0;
  EXPECT_EQ(code_of([&] { c.validate(); }), ErrorCode::kInvalidArgument);
  c = FitConfig{};
  c.max_iter = 0;
  EXPECT_EQ(code_of([&] { c.validate(); }), ErrorCode::kInvalidArgument);
}

TEST(ArgmaxLabel, TiesGoLow)
{
  Eigen::RowVectorXd r(3);
  r << 0.4, 0.4, 0.2;
  EXPECT_EQ(argmax_label(r), 1);
  r << 0.1, 0.2, 0.7;
  EXPECT_EQ(argmax_label(r), 3);
}

}  // namespace
}  // namespace rmbc
