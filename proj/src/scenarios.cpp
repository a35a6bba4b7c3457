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

#include "rmbc/scenarios.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "rmbc/error.hpp"
#include "rmbc/stats.hpp"

namespace rmbc
{

namespace
{

constexpr long kMaxRejections = 1000000;

struct Entry
{
  ScenarioName name;
  std::string_view label;
  Eigen::Index n;
  double epsilon;
  int k;
  int p;
};

constexpr std::array<Entry, 6> kTable{{
  {ScenarioName::kSunSpot5, "SunSpot5", 1000, 0.005, 5, 2},
  {ScenarioName::kSideNoise2, "SideNoise2", 1000, 0.10, 2, 2},
  {ScenarioName::kSideNoise2H, "SideNoise2H", 2000, 0.10, 2, 20},
  {ScenarioName::kSideNoise3, "SideNoise3", 1000, 0.10, 3, 2},
  {ScenarioName::kRandomScatter, "RandomScatter", 1200, 0.05, 6, 2},
  {ScenarioName::kRandomScatterH, "RandomScatterH", 1200, 0.05, 6, 10},
}};

const Entry & entry(ScenarioName name)
{
  for (const Entry & e : kTable) {
    if (e.name == name) {
      return e;
    }
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown scenario");
}

Matrix mat2(double a, double b, double d)
{
  Matrix m(2, 2);
  m << a, b, b, d;
  return m;
}

Vector vec2(double a, double b)
{
  Vector v(2);
  v << a, b;
  return v;
}

// Σ = U Uᵀ with U_ij ~ U[−1, 1], redrawn while numerically singular.
Matrix random_scatter(int p, RandomStream & rng)
{
  for (;;) {
    Matrix u(p, p);
    for (int i = 0; i < p; ++i) {
      for (int j = 0; j < p; ++j) {
        u(i, j) = rng.uniform(-1.0, 1.0);
      }
    }
    Matrix sigma = u * u.transpose();
    sigma = 0.5 * (sigma + sigma.transpose());
    if (is_spd(sigma)) {
      return sigma;
    }
  }
}

// Lower and upper corners of the contamination box in the first
// `box.first.size()` coordinates; remaining coordinates are standard normal.
using Box = std::pair<Vector, Vector>;

struct Layout
{
  Vector alpha;
  std::vector<Vector> mu;
  std::vector<Matrix> sigma;
  std::optional<Box> box;  // empty: expanded bounding box of the clean data
};

Layout side_noise_2(int p)
{
  Layout l;
  l.alpha = vec2(0.75, 0.25);
  Vector m1 = Vector::Zero(p);
  Vector m2 = Vector::Zero(p);
  m1.head(2) = vec2(-10.0, 5.0);
  m2.head(2) = vec2(3.0, 13.0);
  Matrix s1 = Matrix::Identity(p, p);
  Matrix s2 = Matrix::Identity(p, p);
  s1.topLeftCorner(2, 2) = 0.4 * Matrix::Identity(2, 2);
  s2.topLeftCorner(2, 2) = mat2(1.5, -1.1, 1.5);
  l.mu = {m1, m2};
  l.sigma = {s1, s2};
  l.box = Box{vec2(-50.0, -50.0), vec2(5.0, 5.0)};
  return l;
}

Layout layout(const ScenarioSpec & spec, RandomStream & rng)
{
  Layout l;
  switch (spec.name) {
    case ScenarioName::kSunSpot5:
      l.alpha.resize(5);
      l.alpha << 0.15, 0.30, 0.10, 0.15, 0.30;
      l.mu = {vec2(0, 3), vec2(7, 1), vec2(5, 9), vec2(-13, 5), vec2(-9, 5)};
      l.sigma = {mat2(1, 0.5, 1), mat2(2, -1.5, 2), mat2(2, 1.3, 2), 0.5 * Matrix::Identity(2, 2), 2.5 * Matrix::Identity(2, 2)};
      l.box = Box{vec2(30, 30), vec2(40, 40)};
      return l;
    case ScenarioName::kSideNoise2:
      return side_noise_2(2);
    case ScenarioName::kSideNoise2H:
      return side_noise_2(20);
    case ScenarioName::kSideNoise3:
      l.alpha.resize(3);
      l.alpha << 0.28, 0.33, 0.39;
      l.mu = {vec2(-2, -2), vec2(7, 1), vec2(15, 19)};
      l.sigma = {mat2(1, 0.5, 1), mat2(2, -1.5, 2), mat2(2, 1.3, 2)};
      l.box = Box{vec2(-20, -50), vec2(15, 5)};
      return l;
    case ScenarioName::kRandomScatter:
    case ScenarioName::kRandomScatterH:
      l.alpha = Vector::Constant(6, 2.0 / 11.0);
      l.alpha(0) = 1.0 / 11.0;
      for (int k = 1; k <= 6; ++k) {
        l.mu.push_back(Vector::Constant(spec.p, 3.0 * (k - 3)));
        l.sigma.push_back(random_scatter(spec.p, rng));
      }
      return l;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown scenario");
}

}  // namespace

std::string_view to_string(ScenarioName name)
{
  return entry(name).label;
}

std::optional<ScenarioName> parse_scenario_name(std::string_view text)
{
  std::string key;
  for (char ch : text) {
    if (ch != '-' && ch != '_') {
      key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    }
  }
  for (const Entry & e : kTable) {
    std::string label;
    for (char ch : e.label) {
      label.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    }
    if (label == key) {
      return e.name;
    }
  }
  return std::nullopt;
}

ScenarioSpec ScenarioSpec::make(ScenarioName name, bool contaminated)
{
  const Entry & e = entry(name);
  return ScenarioSpec{name, contaminated, e.n, contaminated ? e.epsilon : 0.0, e.k, e.p};
}

Eigen::Index ScenarioSpec::outlier_count() const
{
  return static_cast<Eigen::Index>(std::ceil(epsilon * static_cast<double>(n) - 1e-9));
}

void ScenarioSpec::validate() const
{
  const ScenarioSpec ref = make(name, contaminated);
  if (n != ref.n || epsilon != ref.epsilon || k != ref.k || p != ref.p) {
    throw Error(ErrorCode::kInvalidArgument, std::string("scenario fields do not match ") + std::string(to_string(name)));
  }
}

Ellipsoid99::Ellipsoid99(const Vector & mu, const Matrix & sigma)
: mu_(mu), metric_(sigma), radius_squared_(chi_square_quantile(static_cast<int>(mu.size()), 0.99))
{
  if (metric_.repaired() || sigma.rows() != mu.size()) {
    throw Error(ErrorCode::kNotPositiveDefinite, "ellipsoid scatter must be positive definite");
  }
}

bool Ellipsoid99::contains(const Vector & x) const
{
  return metric_.squared_distance(x - mu_) <= radius_squared_;
}

ScenarioSample generate(const ScenarioSpec & spec, RandomStream & rng)
{
  spec.validate();
  const Layout l = layout(spec, rng);
  MixtureModel truth(l.alpha, l.mu, l.sigma);

  const Eigen::Index n_out = spec.outlier_count();
  const Eigen::Index n_clean = spec.n - n_out;
  std::vector<int> components;
  RowMatrix clean = sample_mixture(truth, n_clean, rng, &components);

  RowMatrix x(spec.n, spec.p);
  x.topRows(n_clean) = clean;
  std::vector<int> labels(static_cast<std::size_t>(spec.n), kOutlierLabel);
  for (Eigen::Index i = 0; i < n_clean; ++i) {
    labels[static_cast<std::size_t>(i)] = components[static_cast<std::size_t>(i)] + 1;
  }

  Box box;
  if (l.box) {
    box = *l.box;
  } else {
    const Vector lo = clean.colwise().minCoeff().transpose();
    const Vector hi = clean.colwise().maxCoeff().transpose();
    const Vector center = 0.5 * (lo + hi);
    box = Box{center + (lo - center) * 2.0, center + (hi - center) * 2.0};
  }
  std::vector<Ellipsoid99> ellipsoids;
  for (int k = 0; k < truth.k(); ++k) {
    ellipsoids.emplace_back(truth.mean(k), truth.scatter(k));
  }
  const Eigen::Index boxed = box.first.size();
  for (Eigen::Index i = n_clean; i < spec.n; ++i) {
    Vector point(spec.p);
    long attempt = 0;
    for (;; ++attempt) {
      if (attempt == kMaxRejections) {
        throw Error(ErrorCode::kRejectionExhausted, "contamination region lies inside the 99% ellipsoids");
      }
      for (Eigen::Index j = 0; j < spec.p; ++j) {
        point(j) = j < boxed ? rng.uniform(box.first(j), box.second(j)) : rng.normal();
      }
      const bool inside = std::any_of(
        ellipsoids.begin(), ellipsoids.end(), [&](const Ellipsoid99 & e) { return e.contains(point); });
      if (!inside) {
        break;
      }
    }
    x.row(i) = point.transpose();
  }
  std::vector<bool> mask(static_cast<std::size_t>(spec.n), false);
  for (Eigen::Index i = n_clean; i < spec.n; ++i) {
    mask[static_cast<std::size_t>(i)] = true;
  }
  Dataset data = validate_dataset(std::move(x), std::move(labels), std::move(mask), spec.k);
  return ScenarioSample{std::move(data), std::move(truth)};
}

ScenarioSample generate(const ScenarioSpec & spec, std::uint64_t seed, std::uint64_t replication)
{
  RandomStream rng = RandomStream::substream(seed, replication);
  return generate(spec, rng);
}

}  // namespace rmbc
