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

#ifndef RMBC_SCENARIOS_HPP_
#define RMBC_SCENARIOS_HPP_

#include <cstdint>
#include <optional>
#include <string_view>

#include "rmbc/core_model.hpp"
#include "rmbc/random.hpp"

namespace rmbc
{

enum class ScenarioName {
  kSunSpot5,
  kSideNoise2,
  kSideNoise2H,
  kSideNoise3,
  kRandomScatter,
  kRandomScatterH,
};

std::string_view to_string(ScenarioName name);
/// Case-insensitive; also accepts "-" or "_" separators ("side_noise_2").
std::optional<ScenarioName> parse_scenario_name(std::string_view text);

struct ScenarioSpec
{
  ScenarioName name = ScenarioName::kSideNoise2;
  bool contaminated = true;
  Eigen::Index n = 0;
  double epsilon = 0.0;
  int k = 0;
  int p = 0;

  /// Canonical (n, ε, K, p) for `name`; the clean variant has ε = 0.
  static ScenarioSpec make(ScenarioName name, bool contaminated = true);
  /// ⌈εn⌉
  Eigen::Index outlier_count() const;
  /// Throws kInvalidArgument when the fields differ from `make(name, contaminated)`.
  void validate() const;
};

struct ScenarioSample
{
  /// Clean rows first (labels 1..K), then the contamination rows (label 0).
  Dataset data;
  /// Clean generating mixture; for the random-scatter families it carries the
  /// replication's own Σ_k.
  MixtureModel truth;
};

/// Draws one replication from `rng`.
ScenarioSample generate(const ScenarioSpec & spec, RandomStream & rng);
/// Draws replication `replication` from the substream derived from (seed, replication).
ScenarioSample generate(const ScenarioSpec & spec, std::uint64_t seed, std::uint64_t replication = 0);

/// {x : d²(x, μ, Σ) ≤ χ²_{p,0.99}}. Throws kNotPositiveDefinite.
class Ellipsoid99
{
public:
  Ellipsoid99(const Vector & mu, const Matrix & sigma);

  bool contains(const Vector & x) const;
  double radius_squared() const { return radius_squared_; }

private:
  Vector mu_;
  GaussianMetric metric_;
  double radius_squared_;
};

}  // namespace rmbc

#endif  // RMBC_SCENARIOS_HPP_
