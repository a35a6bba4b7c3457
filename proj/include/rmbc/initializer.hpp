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

#ifndef RMBC_INITIALIZER_HPP_
#define RMBC_INITIALIZER_HPP_

#include <cstdint>
#include <functional>
#include <vector>

#include "rmbc/types.hpp"

namespace rmbc
{

/// Produces K robust cluster centers for the data; must be deterministic in
/// `seed`.
using CenterInitializer =
  std::function<std::vector<Vector>(const RowMatrix & x, int k, std::uint64_t seed)>;

struct TrimmedKMeansOptions
{
  int restarts = 10;
  double trim = 0.1;
  int refine_rounds = 10;
};

/// Trimmed k-means++ seeding followed by W-weighted refinement.
///
/// Seeding draws the first center from the points nearest the coordinatewise
/// median and each further center with probability ∝ D², where candidates
/// whose D² lies in the top `trim` fraction are excluded. Each refinement
/// round assigns points to the nearest center and replaces every center by
/// the mean of its members weighted by W_c(e_i / σ), e_i the Euclidean
/// distance and σ the M-scale of those distances. Among `restarts` seedings
/// the one with the smallest trimmed within-cluster sum of squares wins.
std::vector<Vector> trimmed_kmeanspp_centers(
  const RowMatrix & x, int k, std::uint64_t seed, const TrimmedKMeansOptions & options = {});

CenterInitializer default_center_initializer();

}  // namespace rmbc

#endif  // RMBC_INITIALIZER_HPP_
