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

#ifndef RMBC_STATS_HPP_
#define RMBC_STATS_HPP_

namespace rmbc
{

/// Quantile of χ²_p at probability `prob` in (0, 1), via the inverse
/// regularized incomplete gamma function.
double chi_square_quantile(int p, double prob);

/// P(χ²_p ≤ x).
double chi_square_cdf(int p, double x);

}  // namespace rmbc

#endif  // RMBC_STATS_HPP_
