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

#include "rmbc/stats.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include "rmbc/error.hpp"

namespace rmbc
{

double chi_square_quantile(int p, double prob)
{
  if (p < 1 || !(prob > 0.0 && prob < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "chi-square quantile needs p >= 1 and prob in (0,1)");
  }
  return 2.0 * boost::math::gamma_p_inv(0.5 * p, prob);
}

double chi_square_cdf(int p, double x)
{
  if (p < 1) {
    throw Error(ErrorCode::kInvalidArgument, "chi-square cdf needs p >= 1");
  }
  return x <= 0.0 ? 0.0 : boost::math::gamma_p(0.5 * p, 0.5 * x);
}

}  // namespace rmbc
