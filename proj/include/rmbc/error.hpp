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

#ifndef RMBC_ERROR_HPP_
#define RMBC_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace rmbc
{

enum class ErrorCode {
  kInvalidArgument,
  kNonFiniteEntry,
  kEmptyData,
  kLabelOutOfRange,
  kDimensionMismatch,
  kLengthMismatch,
  kNegativeArgument,
  kBracketFailure,
  kNoBracket,
  kNotPositiveDefinite,
  kDegenerateScale,
  kSingularScatter,
  kTooFewPoints,
  kEmptyInitialCluster,
  kCollapsedCluster,
  kNoTrueOutliers,
  kRejectionExhausted,
  kParseError,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error
{
public:
  Error(ErrorCode code, const std::string & what)
  : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
  {
  }

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

/// Raised by the fitting engine when a component's weight falls below the
/// configured floor; `cluster()` is 1-based like the public labels.
class CollapsedClusterError : public Error
{
public:
  CollapsedClusterError(int cluster, const std::string & what)
  : Error(ErrorCode::kCollapsedCluster, what), cluster_(cluster)
  {
  }

  int cluster() const noexcept { return cluster_; }

private:
  int cluster_;
};

}  // namespace rmbc

#endif  // RMBC_ERROR_HPP_
