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

#ifndef RMBC_CLI_HPP_
#define RMBC_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace rmbc
{

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitNonConvergence = 2;

/// Entry point of the `rmbc` tool. `args` excludes the program name.
/// Subcommands: fit, simulate, eval, generate.
int run_cli(const std::vector<std::string> & args, std::ostream & out, std::ostream & err);

}  // namespace rmbc

#endif  // RMBC_CLI_HPP_
