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

#ifndef RMBC_IO_HPP_
#define RMBC_IO_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rmbc/core_model.hpp"

namespace rmbc
{

struct CsvTable
{
  std::vector<std::string> header;  ///< empty when the file has none
  RowMatrix values;
};

/// Comma-separated numeric table, LF or CRLF line ends, '.' decimal point.
/// The first row is a header when any of its cells is not a number. Throws
/// kParseError naming the 1-based row and column of a bad cell, or of a row
/// whose width differs from the first.
CsvTable parse_csv(std::istream & in);
CsvTable read_csv_file(const std::string & path);

/// Shortest decimal text that reads back to the same double.
std::string format_number(double value);

void write_text_file(const std::string & path, const std::string & content);
std::string read_text_file(const std::string & path);

struct FitMeta
{
  std::uint64_t seed = 0;
  int iterations = 0;
  bool converged = false;
  double delta_tol = 0.0;
};

struct ModelDocument
{
  int schema_version = 1;
  MixtureModel model;
  std::optional<FitMeta> fit_meta;
};

inline constexpr int kModelSchemaVersion = 1;

/// JSON text with schema_version, k, p, weights, means, scatters (K×p×p,
/// row-major) and optional fit_meta.
std::string serialize_model(const MixtureModel & model, const std::optional<FitMeta> & meta = std::nullopt);
/// Throws kParseError on malformed documents or an unknown schema_version;
/// model validation errors propagate unchanged.
ModelDocument parse_model(const std::string & text);

}  // namespace rmbc

#endif  // RMBC_IO_HPP_
