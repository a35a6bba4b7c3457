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

#include "rmbc/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <utility>

#include "json.hpp"
#include "rmbc/error.hpp"

namespace rmbc
{

namespace
{

std::string_view trim(std::string_view s)
{
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split(std::string_view line)
{
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) {
      return cells;
    }
    start = comma + 1;
  }
}

std::optional<double> to_number(std::string_view cell)
{
  if (!cell.empty() && cell.front() == '+') {
    cell.remove_prefix(1);
  }
  double value = 0.0;
  const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (cell.empty() || ec != std::errc() || end != cell.data() + cell.size()) {
    return std::nullopt;
  }
  return value;
}

std::string position(std::size_t row, std::size_t col)
{
  return "row " + std::to_string(row) + ", column " + std::to_string(col);
}

using nlohmann::json;

json matrix_json(const Matrix & m)
{
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row.push_back(m(i, j));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Vector vector_from(const json & j, Eigen::Index size, const char * what)
{
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != size) {
    throw Error(ErrorCode::kParseError, std::string(what) + " has the wrong length");
  }
  Vector v(size);
  for (Eigen::Index i = 0; i < size; ++i) {
    const json & e = j[static_cast<std::size_t>(i)];
    if (!e.is_number()) {
      throw Error(ErrorCode::kParseError, std::string(what) + " holds a non-number");
    }
    v(i) = e.get<double>();
  }
  return v;
}

}  // namespace

CsvTable parse_csv(std::istream & in)
{
  CsvTable table;
  std::vector<std::vector<double>> rows;
  std::size_t width = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) {
      continue;
    }
    const auto cells = split(line);
    std::vector<double> values;
    values.reserve(cells.size());
    std::optional<std::size_t> bad;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const auto v = to_number(cells[c]);
      if (!v) {
        bad = c;
        break;
      }
      values.push_back(*v);
    }
    const bool first = rows.empty() && table.header.empty();
    if (bad && first) {
      for (auto cell : cells) {
        table.header.emplace_back(cell);
      }
      width = cells.size();
      continue;
    }
    if (bad) {
      throw Error(ErrorCode::kParseError, "non-numeric cell at " + position(line_no, *bad + 1));
    }
    if (width == 0) {
      width = values.size();
    }
    if (values.size() != width) {
      throw Error(
        ErrorCode::kParseError, "expected " + std::to_string(width) + " cells at " +
                                  position(line_no, std::min(values.size(), width) + 1));
    }
    rows.push_back(std::move(values));
  }
  table.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < width; ++j) {
      table.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return table;
}

CsvTable read_csv_file(const std::string & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kParseError, "cannot open " + path);
  }
  return parse_csv(in);
}

std::string format_number(double value)
{
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  (void)ec;
  return std::string(buf, end);
}

void write_text_file(const std::string & path, const std::string & content)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kInvalidArgument, "cannot write " + path);
  }
  out << content;
  if (!out) {
    throw Error(ErrorCode::kInvalidArgument, "write failed for " + path);
  }
}

std::string read_text_file(const std::string & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kParseError, "cannot open " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string serialize_model(const MixtureModel & model, const std::optional<FitMeta> & meta)
{
  json doc;
  doc["schema_version"] = kModelSchemaVersion;
  doc["k"] = model.k();
  doc["p"] = model.p();
  doc["weights"] = json::array();
  doc["means"] = json::array();
  doc["scatters"] = json::array();
  for (int j = 0; j < model.k(); ++j) {
    doc["weights"].push_back(model.weight(j));
    doc["means"].push_back(json(std::vector<double>(model.mean(j).data(), model.mean(j).data() + model.p())));
    doc["scatters"].push_back(matrix_json(model.scatter(j)));
  }
  if (meta) {
    doc["fit_meta"] = {
      {"seed", meta->seed},
      {"iterations", meta->iterations},
      {"converged", meta->converged},
      {"delta_tol", meta->delta_tol}};
  }
  return doc.dump(2) + "\n";
}

ModelDocument parse_model(const std::string & text)
{
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception & e) {
    throw Error(ErrorCode::kParseError, std::string("model document: ") + e.what());
  }
  try {
    const int version = doc.at("schema_version").get<int>();
    if (version != kModelSchemaVersion) {
      throw Error(ErrorCode::kParseError, "unsupported schema_version " + std::to_string(version));
    }
    const int k = doc.at("k").get<int>();
    const int p = doc.at("p").get<int>();
    if (k < 1 || p < 1) {
      throw Error(ErrorCode::kParseError, "k and p must be positive");
    }
    const Vector weights = vector_from(doc.at("weights"), k, "weights");
    const json & means = doc.at("means");
    const json & scatters = doc.at("scatters");
    if (!means.is_array() || !scatters.is_array() || static_cast<int>(means.size()) != k ||
        static_cast<int>(scatters.size()) != k) {
      throw Error(ErrorCode::kParseError, "means and scatters must hold k entries");
    }
    std::vector<Vector> mu;
    std::vector<Matrix> sigma;
    for (std::size_t j = 0; j < static_cast<std::size_t>(k); ++j) {
      mu.push_back(vector_from(means[j], p, "mean"));
      const json & s = scatters[j];
      if (!s.is_array() || static_cast<int>(s.size()) != p) {
        throw Error(ErrorCode::kParseError, "scatter has the wrong number of rows");
      }
      Matrix m(p, p);
      for (std::size_t r = 0; r < static_cast<std::size_t>(p); ++r) {
        m.row(static_cast<Eigen::Index>(r)) = vector_from(s[r], p, "scatter row").transpose();
      }
      sigma.push_back(std::move(m));
    }
    std::optional<FitMeta> meta;
    if (doc.contains("fit_meta")) {
      const json & fm = doc.at("fit_meta");
      meta = FitMeta{
        fm.at("seed").get<std::uint64_t>(), fm.at("iterations").get<int>(), fm.at("converged").get<bool>(),
        fm.at("delta_tol").get<double>()};
    }
    return ModelDocument{version, MixtureModel(weights, std::move(mu), std::move(sigma)), meta};
  } catch (const json::exception & e) {
    throw Error(ErrorCode::kParseError, std::string("model document: ") + e.what());
  }
}

}  // namespace rmbc
