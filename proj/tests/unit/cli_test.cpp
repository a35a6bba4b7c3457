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

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "rmbc/cli.hpp"
#include "rmbc/io.hpp"

namespace rmbc
{
namespace
{

namespace fs = std::filesystem;

struct CliRun
{
  int code;
  std::string out;
  std::string err;
};

CliRun cli(const std::vector<std::string> & args)
{
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test
{
protected:
  void SetUp() override
  {
    dir_ = fs::temp_directory_path() / ("rmbc_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string & name) const { return (dir_ / name).string(); }

  void generate_sidenoise2()
  {
    const CliRun r = cli(
      {"generate", "--scenario", "sidenoise2", "--seed", "3", "--out", path("data.csv"), "--labels",
       path("truth.csv"), "--model", path("truth.json")});
    ASSERT_EQ(r.code, kExitOk) << r.err;
  }

  fs::path dir_;
};

TEST_F(CliTest, FitWritesModelAndAssignments)
{
  generate_sidenoise2();
  const CliRun r = cli(
    {"fit", "--input", path("data.csv"), "--k", "2", "--output-model", path("m.json"), "--output-assignments",
     path("a.csv")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto doc = nlohmann::json::parse(read_text_file(path("m.json")));
  EXPECT_EQ(doc["k"], 2);
  EXPECT_EQ(doc["p"], 2);
  EXPECT_EQ(doc["scatters"].size(), 2u);
  EXPECT_TRUE(doc["fit_meta"]["converged"].get<bool>());
  const CsvTable a = read_csv_file(path("a.csv"));
  EXPECT_EQ(a.header, (std::vector<std::string>{"row_index", "label", "outlier_flag", "resp_1", "resp_2"}));
  EXPECT_EQ(a.values.rows(), 1000);
}

TEST_F(CliTest, SameFlagsGiveByteIdenticalOutputs)
{
  generate_sidenoise2();
  for (const char * tag : {"1", "2"}) {
    const CliRun r = cli(
      {"fit", "--input", path("data.csv"), "--k", "2", "--seed", "11", "--output-model",
       path(std::string("m") + tag + ".json"), "--output-assignments", path(std::string("a") + tag + ".csv")});
    ASSERT_EQ(r.code, kExitOk) << r.err;
  }
  EXPECT_EQ(read_text_file(path("m1.json")), read_text_file(path("m2.json")));
  EXPECT_EQ(read_text_file(path("a1.csv")), read_text_file(path("a2.csv")));
}

TEST_F(CliTest, InputErrorsExitWithOne)
{
  generate_sidenoise2();
  EXPECT_EQ(
    cli({"fit", "--input", path("data.csv"), "--k", "0", "--output-model", path("m.json"), "--output-assignments",
         path("a.csv")})
      .code,
    kExitInput);
  EXPECT_EQ(cli({"fit", "--input", path("data.csv"), "--k", "2"}).code, kExitInput);
  EXPECT_EQ(cli({}).code, kExitInput);

  write_text_file(path("bad.csv"), "x1,x2\n1,2\n3,abc\n");
  const CliRun bad = cli(
    {"fit", "--input", path("bad.csv"), "--k", "1", "--output-model", path("m.json"), "--output-assignments",
     path("a.csv")});
  EXPECT_EQ(bad.code, kExitInput);
  EXPECT_NE(bad.err.find("row 3, column 2"), std::string::npos) << bad.err;
}

TEST_F(CliTest, NonConvergenceExitsWithTwoAndStillWrites)
{
  generate_sidenoise2();
  const CliRun r = cli(
    {"fit", "--input", path("data.csv"), "--k", "2", "--max-iter", "1", "--output-model", path("m.json"),
     "--output-assignments", path("a.csv")});
  EXPECT_EQ(r.code, kExitNonConvergence);
  const auto doc = nlohmann::json::parse(read_text_file(path("m.json")));
  EXPECT_FALSE(doc["fit_meta"]["converged"].get<bool>());
  EXPECT_TRUE(fs::exists(path("a.csv")));
}

TEST_F(CliTest, SimulateContaminated)
{
  const CliRun r = cli(
    {"simulate", "--scenario", "sidenoise2", "--reps", "5", "--mc-samples", "2000", "--out", path("sim.csv")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  // The scenario and "mean" cells are not numeric, so read the text directly.
  std::istringstream lines(read_text_file(path("sim.csv")));
  std::string line;
  std::vector<std::string> rows;
  while (std::getline(lines, line)) {
    rows.push_back(line);
  }
  ASSERT_EQ(rows.size(), 7u);
  EXPECT_EQ(rows.front(), "scenario,rep,mcr,kld,kld_stderr,sensitivity");
  const std::string & summary = rows.back();
  EXPECT_EQ(summary.rfind("SideNoise2,mean,", 0), 0u) << summary;
  const double mean_mcr = std::stod(summary.substr(std::string("SideNoise2,mean,").size()));
  EXPECT_GE(mean_mcr, 0.0);
  EXPECT_LE(mean_mcr, 0.02);
}

TEST_F(CliTest, SimulateCleanLeavesSensitivityEmpty)
{
  const CliRun r = cli(
    {"simulate", "--scenario", "sunspot5", "--clean", "--reps", "5", "--mc-samples", "2000", "--out",
     path("sim.csv")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::istringstream lines(read_text_file(path("sim.csv")));
  std::string line;
  std::getline(lines, line);
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    EXPECT_EQ(line.back(), ',') << line;
  }
  EXPECT_EQ(rows, 6);
}

TEST_F(CliTest, SimulateUsageErrors)
{
  EXPECT_EQ(cli({"simulate", "--scenario", "sidenoise2", "--reps", "0", "--out", path("s.csv")}).code, kExitInput);
  EXPECT_EQ(cli({"simulate", "--scenario", "nosuch", "--reps", "1", "--out", path("s.csv")}).code, kExitInput);
}

TEST_F(CliTest, EvalIdenticalAndSwappedLabels)
{
  write_text_file(path("t.csv"), "label\n1\n1\n2\n2\n3\n");
  write_text_file(path("s.csv"), "label\n2\n2\n3\n3\n1\n");
  for (const char * pred : {"t.csv", "s.csv"}) {
    const CliRun r = cli({"eval", "--truth", path("t.csv"), "--pred", path(pred), "--json"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto doc = nlohmann::json::parse(r.out);
    EXPECT_EQ(doc["mcr"].get<double>(), 0.0);
    EXPECT_TRUE(doc["sensitivity"].is_null());
  }
}

TEST_F(CliTest, EvalReportsSensitivityFromFlags)
{
  write_text_file(path("t.csv"), "label\n1\n1\n0\n2\n0\n");
  write_text_file(
    path("p.csv"), "row_index,label,outlier_flag,resp_1,resp_2\n0,1,0,1,0\n1,1,0,1,0\n2,2,1,0,1\n3,2,0,0,1\n4,1,0,1,0\n");
  const CliRun r = cli({"eval", "--truth", path("t.csv"), "--pred", path("p.csv"), "--json"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["sensitivity"].get<double>(), 0.5);
  EXPECT_EQ(doc["mcr"].get<double>(), 0.0);
  EXPECT_EQ(doc["counted"].get<int>(), 3);

  const CliRun table = cli({"eval", "--truth", path("t.csv"), "--pred", path("p.csv")});
  EXPECT_NE(table.out.find("sensitivity  50.00%"), std::string::npos) << table.out;
}

TEST_F(CliTest, EvalKldAndLengthMismatch)
{
  generate_sidenoise2();
  const CliRun f = cli(
    {"fit", "--input", path("data.csv"), "--k", "2", "--output-model", path("m.json"), "--output-assignments",
     path("a.csv")});
  ASSERT_EQ(f.code, kExitOk);
  const CliRun r = cli(
    {"eval", "--truth", path("truth.csv"), "--pred", path("a.csv"), "--true-model", path("truth.json"),
     "--est-model", path("m.json"), "--mc-samples", "5000", "--json"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_LE(doc["mcr"].get<double>(), 0.01);
  EXPECT_GE(doc["sensitivity"].get<double>(), 0.95);
  EXPECT_LT(doc["kld"].get<double>(), 0.2);

  write_text_file(path("short.csv"), "label\n1\n");
  EXPECT_EQ(cli({"eval", "--truth", path("truth.csv"), "--pred", path("short.csv")}).code, kExitInput);
}

}  // namespace
}  // namespace rmbc
