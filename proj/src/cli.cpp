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

#include "rmbc/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "rmbc/benchmark.hpp"
#include "rmbc/core_model.hpp"
#include "rmbc/engine.hpp"
#include "rmbc/error.hpp"
#include "rmbc/evaluation.hpp"
#include "rmbc/io.hpp"
#include "rmbc/scenarios.hpp"

namespace rmbc
{

namespace
{

struct FitArgs
{
  std::string input;
  int k = 0;
  double tol = 1e-4;
  int max_iter = 80;
  std::uint64_t seed = 0;
  double b = 0.5;
  std::string scale_step = "sqrt";
  std::string output_model;
  std::string output_assignments;
};

struct SimulateArgs
{
  std::string scenario;
  bool clean = false;
  int reps = 0;
  std::uint64_t seed = 0;
  std::string out;
  std::size_t mc_samples = 100000;
};

struct EvalArgs
{
  std::string truth;
  std::string pred;
  std::string true_model;
  std::string est_model;
  bool json = false;
  std::size_t mc_samples = 100000;
  std::uint64_t seed = 0;
};

struct GenerateArgs
{
  std::string scenario;
  bool clean = false;
  std::uint64_t seed = 0;
  int rep = 0;
  std::string out;
  std::string labels;
  std::string model;
};

std::string percent(double fraction)
{
  if (std::isnan(fraction)) {
    return "nan";
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", 100.0 * fraction);
  return buf;
}

std::string cell(double v)
{
  return std::isnan(v) ? std::string("nan") : format_number(v);
}

ScenarioSpec scenario_from(const std::string & name, bool clean)
{
  const auto parsed = parse_scenario_name(name);
  if (!parsed) {
    throw Error(
      ErrorCode::kInvalidArgument, "unknown scenario '" + name +
                                     "' (expected SunSpot5, SideNoise2, SideNoise2H, SideNoise3, "
                                     "RandomScatter or RandomScatterH)");
  }
  return ScenarioSpec::make(*parsed, !clean);
}

// Integer labels from the "label" column, or the first column without one.
std::vector<int> read_labels(const CsvTable & table, const std::string & path)
{
  Eigen::Index col = 0;
  for (std::size_t j = 0; j < table.header.size(); ++j) {
    if (table.header[j] == "label") {
      col = static_cast<Eigen::Index>(j);
    }
  }
  if (table.values.cols() == 0) {
    throw Error(ErrorCode::kParseError, path + " holds no label column");
  }
  std::vector<int> labels;
  for (Eigen::Index i = 0; i < table.values.rows(); ++i) {
    const double v = table.values(i, col);
    if (v != std::floor(v) || v < 0.0) {
      throw Error(ErrorCode::kParseError, path + ": label at data row " + std::to_string(i + 1) + " is not a nonnegative integer");
    }
    labels.push_back(static_cast<int>(v));
  }
  return labels;
}

std::optional<std::vector<bool>> read_flags(const CsvTable & table)
{
  for (std::size_t j = 0; j < table.header.size(); ++j) {
    if (table.header[j] == "outlier_flag") {
      std::vector<bool> flags;
      for (Eigen::Index i = 0; i < table.values.rows(); ++i) {
        flags.push_back(table.values(i, static_cast<Eigen::Index>(j)) != 0.0);
      }
      return flags;
    }
  }
  return std::nullopt;
}

int cmd_fit(const FitArgs & a, std::ostream & out)
{
  if (a.k < 1) {
    throw Error(ErrorCode::kInvalidArgument, "--k must be at least 1");
  }
  CsvTable table = read_csv_file(a.input);
  const Dataset data = validate_dataset(std::move(table.values));
  FitConfig config;
  config.k = a.k;
  config.delta_tol = a.tol;
  config.max_iter = a.max_iter;
  config.seed = a.seed;
  config.b = a.b;
  config.scale_step = a.scale_step == "linear" ? ScaleStep::kLinear : ScaleStep::kSquareRoot;
  const FitResult result = fit(data, config);

  write_text_file(
    a.output_model,
    serialize_model(result.model, FitMeta{a.seed, result.iterations, result.converged, a.tol}));

  std::ostringstream csv;
  csv << "row_index,label,outlier_flag";
  for (int j = 1; j <= a.k; ++j) {
    csv << ",resp_" << j;
  }
  csv << '\n';
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    const auto idx = static_cast<std::size_t>(i);
    csv << i << ',' << result.labels[idx] << ',' << (result.outlier_flags[idx] ? 1 : 0);
    for (int j = 0; j < a.k; ++j) {
      csv << ',' << format_number(result.responsibilities(i, j));
    }
    csv << '\n';
  }
  write_text_file(a.output_assignments, csv.str());

  std::size_t flagged = 0;
  for (bool f : result.outlier_flags) {
    flagged += f ? 1 : 0;
  }
  out << "fitted K=" << a.k << " on n=" << data.n() << ", p=" << data.p() << " in " << result.iterations
      << " iterations (" << (result.converged ? "converged" : "NOT converged") << "); " << flagged
      << " points flagged as outliers\n";
  return result.converged ? kExitOk : kExitNonConvergence;
}

int cmd_simulate(const SimulateArgs & a, std::ostream & out)
{
  const ScenarioSpec spec = scenario_from(a.scenario, a.clean);
  if (a.reps < 1) {
    throw Error(ErrorCode::kInvalidArgument, "--reps must be at least 1");
  }
  ReplicationOptions options;
  options.mc_samples = a.mc_samples;
  std::vector<ReplicationResult> rows;
  const std::string name(to_string(spec.name));
  std::ostringstream csv;
  csv << "scenario,rep,mcr,kld,kld_stderr,sensitivity\n";
  out << "scenario " << name << (spec.contaminated ? "" : " (clean)") << ", " << a.reps << " replications\n";
  out << "rep   MCR%    KLD       sens%   iters\n";
  for (int rep = 0; rep < a.reps; ++rep) {
    const ReplicationResult r = run_replication(spec, a.seed, rep, options);
    rows.push_back(r);
    csv << name << ',' << rep << ',' << cell(r.mcr) << ',' << cell(r.kld) << ',' << cell(r.kld_stderr) << ','
        << (r.sensitivity ? cell(*r.sensitivity) : std::string()) << '\n';
    char line[160];
    std::snprintf(
      line, sizeof(line), "%-5d %-7s %-9.4f %-7s %d%s%s\n", rep, percent(r.mcr).c_str(), r.kld,
      r.sensitivity ? percent(*r.sensitivity).c_str() : "-", r.iterations, r.converged ? "" : " (not converged)",
      r.failed ? " FAILED" : "");
    out << line;
  }
  const SimulationSummary s = summarize(rows);
  csv << name << ",mean," << cell(s.mcr) << ',' << cell(s.kld) << ',' << cell(s.kld_stderr) << ','
      << (s.sensitivity ? cell(*s.sensitivity) : std::string()) << '\n';
  write_text_file(a.out, csv.str());
  out << "mean  MCR " << percent(s.mcr) << "%  KLD " << cell(s.kld) << " (stderr " << cell(s.kld_stderr) << ")";
  if (s.sensitivity) {
    out << "  sensitivity " << percent(*s.sensitivity) << "%";
  }
  out << '\n';
  if (s.failed > 0 || s.not_converged > 0) {
    out << s.failed << " failed, " << s.not_converged << " not converged\n";
  }
  return kExitOk;
}

int cmd_eval(const EvalArgs & a, std::ostream & out)
{
  const CsvTable truth_table = read_csv_file(a.truth);
  const CsvTable pred_table = read_csv_file(a.pred);
  const std::vector<int> truth = read_labels(truth_table, a.truth);
  const std::vector<int> pred = read_labels(pred_table, a.pred);
  if (truth.size() != pred.size()) {
    throw Error(
      ErrorCode::kLengthMismatch, "truth has " + std::to_string(truth.size()) + " rows but pred has " +
                                    std::to_string(pred.size()));
  }
  EvalReport report;
  report.mcr = mcr(truth, pred);

  const auto flags = read_flags(pred_table);
  std::vector<bool> true_outliers;
  for (int t : truth) {
    true_outliers.push_back(t == kOutlierLabel);
  }
  if (flags && std::find(true_outliers.begin(), true_outliers.end(), true) != true_outliers.end()) {
    report.sensitivity = sensitivity(true_outliers, *flags);
  }
  if (!a.true_model.empty() != !a.est_model.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "--true-model and --est-model must be given together");
  }
  if (!a.true_model.empty()) {
    const ModelDocument t = parse_model(read_text_file(a.true_model));
    const ModelDocument e = parse_model(read_text_file(a.est_model));
    report.kld = mixture_kld(t.model, e.model, a.mc_samples, a.seed);
  }

  if (a.json) {
    nlohmann::json doc;
    doc["mcr"] = report.mcr.rate;
    doc["mismatches"] = report.mcr.mismatches;
    doc["counted"] = report.mcr.counted;
    doc["matching"] = report.mcr.matching;
    doc["sensitivity"] = nullptr;
    doc["kld"] = nullptr;
    doc["kld_stderr"] = nullptr;
    if (report.sensitivity.has_value()) {
      doc["sensitivity"] = report.sensitivity.value();
    }
    if (report.kld.has_value()) {
      doc["kld"] = report.kld.value().value;
      doc["kld_stderr"] = report.kld.value().std_error;
    }
    out << doc.dump(2) << '\n';
    return kExitOk;
  }
  out << "MCR          " << percent(report.mcr.rate) << "% (" << report.mcr.mismatches << " of "
      << report.mcr.counted << ")\n";
  out << "matching    ";
  for (std::size_t j = 0; j < report.mcr.matching.size(); ++j) {
    out << ' ' << (j + 1) << "->" << report.mcr.matching[j];
  }
  out << '\n';
  if (report.sensitivity) {
    out << "sensitivity  " << percent(*report.sensitivity) << "%\n";
  }
  if (report.kld) {
    out << "KLD          " << cell(report.kld->value) << " (stderr " << cell(report.kld->std_error) << ")\n";
  }
  return kExitOk;
}

int cmd_generate(const GenerateArgs & a, std::ostream & out)
{
  const ScenarioSpec spec = scenario_from(a.scenario, a.clean);
  const ScenarioSample sample = generate(spec, a.seed, static_cast<std::uint64_t>(a.rep));
  const RowMatrix & x = sample.data.observations();
  std::ostringstream csv;
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    csv << (j ? "," : "") << 'x' << (j + 1);
  }
  csv << '\n';
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      csv << (j ? "," : "") << format_number(x(i, j));
    }
    csv << '\n';
  }
  write_text_file(a.out, csv.str());
  if (!a.labels.empty()) {
    std::ostringstream lab;
    lab << "label\n";
    for (int l : *sample.data.true_labels()) {
      lab << l << '\n';
    }
    write_text_file(a.labels, lab.str());
  }
  if (!a.model.empty()) {
    write_text_file(a.model, serialize_model(sample.truth));
  }
  out << "wrote " << x.rows() << " rows of " << to_string(spec.name) << " to " << a.out << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string> & args, std::ostream & out, std::ostream & err)
{
  CLI::App app{"Robust model-based clustering of Gaussian mixtures", "rmbc"};
  app.require_subcommand(1);

  FitArgs fit_args;
  auto * fit_cmd = app.add_subcommand("fit", "Fit a robust K-component mixture to a numeric CSV");
  fit_cmd->add_option("--input", fit_args.input, "Data CSV (one row per observation)")->required();
  fit_cmd->add_option("--k", fit_args.k, "Number of clusters")->required();
  fit_cmd->add_option("--tol", fit_args.tol, "Stopping tolerance delta");
  fit_cmd->add_option("--max-iter", fit_args.max_iter, "Iteration budget");
  fit_cmd->add_option("--seed", fit_args.seed, "Seed for the center initializer");
  fit_cmd->add_option("--b", fit_args.b, "Breakdown parameter b in (0, 0.5]");
  fit_cmd->add_option("--scale-step", fit_args.scale_step, "s* update: sqrt (default) or linear")
    ->check(CLI::IsMember({"sqrt", "linear"}));
  fit_cmd->add_option("--output-model", fit_args.output_model, "Model JSON path")->required();
  fit_cmd->add_option("--output-assignments", fit_args.output_assignments, "Assignments CSV path")->required();

  SimulateArgs sim_args;
  auto * sim_cmd = app.add_subcommand("simulate", "Run replications of a benchmark scenario");
  sim_cmd->add_option("--scenario", sim_args.scenario, "Scenario name")->required();
  sim_cmd->add_flag("--clean", sim_args.clean, "Use the uncontaminated variant");
  sim_cmd->add_option("--reps", sim_args.reps, "Number of replications")->required();
  sim_cmd->add_option("--seed", sim_args.seed, "Base seed");
  sim_cmd->add_option("--out", sim_args.out, "Results CSV path")->required();
  sim_cmd->add_option("--mc-samples", sim_args.mc_samples, "Monte Carlo draws for the KLD");

  EvalArgs eval_args;
  auto * eval_cmd = app.add_subcommand("eval", "Score predicted labels against ground truth");
  eval_cmd->add_option("--truth", eval_args.truth, "Truth labels CSV (0 marks outliers)")->required();
  eval_cmd->add_option("--pred", eval_args.pred, "Predicted labels or assignments CSV")->required();
  eval_cmd->add_option("--true-model", eval_args.true_model, "Generating model JSON");
  eval_cmd->add_option("--est-model", eval_args.est_model, "Fitted model JSON");
  eval_cmd->add_flag("--json", eval_args.json, "Print JSON instead of a table");
  eval_cmd->add_option("--mc-samples", eval_args.mc_samples, "Monte Carlo draws for the KLD");
  eval_cmd->add_option("--seed", eval_args.seed, "Monte Carlo seed");

  GenerateArgs gen_args;
  auto * gen_cmd = app.add_subcommand("generate", "Write one scenario replication as CSV");
  gen_cmd->add_option("--scenario", gen_args.scenario, "Scenario name")->required();
  gen_cmd->add_flag("--clean", gen_args.clean, "Use the uncontaminated variant");
  gen_cmd->add_option("--seed", gen_args.seed, "Base seed");
  gen_cmd->add_option("--rep", gen_args.rep, "Replication index");
  gen_cmd->add_option("--out", gen_args.out, "Data CSV path")->required();
  gen_cmd->add_option("--labels", gen_args.labels, "Truth labels CSV path");
  gen_cmd->add_option("--model", gen_args.model, "Generating model JSON path");

  std::vector<const char *> argv{"rmbc"};
  for (const std::string & a : args) {
    argv.push_back(a.c_str());
  }
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError & e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }

  try {
    if (*fit_cmd) {
      return cmd_fit(fit_args, out);
    }
    if (*sim_cmd) {
      return cmd_simulate(sim_args, out);
    }
    if (*eval_cmd) {
      return cmd_eval(eval_args, out);
    }
    return cmd_generate(gen_args, out);
  } catch (const CollapsedClusterError & e) {
    err << "error: cluster " << e.cluster() << ": " << e.what() << '\n';
    return kExitInput;
  } catch (const Error & e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
}

}  // namespace rmbc
