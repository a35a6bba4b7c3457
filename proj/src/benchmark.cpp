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

#include "rmbc/benchmark.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "rmbc/engine.hpp"
#include "rmbc/error.hpp"
#include "rmbc/evaluation.hpp"
#include "rmbc/random.hpp"

namespace rmbc
{

namespace
{

constexpr std::uint64_t kKldSalt = 0x6b6c645f73616c74ULL;

}  // namespace

std::uint64_t replication_fit_seed(std::uint64_t seed, int rep)
{
  return splitmix64(splitmix64(seed) ^ static_cast<std::uint64_t>(rep));
}

ReplicationResult run_replication(
  const ScenarioSpec & spec, std::uint64_t seed, int rep, const ReplicationOptions & options)
{
  const auto start = std::chrono::steady_clock::now();
  const ScenarioSample sample = generate(spec, seed, static_cast<std::uint64_t>(rep));
  FitConfig config;
  config.k = spec.k;
  config.delta_tol = options.delta_tol;
  config.max_iter = options.max_iter;
  config.seed = replication_fit_seed(seed, rep);

  ReplicationResult row;
  row.rep = rep;
  std::optional<FitResult> result;
  for (int attempt = 0; attempt < 2 && !result; ++attempt) {
    try {
      result = fit(sample.data, config);
    } catch (const Error &) {
      config.seed = splitmix64(config.seed);
    }
  }
  if (!result) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    row.failed = true;
    row.mcr = row.kld = row.kld_stderr = nan;
    if (spec.outlier_count() > 0) {
      row.sensitivity = nan;
    }
  } else {
    row.converged = result->converged;
    row.iterations = result->iterations;
    row.mcr = mcr(*sample.data.true_labels(), result->labels).rate;
    const KldEstimate kld =
      mixture_kld(sample.truth, result->model, options.mc_samples, splitmix64(seed ^ kKldSalt) + static_cast<std::uint64_t>(rep));
    row.kld = kld.value;
    row.kld_stderr = kld.std_error;
    if (spec.outlier_count() > 0) {
      row.sensitivity = sensitivity(*sample.data.outlier_mask(), result->outlier_flags);
    }
  }
  row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return row;
}

SimulationSummary summarize(const std::vector<ReplicationResult> & rows)
{
  SimulationSummary s;
  int used = 0;
  double sens = 0.0;
  bool any_sens = false;
  for (const ReplicationResult & r : rows) {
    if (r.failed) {
      ++s.failed;
      continue;
    }
    s.not_converged += r.converged ? 0 : 1;
    ++used;
    s.mcr += r.mcr;
    s.kld += r.kld;
    s.kld_stderr += r.kld_stderr * r.kld_stderr;
    if (r.sensitivity) {
      any_sens = true;
      sens += *r.sensitivity;
    }
  }
  if (used == 0) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    s.mcr = s.kld = s.kld_stderr = nan;
    return s;
  }
  const double n = static_cast<double>(used);
  s.mcr /= n;
  s.kld /= n;
  // standard error of the mean of independent estimates
  s.kld_stderr = std::sqrt(s.kld_stderr) / n;
  if (any_sens) {
    s.sensitivity = sens / n;
  }
  return s;
}

}  // namespace rmbc
