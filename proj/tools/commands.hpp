/*
   Copyright 2026 The cpa Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <filesystem>
#include <memory>
#include <optional>

#include "cpa/automaton.hpp"
#include "cpa/marginals.hpp"
#include "cpa/oracle.hpp"
#include "run_config.hpp"

namespace cpa::cli {

struct BuildResult {
  std::shared_ptr<const LocalFunction> f0;
  std::uint64_t seed = 0;
  bool seed_generated = false;
  double seconds = 0.0;
};

/// Estimates f0 on V~ and composes it to V = V~ + W when W != {0}.
BuildResult build_table(const RunConfig& config, int workers);

/// Throws InvalidArgument when `f0` was not built for `config`.
void check_table(const RunConfig& config, const LocalFunction& f0);

struct RunResult {
  MarginalSeries marginals;
  Trajectory trajectory;
  double seconds = 0.0;
};

/// Evolves the automaton and collects site marginals at the report steps.
RunResult run_automaton(const RunConfig& config, std::shared_ptr<const LocalFunction> f0, int workers);

struct OracleResult {
  MarginalSeries marginals;
  std::uint64_t seed = 0;
  bool seed_generated = false;
  double seconds = 0.0;
};

/// Global Monte Carlo (kind mc) or transfer-operator (kind transfer) reference.
OracleResult run_oracle(const RunConfig& config, int workers);

/// Shape of the symbols used in a marginal CSV file (largest index + 1 per dimension).
std::vector<std::size_t> infer_cells(const std::filesystem::path& path);

/// Reads two marginal CSV files and compares them, optionally after projecting
/// every site marginal onto state dimension `dimension`.
MarginalComparison compare_files(const std::filesystem::path& a, const std::filesystem::path& b,
                                 std::optional<std::size_t> dimension = std::nullopt);

/// Projects every site marginal of `series` onto one state dimension.
MarginalSeries project_series(const MarginalSeries& series, std::size_t dimension);

struct CommandOptions {
  int workers = 0;
  std::optional<std::filesystem::path> table;
  std::optional<std::filesystem::path> output;
  std::optional<std::filesystem::path> report;
};

/// Subcommands; each writes its files and prints a short summary to stdout.
void cmd_build(const RunConfig& config, const CommandOptions& options);
void cmd_run(const RunConfig& config, const CommandOptions& options);
void cmd_oracle(const RunConfig& config, const CommandOptions& options);
void cmd_compare(const std::filesystem::path& a, const std::filesystem::path& b,
                 std::optional<std::size_t> dimension, const std::optional<std::filesystem::path>& json_out);

}  // namespace cpa::cli
