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

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"
#include "cpa/error.hpp"

namespace {

// Exit codes.
constexpr int kOk = 0;
constexpr int kConfig = 2;
constexpr int kNumeric = 3;
constexpr int kIo = 4;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cellular probabilistic automata: build local functions, run, compare against references"};
  app.require_subcommand(1);

  int workers = 0;
  app.add_option("--workers", workers, "Cap on worker threads (0: all available)")->check(CLI::NonNegativeNumber);

  std::string config_path;
  std::optional<std::string> table, output, report;

  auto* build = app.add_subcommand("build", "Estimate the local function f0 and write the table");
  build->add_option("config", config_path, "Run configuration")->required()->check(CLI::ExistingFile);
  build->add_option("--table", table, "Table path (overrides [output] table; .json selects JSON)");
  build->add_option("--report", report, "Build report path");

  auto* run = app.add_subcommand("run", "Evolve the automaton and write site marginals");
  run->add_option("config", config_path, "Run configuration")->required()->check(CLI::ExistingFile);
  run->add_option("--table", table, "Table to load");
  run->add_option("--output", output, "Marginals CSV path");
  run->add_option("--summary", report, "Summary JSON path");

  auto* oracle = app.add_subcommand("oracle", "Compute the Monte Carlo or transfer-operator reference");
  oracle->add_option("config", config_path, "Run configuration")->required()->check(CLI::ExistingFile);
  oracle->add_option("--output", output, "Marginals CSV path");

  std::string file_a, file_b;
  std::optional<std::size_t> dimension;
  std::optional<std::string> json_out;
  auto* compare = app.add_subcommand("compare", "Per-site L1 distances between two marginal CSV files");
  compare->add_option("a", file_a, "First CSV")->required()->check(CLI::ExistingFile);
  compare->add_option("b", file_b, "Second CSV")->required()->check(CLI::ExistingFile);
  compare->add_option("--dimension", dimension, "Project onto one state dimension first");
  compare->add_option("--json", json_out, "Write the full comparison as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    cpa::cli::CommandOptions options;
    options.workers = workers;
    if (table) options.table = *table;
    if (output) options.output = *output;
    if (report) options.report = *report;
    if (*compare) {
      std::optional<std::filesystem::path> json;
      if (json_out) json = *json_out;
      cpa::cli::cmd_compare(file_a, file_b, dimension, json);
      return kOk;
    }
    const cpa::cli::RunConfig config = cpa::cli::load_config(config_path);
    if (*build) cpa::cli::cmd_build(config, options);
    if (*run) cpa::cli::cmd_run(config, options);
    if (*oracle) cpa::cli::cmd_oracle(config, options);
    return kOk;
  } catch (const cpa::cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const cpa::InvalidArgument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const cpa::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIo;
  } catch (const cpa::FormatError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIo;
  } catch (const cpa::Error& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kNumeric;
  } catch (const std::bad_alloc&) {
    std::cerr << "numeric failure: out of memory\n";
    return kNumeric;
  }
}
