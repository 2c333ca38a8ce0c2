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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cpa/automaton.hpp"
#include "cpa/models.hpp"
#include "cpa/partition.hpp"
#include "cpa/translator.hpp"
#include "ini.hpp"

namespace cpa::cli {

/// Distribution of one site's state. Text forms:
///   cell 1:4              the cell with multi-index (1, 4)
///   value 0, 0            an exact state
///   box 0.4, 80 .. 1, 100 uniform on a box
///   cells 2:4=0.5, 3:4=0.5  weighted cells, uniform inside each
struct SiteLaw {
  enum class Kind { Cell, Value, Box, Cells };

  Kind kind = Kind::Cell;
  Symbol cell = 0;
  std::vector<double> value;
  cpa::Box box;
  std::vector<std::pair<Symbol, double>> cells;

  /// Coarse density over window {0}.
  SparseDensity density(const Partition& partition) const;
  /// One draw of the continuous state.
  void sample(const Partition& partition, Rng& rng, std::span<double> out) const;
};

struct ModelConfig {
  std::string name;
  std::size_t dimension = 1;  // identity
  double tau = 1.0;           // identity, advection
  double divisor = 3.75;      // averaging
  double speed = 0.0;         // advection
  double dx = 1.0;            // advection
  ArsenateParams arsenate;
};

struct BoundaryConfig {
  BoundarySpec::Kind kind = BoundarySpec::Kind::Deterministic;
  std::vector<Symbol> left_symbols;   // deterministic, one per K_l site
  std::vector<Symbol> right_symbols;  // deterministic, one per K_r site
  SiteLaw left;                       // white noise, i.i.d. over K_l sites
  SiteLaw right;
};

struct InitialConfig {
  std::vector<Symbol> symbols;  // one per site; empty when `law` is used
  SiteLaw law;                  // every site independently
};

struct OracleConfig {
  enum class Kind { MonteCarlo, Transfer };
  Kind kind = Kind::MonteCarlo;
  std::uint64_t runs = 1000;
  std::optional<std::uint64_t> seed;
};

struct OutputConfig {
  std::filesystem::path table = "f0.bin";
  std::filesystem::path report = "build_report.json";
  std::filesystem::path marginals = "marginals.csv";
  std::filesystem::path summary = "summary.json";
  std::filesystem::path oracle = "oracle.csv";
};

/// All parameters of a build / run / oracle session.
struct RunConfig {
  std::string source;
  ModelConfig model;
  PartitionPtr partition;
  Interval neighborhood;        // U, from the model
  Interval pattern;             // V = V~ + W
  Interval estimated_pattern;   // V~, the window f0 is sampled on
  Interval composition{0, 0};   // W
  std::size_t sites = 0;
  SamplingPlan plan;
  std::optional<std::uint64_t> sampling_seed;
  BoundaryConfig boundary;
  InitialConfig initial;
  std::size_t steps = 0;
  double threshold = 0.0;
  std::vector<std::size_t> report_steps;  // empty: every step
  OracleConfig oracle;
  OutputConfig output;
};

RunConfig parse_config(const IniFile& ini);
RunConfig load_config(const std::filesystem::path& path);

FlowMapPtr make_flow(const ModelConfig& model);

/// Parses "1:4" (multi-index) or a flat symbol number.
Symbol parse_symbol(const std::string& text, const Partition& partition);
std::string format_symbol(Symbol s, const Partition& partition);

/// White-noise laws become product densities over K_l = {1..r} and K_r = {m-s+1..m}.
BoundarySpec make_boundary(const RunConfig& config);

/// Coarse initial density on I~ for `automaton`.
DeBruijnDensity make_initial(const RunConfig& config, const Automaton& automaton);
/// Global initial density over {1..m}.
SparseDensity make_initial_global(const RunConfig& config);

/// Draws the initial continuous state (m x n values).
void sample_initial(const RunConfig& config, Rng& rng, std::span<double> state);
/// Overwrites the K sites with a boundary draw.
void sample_boundary(const RunConfig& config, Rng& rng, std::span<double> state);

/// Fresh seed from the system entropy source.
std::uint64_t generate_seed();

}  // namespace cpa::cli
