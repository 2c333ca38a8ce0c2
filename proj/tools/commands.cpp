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

#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cpa/error.hpp"
#include "cpa/table_io.hpp"
#include "json.hpp"

namespace cpa::cli {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

nlohmann::json interval_json(Interval j) { return nlohmann::json::array({j.lo, j.hi}); }

void write_json(const nlohmann::json& doc, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << doc.dump(2) << '\n';
  if (!out) throw IoError("write failed for " + path.string());
}

std::vector<std::size_t> all_steps(std::size_t steps) {
  std::vector<std::size_t> out(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) out[k] = k;
  return out;
}

std::vector<int> all_sites(std::size_t m) {
  std::vector<int> out(m);
  for (std::size_t j = 0; j < m; ++j) out[j] = static_cast<int>(j + 1);
  return out;
}

// Keeps the rows of `series` whose step is listed in `steps`.
MarginalSeries select_steps(const MarginalSeries& series, const std::vector<std::size_t>& steps) {
  if (steps.empty()) return series;
  MarginalSeries out;
  out.cells_per_dim = series.cells_per_dim;
  out.sites = series.sites;
  for (std::size_t k = 0; k < series.steps.size(); ++k) {
    if (std::binary_search(steps.begin(), steps.end(), series.steps[k])) {
      out.steps.push_back(series.steps[k]);
      out.values.push_back(series.values[k]);
    }
  }
  return out;
}

// Site marginals of a global density over {1..m}.
std::vector<SparseDensity> global_site_marginals(const SparseDensity& g, std::size_t m) {
  std::vector<SparseDensity> out;
  for (int j = 1; j <= static_cast<int>(m); ++j) out.push_back(marginal(g, Interval::single(j)).shifted(-j));
  return out;
}

}  // namespace

BuildResult build_table(const RunConfig& c, int workers) {
  BuildResult out;
  out.seed_generated = !c.sampling_seed.has_value();
  out.seed = c.sampling_seed ? *c.sampling_seed : generate_seed();
  const auto start = Clock::now();
  const FlowMapPtr flow = make_flow(c.model);
  const EstimateOptions options{workers};
  LocalFunction small = estimate_f0(*flow, c.partition, c.estimated_pattern, c.plan, out.seed, options);
  if (c.composition == Interval{0, 0}) {
    out.f0 = std::make_shared<const LocalFunction>(std::move(small));
  } else {
    out.f0 = std::make_shared<const LocalFunction>(compose_f0(small, c.composition, options));
  }
  out.seconds = seconds_since(start);
  return out;
}

void check_table(const RunConfig& c, const LocalFunction& f0) {
  if (f0.partition() != *c.partition) throw InvalidArgument("table partition differs from the config partition");
  if (f0.neighborhood() != c.neighborhood) {
    throw InvalidArgument("table neighbourhood " + to_string(f0.neighborhood()) + " differs from the model's " +
                          to_string(c.neighborhood));
  }
  if (f0.pattern_window() != c.pattern) {
    throw InvalidArgument("table pattern window " + to_string(f0.pattern_window()) + " differs from V = " +
                          to_string(c.pattern));
  }
  if (f0.meta().model != c.model.name) {
    throw InvalidArgument("table was built for model '" + f0.meta().model + "', config selects '" + c.model.name +
                          "'");
  }
}

RunResult run_automaton(const RunConfig& c, std::shared_ptr<const LocalFunction> f0, int workers) {
  check_table(c, *f0);
  const auto start = Clock::now();
  RunResult out;
  const Automaton automaton(c.sites, std::move(f0), make_boundary(c));
  const DeBruijnDensity g0 = make_initial(c, automaton);
  out.trajectory = automaton.evolve(g0, c.steps, c.threshold, {}, StepOptions{workers});
  out.marginals.cells_per_dim = c.partition->cells_per_dim();
  out.marginals.sites = all_sites(c.sites);
  const auto steps = c.report_steps.empty() ? all_steps(c.steps) : c.report_steps;
  for (std::size_t k : steps) {
    out.marginals.steps.push_back(k);
    out.marginals.values.push_back(automaton.site_marginals(out.trajectory.states[k]));
  }
  out.seconds = seconds_since(start);
  return out;
}

OracleResult run_oracle(const RunConfig& c, int workers) {
  OracleResult out;
  const auto start = Clock::now();
  const FlowMapPtr flow = make_flow(c.model);
  if (c.oracle.kind == OracleConfig::Kind::MonteCarlo) {
    out.seed_generated = !c.oracle.seed.has_value();
    out.seed = c.oracle.seed ? *c.oracle.seed : generate_seed();
    McOptions options{c.oracle.runs, c.steps, out.seed, workers};
    auto series = mc_reference(
        *flow, c.sites, [&](Rng& rng, std::span<double> s) { sample_initial(c, rng, s); },
        [&](std::size_t, Rng& rng, std::span<double> s) { sample_boundary(c, rng, s); }, {c.partition}, options);
    out.marginals = select_steps(series.front(), c.report_steps);
  } else {
    out.seed_generated = !c.sampling_seed.has_value();
    out.seed = c.sampling_seed ? *c.sampling_seed : generate_seed();
    const GlobalTransition pb = build_PB(*flow, c.partition, c.sites, c.plan, out.seed, EstimateOptions{workers});
    const BoundarySpec boundary = make_boundary(c);
    const int r = -c.neighborhood.lo, s = c.neighborhood.hi;
    const std::size_t e = c.partition->symbol_count();
    // The boundary is redrawn independently before every step.
    auto with_boundary = [&](const SparseDensity& g) {
      std::vector<SparseDensity> factors;
      const bool fixed = boundary.kind == BoundarySpec::Kind::Deterministic;
      if (r > 0) {
        factors.push_back(fixed ? SparseDensity::point_mass({1, r}, e, encode_pattern(boundary.rho_left, e))
                                : boundary.left);
      }
      factors.push_back(marginal(g, {1 + r, static_cast<int>(c.sites) - s}));
      if (s > 0) {
        const Interval kr{static_cast<int>(c.sites) - s + 1, static_cast<int>(c.sites)};
        factors.push_back(fixed ? SparseDensity::point_mass(kr, e, encode_pattern(boundary.rho_right, e))
                                : boundary.right);
      }
      return product(factors);
    };
    MarginalSeries series;
    series.cells_per_dim = c.partition->cells_per_dim();
    series.sites = all_sites(c.sites);
    SparseDensity g = make_initial_global(c);
    for (std::size_t k = 0; k <= c.steps; ++k) {
      if (k > 0) g = apply_PB(pb, with_boundary(g));
      series.steps.push_back(k);
      series.values.push_back(global_site_marginals(g, c.sites));
    }
    out.marginals = select_steps(series, c.report_steps);
  }
  out.seconds = seconds_since(start);
  return out;
}

std::vector<std::size_t> infer_cells(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  std::vector<std::size_t> cells;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no <= 2) continue;
    std::istringstream fields(line);
    std::string step, site, symbol;
    std::getline(fields, step, ',');
    std::getline(fields, site, ',');
    std::getline(fields, symbol, ',');
    if (symbol.empty()) continue;
    std::vector<std::size_t> index;
    std::istringstream parts(symbol);
    std::string part;
    while (std::getline(parts, part, ':')) {
      try {
        index.push_back(std::stoul(part));
      } catch (const std::exception&) {
        throw FormatError(path.string() + ":" + std::to_string(line_no) + ": bad symbol '" + symbol + "'");
      }
    }
    if (cells.empty()) cells.assign(index.size(), 0);
    if (index.size() != cells.size()) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": symbol dimension changes");
    }
    for (std::size_t d = 0; d < index.size(); ++d) cells[d] = std::max(cells[d], index[d] + 1);
  }
  if (cells.empty()) throw FormatError(path.string() + ": no symbols found");
  return cells;
}

MarginalSeries project_series(const MarginalSeries& series, std::size_t dimension) {
  if (dimension >= series.cells_per_dim.size()) throw InvalidArgument("projection dimension out of range");
  MarginalSeries out;
  out.cells_per_dim = {series.cells_per_dim[dimension]};
  out.steps = series.steps;
  out.sites = series.sites;
  for (const auto& row : series.values) {
    std::vector<SparseDensity> projected;
    for (const auto& d : row) projected.push_back(dimension_marginal(d, series.cells_per_dim, dimension));
    out.values.push_back(std::move(projected));
  }
  return out;
}

MarginalComparison compare_files(const std::filesystem::path& a, const std::filesystem::path& b,
                                 std::optional<std::size_t> dimension) {
  auto cells_a = infer_cells(a);
  auto cells_b = infer_cells(b);
  if (cells_a.size() != cells_b.size()) throw FormatError("the two files use symbols of different dimension");
  for (std::size_t d = 0; d < cells_a.size(); ++d) cells_a[d] = std::max(cells_a[d], cells_b[d]);
  MarginalSeries sa = read_marginals_csv(a, cells_a);
  MarginalSeries sb = read_marginals_csv(b, cells_a);
  if (dimension) {
    sa = project_series(sa, *dimension);
    sb = project_series(sb, *dimension);
  }
  return compare_marginals(sa, sb);
}

void cmd_build(const RunConfig& c, const CommandOptions& options) {
  const BuildResult built = build_table(c, options.workers);
  const auto table_path = options.table.value_or(c.output.table);
  const auto report_path = options.report.value_or(c.output.report);
  save_f0(*built.f0, table_path);
  const LocalFunction& f0 = *built.f0;
  const std::uint64_t rows = f0.table().preimage_count();
  const std::uint64_t explored = f0.table().explored_count();
  nlohmann::json report = {
      {"format", "cpa-build-report"},
      {"version", 1},
      {"config", c.source},
      {"table", table_path.string()},
      {"model", c.model.name},
      {"cells_per_dim", c.partition->cells_per_dim()},
      {"U", interval_json(c.neighborhood)},
      {"V", interval_json(c.pattern)},
      {"V_tilde", interval_json(c.estimated_pattern)},
      {"W", interval_json(c.composition)},
      {"sampling", to_string(c.plan)},
      {"seeds", {{"sampling", built.seed}, {"sampling_generated", built.seed_generated}}},
      {"rows", rows},
      {"explored", explored},
      {"unexplored", rows - explored},
      {"nonzeros", f0.table().nonzeros()},
      {"image_values", f0.meta().image_values},
      {"clamped_values", f0.meta().clamped_values},
      {"clamp_rate", f0.meta().clamp_fraction()},
      {"wall_seconds", built.seconds},
  };
  write_json(report, report_path);
  std::cout << "table " << table_path.string() << ": " << explored << " of " << rows << " rows explored, clamp rate "
            << f0.meta().clamp_fraction() << ", seed " << built.seed << (built.seed_generated ? " (generated)" : "")
            << ", " << built.seconds << " s\n";
}

void cmd_run(const RunConfig& c, const CommandOptions& options) {
  const auto table_path = options.table.value_or(c.output.table);
  const auto marginals_path = options.output.value_or(c.output.marginals);
  const auto summary_path = options.report.value_or(c.output.summary);
  auto f0 = std::make_shared<const LocalFunction>(load_f0(table_path));
  const RunResult result = run_automaton(c, std::move(f0), options.workers);
  write_marginals_csv(result.marginals, marginals_path);
  nlohmann::json per_step = nlohmann::json::array();
  for (std::size_t k = 0; k < result.trajectory.stats.size(); ++k) {
    const StepStats& s = result.trajectory.stats[k];
    per_step.push_back({{"step", k + 1},
                        {"retained_mass", s.min_retained_mass},
                        {"total_support", s.total_support},
                        {"max_support", s.max_support}});
  }
  nlohmann::json summary = {
      {"format", "cpa-run-summary"},
      {"version", 1},
      {"config", c.source},
      {"table", table_path.string()},
      {"marginals", marginals_path.string()},
      {"sites", c.sites},
      {"steps", c.steps},
      {"threshold", c.threshold},
      {"per_step", per_step},
      {"wall_seconds", result.seconds},
  };
  write_json(summary, summary_path);
  std::cout << "run: " << c.steps << " steps on " << c.sites << " sites, marginals in " << marginals_path.string()
            << ", " << result.seconds << " s\n";
}

void cmd_oracle(const RunConfig& c, const CommandOptions& options) {
  const auto path = options.output.value_or(c.output.oracle);
  const OracleResult result = run_oracle(c, options.workers);
  write_marginals_csv(result.marginals, path);
  const char* kind = c.oracle.kind == OracleConfig::Kind::MonteCarlo ? "mc" : "transfer";
  std::cout << "oracle " << kind << ": marginals in " << path.string() << ", seed " << result.seed
            << (result.seed_generated ? " (generated)" : "") << ", " << result.seconds << " s\n";
}

void cmd_compare(const std::filesystem::path& a, const std::filesystem::path& b, std::optional<std::size_t> dimension,
                 const std::optional<std::filesystem::path>& json_out) {
  const MarginalComparison cmp = compare_files(a, b, dimension);
  if (cmp.steps.empty()) throw FormatError("the files share no step");
  const std::size_t last = cmp.steps.size() - 1;
  std::cout << "step " << cmp.steps[last] << " per-site L1:";
  for (std::size_t j = 0; j < cmp.sites.size(); ++j) std::cout << ' ' << cmp.sites[j] << '=' << cmp.l1[last][j];
  std::cout << "\nmax " << cmp.max << " mean " << cmp.mean << " over " << cmp.steps.size() << " steps\n";
  if (json_out) {
    nlohmann::json doc = {{"format", "cpa-compare"}, {"version", 1},     {"a", a.string()},
                          {"b", b.string()},         {"steps", cmp.steps}, {"sites", cmp.sites},
                          {"l1", cmp.l1},            {"max", cmp.max},   {"mean", cmp.mean}};
    if (dimension) doc["dimension"] = *dimension;
    write_json(doc, *json_out);
  }
}

}  // namespace cpa::cli
