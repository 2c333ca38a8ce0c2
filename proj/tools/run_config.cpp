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

#include "run_config.hpp"

#include <algorithm>
#include <charconv>
#include <random>
#include <sstream>

#include "cpa/oracle.hpp"

namespace cpa::cli {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return std::string(s.substr(first, last - first + 1));
}

// Splits on commas and whitespace; empty items are dropped.
std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::vector<std::string> split_on(const std::string& text, const std::string& sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = text.find(sep, start);
    out.push_back(trim(std::string_view(text).substr(start, pos == std::string::npos ? pos : pos - start)));
    if (pos == std::string::npos) return out;
    start = pos + sep.size();
  }
}

std::optional<double> to_double(const std::string& s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

template <class T>
std::optional<T> to_integer(const std::string& s) {
  T v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

// Typed access to one INI file with positioned errors.
class Reader {
 public:
  explicit Reader(const IniFile& ini) : ini_(ini) {}

  const IniFile& ini() const { return ini_; }

  const IniFile::Entry* find(const std::string& section, const std::string& key) const {
    return ini_.find(section, key);
  }

  std::string text(const std::string& section, const std::string& key) const {
    return ini_.require(section, key).value;
  }

  double number(const IniFile::Entry& e) const {
    auto v = to_double(e.value);
    if (!v) ini_.fail(e, "expected a number, got '" + e.value + "'");
    return *v;
  }

  double number(const std::string& section, const std::string& key, double fallback) const {
    const auto* e = find(section, key);
    return e ? number(*e) : fallback;
  }

  std::uint64_t count(const IniFile::Entry& e) const {
    auto v = to_integer<std::uint64_t>(e.value);
    if (!v) ini_.fail(e, "expected a non-negative integer, got '" + e.value + "'");
    return *v;
  }

  std::uint64_t count(const std::string& section, const std::string& key, std::uint64_t fallback) const {
    const auto* e = find(section, key);
    return e ? count(*e) : fallback;
  }

  std::vector<double> numbers(const IniFile::Entry& e, const std::string& text) const {
    std::vector<double> out;
    for (const auto& item : split_list(text)) {
      auto v = to_double(item);
      if (!v) ini_.fail(e, "expected a number, got '" + item + "'");
      out.push_back(*v);
    }
    return out;
  }

  std::vector<std::uint64_t> counts(const IniFile::Entry& e) const {
    std::vector<std::uint64_t> out;
    for (const auto& item : split_list(e.value)) {
      auto v = to_integer<std::uint64_t>(item);
      if (!v) ini_.fail(e, "expected a non-negative integer, got '" + item + "'");
      out.push_back(*v);
    }
    if (out.empty()) ini_.fail(e, "expected at least one integer");
    return out;
  }

  // "lo..hi" or a single integer.
  Interval interval(const IniFile::Entry& e) const {
    const auto parts = split_on(e.value, "..");
    if (parts.size() == 1) {
      auto v = to_integer<int>(parts[0]);
      if (!v) ini_.fail(e, "expected an interval 'lo..hi', got '" + e.value + "'");
      return Interval::single(*v);
    }
    auto lo = parts.size() == 2 ? to_integer<int>(parts[0]) : std::nullopt;
    auto hi = parts.size() == 2 ? to_integer<int>(parts[1]) : std::nullopt;
    if (!lo || !hi) ini_.fail(e, "expected an interval 'lo..hi', got '" + e.value + "'");
    if (*hi < *lo) ini_.fail(e, "interval " + e.value + " is empty");
    return {*lo, *hi};
  }

  template <class F>
  auto guard(const IniFile::Entry& e, F&& f) const {
    try {
      return f();
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& err) {
      ini_.fail(e, err.what());
    }
  }

  template <class F>
  auto guard(const std::string& section, F&& f) const {
    try {
      return f();
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& err) {
      ini_.fail(section, err.what());
    }
  }

 private:
  const IniFile& ini_;
};

ModelConfig read_model(const Reader& in) {
  ModelConfig m;
  const auto& name = in.ini().require("model", "name");
  m.name = name.value;
  if (m.name == "identity") {
    m.dimension = in.count("model", "dimension", 1);
    m.tau = in.number("model", "tau", 1.0);
    if (m.dimension == 0) in.ini().fail("model", "identity model needs dimension >= 1");
  } else if (m.name == "averaging") {
    m.divisor = in.number("model", "divisor", 3.75);
  } else if (m.name == "advection") {
    m.speed = in.number(in.ini().require("model", "speed"));
    m.dx = in.number("model", "dx", 1.0);
    m.tau = in.number("model", "tau", 1.0);
  } else if (m.name == "arsenate") {
    ArsenateParams& p = m.arsenate;
    p.v = in.number("model", "v", p.v);
    p.r_h = in.number("model", "r_h", p.r_h);
    p.k1 = in.number("model", "k1", p.k1);
    p.s_max = in.number("model", "s_max", p.s_max);
    p.k_eq = in.number("model", "k_eq", p.k_eq);
    p.k_f = in.number("model", "k_f", p.k_f);
    p.dx = in.number("model", "dx", p.dx);
    p.tau = in.number("model", "tau", p.tau);
    p.dx_fine = in.number("model", "dx_fine", p.dx_fine);
    p.dt_fine = in.number("model", "dt_fine", p.dt_fine);
    if (const auto* e = in.find("model", "integrator")) {
      if (e->value == "euler") {
        p.integrator = Integrator::Euler;
      } else if (e->value == "heun") {
        p.integrator = Integrator::Heun;
      } else if (e->value == "rk4") {
        p.integrator = Integrator::RungeKutta4;
      } else {
        in.ini().fail(*e, "integrator must be euler, heun or rk4");
      }
    }
  } else {
    in.ini().fail(name, "unknown model '" + m.name + "' (identity, averaging, advection, arsenate)");
  }
  in.guard(name, [&] { return make_flow(m); });
  return m;
}

PartitionPtr read_partition(const Reader& in) {
  if (const auto* bp = in.find("partition", "breakpoints")) {
    std::vector<std::vector<double>> dims;
    for (const auto& part : split_on(bp->value, "|")) dims.push_back(in.numbers(*bp, part));
    return in.guard(*bp, [&] { return std::make_shared<const Partition>(Partition::rectilinear(dims)); });
  }
  const auto& cells_entry = in.ini().require("partition", "cells");
  const auto& lower_entry = in.ini().require("partition", "lower");
  const auto& upper_entry = in.ini().require("partition", "upper");
  std::vector<std::size_t> cells;
  for (auto c : in.counts(cells_entry)) cells.push_back(static_cast<std::size_t>(c));
  const auto lower = in.numbers(lower_entry, lower_entry.value);
  const auto upper = in.numbers(upper_entry, upper_entry.value);
  if (lower.size() != cells.size() || upper.size() != cells.size()) {
    in.ini().fail(cells_entry, "cells, lower and upper need one entry per state dimension");
  }
  return in.guard(cells_entry, [&] {
    return std::make_shared<const Partition>(Partition::uniform(cpa::Box(lower, upper), cells));
  });
}

SiteLaw read_law(const Reader& in, const IniFile::Entry& e, const Partition& partition) {
  const std::string text = trim(e.value);
  const auto space = text.find_first_of(" \t");
  const std::string kind = text.substr(0, space);
  const std::string rest = space == std::string::npos ? std::string() : trim(std::string_view(text).substr(space));
  const std::size_t n = partition.dimension();
  SiteLaw law;
  if (kind == "cell") {
    law.kind = SiteLaw::Kind::Cell;
    law.cell = in.guard(e, [&] { return parse_symbol(rest, partition); });
  } else if (kind == "value") {
    law.kind = SiteLaw::Kind::Value;
    law.value = in.numbers(e, rest);
    if (law.value.size() != n) in.ini().fail(e, "value needs " + std::to_string(n) + " components");
    if (!partition.domain().contains(law.value)) in.ini().fail(e, "value lies outside the partition domain");
  } else if (kind == "box") {
    law.kind = SiteLaw::Kind::Box;
    const auto parts = split_on(rest, "..");
    if (parts.size() != 2) in.ini().fail(e, "box needs 'lower .. upper'");
    const auto lo = in.numbers(e, parts[0]);
    const auto hi = in.numbers(e, parts[1]);
    if (lo.size() != n || hi.size() != n) in.ini().fail(e, "box corners need " + std::to_string(n) + " components");
    for (std::size_t d = 0; d < n; ++d) {
      if (!(lo[d] < hi[d])) in.ini().fail(e, "box must have positive extent in every dimension");
      if (lo[d] < partition.domain().lower[d] || hi[d] > partition.domain().upper[d]) {
        in.ini().fail(e, "box must lie inside the partition domain");
      }
    }
    law.box = cpa::Box(lo, hi);
  } else if (kind == "cells") {
    law.kind = SiteLaw::Kind::Cells;
    for (const auto& item : split_on(rest, ",")) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) in.ini().fail(e, "cells entries must read 'symbol=weight'");
      const Symbol s = in.guard(e, [&] { return parse_symbol(trim(item.substr(0, eq)), partition); });
      const auto w = to_double(trim(item.substr(eq + 1)));
      if (!w || *w <= 0.0) in.ini().fail(e, "cell weights must be positive numbers");
      law.cells.emplace_back(s, *w);
    }
    if (law.cells.empty()) in.ini().fail(e, "cells needs at least one entry");
  } else {
    in.ini().fail(e, "site law must start with cell, value, box or cells");
  }
  return law;
}

std::vector<Symbol> read_symbols(const Reader& in, const IniFile::Entry& e, const Partition& partition) {
  std::vector<Symbol> out;
  for (const auto& item : split_list(e.value)) {
    out.push_back(in.guard(e, [&] { return parse_symbol(item, partition); }));
  }
  return out;
}

}  // namespace

SparseDensity SiteLaw::density(const Partition& partition) const {
  const std::size_t e = partition.symbol_count();
  switch (kind) {
    case Kind::Cell:
      return SparseDensity::point_mass(Interval::single(0), e, cell);
    case Kind::Value:
      return SparseDensity::point_mass(Interval::single(0), e, partition.encode(value));
    case Kind::Box:
      return box_density(partition, box);
    case Kind::Cells: {
      std::vector<WeightedPattern> entries;
      for (const auto& [s, w] : cells) entries.push_back({s, w});
      return normalize(SparseDensity::from_entries(Interval::single(0), e, std::move(entries)));
    }
  }
  throw InvalidArgument("unknown site law");
}

void SiteLaw::sample(const Partition& partition, Rng& rng, std::span<double> out) const {
  switch (kind) {
    case Kind::Cell:
      partition.sample_into(cell, rng, out);
      return;
    case Kind::Value:
      std::copy(value.begin(), value.end(), out.begin());
      return;
    case Kind::Box:
      for (std::size_t d = 0; d < box.dimension(); ++d) {
        out[d] = box.lower[d] + uniform01(rng) * (box.upper[d] - box.lower[d]);
      }
      return;
    case Kind::Cells: {
      double total = 0.0;
      for (const auto& c : cells) total += c.second;
      double u = uniform01(rng) * total;
      Symbol pick = cells.back().first;
      for (const auto& [s, w] : cells) {
        if (u < w) {
          pick = s;
          break;
        }
        u -= w;
      }
      partition.sample_into(pick, rng, out);
      return;
    }
  }
}

Symbol parse_symbol(const std::string& text, const Partition& partition) {
  if (text.find(':') == std::string::npos) {
    auto v = to_integer<Symbol>(text);
    if (!v) throw InvalidArgument("expected a symbol, got '" + text + "'");
    if (*v >= partition.symbol_count()) {
      throw InvalidArgument("symbol " + text + " exceeds the " + std::to_string(partition.symbol_count()) +
                            " cells of the partition");
    }
    return *v;
  }
  std::vector<std::size_t> index;
  for (const auto& part : split_on(text, ":")) {
    auto v = to_integer<std::size_t>(part);
    if (!v) throw InvalidArgument("expected a symbol like 1:4, got '" + text + "'");
    index.push_back(*v);
  }
  if (index.size() != partition.dimension()) {
    throw InvalidArgument("symbol " + text + " needs " + std::to_string(partition.dimension()) + " indices");
  }
  for (std::size_t d = 0; d < index.size(); ++d) {
    if (index[d] >= partition.cells_per_dim()[d]) throw InvalidArgument("symbol " + text + " is out of range");
  }
  return partition.from_multi_index(index);
}

std::string format_symbol(Symbol s, const Partition& partition) {
  const auto index = partition.multi_index(s);
  std::string out;
  for (std::size_t d = 0; d < index.size(); ++d) {
    if (d > 0) out += ':';
    out += std::to_string(index[d]);
  }
  return out;
}

FlowMapPtr make_flow(const ModelConfig& model) {
  if (model.name == "identity") return std::make_shared<IdentityFlow>(model.dimension, model.tau);
  if (model.name == "averaging") return std::make_shared<AveragingFlow>(model.divisor);
  if (model.name == "advection") return std::make_shared<LinearAdvectionFlow>(model.speed, model.dx, model.tau);
  if (model.name == "arsenate") return std::make_shared<ArsenateFlow>(model.arsenate);
  throw InvalidArgument("unknown model '" + model.name + "'");
}

RunConfig parse_config(const IniFile& ini) {
  const Reader in(ini);
  RunConfig c;
  c.source = ini.source();
  c.model = read_model(in);
  const FlowMapPtr flow = make_flow(c.model);
  c.partition = read_partition(in);
  const Partition& part = *c.partition;
  if (part.dimension() != flow->dimension()) {
    ini.fail("partition", "partition has " + std::to_string(part.dimension()) + " dimensions but model '" +
                              c.model.name + "' has " + std::to_string(flow->dimension()));
  }
  c.neighborhood = flow->neighborhood();

  // Pattern windows.
  const auto* v_entry = in.find("local", "V");
  const auto* w_entry = in.find("local", "W");
  c.pattern = v_entry ? in.interval(*v_entry) : Interval{0, 0};
  c.composition = w_entry ? in.interval(*w_entry) : Interval{0, 0};
  if (const auto* u_entry = in.find("local", "U")) {
    if (in.interval(*u_entry) != c.neighborhood) {
      ini.fail(*u_entry, "U = " + u_entry->value + " does not match the model neighbourhood " +
                             to_string(c.neighborhood));
    }
  }
  const IniFile::Entry* anchor = v_entry ? v_entry : w_entry;
  auto fail_local = [&](const std::string& what) {
    if (anchor) ini.fail(*anchor, what);
    ini.fail("local", what);
  };
  if (!c.pattern.contains(0)) fail_local("V must contain 0");
  if (!c.composition.contains(0)) fail_local("W must contain 0");
  c.estimated_pattern = {c.pattern.lo - c.composition.lo, c.pattern.hi - c.composition.hi};
  if (c.estimated_pattern.empty() || !c.estimated_pattern.contains(0)) {
    fail_local("V = " + to_string(c.pattern) + " is not V~ + W for a window V~ containing 0 and W = " +
               to_string(c.composition));
  }

  // Grid.
  const auto& sites_entry = ini.require("grid", "sites");
  c.sites = static_cast<std::size_t>(in.count(sites_entry));
  const int r = -c.neighborhood.lo, s = c.neighborhood.hi, p = -c.pattern.lo, q = c.pattern.hi;
  const int width = 1 + p + q + r + s;
  if (width > static_cast<int>(c.sites)) {
    fail_local("V = " + to_string(c.pattern) + " with U = " + to_string(c.neighborhood) +
               " needs 1+p+q+r+s = " + std::to_string(width) + " sites, but the grid has m = " +
               std::to_string(c.sites));
  }

  // Sampling.
  const std::size_t window_sites = (c.neighborhood + c.estimated_pattern).size();
  const std::string mode = ini.find("sampling", "mode") ? ini.find("sampling", "mode")->value : "product";
  if (mode == "product") {
    std::vector<std::uint64_t> counts{1};
    if (const auto* e = in.find("sampling", "counts")) counts = in.counts(*e);
    c.plan = SamplingPlan::product(counts);
  } else if (mode == "joint") {
    c.plan = SamplingPlan::joint(in.count(ini.require("sampling", "joint")));
  } else {
    ini.fail(*ini.find("sampling", "mode"), "sampling mode must be product or joint");
  }
  in.guard("sampling", [&] {
    c.plan.validate(window_sites);
    return 0;
  });
  if (const auto* e = in.find("sampling", "seed")) c.sampling_seed = in.count(*e);

  // Boundary.
  const std::string bkind = ini.find("boundary", "kind") ? ini.find("boundary", "kind")->value : "deterministic";
  if (bkind == "deterministic") {
    c.boundary.kind = BoundarySpec::Kind::Deterministic;
    if (const auto* e = in.find("boundary", "left")) c.boundary.left_symbols = read_symbols(in, *e, part);
    if (const auto* e = in.find("boundary", "right")) c.boundary.right_symbols = read_symbols(in, *e, part);
    if (c.boundary.left_symbols.size() != static_cast<std::size_t>(r) ||
        c.boundary.right_symbols.size() != static_cast<std::size_t>(s)) {
      ini.fail("boundary", "deterministic boundary needs " + std::to_string(r) + " left and " + std::to_string(s) +
                               " right symbols");
    }
  } else if (bkind == "white_noise") {
    c.boundary.kind = BoundarySpec::Kind::WhiteNoise;
    if (r > 0) c.boundary.left = read_law(in, ini.require("boundary", "left"), part);
    if (s > 0) c.boundary.right = read_law(in, ini.require("boundary", "right"), part);
  } else {
    ini.fail(*ini.find("boundary", "kind"), "boundary kind must be deterministic or white_noise");
  }

  // Initial condition.
  if (const auto* e = in.find("initial", "symbols")) {
    c.initial.symbols = read_symbols(in, *e, part);
    if (c.initial.symbols.size() != c.sites) {
      ini.fail(*e, "initial symbols need one entry per site (" + std::to_string(c.sites) + ")");
    }
    if (in.find("initial", "site")) ini.fail(*e, "give either initial symbols or an initial site law");
  } else {
    c.initial.law = read_law(in, ini.require("initial", "site"), part);
  }

  // Run.
  c.steps = static_cast<std::size_t>(in.count("run", "steps", 0));
  c.threshold = in.number("run", "threshold", 0.0);
  if (!(c.threshold >= 0.0 && c.threshold < 1.0)) ini.fail(*in.find("run", "threshold"), "threshold must lie in [0, 1)");
  if (const auto* e = in.find("run", "report_steps")) {
    for (auto k : in.counts(*e)) {
      if (k > c.steps) ini.fail(*e, "report step " + std::to_string(k) + " exceeds steps = " + std::to_string(c.steps));
      c.report_steps.push_back(static_cast<std::size_t>(k));
    }
    std::sort(c.report_steps.begin(), c.report_steps.end());
    c.report_steps.erase(std::unique(c.report_steps.begin(), c.report_steps.end()), c.report_steps.end());
  }

  // Oracle.
  if (const auto* e = in.find("oracle", "kind")) {
    if (e->value == "mc") {
      c.oracle.kind = OracleConfig::Kind::MonteCarlo;
    } else if (e->value == "transfer") {
      c.oracle.kind = OracleConfig::Kind::Transfer;
    } else {
      ini.fail(*e, "oracle kind must be mc or transfer");
    }
  }
  c.oracle.runs = in.count("oracle", "runs", c.oracle.runs);
  if (c.oracle.runs == 0) ini.fail("oracle", "oracle runs must be positive");
  if (const auto* e = in.find("oracle", "seed")) c.oracle.seed = in.count(*e);

  // Outputs.
  if (const auto* e = in.find("output", "table")) c.output.table = e->value;
  if (const auto* e = in.find("output", "report")) c.output.report = e->value;
  if (const auto* e = in.find("output", "marginals")) c.output.marginals = e->value;
  if (const auto* e = in.find("output", "summary")) c.output.summary = e->value;
  if (const auto* e = in.find("output", "oracle")) c.output.oracle = e->value;

  ini.reject_unused();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) { return parse_config(IniFile::load(path)); }

BoundarySpec make_boundary(const RunConfig& c) {
  if (c.boundary.kind == BoundarySpec::Kind::Deterministic) {
    return BoundarySpec::deterministic(c.boundary.left_symbols, c.boundary.right_symbols);
  }
  const int r = -c.neighborhood.lo, s = c.neighborhood.hi;
  const int m = static_cast<int>(c.sites);
  auto side = [&](const SiteLaw& law, int first, int last) {
    if (last < first) return SparseDensity();
    const SparseDensity one = law.density(*c.partition);
    std::vector<SparseDensity> factors;
    for (int j = first; j <= last; ++j) factors.push_back(one.shifted(j));
    return product(factors);
  };
  return BoundarySpec::white_noise(side(c.boundary.left, 1, r), side(c.boundary.right, m - s + 1, m));
}

DeBruijnDensity make_initial(const RunConfig& c, const Automaton& automaton) {
  if (!c.initial.symbols.empty()) return automaton.point_state(c.initial.symbols);
  return automaton.independent_sites(std::vector<SparseDensity>(c.sites, c.initial.law.density(*c.partition)));
}

SparseDensity make_initial_global(const RunConfig& c) {
  const std::size_t e = c.partition->symbol_count();
  const Interval all{1, static_cast<int>(c.sites)};
  if (!c.initial.symbols.empty()) return SparseDensity::point_mass(all, e, encode_pattern(c.initial.symbols, e));
  const SparseDensity one = c.initial.law.density(*c.partition);
  std::vector<SparseDensity> factors;
  for (int j = 1; j <= all.hi; ++j) factors.push_back(one.shifted(j));
  return product(factors);
}

void sample_initial(const RunConfig& c, Rng& rng, std::span<double> state) {
  const std::size_t n = c.partition->dimension();
  for (std::size_t j = 0; j < c.sites; ++j) {
    auto site = state.subspan(j * n, n);
    if (c.initial.symbols.empty()) {
      c.initial.law.sample(*c.partition, rng, site);
    } else {
      c.partition->sample_into(c.initial.symbols[j], rng, site);
    }
  }
}

void sample_boundary(const RunConfig& c, Rng& rng, std::span<double> state) {
  const std::size_t n = c.partition->dimension();
  const std::size_t r = static_cast<std::size_t>(-c.neighborhood.lo);
  const std::size_t s = static_cast<std::size_t>(c.neighborhood.hi);
  const bool fixed = c.boundary.kind == BoundarySpec::Kind::Deterministic;
  for (std::size_t j = 0; j < r; ++j) {
    auto site = state.subspan(j * n, n);
    if (fixed) {
      c.partition->sample_into(c.boundary.left_symbols[j], rng, site);
    } else {
      c.boundary.left.sample(*c.partition, rng, site);
    }
  }
  for (std::size_t j = 0; j < s; ++j) {
    auto site = state.subspan((c.sites - s + j) * n, n);
    if (fixed) {
      c.partition->sample_into(c.boundary.right_symbols[j], rng, site);
    } else {
      c.boundary.right.sample(*c.partition, rng, site);
    }
  }
}

std::uint64_t generate_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

}  // namespace cpa::cli
