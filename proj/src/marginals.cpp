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

#include "cpa/marginals.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "cpa/error.hpp"

namespace cpa {

namespace {

constexpr const char* kMarker = "# cpa-marginals v1";
constexpr const char* kHeader = "step,site,symbol,probability";

std::size_t symbol_space(const std::vector<std::size_t>& cells) {
  std::size_t n = 1;
  for (std::size_t c : cells) n *= c;
  return n;
}

std::string symbol_label(PatternCode code, const std::vector<std::size_t>& cells) {
  std::vector<std::size_t> idx(cells.size());
  for (std::size_t d = cells.size(); d-- > 0;) {
    idx[d] = code % cells[d];
    code /= cells[d];
  }
  std::string s;
  for (std::size_t d = 0; d < idx.size(); ++d) {
    if (d) s += ':';
    s += std::to_string(idx[d]);
  }
  return s;
}

PatternCode parse_symbol(const std::string& text, const std::vector<std::size_t>& cells, std::size_t line) {
  PatternCode code = 0;
  std::size_t d = 0;
  std::istringstream in(text);
  std::string part;
  while (std::getline(in, part, ':')) {
    std::size_t k = 0;
    const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), k);
    if (ec != std::errc() || ptr != part.data() + part.size() || d >= cells.size() || k >= cells[d]) {
      throw FormatError("line " + std::to_string(line) + ": invalid symbol '" + text + "'");
    }
    code = code * cells[d] + k;
    ++d;
  }
  if (d != cells.size()) throw FormatError("line " + std::to_string(line) + ": symbol '" + text + "' has wrong rank");
  return code;
}

std::string format_probability(double p) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), p);
  return std::string(buf, ptr);
}

}  // namespace

std::size_t MarginalSeries::base() const { return symbol_space(cells_per_dim); }

const SparseDensity& MarginalSeries::at(std::size_t step, int site) const {
  const auto sk = std::find(steps.begin(), steps.end(), step);
  const auto sj = std::find(sites.begin(), sites.end(), site);
  if (sk == steps.end() || sj == sites.end()) {
    throw InvalidArgument("marginal series has no entry for step " + std::to_string(step) + ", site " +
                          std::to_string(site));
  }
  return values[static_cast<std::size_t>(sk - steps.begin())][static_cast<std::size_t>(sj - sites.begin())];
}

void write_marginals_csv(const MarginalSeries& series, std::ostream& out) {
  out << kMarker << '\n' << kHeader << '\n';
  for (std::size_t k = 0; k < series.steps.size(); ++k) {
    for (std::size_t j = 0; j < series.sites.size(); ++j) {
      const SparseDensity& d = series.values[k][j];
      if (d.empty()) {
        out << series.steps[k] << ',' << series.sites[j] << ",,0\n";
        continue;
      }
      for (const auto& e : d) {
        out << series.steps[k] << ',' << series.sites[j] << ',' << symbol_label(e.code, series.cells_per_dim)
            << ',' << format_probability(e.weight) << '\n';
      }
    }
  }
}

void write_marginals_csv(const MarginalSeries& series, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_marginals_csv(series, out);
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

MarginalSeries read_marginals_csv(const std::filesystem::path& path, std::vector<std::size_t> cells_per_dim) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  std::string line;
  if (!std::getline(in, line) || line != kMarker) {
    throw FormatError(path.string() + ": missing '" + std::string(kMarker) + "' marker");
  }
  if (!std::getline(in, line) || line != kHeader) {
    throw FormatError(path.string() + ": expected header '" + std::string(kHeader) + "'");
  }
  const std::size_t base = symbol_space(cells_per_dim);
  std::map<std::size_t, std::map<int, std::vector<WeightedPattern>>> rows;
  std::vector<int> site_order;
  std::size_t number = 2;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::istringstream ls(line);
    std::string f;
    while (std::getline(ls, f, ',')) fields.push_back(f);
    if (line.back() == ',') fields.emplace_back();
    if (fields.size() != 4) throw FormatError(path.string() + ": line " + std::to_string(number) + " needs 4 fields");
    std::size_t step = 0;
    int site = 0;
    double p = 0.0;
    try {
      std::size_t used = 0;
      step = std::stoull(fields[0], &used);
      if (used != fields[0].size()) throw std::invalid_argument("step");
      site = std::stoi(fields[1], &used);
      if (used != fields[1].size()) throw std::invalid_argument("site");
      p = std::stod(fields[3], &used);
      if (used != fields[3].size()) throw std::invalid_argument("probability");
    } catch (const std::exception&) {
      throw FormatError(path.string() + ": line " + std::to_string(number) + " is not numeric");
    }
    auto& per_site = rows[step];
    if (!per_site.contains(site) && std::find(site_order.begin(), site_order.end(), site) == site_order.end()) {
      site_order.push_back(site);
    }
    auto& entries = per_site[site];
    if (fields[2].empty()) continue;
    entries.push_back({parse_symbol(fields[2], cells_per_dim, number), p});
  }
  MarginalSeries series;
  series.cells_per_dim = std::move(cells_per_dim);
  std::sort(site_order.begin(), site_order.end());
  series.sites = site_order;
  for (auto& [step, per_site] : rows) {
    series.steps.push_back(step);
    std::vector<SparseDensity> row;
    for (int site : series.sites) {
      auto it = per_site.find(site);
      if (it == per_site.end()) {
        throw FormatError(path.string() + ": step " + std::to_string(step) + " lacks site " + std::to_string(site));
      }
      try {
        row.push_back(SparseDensity::from_entries(Interval::single(0), base, std::move(it->second)));
      } catch (const InvalidArgument& e) {
        throw FormatError(path.string() + ": " + e.what());
      }
    }
    series.values.push_back(std::move(row));
  }
  return series;
}

MarginalComparison compare_marginals(const MarginalSeries& a, const MarginalSeries& b) {
  if (a.cells_per_dim != b.cells_per_dim) throw FormatError("marginal series use different symbol sets");
  if (a.sites != b.sites) throw FormatError("marginal series cover different sites");
  MarginalComparison c;
  c.sites = a.sites;
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t k = 0; k < a.steps.size(); ++k) {
    const auto it = std::find(b.steps.begin(), b.steps.end(), a.steps[k]);
    if (it == b.steps.end()) continue;
    const std::size_t kb = static_cast<std::size_t>(it - b.steps.begin());
    c.steps.push_back(a.steps[k]);
    std::vector<double> row;
    for (std::size_t j = 0; j < a.sites.size(); ++j) {
      const double d = l1_distance(a.values[k][j], b.values[kb][j]);
      row.push_back(d);
      c.max = std::max(c.max, d);
      sum += d;
      ++count;
    }
    c.l1.push_back(std::move(row));
  }
  if (c.steps.empty()) throw FormatError("marginal series share no step");
  c.mean = sum / static_cast<double>(count);
  return c;
}

SparseDensity dimension_marginal(const SparseDensity& site, const std::vector<std::size_t>& cells_per_dim,
                                 std::size_t dim) {
  if (dim >= cells_per_dim.size()) throw InvalidArgument("dimension_marginal: dimension out of range");
  if (site.base() != symbol_space(cells_per_dim)) throw InvalidArgument("dimension_marginal: symbol set mismatch");
  std::size_t stride = 1;
  for (std::size_t d = dim + 1; d < cells_per_dim.size(); ++d) stride *= cells_per_dim[d];
  std::vector<WeightedPattern> out;
  for (const auto& e : site) out.push_back({(e.code / stride) % cells_per_dim[dim], e.weight});
  return SparseDensity::from_entries(site.window(), cells_per_dim[dim], std::move(out));
}

}  // namespace cpa
