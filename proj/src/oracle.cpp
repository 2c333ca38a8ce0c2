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

#include "cpa/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <boost/math/quadrature/gauss.hpp>

#include "cpa/error.hpp"
#include "cpa/log.hpp"
#include "parallel.hpp"

namespace cpa {

GlobalTransition::GlobalTransition(PartitionPtr partition, std::size_t m, TransitionTable table,
                                   std::vector<std::uint64_t> samples, LocalFunctionMeta meta)
    : partition_(std::move(partition)), m_(m), table_(std::move(table)), samples_(std::move(samples)),
      meta_(std::move(meta)) {
  if (!partition_) throw InvalidArgument("global transition needs a partition");
  if (table_.preimage_count() != pattern_space_size(base(), m_) || samples_.size() != table_.preimage_count()) {
    throw InvalidArgument("global transition needs one row per global state");
  }
}

std::uint64_t GlobalTransition::samples(PatternCode state) const {
  if (state >= samples_.size()) throw InvalidArgument("global state code out of range");
  return samples_[state];
}

std::uint64_t GlobalTransition::hits(PatternCode state, PatternCode image) const {
  if (!table_.explored(state)) return 0;
  for (const auto& e : table_.row(state)) {
    if (e.image == image) {
      return static_cast<std::uint64_t>(std::llround(e.probability * static_cast<double>(samples_[state])));
    }
  }
  return 0;
}

SparseDensity GlobalTransition::row(PatternCode state) const {
  std::vector<WeightedPattern> out;
  for (const auto& e : table_.row(state)) out.push_back({e.image, e.probability});
  return SparseDensity::from_entries(window(), base(), std::move(out));
}

namespace {

// Image state code of one global test vector.
PatternCode global_image(const FlowMap& flow, const Partition& partition, std::span<const double> values,
                         std::size_t m, std::span<double> scratch) {
  const std::size_t n = partition.dimension();
  const Interval u = flow.neighborhood();
  const std::size_t base = partition.symbol_count();
  PatternCode code = 0;
  bool moved = false;
  for (int x = 1; x <= static_cast<int>(m); ++x) {
    std::span<const double> out;
    if (x + u.lo >= 1 && x + u.hi <= static_cast<int>(m)) {
      flow.step(values.subspan(static_cast<std::size_t>(x + u.lo - 1) * n, u.size() * n), scratch.first(n));
      out = scratch.first(n);
    } else {
      out = values.subspan(static_cast<std::size_t>(x - 1) * n, n);
    }
    code = code * base + partition.encode_clamped(out, moved);
  }
  return code;
}

}  // namespace

GlobalTransition build_PB(const FlowMap& flow, PartitionPtr partition, std::size_t m, const SamplingPlan& plan,
                          std::uint64_t seed, const EstimateOptions& options) {
  if (!partition) throw InvalidArgument("build_PB needs a partition");
  if (m == 0) throw InvalidArgument("build_PB needs at least one site");
  if (partition->dimension() != flow.dimension()) throw InvalidArgument("partition and flow dimensions differ");
  plan.validate(m);
  const std::size_t base = partition->symbol_count();
  const std::uint64_t states = pattern_space_size(base, m);
  if (states > kMaxGlobalStates) {
    throw InvalidArgument("|E|^m = " + std::to_string(states) + " global states exceed the limit of " +
                          std::to_string(kMaxGlobalStates));
  }
  std::vector<std::vector<ImageEntry>> rows(states);
  std::vector<std::uint64_t> samples(states, 0);
  detail::parallel_for(states, options.workers, [&](std::uint64_t chi) {
    const std::vector<Symbol> cells = decode_pattern(chi, base, m);
    Rng rng(derive_seed(seed, chi));
    std::vector<double> scratch(partition->dimension());
    std::map<PatternCode, std::uint64_t> hits;
    std::uint64_t total = 0;
    for_each_test_vector(*partition, cells, plan, rng, [&](std::span<const double> values) {
      ++hits[global_image(flow, *partition, values, m, scratch)];
      ++total;
    });
    for (const auto& [image, count] : hits) {
      rows[chi].push_back({image, static_cast<double>(count) / static_cast<double>(total)});
    }
    samples[chi] = total;
  });
  std::vector<bool> explored(states);
  for (std::uint64_t k = 0; k < states; ++k) explored[k] = samples[k] > 0;
  LocalFunctionMeta meta{flow.name(), flow.time_step(), seed, plan, 0, 0};
  return GlobalTransition(std::move(partition), m, TransitionTable(states, std::move(rows), std::move(explored)),
                          std::move(samples), std::move(meta));
}

SparseDensity apply_PB(const GlobalTransition& p, const SparseDensity& g) {
  if (g.window() != p.window() || g.base() != p.base()) {
    throw InvalidArgument("apply_PB: density must live on " + to_string(p.window()));
  }
  std::map<PatternCode, double> acc;
  for (const auto& e : g) {
    if (!p.table().explored(e.code)) throw UnexploredPreimage(e.code, "apply_PB");
    for (const auto& img : p.table().row(e.code)) acc[img.image] += e.weight * img.probability;
  }
  std::vector<WeightedPattern> out;
  out.reserve(acc.size());
  for (const auto& [code, w] : acc) out.push_back({code, w});
  return normalize(SparseDensity::from_entries(p.window(), p.base(), std::move(out)));
}

namespace {

using Gauss = boost::math::quadrature::gauss<double, 7>;

// Nodes and weights of the 7-point rule on [-1, 1].
const std::vector<std::pair<double, double>>& reference_rule() {
  static const std::vector<std::pair<double, double>> rule = [] {
    std::vector<std::pair<double, double>> r;
    const auto& x = Gauss::abscissa();
    const auto& w = Gauss::weights();
    for (std::size_t k = 0; k < x.size(); ++k) {
      r.emplace_back(x[k], w[k]);
      if (x[k] != 0.0) r.emplace_back(-x[k], w[k]);
    }
    std::sort(r.begin(), r.end());
    return r;
  }();
  return rule;
}

// Composite rule on [lo, hi] with 2^level equal pieces.
std::vector<std::pair<double, double>> composite_rule(double lo, double hi, int level) {
  const auto& rule = reference_rule();
  const std::size_t pieces = std::size_t{1} << level;
  const double width = (hi - lo) / static_cast<double>(pieces);
  std::vector<std::pair<double, double>> out;
  out.reserve(pieces * rule.size());
  for (std::size_t k = 0; k < pieces; ++k) {
    const double a = lo + width * static_cast<double>(k);
    const double half = 0.5 * width;
    for (const auto& [x, w] : rule) out.emplace_back(a + half * (x + 1.0), half * w);
  }
  return out;
}

// Tensor-product integral of f over the box [lo, hi] (dimension D).
double tensor_integral(const std::vector<double>& lo, const std::vector<double>& hi, int level,
                       const PointDensity& f) {
  const std::size_t dims = lo.size();
  std::vector<std::vector<std::pair<double, double>>> axes(dims);
  for (std::size_t d = 0; d < dims; ++d) axes[d] = composite_rule(lo[d], hi[d], level);
  std::vector<std::size_t> idx(dims, 0);
  std::vector<double> point(dims);
  double sum = 0.0;
  for (;;) {
    double w = 1.0;
    for (std::size_t d = 0; d < dims; ++d) {
      point[d] = axes[d][idx[d]].first;
      w *= axes[d][idx[d]].second;
    }
    sum += w * f(point);
    std::size_t d = dims;
    for (;;) {
      if (d == 0) return sum;
      --d;
      if (++idx[d] < axes[d].size()) break;
      idx[d] = 0;
    }
  }
}

std::uint64_t evaluations_per_cell(std::size_t dims, int level) {
  const double per_axis = static_cast<double>(reference_rule().size()) * std::ldexp(1.0, level);
  return static_cast<std::uint64_t>(std::min(std::pow(per_axis, static_cast<double>(dims)), 1e18));
}

// Bounds of global cell `code` as a box in R^{m n}.
void global_cell(const Partition& partition, std::size_t m, PatternCode code, std::vector<double>& lo,
                 std::vector<double>& hi) {
  const std::size_t n = partition.dimension();
  const auto cells = decode_pattern(code, partition.symbol_count(), m);
  lo.resize(m * n);
  hi.resize(m * n);
  for (std::size_t j = 0; j < m; ++j) {
    const Box b = partition.cell_bounds(cells[j]);
    for (std::size_t d = 0; d < n; ++d) {
      lo[j * n + d] = b.lower[d];
      hi[j * n + d] = b.upper[d];
    }
  }
}

}  // namespace

Restriction restrict_density(const Partition& partition, std::size_t m, const PointDensity& g,
                             const RestrictOptions& options) {
  if (m == 0) throw InvalidArgument("restrict_density needs at least one site");
  const std::size_t base = partition.symbol_count();
  const std::uint64_t states = pattern_space_size(base, m);
  if (states > kMaxGlobalStates) throw InvalidArgument("restrict_density: too many global cells");
  const std::size_t dims = m * partition.dimension();
  std::vector<double> previous, current(states);
  Restriction out;
  std::vector<double> lo, hi;
  for (int level = 0; level <= options.max_level; ++level) {
    if (states * evaluations_per_cell(dims, level) > options.max_evaluations && level > 0) break;
    for (PatternCode c = 0; c < states; ++c) {
      global_cell(partition, m, c, lo, hi);
      current[c] = tensor_integral(lo, hi, level, g);
    }
    if (!previous.empty()) {
      double change = 0.0, total = 0.0;
      for (std::uint64_t c = 0; c < states; ++c) {
        change += std::abs(current[c] - previous[c]);
        total += std::abs(current[c]);
      }
      out.change = total > 0.0 ? change / total : change;
      previous = current;
      if (out.change <= options.tolerance) {
        out.converged = true;
        break;
      }
    } else {
      previous = current;
    }
  }
  if (!out.converged) {
    warn("restrict_density: quadrature budget exhausted, last relative change " + std::to_string(out.change));
  }
  std::vector<WeightedPattern> entries;
  for (std::uint64_t c = 0; c < states; ++c) {
    if (previous[c] < 0.0) throw InvalidArgument("restrict_density: density is negative on a cell");
    entries.push_back({c, previous[c]});
  }
  out.density = normalize(SparseDensity::from_entries({1, static_cast<int>(m)}, base, std::move(entries)));
  return out;
}

SparseDensity restrict_samples(const Partition& partition, std::size_t m, const StateSampler& sampler,
                               std::uint64_t count, std::uint64_t seed) {
  if (count == 0) throw InvalidArgument("restrict_samples needs at least one sample");
  const std::size_t n = partition.dimension();
  const std::size_t base = partition.symbol_count();
  pattern_space_size(base, m);
  Rng rng(seed);
  std::vector<double> values(m * n);
  std::map<PatternCode, double> hist;
  for (std::uint64_t k = 0; k < count; ++k) {
    sampler(rng, values);
    PatternCode code = 0;
    for (std::size_t j = 0; j < m; ++j) {
      code = code * base + partition.encode(std::span<const double>(values).subspan(j * n, n));
    }
    hist[code] += 1.0;
  }
  std::vector<WeightedPattern> out;
  for (const auto& [c, w] : hist) out.push_back({c, w});
  return normalize(SparseDensity::from_entries({1, static_cast<int>(m)}, base, std::move(out)));
}

double restriction_l1_error(const Partition& partition, const PointDensity& g, const RestrictOptions& options) {
  const std::size_t base = partition.symbol_count();
  const std::size_t dims = partition.dimension();
  double previous = -1.0;
  double result = 0.0;
  bool converged = false;
  for (int level = 1; level <= options.max_level; ++level) {
    if (base * evaluations_per_cell(dims, level) * 2 > options.max_evaluations && previous >= 0.0) break;
    double total = 0.0;
    for (Symbol s = 0; s < base; ++s) {
      const Box b = partition.cell_bounds(s);
      const double mean = tensor_integral(b.lower, b.upper, level, g) / b.volume();
      total += tensor_integral(b.lower, b.upper, level,
                               [&](std::span<const double> x) { return std::abs(g(x) - mean); });
    }
    result = total;
    if (previous >= 0.0 && std::abs(total - previous) <= options.tolerance * std::max(1.0, total)) {
      converged = true;
      break;
    }
    previous = total;
  }
  if (!converged) warn("restriction_l1_error: quadrature did not settle within the budget");
  return result;
}

SparseDensity box_density(const Partition& partition, const Box& box) {
  if (box.dimension() != partition.dimension()) throw InvalidArgument("box_density: dimension mismatch");
  const double volume = box.volume();
  std::vector<WeightedPattern> out;
  for (Symbol s = 0; s < partition.symbol_count(); ++s) {
    const Box c = partition.cell_bounds(s);
    double overlap = 1.0;
    for (std::size_t d = 0; d < box.dimension() && overlap > 0.0; ++d) {
      overlap *= std::max(0.0, std::min(c.upper[d], box.upper[d]) - std::max(c.lower[d], box.lower[d]));
    }
    if (overlap > 0.0) out.push_back({s, overlap / volume});
  }
  if (out.empty()) throw InvalidArgument("box_density: box does not meet the partition domain");
  return normalize(SparseDensity::from_entries(Interval::single(0), partition.symbol_count(), std::move(out)));
}

std::vector<MarginalSeries> mc_reference(const FlowMap& flow, std::size_t m, const StateSampler& initial,
                                         const BoundarySampler& boundary,
                                         const std::vector<PartitionPtr>& report_partitions,
                                         const McOptions& options) {
  if (options.runs == 0) throw InvalidArgument("mc_reference needs at least one run");
  if (report_partitions.empty()) throw InvalidArgument("mc_reference needs a report partition");
  const std::size_t n = flow.dimension();
  for (const auto& p : report_partitions) {
    if (!p || p->dimension() != n) throw InvalidArgument("report partition dimension must match the flow");
  }
  const std::size_t steps = options.steps + 1;
  // hist[p][(step * m + site) * |E_p| + symbol]
  std::vector<std::vector<std::uint64_t>> hist(report_partitions.size());
  for (std::size_t p = 0; p < hist.size(); ++p) hist[p].assign(steps * m * report_partitions[p]->symbol_count(), 0);

  const std::uint64_t threads = static_cast<std::uint64_t>(detail::thread_count(options.workers));
  const std::uint64_t chunks = std::min<std::uint64_t>(options.runs, threads * 8);
  detail::parallel_for(chunks, options.workers, [&](std::uint64_t chunk) {
    const std::uint64_t first = options.runs * chunk / chunks;
    const std::uint64_t last = options.runs * (chunk + 1) / chunks;
    auto local = hist;
    for (auto& h : local) std::fill(h.begin(), h.end(), 0);
    std::vector<double> state(m * n), next(m * n);
    auto record = [&](std::size_t step) {
      for (std::size_t p = 0; p < local.size(); ++p) {
        const Partition& part = *report_partitions[p];
        const std::size_t e = part.symbol_count();
        for (std::size_t j = 0; j < m; ++j) {
          bool moved = false;
          const Symbol s = part.encode_clamped(std::span<const double>(state).subspan(j * n, n), moved);
          ++local[p][(step * m + j) * e + s];
        }
      }
    };
    for (std::uint64_t run = first; run < last; ++run) {
      Rng rng(derive_seed(options.seed, run));
      initial(rng, state);
      record(0);
      for (std::size_t k = 1; k <= options.steps; ++k) {
        boundary(k, rng, state);
        advance_global(flow, state, next);
        std::swap(state, next);
        record(k);
      }
    }
#pragma omp critical(cpa_mc_merge)
    for (std::size_t p = 0; p < hist.size(); ++p) {
      for (std::size_t k = 0; k < hist[p].size(); ++k) hist[p][k] += local[p][k];
    }
  });

  std::vector<MarginalSeries> out;
  for (std::size_t p = 0; p < report_partitions.size(); ++p) {
    const Partition& part = *report_partitions[p];
    const std::size_t e = part.symbol_count();
    MarginalSeries series;
    series.cells_per_dim = part.cells_per_dim();
    for (std::size_t k = 0; k < steps; ++k) series.steps.push_back(k);
    for (std::size_t j = 0; j < m; ++j) series.sites.push_back(static_cast<int>(j + 1));
    for (std::size_t k = 0; k < steps; ++k) {
      std::vector<SparseDensity> row;
      for (std::size_t j = 0; j < m; ++j) {
        std::vector<WeightedPattern> entries;
        for (std::size_t s = 0; s < e; ++s) {
          const std::uint64_t c = hist[p][(k * m + j) * e + s];
          if (c > 0) entries.push_back({s, static_cast<double>(c) / static_cast<double>(options.runs)});
        }
        row.push_back(SparseDensity::from_entries(Interval::single(0), e, std::move(entries)));
      }
      series.values.push_back(std::move(row));
    }
    out.push_back(std::move(series));
  }
  return out;
}

}  // namespace cpa
