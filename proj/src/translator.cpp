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

#include "cpa/translator.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "cpa/debruijn.hpp"
#include "cpa/log.hpp"
#include "parallel.hpp"

namespace cpa {

SamplingPlan SamplingPlan::product(std::vector<std::size_t> per_site) {
  SamplingPlan plan;
  plan.mode = Mode::Product;
  plan.counts = std::move(per_site);
  return plan;
}

SamplingPlan SamplingPlan::joint(std::uint64_t count) {
  SamplingPlan plan;
  plan.mode = Mode::Joint;
  plan.counts.clear();
  plan.joint_count = count;
  return plan;
}

std::size_t SamplingPlan::count_at(std::size_t site, std::size_t window_length) const {
  if (counts.size() == 1) return counts.front();
  if (counts.size() != window_length || site >= window_length) {
    throw InvalidArgument("sampling plan has " + std::to_string(counts.size()) +
                          " per-site counts for a window of " + std::to_string(window_length));
  }
  return counts[site];
}

std::uint64_t SamplingPlan::vectors_per_cell(std::size_t window_length) const {
  if (mode == Mode::Joint) return joint_count;
  std::uint64_t total = 1;
  for (std::size_t k = 0; k < window_length; ++k) total *= count_at(k, window_length);
  return total;
}

void SamplingPlan::validate(std::size_t window_length) const {
  if (mode == Mode::Joint) {
    if (joint_count == 0) throw InvalidArgument("joint sampling needs at least one test vector");
    return;
  }
  if (counts.empty()) throw InvalidArgument("product sampling needs per-site test point counts");
  if (counts.size() != 1 && counts.size() != window_length) {
    throw InvalidArgument("product sampling lists " + std::to_string(counts.size()) +
                          " counts but the preimage window has " + std::to_string(window_length) +
                          " sites");
  }
  for (std::size_t c : counts) {
    if (c == 0) throw InvalidArgument("test point counts must be positive");
  }
}

std::string to_string(const SamplingPlan& plan) {
  std::ostringstream os;
  if (plan.mode == SamplingPlan::Mode::Joint) {
    os << "joint(" << plan.joint_count << ")";
  } else {
    os << "product(";
    for (std::size_t k = 0; k < plan.counts.size(); ++k) os << (k ? "," : "") << plan.counts[k];
    os << ")";
  }
  return os.str();
}

PatternCode map_window(const FlowMap& flow, const Partition& partition,
                       std::span<const double> values, Interval value_window,
                       Interval image_window, std::span<double> scratch, std::uint64_t& clamped) {
  const std::size_t n = partition.dimension();
  const Interval u = flow.neighborhood();
  const std::size_t base = partition.symbol_count();
  PatternCode code = 0;
  for (int x = image_window.lo; x <= image_window.hi; ++x) {
    const std::size_t first = value_window.offset(x + u.lo) * n;
    flow.step(values.subspan(first, u.size() * n), scratch.first(n));
    bool moved = false;
    code = code * base + partition.encode_clamped(scratch.first(n), moved);
    if (moved) ++clamped;
  }
  return code;
}

LocalFunction::LocalFunction(PartitionPtr partition, Interval u, Interval v, TransitionTable table,
                             LocalFunctionMeta meta)
    : partition_(std::move(partition)), u_(u), v_(v), table_(std::move(table)), meta_(std::move(meta)) {
  if (!partition_) throw InvalidArgument("local function needs a partition");
  if (v_.lo > 0 || v_.hi < 0) throw InvalidArgument("pattern window V must contain 0");
  if (u_.empty()) throw InvalidArgument("neighbourhood U must not be empty");
  const std::uint64_t preimages = pattern_space_size(base(), preimage_window().size());
  if (table_.preimage_count() != preimages) {
    throw InvalidArgument("transition table has " + std::to_string(table_.preimage_count()) +
                          " rows, expected |E|^|U+V| = " + std::to_string(preimages));
  }
  const std::uint64_t images = pattern_space_size(base(), v_.size());
  for (PatternCode c = 0; c < preimages; ++c) {
    if (!table_.explored(c)) continue;
    double sum = 0.0;
    for (const auto& e : table_.row(c)) {
      if (e.image >= images || !(e.probability > 0.0)) {
        throw InvalidArgument("invalid image entry in row " + std::to_string(c));
      }
      sum += e.probability;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw InvalidArgument("row " + std::to_string(c) + " of the local function sums to " +
                            std::to_string(sum));
    }
  }
}

SparseDensity LocalFunction::image(PatternCode preimage) const {
  std::vector<WeightedPattern> out;
  for (const auto& e : row(preimage)) out.push_back({e.image, e.probability});
  return SparseDensity::from_entries(v_, base(), std::move(out));
}

bool operator==(const LocalFunction& a, const LocalFunction& b) {
  const bool same_partition = a.partition_ == b.partition_ ||
                              (a.partition_ && b.partition_ && *a.partition_ == *b.partition_);
  return same_partition && a.u_ == b.u_ && a.v_ == b.v_ && a.table_ == b.table_ && a.meta_ == b.meta_;
}

LocalFunctionBuilder::LocalFunctionBuilder(PartitionPtr partition, Interval u, Interval v,
                                           LocalFunctionMeta meta)
    : partition_(std::move(partition)), u_(u), v_(v), meta_(std::move(meta)) {
  if (!partition_) throw InvalidArgument("local function needs a partition");
  const std::size_t base = partition_->symbol_count();
  const std::uint64_t preimages = pattern_space_size(base, (u + v).size());
  if (preimages > kMaxPreimages) {
    throw InvalidArgument("|E|^|U+V| = " + std::to_string(preimages) +
                          " preimage patterns exceed the dense table limit");
  }
  image_space_ = pattern_space_size(base, v.size());
  rows_.resize(preimages);
}

void LocalFunctionBuilder::add_row(PatternCode preimage, const RowCounts& counts) {
  for (const auto& [image, count] : counts.hits) add_hits(preimage, image, count);
  meta_.image_values += counts.total * v_.size();
  meta_.clamped_values += counts.clamped;
}

void LocalFunctionBuilder::add_hits(PatternCode preimage, PatternCode image, std::uint64_t count) {
  if (preimage >= rows_.size() || image >= image_space_) {
    throw InvalidArgument("add_hits: pattern code out of range");
  }
  if (count == 0) return;
  auto& row = rows_[preimage];
  auto it = std::lower_bound(row.begin(), row.end(), image,
                             [](const auto& e, PatternCode c) { return e.first < c; });
  if (it != row.end() && it->first == image) {
    it->second += count;
  } else {
    row.insert(it, {image, count});
  }
}

LocalFunction LocalFunctionBuilder::finish() && {
  const std::uint64_t preimages = rows_.size();
  std::vector<std::vector<ImageEntry>> rows(preimages);
  std::vector<bool> explored(preimages, false);
  for (std::uint64_t k = 0; k < preimages; ++k) {
    std::uint64_t total = 0;
    for (const auto& h : rows_[k]) total += h.second;
    if (total == 0) continue;
    explored[k] = true;
    rows[k].reserve(rows_[k].size());
    for (const auto& [image, count] : rows_[k]) {
      rows[k].push_back({image, static_cast<double>(count) / static_cast<double>(total)});
    }
  }
  rows_.clear();
  return LocalFunction(std::move(partition_), u_, v_,
                       TransitionTable(preimages, std::move(rows), std::move(explored)), std::move(meta_));
}

RowCounts estimate_row(const FlowMap& flow, const Partition& partition, Interval v,
                       const SamplingPlan& plan, std::uint64_t seed, PatternCode preimage) {
  const Interval window = flow.neighborhood() + v;
  const std::size_t base = partition.symbol_count();
  const std::vector<Symbol> cells = decode_pattern(preimage, base, window.size());
  Rng rng(derive_seed(seed, preimage));
  std::vector<double> scratch(partition.dimension());
  std::map<PatternCode, std::uint64_t> hits;
  RowCounts out;
  for_each_test_vector(partition, cells, plan, rng, [&](std::span<const double> values) {
    ++hits[map_window(flow, partition, values, window, v, scratch, out.clamped)];
    ++out.total;
  });
  out.hits.assign(hits.begin(), hits.end());
  return out;
}

LocalFunction estimate_f0(const FlowMap& flow, PartitionPtr partition, Interval v,
                          const SamplingPlan& plan, std::uint64_t seed, const EstimateOptions& options) {
  if (!partition) throw InvalidArgument("estimate_f0 needs a partition");
  if (partition->dimension() != flow.dimension()) {
    throw InvalidArgument("partition dimension " + std::to_string(partition->dimension()) +
                          " does not match the flow's site dimension " +
                          std::to_string(flow.dimension()));
  }
  const Interval u = flow.neighborhood();
  plan.validate((u + v).size());
  LocalFunctionMeta meta{flow.name(), flow.time_step(), seed, plan, 0, 0};
  LocalFunctionBuilder builder(partition, u, v, meta);
  const std::uint64_t preimages = builder.preimage_count();
  std::vector<RowCounts> rows(preimages);
  detail::parallel_for(preimages, options.workers, [&](std::uint64_t k) {
    rows[k] = estimate_row(flow, *partition, v, plan, seed, k);
  });
  for (std::uint64_t k = 0; k < preimages; ++k) builder.add_row(k, rows[k]);
  rows.clear();
  LocalFunction f0 = std::move(builder).finish();
  if (f0.meta().clamp_fraction() > 0.01) {
    warn("estimate_f0: " + std::to_string(100.0 * f0.meta().clamp_fraction()) +
         "% of image values left the domain and were clamped");
  }
  return f0;
}

LocalFunction compose_f0(const LocalFunction& small, Interval w, const EstimateOptions& options) {
  if (w.empty()) throw InvalidArgument("compose_f0: W must not be empty");
  if (w.lo > 0 || w.hi < 0) throw InvalidArgument("compose_f0: W must contain 0");
  // W = {0}: alpha_W is the identity; copying avoids renormalization rounding.
  if (w.size() == 1) return small;
  const std::size_t base = small.base();
  const Interval u = small.neighborhood();
  const Interval small_v = small.pattern_window();
  const Interval v = small_v + w;
  const Interval window = u + v;
  const Interval small_window = u + small_v;

  const std::uint64_t preimages = LocalFunctionBuilder(small.partition_ptr(), u, v, {}).preimage_count();
  std::vector<std::vector<ImageEntry>> rows(preimages);
  std::vector<char> explored(preimages, 0);

  detail::parallel_for(preimages, options.workers, [&](std::uint64_t phi) {
    std::vector<SparseDensity> parts;
    parts.reserve(w.size());
    for (int i = w.lo; i <= w.hi; ++i) {
      const PatternCode local = restrict_code(phi, base, window, small_window.shifted(i));
      if (!small.explored(local)) return;
      parts.push_back(small.image(local));
    }
    const DeBruijnDensity g(w, small_v, base, std::move(parts));
    if (!is_extendable(g)) return;
    const SparseDensity image = normalize(alpha_W(g));
    auto& row = rows[phi];
    row.reserve(image.size());
    for (const auto& e : image) row.push_back({e.code, e.weight});
    explored[phi] = 1;
  });

  LocalFunctionMeta meta = small.meta();
  return LocalFunction(small.partition_ptr(), u, v,
                       TransitionTable(preimages, std::move(rows),
                                       std::vector<bool>(explored.begin(), explored.end())),
                       std::move(meta));
}

}  // namespace cpa
