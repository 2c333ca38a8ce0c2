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

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cpa/densities.hpp"
#include "cpa/error.hpp"
#include "cpa/interval.hpp"
#include "cpa/models.hpp"
#include "cpa/partition.hpp"
#include "cpa/random.hpp"

namespace cpa {

/// How test vectors are drawn inside a product of cells.
///
/// Product: site k of the window gets its own i.i.d. uniform point set of
/// size counts[k]; test vectors are all combinations (last site fastest).
/// Joint: `joint_count` i.i.d. vectors, each uniform on the whole cell product.
struct SamplingPlan {
  enum class Mode : std::uint8_t { Product = 0, Joint = 1 };

  Mode mode = Mode::Product;
  std::vector<std::size_t> counts{1};  // one entry broadcasts to every site
  std::uint64_t joint_count = 0;

  static SamplingPlan product(std::vector<std::size_t> per_site);
  static SamplingPlan joint(std::uint64_t count);

  std::size_t count_at(std::size_t site, std::size_t window_length) const;
  std::uint64_t vectors_per_cell(std::size_t window_length) const;
  /// Throws InvalidArgument for zero counts or a per-site list of the wrong length.
  void validate(std::size_t window_length) const;

  friend bool operator==(const SamplingPlan&, const SamplingPlan&) = default;
};

std::string to_string(const SamplingPlan& plan);

/// Calls visit(values) for every test vector of the cell product `cells`.
/// `values` holds |cells| site values of dimension n, site-major. The draw
/// order is fixed, so a given rng state always yields the same vectors.
template <class Visit>
void for_each_test_vector(const Partition& partition, std::span<const Symbol> cells,
                          const SamplingPlan& plan, Rng& rng, Visit&& visit) {
  const std::size_t n = partition.dimension();
  const std::size_t len = cells.size();
  std::vector<double> point(len * n);
  std::span<double> view(point);
  if (plan.mode == SamplingPlan::Mode::Joint) {
    for (std::uint64_t k = 0; k < plan.joint_count; ++k) {
      for (std::size_t j = 0; j < len; ++j) partition.sample_into(cells[j], rng, view.subspan(j * n, n));
      visit(std::span<const double>(point));
    }
    return;
  }
  std::vector<std::vector<double>> pools(len);
  std::vector<std::size_t> sizes(len);
  for (std::size_t j = 0; j < len; ++j) {
    sizes[j] = plan.count_at(j, len);
    pools[j] = partition.sample_cell(cells[j], rng, sizes[j]);
  }
  auto load = [&](std::size_t j, std::size_t k) {
    std::copy_n(pools[j].begin() + static_cast<std::ptrdiff_t>(k * n), n, view.begin() + static_cast<std::ptrdiff_t>(j * n));
  };
  std::vector<std::size_t> index(len, 0);
  for (std::size_t j = 0; j < len; ++j) load(j, 0);
  for (;;) {
    visit(std::span<const double>(point));
    std::size_t j = len;
    for (;;) {
      if (j == 0) return;
      --j;
      if (++index[j] < sizes[j]) {
        load(j, index[j]);
        break;
      }
      index[j] = 0;
      load(j, 0);
    }
  }
}

/// Applies the flow at every site of `image_window` inside a value window.
/// `values` covers `value_window` (site-major); the image pattern code over
/// `image_window` is returned. Image values outside the domain are clamped;
/// the number of clamped site values is added to `clamped`.
PatternCode map_window(const FlowMap& flow, const Partition& partition,
                       std::span<const double> values, Interval value_window,
                       Interval image_window, std::span<double> scratch, std::uint64_t& clamped);

/// Hit counts of one preimage row.
struct RowCounts {
  std::vector<std::pair<PatternCode, std::uint64_t>> hits;  // sorted by image code
  std::uint64_t total = 0;
  std::uint64_t clamped = 0;  // clamped image site values
};

struct LocalFunctionMeta {
  std::string model;
  double tau = 0.0;
  std::uint64_t seed = 0;
  SamplingPlan plan;
  std::uint64_t image_values = 0;    // image site values evaluated
  std::uint64_t clamped_values = 0;  // of which clamped to the domain

  double clamp_fraction() const {
    return image_values == 0 ? 0.0 : static_cast<double>(clamped_values) / static_cast<double>(image_values);
  }

  friend bool operator==(const LocalFunctionMeta&, const LocalFunctionMeta&) = default;
};

/// The local function f0: E^{U+V} -> D(E^V).
class LocalFunction {
 public:
  LocalFunction() = default;
  LocalFunction(PartitionPtr partition, Interval u, Interval v, TransitionTable table,
                LocalFunctionMeta meta);

  const Partition& partition() const { return *partition_; }
  const PartitionPtr& partition_ptr() const { return partition_; }
  std::size_t base() const { return partition_->symbol_count(); }
  Interval neighborhood() const { return u_; }
  Interval pattern_window() const { return v_; }
  Interval preimage_window() const { return u_ + v_; }
  const TransitionTable& table() const { return table_; }
  const LocalFunctionMeta& meta() const { return meta_; }

  bool explored(PatternCode preimage) const { return table_.explored(preimage); }
  /// Throws UnexploredPreimage.
  std::span<const ImageEntry> row(PatternCode preimage) const { return table_.row(preimage); }
  /// Image density over V. Throws UnexploredPreimage.
  SparseDensity image(PatternCode preimage) const;

  friend bool operator==(const LocalFunction& a, const LocalFunction& b);

 private:
  PartitionPtr partition_;
  Interval u_;
  Interval v_;
  TransitionTable table_;
  LocalFunctionMeta meta_;
};

/// Accumulates integer hit counts per preimage and turns them into exact
/// frequency rows.
class LocalFunctionBuilder {
 public:
  LocalFunctionBuilder(PartitionPtr partition, Interval u, Interval v, LocalFunctionMeta meta);

  std::uint64_t preimage_count() const { return rows_.size(); }
  void add_row(PatternCode preimage, const RowCounts& counts);
  void add_hits(PatternCode preimage, PatternCode image, std::uint64_t count = 1);
  /// Rows without hits stay unexplored.
  LocalFunction finish() &&;

 private:
  PartitionPtr partition_;
  Interval u_;
  Interval v_;
  std::uint64_t image_space_;
  LocalFunctionMeta meta_;
  std::vector<std::vector<std::pair<PatternCode, std::uint64_t>>> rows_;
};

/// Upper bound on |E|^{|U+V|} for dense preimage tables.
inline constexpr std::uint64_t kMaxPreimages = std::uint64_t{1} << 27;

struct EstimateOptions {
  int workers = 0;  // 0: OpenMP default
};

/// Monte Carlo estimate of one row: test vectors for the cell product of
/// `preimage` drawn with seed derive_seed(seed, preimage).
RowCounts estimate_row(const FlowMap& flow, const Partition& partition, Interval v,
                       const SamplingPlan& plan, std::uint64_t seed, PatternCode preimage);

/// Estimates f0 over every preimage pattern of E^{U+V}; U is the flow's
/// neighbourhood. Warns when more than 1% of image values were clamped.
LocalFunction estimate_f0(const FlowMap& flow, PartitionPtr partition, Interval v,
                          const SamplingPlan& plan, std::uint64_t seed,
                          const EstimateOptions& options = {});

/// f0 over V = small.V + W from the smaller table: row(phi) = alpha_W(g) with
/// g(i) = small.row(phi restricted to i + small.V + U). Preimages whose local
/// rows are unexplored or cannot be glued stay unexplored.
LocalFunction compose_f0(const LocalFunction& small, Interval w, const EstimateOptions& options = {});

}  // namespace cpa
