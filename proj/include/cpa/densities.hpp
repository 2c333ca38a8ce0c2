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
#include <utility>
#include <vector>

#include "cpa/interval.hpp"
#include "cpa/partition.hpp"

namespace cpa {

/// Integer encoding of a pattern: symbols of the window read left to right as
/// digits in base |E| (leftmost site most significant).
using PatternCode = std::uint64_t;

/// |E|^length, throwing when it does not fit in 64 bits.
std::uint64_t pattern_space_size(std::size_t base, std::size_t length);

PatternCode encode_pattern(std::span<const Symbol> symbols, std::size_t base);
std::vector<Symbol> decode_pattern(PatternCode code, std::size_t base, std::size_t length);

/// Restriction of `code` over `window` to the sub-window `sub`.
PatternCode restrict_code(PatternCode code, std::size_t base, Interval window, Interval sub);

struct WeightedPattern {
  PatternCode code;
  double weight;

  friend bool operator==(const WeightedPattern&, const WeightedPattern&) = default;
};

/// Nonnegative weights over patterns of one site window, stored sparsely and
/// sorted by pattern code. Stored weights are strictly positive.
class SparseDensity {
 public:
  SparseDensity() = default;
  SparseDensity(Interval window, std::size_t base);

  /// Builds from unsorted entries; duplicate codes are summed, zeros dropped.
  static SparseDensity from_entries(Interval window, std::size_t base,
                                    std::vector<WeightedPattern> entries);
  static SparseDensity point_mass(Interval window, std::size_t base, PatternCode code);

  Interval window() const { return window_; }
  std::size_t base() const { return base_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::vector<WeightedPattern>& entries() const { return entries_; }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  double weight(PatternCode code) const;
  double total() const;
  bool is_normalized(double tolerance = 1e-9) const;

  /// Same weights over the window shifted by `by` (the shift sigma_{-by}).
  SparseDensity shifted(int by) const;

  friend bool operator==(const SparseDensity&, const SparseDensity&) = default;

 private:
  Interval window_;
  std::size_t base_ = 0;
  std::vector<WeightedPattern> entries_;
};

SparseDensity normalize(const SparseDensity& d);

/// Drops entries with weight below `threshold` and renormalizes.
/// threshold == 0 returns the input unchanged.
SparseDensity prune(const SparseDensity& d, double threshold);

/// Sum of |a - b| over the union of supports.
double l1_distance(const SparseDensity& a, const SparseDensity& b);

/// Sums weights of patterns that agree on `sub`.
SparseDensity marginal(const SparseDensity& g, Interval sub);

/// Product measure of independent per-site densities over adjacent single-site
/// windows; the result lives on the union of the windows.
SparseDensity product(const std::vector<SparseDensity>& factors);

/// Per-site densities over a common pattern window V.
class DeBruijnDensity {
 public:
  DeBruijnDensity() = default;
  DeBruijnDensity(Interval sites, Interval pattern_window, std::size_t base,
                  std::vector<SparseDensity> per_site);

  Interval sites() const { return sites_; }
  Interval pattern_window() const { return pattern_window_; }
  std::size_t base() const { return base_; }

  const SparseDensity& at(int site) const { return per_site_[sites_.offset(site)]; }
  SparseDensity& at(int site) { return per_site_[sites_.offset(site)]; }
  const std::vector<SparseDensity>& per_site() const { return per_site_; }

  /// The sub-collection on `sub` (keeps absolute site labels).
  DeBruijnDensity restricted(Interval sub) const;

  /// Single-site marginals (offset 0 of each pattern window), one per site.
  std::vector<SparseDensity> site_marginals() const;

  bool is_normalized(double tolerance = 1e-9) const;

  friend bool operator==(const DeBruijnDensity&, const DeBruijnDensity&) = default;

 private:
  Interval sites_;
  Interval pattern_window_;
  std::size_t base_ = 0;
  std::vector<SparseDensity> per_site_;
};

double max_l1_distance(const DeBruijnDensity& a, const DeBruijnDensity& b);

struct ImageEntry {
  PatternCode image;
  double probability;

  friend bool operator==(const ImageEntry&, const ImageEntry&) = default;
};

/// Row-stochastic sparse map from preimage patterns (dense code range) to
/// image densities, in compressed-row layout. Rows without samples are
/// marked unexplored.
class TransitionTable {
 public:
  TransitionTable() = default;
  TransitionTable(std::uint64_t preimage_count, std::vector<std::vector<ImageEntry>> rows,
                  std::vector<bool> explored);

  std::uint64_t preimage_count() const { return explored_.size(); }
  bool explored(PatternCode preimage) const;
  std::size_t explored_count() const;

  /// Image entries of `preimage`, sorted by image code. Throws UnexploredPreimage.
  std::span<const ImageEntry> row(PatternCode preimage) const;

  std::size_t nonzeros() const { return entries_.size(); }

  friend bool operator==(const TransitionTable&, const TransitionTable&) = default;

 private:
  std::vector<std::uint64_t> offsets_;
  std::vector<ImageEntry> entries_;
  std::vector<bool> explored_;
};

}  // namespace cpa
