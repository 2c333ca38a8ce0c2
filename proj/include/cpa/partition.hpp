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
#include <memory>
#include <span>
#include <vector>

#include "cpa/random.hpp"

namespace cpa {

/// Cell label, row-major over dimensions (last dimension varies fastest).
using Symbol = std::uint32_t;

/// Axis-aligned box in R^n.
struct Box {
  std::vector<double> lower;
  std::vector<double> upper;

  Box() = default;
  Box(std::vector<double> lower_, std::vector<double> upper_);

  std::size_t dimension() const { return lower.size(); }
  double volume() const;
  bool contains(std::span<const double> v) const;
  std::vector<double> midpoint() const;

  friend bool operator==(const Box&, const Box&) = default;
};

/// Product partition of a box into cells, described by sorted per-dimension
/// breakpoints. Cells are half-open [lo, hi) except the last cell along each
/// dimension, which is closed so that the domain is covered.
///
/// Uniform partitions are the special case of equally spaced breakpoints; the
/// rectilinear form exists for hand-made interval codings.
class Partition {
 public:
  enum class Kind : std::uint8_t { Uniform = 0, Rectilinear = 1 };

  static Partition uniform(Box domain, std::vector<std::size_t> cells_per_dim);
  static Partition rectilinear(std::vector<std::vector<double>> breakpoints);

  Kind kind() const { return kind_; }
  std::size_t dimension() const { return breakpoints_.size(); }
  std::size_t symbol_count() const { return symbol_count_; }
  const std::vector<std::size_t>& cells_per_dim() const { return cells_; }
  const std::vector<std::vector<double>>& breakpoints() const { return breakpoints_; }
  const Box& domain() const { return domain_; }

  /// Coding map. Throws DomainViolation outside the domain.
  Symbol encode(std::span<const double> v) const;

  /// Coding map after componentwise clamping to the domain. Sets `clamped`
  /// when any component had to be moved. Non-finite input throws.
  Symbol encode_clamped(std::span<const double> v, bool& clamped) const;

  Box cell_bounds(Symbol s) const;
  double cell_volume(Symbol s) const;

  /// `count` i.i.d. uniform points in cell `s`, flattened (count x n).
  std::vector<double> sample_cell(Symbol s, Rng& rng, std::size_t count) const;

  /// Writes one uniform point of cell `s` into `out` (n entries).
  void sample_into(Symbol s, Rng& rng, std::span<double> out) const;

  std::vector<std::size_t> multi_index(Symbol s) const;
  Symbol from_multi_index(std::span<const std::size_t> index) const;

  friend bool operator==(const Partition& a, const Partition& b) {
    return a.kind_ == b.kind_ && a.breakpoints_ == b.breakpoints_;
  }

 private:
  Partition(Kind kind, std::vector<std::vector<double>> breakpoints);

  std::size_t cell_along(std::size_t d, double x) const;
  void check_symbol(Symbol s) const;

  Kind kind_;
  std::vector<std::vector<double>> breakpoints_;
  std::vector<std::size_t> cells_;
  std::vector<std::size_t> strides_;
  std::size_t symbol_count_ = 0;
  Box domain_;
};

using PartitionPtr = std::shared_ptr<const Partition>;

}  // namespace cpa
