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

#include "cpa/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "cpa/error.hpp"

namespace cpa {

DomainViolation::DomainViolation(std::size_t dimension, double value, double lower, double upper)
    : Error([&] {
        std::ostringstream os;
        os << "coordinate " << dimension << " = " << value << " outside domain [" << lower << ", "
           << upper << "]";
        return os.str();
      }()),
      dimension_(dimension),
      value_(value) {}

UnexploredPreimage::UnexploredPreimage(std::uint64_t code, const std::string& where)
    : Error("unexplored preimage pattern " + std::to_string(code) +
            (where.empty() ? std::string() : " (" + where + ")")),
      code_(code),
      where_(where) {}

Box::Box(std::vector<double> lower_, std::vector<double> upper_)
    : lower(std::move(lower_)), upper(std::move(upper_)) {
  if (lower.size() != upper.size() || lower.empty()) {
    throw InvalidArgument("box bounds must have equal, nonzero length");
  }
  for (std::size_t d = 0; d < lower.size(); ++d) {
    if (!(lower[d] < upper[d])) {
      throw InvalidArgument("box needs lower < upper in dimension " + std::to_string(d));
    }
  }
}

double Box::volume() const {
  double v = 1.0;
  for (std::size_t d = 0; d < lower.size(); ++d) v *= upper[d] - lower[d];
  return v;
}

bool Box::contains(std::span<const double> v) const {
  if (v.size() != lower.size()) return false;
  for (std::size_t d = 0; d < v.size(); ++d) {
    if (!(lower[d] <= v[d] && v[d] <= upper[d])) return false;
  }
  return true;
}

std::vector<double> Box::midpoint() const {
  std::vector<double> m(lower.size());
  for (std::size_t d = 0; d < m.size(); ++d) m[d] = 0.5 * (lower[d] + upper[d]);
  return m;
}

Partition::Partition(Kind kind, std::vector<std::vector<double>> breakpoints)
    : kind_(kind), breakpoints_(std::move(breakpoints)) {
  if (breakpoints_.empty()) throw InvalidArgument("partition needs at least one dimension");
  const std::size_t n = breakpoints_.size();
  cells_.resize(n);
  strides_.resize(n);
  std::vector<double> lo(n), hi(n);
  for (std::size_t d = 0; d < n; ++d) {
    const auto& b = breakpoints_[d];
    if (b.size() < 2) throw InvalidArgument("each dimension needs at least one cell");
    for (std::size_t k = 1; k < b.size(); ++k) {
      if (!(b[k - 1] < b[k])) throw InvalidArgument("breakpoints must be strictly increasing");
    }
    cells_[d] = b.size() - 1;
    lo[d] = b.front();
    hi[d] = b.back();
  }
  symbol_count_ = 1;
  for (std::size_t d = n; d-- > 0;) {
    strides_[d] = symbol_count_;
    if (symbol_count_ > std::numeric_limits<Symbol>::max() / cells_[d]) {
      throw InvalidArgument("partition has too many cells");
    }
    symbol_count_ *= cells_[d];
  }
  domain_ = Box(std::move(lo), std::move(hi));
}

Partition Partition::uniform(Box domain, std::vector<std::size_t> cells_per_dim) {
  if (cells_per_dim.size() != domain.dimension()) {
    throw InvalidArgument("cells_per_dim must match the box dimension");
  }
  std::vector<std::vector<double>> bp(cells_per_dim.size());
  for (std::size_t d = 0; d < bp.size(); ++d) {
    const std::size_t k = cells_per_dim[d];
    if (k == 0) throw InvalidArgument("cells_per_dim entries must be positive");
    const double lo = domain.lower[d];
    const double hi = domain.upper[d];
    bp[d].resize(k + 1);
    for (std::size_t j = 0; j <= k; ++j) {
      bp[d][j] = lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(k);
    }
    bp[d][k] = hi;
  }
  return Partition(Kind::Uniform, std::move(bp));
}

Partition Partition::rectilinear(std::vector<std::vector<double>> breakpoints) {
  return Partition(Kind::Rectilinear, std::move(breakpoints));
}

std::size_t Partition::cell_along(std::size_t d, double x) const {
  const auto& b = breakpoints_[d];
  if (!(b.front() <= x && x <= b.back())) throw DomainViolation(d, x, b.front(), b.back());
  // First breakpoint strictly greater than x closes the cell.
  auto it = std::upper_bound(b.begin() + 1, b.end(), x);
  if (it == b.end()) return cells_[d] - 1;
  return static_cast<std::size_t>(it - b.begin()) - 1;
}

Symbol Partition::encode(std::span<const double> v) const {
  if (v.size() != dimension()) throw InvalidArgument("point dimension mismatch");
  std::size_t s = 0;
  for (std::size_t d = 0; d < v.size(); ++d) s += cell_along(d, v[d]) * strides_[d];
  return static_cast<Symbol>(s);
}

Symbol Partition::encode_clamped(std::span<const double> v, bool& clamped) const {
  if (v.size() != dimension()) throw InvalidArgument("point dimension mismatch");
  clamped = false;
  std::size_t s = 0;
  for (std::size_t d = 0; d < v.size(); ++d) {
    double x = v[d];
    if (!std::isfinite(x)) throw DomainViolation(d, x, domain_.lower[d], domain_.upper[d]);
    if (x < domain_.lower[d]) {
      x = domain_.lower[d];
      clamped = true;
    } else if (x > domain_.upper[d]) {
      x = domain_.upper[d];
      clamped = true;
    }
    s += cell_along(d, x) * strides_[d];
  }
  return static_cast<Symbol>(s);
}

void Partition::check_symbol(Symbol s) const {
  if (s >= symbol_count_) {
    throw InvalidArgument("symbol " + std::to_string(s) + " out of range (|E| = " +
                          std::to_string(symbol_count_) + ")");
  }
}

std::vector<std::size_t> Partition::multi_index(Symbol s) const {
  check_symbol(s);
  std::vector<std::size_t> idx(dimension());
  std::size_t rest = s;
  for (std::size_t d = 0; d < idx.size(); ++d) {
    idx[d] = rest / strides_[d];
    rest %= strides_[d];
  }
  return idx;
}

Symbol Partition::from_multi_index(std::span<const std::size_t> index) const {
  if (index.size() != dimension()) throw InvalidArgument("multi-index dimension mismatch");
  std::size_t s = 0;
  for (std::size_t d = 0; d < index.size(); ++d) {
    if (index[d] >= cells_[d]) throw InvalidArgument("multi-index out of range");
    s += index[d] * strides_[d];
  }
  return static_cast<Symbol>(s);
}

Box Partition::cell_bounds(Symbol s) const {
  const auto idx = multi_index(s);
  std::vector<double> lo(idx.size()), hi(idx.size());
  for (std::size_t d = 0; d < idx.size(); ++d) {
    lo[d] = breakpoints_[d][idx[d]];
    hi[d] = breakpoints_[d][idx[d] + 1];
  }
  return Box(std::move(lo), std::move(hi));
}

double Partition::cell_volume(Symbol s) const { return cell_bounds(s).volume(); }

void Partition::sample_into(Symbol s, Rng& rng, std::span<double> out) const {
  std::size_t rest = s;
  for (std::size_t d = 0; d < dimension(); ++d) {
    const std::size_t k = rest / strides_[d];
    rest %= strides_[d];
    const double lo = breakpoints_[d][k];
    const double hi = breakpoints_[d][k + 1];
    double x = lo + (hi - lo) * uniform01(rng);
    // Rounding may land on the open upper face; keep the point in its cell.
    if (x >= hi && k + 1 < cells_[d]) x = std::nextafter(hi, lo);
    out[d] = x;
  }
}

std::vector<double> Partition::sample_cell(Symbol s, Rng& rng, std::size_t count) const {
  check_symbol(s);
  if (count == 0) throw InvalidArgument("sample count must be positive");
  const std::size_t n = dimension();
  std::vector<double> pts(count * n);
  for (std::size_t k = 0; k < count; ++k) sample_into(s, rng, std::span(pts).subspan(k * n, n));
  return pts;
}

}  // namespace cpa
