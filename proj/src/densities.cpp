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

#include "cpa/densities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cpa/error.hpp"

namespace cpa {

std::uint64_t pattern_space_size(std::size_t base, std::size_t length) {
  if (base == 0) throw InvalidArgument("symbol set must not be empty");
  std::uint64_t size = 1;
  for (std::size_t k = 0; k < length; ++k) {
    if (size > std::numeric_limits<std::uint64_t>::max() / base) {
      throw InvalidArgument("pattern space |E|^" + std::to_string(length) +
                            " does not fit in 64 bits");
    }
    size *= base;
  }
  return size;
}

PatternCode encode_pattern(std::span<const Symbol> symbols, std::size_t base) {
  pattern_space_size(base, symbols.size());
  PatternCode code = 0;
  for (Symbol s : symbols) {
    if (s >= base) throw InvalidArgument("symbol out of range while encoding pattern");
    code = code * base + s;
  }
  return code;
}

std::vector<Symbol> decode_pattern(PatternCode code, std::size_t base, std::size_t length) {
  std::vector<Symbol> out(length);
  for (std::size_t k = length; k-- > 0;) {
    out[k] = static_cast<Symbol>(code % base);
    code /= base;
  }
  return out;
}

PatternCode restrict_code(PatternCode code, std::size_t base, Interval window, Interval sub) {
  if (sub.empty()) return 0;
  const std::uint64_t tail = pattern_space_size(base, static_cast<std::size_t>(window.hi - sub.hi));
  return (code / tail) % pattern_space_size(base, sub.size());
}

SparseDensity::SparseDensity(Interval window, std::size_t base) : window_(window), base_(base) {
  pattern_space_size(base, window.size());
}

SparseDensity SparseDensity::from_entries(Interval window, std::size_t base,
                                          std::vector<WeightedPattern> entries) {
  SparseDensity d(window, base);
  const std::uint64_t space = pattern_space_size(base, window.size());
  std::sort(entries.begin(), entries.end(),
            [](const WeightedPattern& a, const WeightedPattern& b) { return a.code < b.code; });
  for (const auto& e : entries) {
    if (e.code >= space) throw InvalidArgument("pattern code outside the window's pattern space");
    if (!(e.weight >= 0.0) || !std::isfinite(e.weight)) {
      throw InvalidArgument("density weights must be finite and nonnegative");
    }
    if (!d.entries_.empty() && d.entries_.back().code == e.code) {
      d.entries_.back().weight += e.weight;
    } else if (e.weight > 0.0) {
      d.entries_.push_back(e);
    }
  }
  std::erase_if(d.entries_, [](const WeightedPattern& e) { return !(e.weight > 0.0); });
  return d;
}

SparseDensity SparseDensity::point_mass(Interval window, std::size_t base, PatternCode code) {
  return from_entries(window, base, {{code, 1.0}});
}

double SparseDensity::weight(PatternCode code) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), code,
                             [](const WeightedPattern& e, PatternCode c) { return e.code < c; });
  return (it != entries_.end() && it->code == code) ? it->weight : 0.0;
}

double SparseDensity::total() const {
  double t = 0.0;
  for (const auto& e : entries_) t += e.weight;
  return t;
}

bool SparseDensity::is_normalized(double tolerance) const {
  return !entries_.empty() && std::abs(total() - 1.0) <= tolerance;
}

SparseDensity SparseDensity::shifted(int by) const {
  SparseDensity d = *this;
  d.window_ = window_.shifted(by);
  return d;
}

SparseDensity normalize(const SparseDensity& d) {
  const double t = d.total();
  if (!(t > 0.0)) throw ZeroMass("cannot normalize a density with zero total mass");
  std::vector<WeightedPattern> e = d.entries();
  for (auto& x : e) x.weight /= t;
  return SparseDensity::from_entries(d.window(), d.base(), std::move(e));
}

SparseDensity prune(const SparseDensity& d, double threshold) {
  if (!(threshold >= 0.0 && threshold < 1.0)) {
    throw InvalidArgument("pruning threshold must lie in [0, 1)");
  }
  if (threshold == 0.0) return d;
  std::vector<WeightedPattern> kept;
  kept.reserve(d.size());
  for (const auto& e : d) {
    if (!(e.weight < threshold)) kept.push_back(e);
  }
  if (kept.empty()) throw ZeroMass("pruning removed all probability mass");
  if (kept.size() == d.size()) return d;
  return normalize(SparseDensity::from_entries(d.window(), d.base(), std::move(kept)));
}

double l1_distance(const SparseDensity& a, const SparseDensity& b) {
  if (a.window() != b.window() || a.base() != b.base()) {
    throw InvalidArgument("l1_distance: densities live on different windows " +
                          to_string(a.window()) + " vs " + to_string(b.window()));
  }
  double sum = 0.0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() || ib != b.end()) {
    if (ib == b.end() || (ia != a.end() && ia->code < ib->code)) {
      sum += ia->weight;
      ++ia;
    } else if (ia == a.end() || ib->code < ia->code) {
      sum += ib->weight;
      ++ib;
    } else {
      sum += std::abs(ia->weight - ib->weight);
      ++ia;
      ++ib;
    }
  }
  return sum;
}

SparseDensity marginal(const SparseDensity& g, Interval sub) {
  if (!g.window().contains(sub)) {
    throw InvalidArgument("marginal: " + to_string(sub) + " is not inside " + to_string(g.window()));
  }
  if (sub == g.window()) return g;
  std::vector<WeightedPattern> out;
  out.reserve(g.size());
  for (const auto& e : g) {
    out.push_back({restrict_code(e.code, g.base(), g.window(), sub), e.weight});
  }
  return SparseDensity::from_entries(sub, g.base(), std::move(out));
}

SparseDensity product(const std::vector<SparseDensity>& factors) {
  if (factors.empty()) throw InvalidArgument("product of zero densities");
  const std::size_t base = factors.front().base();
  Interval window = factors.front().window();
  std::vector<WeightedPattern> acc(factors.front().begin(), factors.front().end());
  for (std::size_t k = 1; k < factors.size(); ++k) {
    const auto& f = factors[k];
    if (f.base() != base || f.window().lo != window.hi + 1) {
      throw InvalidArgument("product factors must be adjacent windows over one symbol set");
    }
    const std::uint64_t scale = pattern_space_size(base, f.window().size());
    std::vector<WeightedPattern> next;
    next.reserve(acc.size() * f.size());
    for (const auto& a : acc) {
      for (const auto& b : f) next.push_back({a.code * scale + b.code, a.weight * b.weight});
    }
    acc = std::move(next);
    window.hi = f.window().hi;
  }
  return SparseDensity::from_entries(window, base, std::move(acc));
}

DeBruijnDensity::DeBruijnDensity(Interval sites, Interval pattern_window, std::size_t base,
                                 std::vector<SparseDensity> per_site)
    : sites_(sites), pattern_window_(pattern_window), base_(base), per_site_(std::move(per_site)) {
  if (per_site_.size() != sites_.size()) {
    throw InvalidArgument("de Bruijn density needs one local density per site");
  }
  for (const auto& d : per_site_) {
    if (d.window() != pattern_window_ || d.base() != base_) {
      throw InvalidArgument("local densities must share the pattern window " +
                            to_string(pattern_window_));
    }
  }
}

DeBruijnDensity DeBruijnDensity::restricted(Interval sub) const {
  if (!sites_.contains(sub) || sub.empty()) {
    throw InvalidArgument("restricted: " + to_string(sub) + " not inside " + to_string(sites_));
  }
  std::vector<SparseDensity> parts(per_site_.begin() + static_cast<std::ptrdiff_t>(sites_.offset(sub.lo)),
                                   per_site_.begin() + static_cast<std::ptrdiff_t>(sites_.offset(sub.hi)) + 1);
  return DeBruijnDensity(sub, pattern_window_, base_, std::move(parts));
}

std::vector<SparseDensity> DeBruijnDensity::site_marginals() const {
  std::vector<SparseDensity> out;
  out.reserve(per_site_.size());
  for (const auto& d : per_site_) out.push_back(marginal(d, Interval::single(0)));
  return out;
}

bool DeBruijnDensity::is_normalized(double tolerance) const {
  return std::all_of(per_site_.begin(), per_site_.end(),
                     [&](const SparseDensity& d) { return d.is_normalized(tolerance); });
}

double max_l1_distance(const DeBruijnDensity& a, const DeBruijnDensity& b) {
  if (a.sites() != b.sites()) throw InvalidArgument("de Bruijn densities on different sites");
  double worst = 0.0;
  for (int i = a.sites().lo; i <= a.sites().hi; ++i) {
    worst = std::max(worst, l1_distance(a.at(i), b.at(i)));
  }
  return worst;
}

TransitionTable::TransitionTable(std::uint64_t preimage_count,
                                 std::vector<std::vector<ImageEntry>> rows,
                                 std::vector<bool> explored)
    : explored_(std::move(explored)) {
  if (rows.size() != preimage_count || explored_.size() != preimage_count) {
    throw InvalidArgument("transition table needs one row per preimage");
  }
  offsets_.resize(preimage_count + 1);
  std::size_t nnz = 0;
  for (const auto& r : rows) nnz += r.size();
  entries_.reserve(nnz);
  for (std::uint64_t k = 0; k < preimage_count; ++k) {
    offsets_[k] = entries_.size();
    auto& r = rows[k];
    std::sort(r.begin(), r.end(),
              [](const ImageEntry& a, const ImageEntry& b) { return a.image < b.image; });
    entries_.insert(entries_.end(), r.begin(), r.end());
  }
  offsets_[preimage_count] = entries_.size();
}

bool TransitionTable::explored(PatternCode preimage) const {
  return preimage < explored_.size() && explored_[preimage];
}

std::size_t TransitionTable::explored_count() const {
  return static_cast<std::size_t>(std::count(explored_.begin(), explored_.end(), true));
}

std::span<const ImageEntry> TransitionTable::row(PatternCode preimage) const {
  if (!explored(preimage)) throw UnexploredPreimage(preimage);
  return std::span(entries_).subspan(offsets_[preimage], offsets_[preimage + 1] - offsets_[preimage]);
}

}  // namespace cpa
