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
#include <string>

namespace cpa {

/// Contiguous integer range {lo, ..., hi}. Empty when hi < lo.
struct Interval {
  int lo = 0;
  int hi = -1;

  constexpr Interval() = default;
  constexpr Interval(int lo_, int hi_) : lo(lo_), hi(hi_) {}

  static constexpr Interval single(int site) { return {site, site}; }

  constexpr bool empty() const { return hi < lo; }
  constexpr std::size_t size() const { return empty() ? 0 : static_cast<std::size_t>(hi - lo + 1); }
  constexpr bool contains(int site) const { return lo <= site && site <= hi; }
  constexpr bool contains(Interval other) const {
    return other.empty() || (lo <= other.lo && other.hi <= hi);
  }

  /// l + J
  constexpr Interval shifted(int by) const { return {lo + by, hi + by}; }

  /// Position of `site` counted from the left end.
  constexpr std::size_t offset(int site) const { return static_cast<std::size_t>(site - lo); }

  friend constexpr bool operator==(Interval, Interval) = default;
};

/// Minkowski sum A + B = {a.lo + b.lo, ..., a.hi + b.hi}.
constexpr Interval operator+(Interval a, Interval b) { return {a.lo + b.lo, a.hi + b.hi}; }

constexpr Interval intersect(Interval a, Interval b) {
  return {a.lo > b.lo ? a.lo : b.lo, a.hi < b.hi ? a.hi : b.hi};
}

inline std::string to_string(Interval j) {
  return "{" + std::to_string(j.lo) + ".." + std::to_string(j.hi) + "}";
}

}  // namespace cpa
