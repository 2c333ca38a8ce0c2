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

#include "cpa/debruijn.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "cpa/error.hpp"

namespace cpa {

PatternGeometry::PatternGeometry(Interval v, Interval w) : V(v), W(w) {
  if (V.lo > 0 || V.hi < 0) throw InvalidArgument("pattern window must contain site 0");
  if (W.empty()) throw InvalidArgument("de Bruijn site range must not be empty");
}

PatternGeometry geometry_of(const DeBruijnDensity& g) {
  return PatternGeometry(g.pattern_window(), g.sites());
}

DeBruijnDensity beta_W(const SparseDensity& g, const PatternGeometry& geom) {
  if (g.window() != geom.combined()) {
    throw InvalidArgument("beta_W: density window " + to_string(g.window()) + " is not V+W = " +
                          to_string(geom.combined()));
  }
  std::vector<SparseDensity> parts;
  parts.reserve(geom.W.size());
  for (int i = geom.W.lo; i <= geom.W.hi; ++i) {
    parts.push_back(marginal(g, geom.V.shifted(i)).shifted(-i));
  }
  return DeBruijnDensity(geom.W, geom.V, g.base(), std::move(parts));
}

namespace {

struct Bucket {
  double mass = 0.0;
  std::vector<WeightedPattern> patterns;
};

using BucketMap = std::unordered_map<PatternCode, Bucket>;

// Groups a site's supported patterns by their V- prefix and V+ suffix.
struct SiteIndex {
  BucketMap by_prefix;
  BucketMap by_suffix;
};

class Assembler {
 public:
  explicit Assembler(const DeBruijnDensity& g)
      : g_(g),
        base_(g.base()),
        width_(g.pattern_window().size()),
        overlap_space_(pattern_space_size(base_, width_ - 1)) {
    index_.resize(g.sites().size());
    for (int site = g.sites().lo; site <= g.sites().hi; ++site) {
      auto& idx = index_[g.sites().offset(site)];
      for (const auto& e : g.at(site)) {
        auto& pre = idx.by_prefix[e.code / base_];
        pre.mass += e.weight;
        pre.patterns.push_back(e);
        auto& suf = idx.by_suffix[e.code % overlap_space_];
        suf.mass += e.weight;
        suf.patterns.push_back(e);
      }
    }
  }

  void run(int anchor, double scale, std::vector<WeightedPattern>& out) {
    anchor_ = anchor;
    out_ = &out;
    for (const auto& e : g_.at(anchor)) extend_right(anchor + 1, e.code, width_, e.weight * scale);
  }

 private:
  void extend_right(int site, PatternCode cur, std::size_t len, double w) {
    if (site > g_.sites().hi) {
      extend_left(anchor_ - 1, cur, len, w);
      return;
    }
    const auto& buckets = index_[g_.sites().offset(site)].by_prefix;
    auto it = buckets.find(cur % overlap_space_);
    if (it == buckets.end()) throw_dead_end(site);
    for (const auto& e : it->second.patterns) {
      extend_right(site + 1, cur * base_ + e.code % base_, len + 1, w * (e.weight / it->second.mass));
    }
  }

  void extend_left(int site, PatternCode cur, std::size_t len, double w) {
    if (site < g_.sites().lo) {
      out_->push_back({cur, w});
      return;
    }
    const std::uint64_t tail = pattern_space_size(base_, len - (width_ - 1));
    const auto& buckets = index_[g_.sites().offset(site)].by_suffix;
    auto it = buckets.find(cur / tail);
    if (it == buckets.end()) throw_dead_end(site);
    const std::uint64_t lead = tail * overlap_space_;
    for (const auto& e : it->second.patterns) {
      const PatternCode first = e.code / overlap_space_;
      extend_left(site - 1, first * lead + cur, len + 1, w * (e.weight / it->second.mass));
    }
  }

  [[noreturn]] void throw_dead_end(int site) const {
    throw NonExtendable("supported pattern cannot be continued at site " + std::to_string(site) +
                        " (anchor " + std::to_string(anchor_) + ")");
  }

  const DeBruijnDensity& g_;
  std::size_t base_;
  std::size_t width_;
  std::uint64_t overlap_space_;
  std::vector<SiteIndex> index_;
  int anchor_ = 0;
  std::vector<WeightedPattern>* out_ = nullptr;
};

Interval output_window(const DeBruijnDensity& g) { return g.sites() + g.pattern_window(); }

}  // namespace

SparseDensity alpha_W_i(const DeBruijnDensity& g, int anchor) {
  if (!g.sites().contains(anchor)) {
    throw InvalidArgument("alpha_W_i: anchor " + std::to_string(anchor) + " not in " +
                          to_string(g.sites()));
  }
  const Interval window = output_window(g);
  pattern_space_size(g.base(), window.size());
  std::vector<WeightedPattern> out;
  Assembler(g).run(anchor, 1.0, out);
  if (out.empty()) throw NonExtendable("alpha_W_i: anchor site has no supported pattern");
  return SparseDensity::from_entries(window, g.base(), std::move(out));
}

SparseDensity alpha_W(const DeBruijnDensity& g) {
  const Interval window = output_window(g);
  pattern_space_size(g.base(), window.size());
  const double scale = 1.0 / static_cast<double>(g.sites().size());
  std::vector<WeightedPattern> out;
  Assembler assembler(g);
  for (int i = g.sites().lo; i <= g.sites().hi; ++i) assembler.run(i, scale, out);
  if (out.empty()) throw NonExtendable("alpha_W: no supported pattern");
  return SparseDensity::from_entries(window, g.base(), std::move(out));
}

namespace {

// alive[k] holds the supported patterns at site sites.lo + k that survive the
// sweep in the requested direction.
std::vector<std::unordered_set<PatternCode>> sweep(const DeBruijnDensity& g, bool rightward) {
  const std::size_t base = g.base();
  const std::uint64_t overlap = pattern_space_size(base, g.pattern_window().size() - 1);
  const Interval sites = g.sites();
  std::vector<std::unordered_set<PatternCode>> alive(sites.size());
  // rightward: a pattern survives if its left neighbourhood can be glued (left chain).
  const int first = rightward ? sites.lo : sites.hi;
  const int step = rightward ? 1 : -1;
  for (const auto& e : g.at(first)) alive[sites.offset(first)].insert(e.code);
  for (int site = first + step; sites.contains(site); site += step) {
    std::unordered_set<PatternCode> keys;
    for (PatternCode c : alive[sites.offset(site - step)]) {
      keys.insert(rightward ? c % overlap : c / base);
    }
    for (const auto& e : g.at(site)) {
      const PatternCode key = rightward ? e.code / base : e.code % overlap;
      if (keys.contains(key)) alive[sites.offset(site)].insert(e.code);
    }
  }
  return alive;
}

}  // namespace

bool is_extendable(const DeBruijnDensity& g) {
  const auto left_chain = sweep(g, true);
  const auto right_chain = sweep(g, false);
  for (int site = g.sites().lo; site <= g.sites().hi; ++site) {
    const std::size_t k = g.sites().offset(site);
    for (const auto& e : g.at(site)) {
      if (!left_chain[k].contains(e.code) || !right_chain[k].contains(e.code)) return false;
    }
  }
  return true;
}

DeBruijnDensity trim_to_extendable(const DeBruijnDensity& g) {
  const auto left_chain = sweep(g, true);
  const auto right_chain = sweep(g, false);
  std::vector<SparseDensity> parts;
  parts.reserve(g.sites().size());
  for (int site = g.sites().lo; site <= g.sites().hi; ++site) {
    const std::size_t k = g.sites().offset(site);
    const auto& d = g.at(site);
    std::vector<WeightedPattern> kept;
    for (const auto& e : d) {
      if (left_chain[k].contains(e.code) && right_chain[k].contains(e.code)) kept.push_back(e);
    }
    if (kept.empty()) {
      throw NonExtendable("no extendable pattern left at site " + std::to_string(site));
    }
    if (kept.size() == d.size()) {
      parts.push_back(d);
    } else {
      parts.push_back(normalize(SparseDensity::from_entries(d.window(), d.base(), std::move(kept))));
    }
  }
  return DeBruijnDensity(g.sites(), g.pattern_window(), g.base(), std::move(parts));
}

bool is_v_factorizable(const SparseDensity& g, const PatternGeometry& geom, double tolerance) {
  const DeBruijnDensity local = beta_W(g, geom);
  for (int i = geom.W.lo; i <= geom.W.hi; ++i) {
    if (l1_distance(alpha_W_i(local, i), g) >= tolerance) return false;
  }
  return true;
}

}  // namespace cpa
