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

// Independent brute-force oracles and fixtures shared by the unit tests.
// Everything here enumerates patterns explicitly and avoids the library's
// sparse assembly paths.

#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <vector>

#include "cpa/automaton.hpp"
#include "cpa/densities.hpp"
#include "cpa/partition.hpp"
#include "cpa/random.hpp"
#include "cpa/translator.hpp"

namespace testing {

using namespace cpa;

inline std::vector<Symbol> digits(PatternCode code, std::size_t base, std::size_t length) {
  std::vector<Symbol> out(length);
  for (std::size_t k = length; k-- > 0;) {
    out[k] = static_cast<Symbol>(code % base);
    code /= base;
  }
  return out;
}

inline PatternCode number(const std::vector<Symbol>& d, std::size_t base) {
  PatternCode c = 0;
  for (Symbol s : d) c = c * base + s;
  return c;
}

inline std::uint64_t power(std::size_t base, std::size_t exp) {
  std::uint64_t out = 1;
  for (std::size_t k = 0; k < exp; ++k) out *= base;
  return out;
}

/// Pattern code over `window` from a map site -> symbol.
inline PatternCode code_on(const std::map<int, Symbol>& state, Interval window, std::size_t base) {
  PatternCode c = 0;
  for (int j = window.lo; j <= window.hi; ++j) c = c * base + state.at(j);
  return c;
}

/// Random density with support on a random subset of the window's patterns.
inline SparseDensity random_density(Rng& rng, Interval window, std::size_t base, double keep = 0.6) {
  const std::uint64_t size = power(base, window.size());
  std::vector<WeightedPattern> entries;
  for (PatternCode c = 0; c < size; ++c) {
    if (uniform01(rng) < keep) entries.push_back({c, 0.05 + uniform01(rng)});
  }
  if (entries.empty()) entries.push_back({static_cast<PatternCode>(rng() % size), 1.0});
  return normalize(SparseDensity::from_entries(window, base, std::move(entries)));
}

/// Literal alpha_{W,i}: anchor weight times, for sites k < i, the conditional
/// mu_k(x | overlap with k+1) and for l > i, mu_l(x | overlap with l-1). The
/// conditionals are computed by summing explicitly over each site's support.
inline double alpha_formula_at(const DeBruijnDensity& g, int anchor, PatternCode x) {
  const std::size_t base = g.base();
  const Interval v = g.pattern_window();
  const Interval w = g.sites();
  const Interval window = w + v;
  const auto xs = digits(x, base, window.size());
  auto local = [&](int site) {  // digits of x on site + V
    std::vector<Symbol> out;
    for (int j = site + v.lo; j <= site + v.hi; ++j) out.push_back(xs[static_cast<std::size_t>(j - window.lo)]);
    return out;
  };
  double value = 1.0;
  for (int site = w.lo; site <= w.hi; ++site) {
    const auto mine = local(site);
    double num = 0.0, den = 0.0;
    for (const auto& e : g.at(site)) {
      const auto pat = digits(e.code, base, v.size());
      if (pat == mine) num += e.weight;
      if (site == anchor) continue;
      // Overlap with the neighbour towards the anchor.
      bool match = true;
      if (site > anchor) {
        for (std::size_t k = 0; k + 1 < pat.size(); ++k) match = match && pat[k] == mine[k];
      } else {
        for (std::size_t k = 1; k < pat.size(); ++k) match = match && pat[k] == mine[k];
      }
      if (match) den += e.weight;
    }
    if (site == anchor) {
      value *= num;
    } else {
      value = den > 0.0 ? value * num / den : 0.0;
    }
  }
  return value;
}

inline SparseDensity alpha_formula(const DeBruijnDensity& g, int anchor) {
  const Interval window = g.sites() + g.pattern_window();
  std::vector<WeightedPattern> out;
  for (PatternCode x = 0; x < power(g.base(), window.size()); ++x) {
    const double v = alpha_formula_at(g, anchor, x);
    if (v > 0.0) out.push_back({x, v});
  }
  return SparseDensity::from_entries(window, g.base(), std::move(out));
}

/// Marginal by explicit summation over decoded patterns.
inline SparseDensity brute_marginal(const SparseDensity& g, Interval sub) {
  std::map<PatternCode, double> acc;
  const auto w = g.window();
  for (const auto& e : g) {
    const auto d = digits(e.code, g.base(), w.size());
    PatternCode c = 0;
    for (int j = sub.lo; j <= sub.hi; ++j) c = c * g.base() + d[static_cast<std::size_t>(j - w.lo)];
    acc[c] += e.weight;
  }
  std::vector<WeightedPattern> out;
  for (const auto& [c, v] : acc) out.push_back({c, v});
  return SparseDensity::from_entries(sub, g.base(), std::move(out));
}

/// Step for V = {0} with a deterministic boundary: for every site i of I~,
/// f(g)(i)(psi) = sum over phi in E^{i+U} consistent with rho of
/// prod_{j in (i+U) \ K} g(j)(phi(j)) * f0(phi)(psi).
inline DeBruijnDensity product_step(const Automaton& a, const DeBruijnDensity& g, const std::vector<Symbol>& rho_l,
                                    const std::vector<Symbol>& rho_r) {
  const std::size_t base = a.base();
  const Interval u = a.neighborhood();
  const int m = static_cast<int>(a.sites());
  const int r = -u.lo, s = u.hi;
  std::vector<SparseDensity> parts;
  for (int i = a.i_left(); i <= a.i_right(); ++i) {
    std::vector<double> image(base, 0.0);
    for (PatternCode phi = 0; phi < power(base, u.size()); ++phi) {
      const auto d = digits(phi, base, u.size());
      double w = 1.0;
      for (int k = u.lo; k <= u.hi; ++k) {
        const int site = i + k;
        const Symbol sym = d[static_cast<std::size_t>(k - u.lo)];
        if (site <= r) {
          w *= sym == rho_l[static_cast<std::size_t>(site - 1)] ? 1.0 : 0.0;
        } else if (site > m - s) {
          w *= sym == rho_r[static_cast<std::size_t>(site - (m - s) - 1)] ? 1.0 : 0.0;
        } else {
          w *= g.at(site).weight(sym);
        }
      }
      if (w == 0.0) continue;
      for (const auto& e : a.local_function().row(phi)) image[e.image] += w * e.probability;
    }
    std::vector<WeightedPattern> out;
    for (Symbol c = 0; c < base; ++c) {
      if (image[c] > 0.0) out.push_back({c, image[c]});
    }
    parts.push_back(normalize(SparseDensity::from_entries({0, 0}, base, std::move(out))));
  }
  return DeBruijnDensity(a.interior(), {0, 0}, base, std::move(parts));
}

/// f0 that maps every preimage deterministically to its own V-part.
inline std::shared_ptr<const LocalFunction> delta_table(PartitionPtr partition, Interval u, Interval v) {
  const std::size_t base = partition->symbol_count();
  LocalFunctionBuilder b(partition, u, v, LocalFunctionMeta{"identity", 1.0, 0, {}, 0, 0});
  const Interval window = u + v;
  for (PatternCode phi = 0; phi < power(base, window.size()); ++phi) {
    b.add_hits(phi, restrict_code(phi, base, window, v), 1);
  }
  return std::make_shared<const LocalFunction>(std::move(b).finish());
}

/// Random row-stochastic table with rows of random support.
inline std::shared_ptr<const LocalFunction> random_table(Rng& rng, PartitionPtr partition, Interval u, Interval v) {
  const std::size_t base = partition->symbol_count();
  LocalFunctionBuilder b(partition, u, v, LocalFunctionMeta{"random", 1.0, 0, {}, 0, 0});
  const Interval window = u + v;
  const std::uint64_t images = power(base, v.size());
  for (PatternCode phi = 0; phi < power(base, window.size()); ++phi) {
    const std::uint64_t hits = 1 + rng() % 3;
    for (std::uint64_t k = 0; k < hits; ++k) b.add_hits(phi, rng() % images, 1 + rng() % 5);
  }
  return std::make_shared<const LocalFunction>(std::move(b).finish());
}

inline PartitionPtr unit_partition(std::size_t cells) {
  return std::make_shared<const Partition>(Partition::uniform(Box({0.0}, {1.0}), {cells}));
}

/// The interval coding w0 = 0, 0.183, 0.31, 0.4, 0.7, 1.
inline PartitionPtr locality_partition() {
  return std::make_shared<const Partition>(Partition::rectilinear({{0.0, 0.183, 0.31, 0.4, 0.7, 1.0}}));
}

}  // namespace testing
