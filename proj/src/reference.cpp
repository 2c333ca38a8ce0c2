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

#include "cpa/reference.hpp"

#include <vector>

#include "cpa/error.hpp"

namespace cpa::reference {

namespace {

// Dense weight tables of one de Bruijn site.
struct DenseSite {
  std::vector<double> weight;  // by pattern code over V
  std::vector<double> prefix;  // mass by V- code
  std::vector<double> suffix;  // mass by V+ code
};

DenseSite dense_site(const SparseDensity& d, std::size_t base, std::size_t width) {
  const std::uint64_t full = pattern_space_size(base, width);
  const std::uint64_t overlap = pattern_space_size(base, width - 1);
  DenseSite s{std::vector<double>(full, 0.0), std::vector<double>(overlap, 0.0), std::vector<double>(overlap, 0.0)};
  for (const auto& e : d) s.weight[e.code] = e.weight;
  for (std::uint64_t c = 0; c < full; ++c) {
    s.prefix[c / base] += s.weight[c];
    s.suffix[c % overlap] += s.weight[c];
  }
  return s;
}

std::uint64_t code_of(const std::vector<Symbol>& digits, std::size_t from, std::size_t length, std::size_t base) {
  std::uint64_t c = 0;
  for (std::size_t k = 0; k < length; ++k) c = c * base + digits[from + k];
  return c;
}

// Accumulates scale * alpha_{W,anchor}(x) into out[x] for every x.
void accumulate_alpha(const DeBruijnDensity& g, const std::vector<DenseSite>& sites, int anchor, double scale,
                      std::vector<double>& out) {
  const std::size_t base = g.base();
  const std::size_t width = g.pattern_window().size();
  const Interval w = g.sites();
  const std::size_t length = w.size() + width - 1;
  for (std::uint64_t x = 0; x < out.size(); ++x) {
    const auto digits = decode_pattern(x, base, length);
    double value = scale;
    for (int j = w.lo; j <= w.hi && value > 0.0; ++j) {
      const std::size_t k = w.offset(j);
      const DenseSite& s = sites[k];
      const double num = s.weight[code_of(digits, k, width, base)];
      if (j == anchor) {
        value *= num;
      } else if (j > anchor) {
        const double den = s.prefix[code_of(digits, k, width - 1, base)];
        value = den > 0.0 ? value * num / den : 0.0;
      } else {
        const double den = s.suffix[code_of(digits, k + 1, width - 1, base)];
        value = den > 0.0 ? value * num / den : 0.0;
      }
    }
    out[x] += value;
  }
}

SparseDensity to_sparse(const std::vector<double>& dense, Interval window, std::size_t base) {
  std::vector<WeightedPattern> entries;
  for (std::uint64_t c = 0; c < dense.size(); ++c) {
    if (dense[c] > 0.0) entries.push_back({c, dense[c]});
  }
  return SparseDensity::from_entries(window, base, std::move(entries));
}

SparseDensity alpha_impl(const DeBruijnDensity& g, Interval anchors) {
  const std::size_t base = g.base();
  const std::size_t width = g.pattern_window().size();
  const Interval window = g.sites() + g.pattern_window();
  std::vector<DenseSite> sites;
  for (const auto& d : g.per_site()) sites.push_back(dense_site(d, base, width));
  std::vector<double> out(pattern_space_size(base, window.size()), 0.0);
  const double scale = 1.0 / static_cast<double>(anchors.size());
  for (int a = anchors.lo; a <= anchors.hi; ++a) accumulate_alpha(g, sites, a, scale, out);
  return to_sparse(out, window, base);
}

// Dense marginal weights of `d` on `sub`, indexed by code over `sub`.
std::vector<double> dense_marginal(const SparseDensity& d, Interval sub) {
  std::vector<double> out(pattern_space_size(d.base(), sub.size()), 0.0);
  for (const auto& e : d) out[restrict_code(e.code, d.base(), d.window(), sub)] += e.weight;
  return out;
}

}  // namespace

SparseDensity alpha_dense(const DeBruijnDensity& g, int anchor) {
  if (!g.sites().contains(anchor)) throw InvalidArgument("alpha_dense: anchor outside the site range");
  return alpha_impl(g, Interval::single(anchor));
}

SparseDensity alpha_dense(const DeBruijnDensity& g) { return alpha_impl(g, g.sites()); }

DeBruijnDensity step_dense(const Automaton& automaton, const DeBruijnDensity& g, const BoundarySpec& boundary) {
  const std::size_t e = automaton.base();
  const Interval u = automaton.neighborhood();
  const Interval v = automaton.pattern_window();
  const int r = -u.lo, s = u.hi, p = -v.lo, q = v.hi;
  const int m = static_cast<int>(automaton.sites());
  const LocalFunction& f0 = automaton.local_function();

  SparseDensity left, right;
  if (boundary.kind == BoundarySpec::Kind::Deterministic) {
    left = SparseDensity::point_mass(automaton.k_left(), e, encode_pattern(boundary.rho_left, e));
    right = SparseDensity::point_mass(automaton.k_right(), e, encode_pattern(boundary.rho_right, e));
  } else {
    left = r > 0 ? boundary.left : SparseDensity::point_mass(automaton.k_left(), e, 0);
    right = s > 0 ? boundary.right : SparseDensity::point_mass(automaton.k_right(), e, 0);
  }

  std::vector<SparseDensity> parts;
  for (int i = automaton.i_left(); i <= automaton.i_right(); ++i) {
    const TruncatedNeighborhood tn = automaton.truncated_neighborhood(i);
    const Interval mid_sites{i - tn.lower, i + tn.upper};
    const Interval mid_window = mid_sites + v;
    const Interval left_sites{i - r - p, r};
    const Interval right_sites{m - s + 1, i + s + q};
    const std::vector<double> lw = dense_marginal(left, left_sites);
    const std::vector<double> rw = dense_marginal(right, right_sites);
    const SparseDensity mid_sparse = alpha_dense(g.restricted(mid_sites));
    std::vector<double> mw(pattern_space_size(e, mid_window.size()), 0.0);
    for (const auto& x : mid_sparse) mw[x.code] += x.weight;

    const std::uint64_t mid_space = mw.size();
    const std::uint64_t right_space = rw.size();
    std::vector<double> image(pattern_space_size(e, v.size()), 0.0);
    const std::uint64_t preimages = lw.size() * mid_space * right_space;
    for (std::uint64_t phi = 0; phi < preimages; ++phi) {
      const std::uint64_t b = phi % right_space;
      const std::uint64_t a = (phi / right_space) % mid_space;
      const std::uint64_t l = phi / right_space / mid_space;
      const double w = lw[l] * mw[a] * rw[b];
      if (w == 0.0) continue;
      if (!f0.explored(phi)) throw UnexploredPreimage(phi, "site " + std::to_string(i));
      for (const auto& img : f0.row(phi)) image[img.image] += w * img.probability;
    }
    parts.push_back(normalize(to_sparse(image, v, e)));
  }
  return DeBruijnDensity(automaton.interior(), v, e, std::move(parts));
}

}  // namespace cpa::reference
