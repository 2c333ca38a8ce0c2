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

#include "cpa/automaton.hpp"

#include <algorithm>
#include <unordered_map>

#include "cpa/debruijn.hpp"
#include "cpa/error.hpp"
#include "cpa/log.hpp"
#include "parallel.hpp"

namespace cpa {

BoundarySpec BoundarySpec::deterministic(std::vector<Symbol> rho_left, std::vector<Symbol> rho_right) {
  BoundarySpec b;
  b.kind = Kind::Deterministic;
  b.rho_left = std::move(rho_left);
  b.rho_right = std::move(rho_right);
  return b;
}

BoundarySpec BoundarySpec::white_noise(SparseDensity g_left, SparseDensity g_right) {
  BoundarySpec b;
  b.kind = Kind::WhiteNoise;
  b.left = std::move(g_left);
  b.right = std::move(g_right);
  return b;
}

Automaton::Automaton(std::size_t m, std::shared_ptr<const LocalFunction> f0, BoundarySpec boundary)
    : m_(m), f0_(std::move(f0)), boundary_(std::move(boundary)) {
  if (!f0_) throw InvalidArgument("automaton needs a local function");
  if (m_ == 0) throw InvalidArgument("automaton needs at least one site");
  const Interval u = f0_->neighborhood();
  const Interval v = f0_->pattern_window();
  r_ = -u.lo;
  s_ = u.hi;
  p_ = -v.lo;
  q_ = v.hi;
  if (r_ < 0 || s_ < 0) throw InvalidArgument("neighbourhood U must contain 0");
  const int width = 1 + p_ + q_ + r_ + s_;
  if (width > static_cast<int>(m_)) {
    throw InvalidArgument("grid of m = " + std::to_string(m_) + " sites is too small: 1+p+q+r+s = " +
                          std::to_string(width) + " must not exceed m");
  }
  i_l_ = 1 + p_ + r_;
  i_r_ = static_cast<int>(m_) - q_ - s_;
  if (static_cast<int>(m_) < 2 * width) {
    warn("m = " + std::to_string(m_) + " < 2(1+p+q+r+s) = " + std::to_string(2 * width) +
         ": pattern windows near both boundaries overlap");
  }
  resolved_ = resolve(boundary_);
}

Automaton::ResolvedBoundary Automaton::resolve(const BoundarySpec& spec) const {
  const std::size_t e = base();
  ResolvedBoundary out;
  if (spec.kind == BoundarySpec::Kind::Deterministic) {
    if (spec.rho_left.size() != static_cast<std::size_t>(r_) ||
        spec.rho_right.size() != static_cast<std::size_t>(s_)) {
      throw InvalidArgument("deterministic boundary needs " + std::to_string(r_) + " left and " +
                            std::to_string(s_) + " right symbols");
    }
    out.left = SparseDensity::point_mass(k_left(), e, encode_pattern(spec.rho_left, e));
    out.right = SparseDensity::point_mass(k_right(), e, encode_pattern(spec.rho_right, e));
    return out;
  }
  auto side = [&](const SparseDensity& d, Interval window, const char* name) {
    if (window.empty()) return SparseDensity::point_mass(window, e, 0);
    if (d.window() != window || d.base() != e) {
      throw InvalidArgument(std::string("white-noise ") + name + " density must live on " +
                            to_string(window) + " over " + std::to_string(e) + " symbols");
    }
    if (!d.is_normalized()) throw InvalidArgument(std::string("white-noise ") + name + " density is not normalized");
    return normalize(d);
  };
  out.left = side(spec.left, k_left(), "left");
  out.right = side(spec.right, k_right(), "right");
  return out;
}

TruncatedNeighborhood Automaton::truncated_neighborhood(int site) const {
  if (!interior().contains(site)) {
    throw InvalidArgument("site " + std::to_string(site) + " is not in I~ = " + to_string(interior()));
  }
  return {std::min(r_, site - i_l_), std::min(s_, i_r_ - site)};
}

SparseDensity Automaton::step_site(const DeBruijnDensity& g, const ResolvedBoundary& boundary, int site) const {
  const std::size_t e = base();
  const Interval v = pattern_window();
  const TruncatedNeighborhood tn = truncated_neighborhood(site);
  const SparseDensity middle = alpha_W(g.restricted({site - tn.lower, site + tn.upper}));

  const Interval left_sites{site - r_ - p_, r_};
  const Interval right_sites{static_cast<int>(m_) - s_ + 1, site + s_ + q_};
  const SparseDensity left = left_sites.empty() ? SparseDensity::point_mass(left_sites, e, 0)
                                                : marginal(boundary.left, left_sites);
  const SparseDensity right = right_sites.empty() ? SparseDensity::point_mass(right_sites, e, 0)
                                                  : marginal(boundary.right, right_sites);

  const std::uint64_t middle_space = pattern_space_size(e, middle.window().size());
  const std::uint64_t right_space = pattern_space_size(e, right_sites.size());
  const std::uint64_t image_space = pattern_space_size(e, v.size());

  std::vector<double> dense;
  std::unordered_map<PatternCode, double> sparse;
  const bool use_dense = image_space <= (std::uint64_t{1} << 20);
  if (use_dense) dense.assign(image_space, 0.0);

  for (const auto& l : left) {
    for (const auto& a : middle) {
      const PatternCode prefix = (l.code * middle_space + a.code) * right_space;
      const double wa = l.weight * a.weight;
      for (const auto& b : right) {
        const PatternCode phi = prefix + b.code;
        const double w = wa * b.weight;
        if (!f0_->explored(phi)) throw UnexploredPreimage(phi, "site " + std::to_string(site));
        for (const auto& img : f0_->row(phi)) {
          if (use_dense) {
            dense[img.image] += w * img.probability;
          } else {
            sparse[img.image] += w * img.probability;
          }
        }
      }
    }
  }
  std::vector<WeightedPattern> out;
  if (use_dense) {
    for (std::uint64_t c = 0; c < image_space; ++c) {
      if (dense[c] > 0.0) out.push_back({c, dense[c]});
    }
  } else {
    out.reserve(sparse.size());
    for (const auto& [c, w] : sparse) out.push_back({c, w});
  }
  return normalize(SparseDensity::from_entries(v, e, std::move(out)));
}

DeBruijnDensity Automaton::step(const DeBruijnDensity& g, const StepOptions& options) const {
  return step(g, boundary_, options);
}

DeBruijnDensity Automaton::step(const DeBruijnDensity& g, const BoundarySpec& boundary,
                                const StepOptions& options) const {
  if (g.sites() != interior() || g.pattern_window() != pattern_window() || g.base() != base()) {
    throw InvalidArgument("step: density must live on I~ = " + to_string(interior()) +
                          " with pattern window " + to_string(pattern_window()));
  }
  const ResolvedBoundary resolved = &boundary == &boundary_ ? resolved_ : resolve(boundary);
  std::vector<SparseDensity> parts(interior().size());
  detail::parallel_for(parts.size(), options.workers, [&](std::uint64_t k) {
    parts[k] = step_site(g, resolved, i_l_ + static_cast<int>(k));
  });
  return DeBruijnDensity(interior(), pattern_window(), base(), std::move(parts));
}

Trajectory Automaton::evolve(const DeBruijnDensity& g0, std::size_t steps, double threshold,
                             const std::vector<BoundarySpec>& schedule, const StepOptions& options) const {
  if (!(threshold >= 0.0 && threshold < 1.0)) throw InvalidArgument("pruning threshold must lie in [0, 1)");
  Trajectory t;
  t.states.reserve(steps + 1);
  t.stats.reserve(steps);
  t.states.push_back(g0);
  for (std::size_t k = 1; k <= steps; ++k) {
    const BoundarySpec& b = schedule.empty() ? boundary_ : schedule[(k - 1) % schedule.size()];
    DeBruijnDensity next;
    try {
      next = step(t.states.back(), b, options);
    } catch (const UnexploredPreimage& e) {
      throw UnexploredPreimage(e.code(), "step " + std::to_string(k) + ", " + e.where());
    }
    StepStats stats;
    for (int i = next.sites().lo; i <= next.sites().hi; ++i) {
      SparseDensity& d = next.at(i);
      if (threshold > 0.0) {
        double kept = 0.0;
        for (const auto& e : d) {
          if (!(e.weight < threshold)) kept += e.weight;
        }
        stats.min_retained_mass = std::min(stats.min_retained_mass, kept);
        d = prune(d, threshold);
      }
    }
    if (threshold > 0.0 && pattern_window().size() > 1) next = trim_to_extendable(next);
    for (const auto& d : next.per_site()) {
      stats.total_support += d.size();
      stats.max_support = std::max(stats.max_support, d.size());
    }
    t.stats.push_back(stats);
    t.states.push_back(std::move(next));
  }
  return t;
}

LocalizedDensity Automaton::hat_beta(const SparseDensity& g) const {
  const Interval all{1, static_cast<int>(m_)};
  if (g.window() != all || g.base() != base()) {
    throw InvalidArgument("hat_beta: global density must live on " + to_string(all));
  }
  const std::size_t e = base();
  LocalizedDensity out;
  out.left = r_ > 0 ? marginal(g, k_left()) : SparseDensity::point_mass(k_left(), e, 0);
  out.right = s_ > 0 ? marginal(g, k_right()) : SparseDensity::point_mass(k_right(), e, 0);
  if (boundary_.kind == BoundarySpec::Kind::Deterministic) {
    const double total = g.total();
    if (!(total > 0.0)) throw ZeroMass("hat_beta: global density has zero mass");
    const double on_left = out.left.weight(resolved_.left.begin()->code) / total;
    const double on_right = out.right.weight(resolved_.right.begin()->code) / total;
    if (std::min(on_left, on_right) < 1.0 - 1e-9) {
      throw InvalidArgument("hat_beta: density has mass off the deterministic boundary slice");
    }
  }
  out.interior = beta_W(marginal(g, covered()), PatternGeometry(pattern_window(), interior()));
  return out;
}

SparseDensity Automaton::hat_alpha(const LocalizedDensity& parts) const {
  std::vector<SparseDensity> factors;
  if (r_ > 0) factors.push_back(parts.left);
  factors.push_back(alpha_W(parts.interior));
  if (s_ > 0) factors.push_back(parts.right);
  return product(factors);
}

SparseDensity Automaton::hat_alpha(const DeBruijnDensity& interior_part) const {
  return hat_alpha(LocalizedDensity{resolved_.left, interior_part, resolved_.right});
}

DeBruijnDensity Automaton::point_state(const std::vector<Symbol>& state) const {
  if (state.size() != m_) throw InvalidArgument("point_state needs one symbol per site");
  const Interval v = pattern_window();
  const PatternCode code = encode_pattern(state, base());
  std::vector<SparseDensity> parts;
  for (int j = i_l_; j <= i_r_; ++j) {
    const PatternCode local = restrict_code(code, base(), {1, static_cast<int>(m_)}, v.shifted(j));
    parts.push_back(SparseDensity::point_mass(v, base(), local));
  }
  return DeBruijnDensity(interior(), v, base(), std::move(parts));
}

DeBruijnDensity Automaton::independent_sites(const std::vector<SparseDensity>& sites) const {
  if (sites.size() != m_) throw InvalidArgument("independent_sites needs one density per site");
  for (const auto& d : sites) {
    if (d.window() != Interval::single(0) || d.base() != base()) {
      throw InvalidArgument("site densities must live on window {0} over the automaton's symbols");
    }
  }
  const Interval v = pattern_window();
  std::vector<SparseDensity> parts;
  for (int j = i_l_; j <= i_r_; ++j) {
    std::vector<SparseDensity> factors;
    for (int x = j + v.lo; x <= j + v.hi; ++x) factors.push_back(sites[static_cast<std::size_t>(x - 1)].shifted(x - j));
    parts.push_back(normalize(product(factors)));
  }
  return DeBruijnDensity(interior(), v, base(), std::move(parts));
}

std::vector<SparseDensity> Automaton::site_marginals(const DeBruijnDensity& g) const {
  std::vector<SparseDensity> out;
  out.reserve(m_);
  for (int x = 1; x <= static_cast<int>(m_); ++x) {
    if (x <= r_) {
      out.push_back(marginal(resolved_.left, Interval::single(x)).shifted(-x));
    } else if (x > static_cast<int>(m_) - s_) {
      out.push_back(marginal(resolved_.right, Interval::single(x)).shifted(-x));
    } else {
      const int j = std::clamp(x, i_l_, i_r_);
      out.push_back(marginal(g.at(j), Interval::single(x - j)).shifted(j - x));
    }
  }
  return out;
}

}  // namespace cpa
