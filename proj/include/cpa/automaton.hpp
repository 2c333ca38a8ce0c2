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
#include <memory>
#include <vector>

#include "cpa/densities.hpp"
#include "cpa/interval.hpp"
#include "cpa/translator.hpp"

namespace cpa {

/// Boundary condition on K = K_l u K_r.
///
/// Deterministic: fixed patterns rho_l over K_l = {1..r} and rho_r over
/// K_r = {m-s+1..m}. White noise: densities g_l, g_r over the same windows,
/// drawn independently at every step. Either side is empty when r (or s) is 0.
struct BoundarySpec {
  enum class Kind : std::uint8_t { Deterministic, WhiteNoise };

  Kind kind = Kind::Deterministic;
  std::vector<Symbol> rho_left;
  std::vector<Symbol> rho_right;
  SparseDensity left;
  SparseDensity right;

  static BoundarySpec deterministic(std::vector<Symbol> rho_left, std::vector<Symbol> rho_right);
  /// Windows must be K_l and K_r in absolute site labels.
  static BoundarySpec white_noise(SparseDensity g_left, SparseDensity g_right);
};

/// Per-site interval U~(i) = {-lower..upper}.
struct TruncatedNeighborhood {
  int lower = 0;
  int upper = 0;

  Interval interval() const { return {-lower, upper}; }
};

/// Global density split into boundary marginals and the de Bruijn part on I~.
struct LocalizedDensity {
  SparseDensity left;
  DeBruijnDensity interior;
  SparseDensity right;
};

struct StepOptions {
  int workers = 0;  // 0: OpenMP default
};

/// Diagnostics of one evolution step.
struct StepStats {
  double min_retained_mass = 1.0;  // smallest per-site mass kept by pruning
  std::size_t total_support = 0;   // supported patterns summed over sites
  std::size_t max_support = 0;
};

struct Trajectory {
  std::vector<DeBruijnDensity> states;  // states[0] is the initial density
  std::vector<StepStats> stats;         // stats[k] describes states[k + 1]
};

/// Cellular probabilistic automaton on sites I = {1..m}.
class Automaton {
 public:
  Automaton(std::size_t m, std::shared_ptr<const LocalFunction> f0, BoundarySpec boundary);

  std::size_t sites() const { return m_; }
  std::size_t base() const { return f0_->base(); }
  Interval neighborhood() const { return f0_->neighborhood(); }
  Interval pattern_window() const { return f0_->pattern_window(); }
  const LocalFunction& local_function() const { return *f0_; }
  const BoundarySpec& boundary() const { return boundary_; }

  int i_left() const { return i_l_; }
  int i_right() const { return i_r_; }
  /// I~ = {i_l..i_r}.
  Interval interior() const { return {i_l_, i_r_}; }
  Interval k_left() const { return {1, r_}; }
  Interval k_right() const { return {static_cast<int>(m_) - s_ + 1, static_cast<int>(m_)}; }
  /// Sites covered by de Bruijn patterns: {1+r..m-s}.
  Interval covered() const { return {1 + r_, static_cast<int>(m_) - s_}; }

  TruncatedNeighborhood truncated_neighborhood(int site) const;

  /// One application of the global function. `boundary` overrides the
  /// automaton's own boundary for this step (time-dependent schedules).
  DeBruijnDensity step(const DeBruijnDensity& g, const StepOptions& options = {}) const;
  DeBruijnDensity step(const DeBruijnDensity& g, const BoundarySpec& boundary,
                       const StepOptions& options = {}) const;

  /// g^k = prune(step(g^{k-1}), threshold); with |V| > 1 unsupported gluings
  /// are trimmed after pruning. `schedule`, when non-empty, supplies the
  /// boundary of step k at index (k - 1) modulo its length.
  Trajectory evolve(const DeBruijnDensity& g0, std::size_t steps, double threshold,
                    const std::vector<BoundarySpec>& schedule = {}, const StepOptions& options = {}) const;

  /// Localization of a global density over {1..m}. For a deterministic
  /// boundary the density must vanish off the rho slice.
  LocalizedDensity hat_beta(const SparseDensity& g) const;

  /// Global density g_l * alpha_{I~}(interior) * g_r.
  SparseDensity hat_alpha(const LocalizedDensity& parts) const;
  /// Uses the automaton's boundary for the K-sites.
  SparseDensity hat_alpha(const DeBruijnDensity& interior) const;

  /// De Bruijn density of a single global state (one symbol per site 1..m).
  DeBruijnDensity point_state(const std::vector<Symbol>& state) const;
  /// De Bruijn density of independent sites with the given single-site
  /// densities (windows {0}), one per site 1..m.
  DeBruijnDensity independent_sites(const std::vector<SparseDensity>& sites) const;

  /// Single-site marginal at every site 1..m: K-sites from the boundary,
  /// covered sites from the pattern whose anchor is nearest.
  std::vector<SparseDensity> site_marginals(const DeBruijnDensity& g) const;

 private:
  struct ResolvedBoundary {
    SparseDensity left;
    SparseDensity right;
  };

  ResolvedBoundary resolve(const BoundarySpec& spec) const;
  SparseDensity step_site(const DeBruijnDensity& g, const ResolvedBoundary& boundary, int site) const;

  std::size_t m_;
  std::shared_ptr<const LocalFunction> f0_;
  BoundarySpec boundary_;
  ResolvedBoundary resolved_;
  int r_, s_, p_, q_;
  int i_l_, i_r_;
};

}  // namespace cpa
