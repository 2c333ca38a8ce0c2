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
#include <functional>
#include <span>
#include <vector>

#include "cpa/densities.hpp"
#include "cpa/marginals.hpp"
#include "cpa/models.hpp"
#include "cpa/partition.hpp"
#include "cpa/translator.hpp"

namespace cpa {

/// Monte Carlo estimate of the discretized transfer operator P_B over global
/// states E^m (sites 1..m). Rows are exact hit frequencies.
class GlobalTransition {
 public:
  GlobalTransition(PartitionPtr partition, std::size_t m, TransitionTable table,
                   std::vector<std::uint64_t> samples, LocalFunctionMeta meta);

  const Partition& partition() const { return *partition_; }
  std::size_t sites() const { return m_; }
  std::size_t base() const { return partition_->symbol_count(); }
  Interval window() const { return {1, static_cast<int>(m_)}; }
  const TransitionTable& table() const { return table_; }
  const LocalFunctionMeta& meta() const { return meta_; }

  /// Test vectors drawn in the cell of `state`.
  std::uint64_t samples(PatternCode state) const;
  /// Number of those test vectors that landed in `image`.
  std::uint64_t hits(PatternCode state, PatternCode image) const;
  /// Row of `state` as a density over {1..m}. Throws UnexploredPreimage.
  SparseDensity row(PatternCode state) const;

 private:
  PartitionPtr partition_;
  std::size_t m_;
  TransitionTable table_;
  std::vector<std::uint64_t> samples_;
  LocalFunctionMeta meta_;
};

/// Largest |E|^m accepted by build_PB.
inline constexpr std::uint64_t kMaxGlobalStates = 1'000'000;

/// For every global state, maps test vectors with the local rule at sites
/// where it applies (identity on the remaining boundary sites) and counts
/// image states. Test vectors of state chi use seed derive_seed(seed, chi),
/// so at V = V_max the samples coincide with those of estimate_f0.
GlobalTransition build_PB(const FlowMap& flow, PartitionPtr partition, std::size_t m,
                          const SamplingPlan& plan, std::uint64_t seed, const EstimateOptions& options = {});

/// g^T P, renormalized. Throws UnexploredPreimage when mass sits on an unexplored row.
SparseDensity apply_PB(const GlobalTransition& p, const SparseDensity& g);

/// Density on Omega^m given pointwise; `values` holds m site values, site-major.
using PointDensity = std::function<double(std::span<const double> values)>;

struct RestrictOptions {
  int max_level = 8;                // cells are split into 2^level pieces per axis at most
  double tolerance = 1e-12;         // L1 change between successive levels
  std::uint64_t max_evaluations = 50'000'000;
};

struct Restriction {
  SparseDensity density;  // over {1..m}
  bool converged = false;
  double change = 0.0;    // L1 change at the last refinement
};

/// Restriction operator: normalized cell masses of `g`, by tensor
/// Gauss-Legendre quadrature on successively halved sub-boxes of each cell.
/// Warns when the budget runs out before the tolerance is met.
Restriction restrict_density(const Partition& partition, std::size_t m, const PointDensity& g,
                             const RestrictOptions& options = {});

/// Restriction from samples: normalized histogram of `count` draws.
using StateSampler = std::function<void(Rng& rng, std::span<double> values)>;
SparseDensity restrict_samples(const Partition& partition, std::size_t m, const StateSampler& sampler,
                               std::uint64_t count, std::uint64_t seed);

/// L1 distance between `g` and its piecewise constant restriction
/// sum_phi (c_phi / |Omega_phi|) 1_{Omega_phi} on a single site (m = 1).
/// `g` is taken as given (not renormalized).
double restriction_l1_error(const Partition& partition, const PointDensity& g, const RestrictOptions& options = {});

/// Uniform distribution on `box` expressed in cells: the weight of a cell is
/// the fraction of the box volume it contains. Window {0}.
SparseDensity box_density(const Partition& partition, const Box& box);

/// Overwrites the boundary sites of a global state before coarse step `step` (>= 1).
using BoundarySampler = std::function<void(std::size_t step, Rng& rng, std::span<double> values)>;

struct McOptions {
  std::uint64_t runs = 1;
  std::size_t steps = 0;
  std::uint64_t seed = 0;
  int workers = 0;
};

/// Global Monte Carlo reference. Each run starts from `initial`, then for
/// every coarse step draws the boundary, holds it over the step and applies
/// the flow on all sites where the local rule fits. Per-site symbol
/// histograms are recorded at every step 0..steps for each report partition.
/// Run k uses seed derive_seed(options.seed, k); histograms merge exactly, so
/// results do not depend on the worker count.
std::vector<MarginalSeries> mc_reference(const FlowMap& flow, std::size_t m, const StateSampler& initial,
                                         const BoundarySampler& boundary,
                                         const std::vector<PartitionPtr>& report_partitions,
                                         const McOptions& options);

}  // namespace cpa
