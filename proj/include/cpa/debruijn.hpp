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

#include "cpa/densities.hpp"
#include "cpa/interval.hpp"

namespace cpa {

/// Pattern window V = {-p..q} and de Bruijn site range W = {-t..u}.
struct PatternGeometry {
  Interval V;
  Interval W;

  PatternGeometry(Interval v, Interval w);

  Interval combined() const { return V + W; }
  /// V+ = {-p+1..q}: the part of a pattern shared with its left neighbour's pattern.
  Interval v_plus() const { return {V.lo + 1, V.hi}; }
  /// V- = {-p..q-1}: the part shared with the right neighbour's pattern.
  Interval v_minus() const { return {V.lo, V.hi - 1}; }
};

PatternGeometry geometry_of(const DeBruijnDensity& g);

/// Localization: per-site marginals of `g` (window V+W) on i+V, relabelled to V.
DeBruijnDensity beta_W(const SparseDensity& g, const PatternGeometry& geom);

/// Reconstruction anchored at `anchor`: anchor marginal times left conditionals
/// on V+ overlaps and right conditionals on V- overlaps. Only patterns glued
/// from supported local patterns are enumerated. Output window is W+V.
/// Throws NonExtendable when a supported partial assembly cannot be continued.
SparseDensity alpha_W_i(const DeBruijnDensity& g, int anchor);

/// Arithmetic mean of alpha_W_i over all anchors.
SparseDensity alpha_W(const DeBruijnDensity& g);

/// True iff every supported pattern takes part in a consistent gluing over all sites.
bool is_extendable(const DeBruijnDensity& g);

/// Removes supported patterns that are not part of any consistent gluing and
/// renormalizes each site. Throws NonExtendable if a site loses all patterns.
DeBruijnDensity trim_to_extendable(const DeBruijnDensity& g);

/// g == alpha_{W,i}(beta_W(g)) for every anchor i, within `tolerance` in L1.
bool is_v_factorizable(const SparseDensity& g, const PatternGeometry& geom,
                       double tolerance = 1e-9);

}  // namespace cpa
