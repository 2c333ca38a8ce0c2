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

#include "cpa/automaton.hpp"
#include "cpa/densities.hpp"

/// Serial dense implementations used to check the sparse parallel kernels.
/// They enumerate every pattern of the relevant windows and are only meant
/// for small alphabets.
namespace cpa::reference {

/// alpha_{W,anchor} by enumeration of E^{W+V}: anchor weight times the
/// conditional of each other site given its overlap with the neighbour
/// towards the anchor. Patterns with a zero conditional denominator get 0.
SparseDensity alpha_dense(const DeBruijnDensity& g, int anchor);

/// Mean of alpha_dense over all anchors.
SparseDensity alpha_dense(const DeBruijnDensity& g);

/// One step of the automaton computed by enumerating every preimage pattern
/// of every site. Throws UnexploredPreimage for mass on an unexplored row.
DeBruijnDensity step_dense(const Automaton& automaton, const DeBruijnDensity& g, const BoundarySpec& boundary);

}  // namespace cpa::reference
