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

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "cpa/densities.hpp"
#include "cpa/partition.hpp"

namespace cpa {

/// Single-site symbol distributions over time: values[k][j] is the marginal
/// (window {0}) at steps[k] and sites[j].
struct MarginalSeries {
  std::vector<std::size_t> cells_per_dim;  // symbol multi-index shape
  std::vector<std::size_t> steps;
  std::vector<int> sites;
  std::vector<std::vector<SparseDensity>> values;

  std::size_t base() const;
  const SparseDensity& at(std::size_t step, int site) const;
};

/// CSV, first line "# cpa-marginals v1", then the header
/// "step,site,symbol,probability". Symbols are written as their multi-index
/// joined by ':' (e.g. "1:4"). Only nonzero probabilities are listed; a
/// (step, site) pair without rows is written as one row with an empty symbol
/// so that the grid of steps and sites survives a roundtrip.
void write_marginals_csv(const MarginalSeries& series, std::ostream& out);
void write_marginals_csv(const MarginalSeries& series, const std::filesystem::path& path);
/// `cells_per_dim` gives the expected symbol shape. Throws FormatError.
MarginalSeries read_marginals_csv(const std::filesystem::path& path, std::vector<std::size_t> cells_per_dim);

/// Per-site L1 distances between two series on common steps.
struct MarginalComparison {
  std::vector<std::size_t> steps;
  std::vector<int> sites;
  std::vector<std::vector<double>> l1;  // [step][site]
  double max = 0.0;
  double mean = 0.0;
};

/// Compares the steps present in both series.
/// Throws FormatError when the site lists or symbol shapes differ.
MarginalComparison compare_marginals(const MarginalSeries& a, const MarginalSeries& b);

/// Projection of a single-site density onto one state dimension: symbols with
/// equal index along `dim` are merged (e.g. the D-marginal of a (D, A)
/// partition). The result's codes are the indices along `dim`.
SparseDensity dimension_marginal(const SparseDensity& site, const std::vector<std::size_t>& cells_per_dim,
                                 std::size_t dim);

}  // namespace cpa
