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

#include <filesystem>
#include <string>

#include "commands.hpp"
#include "cpa/error.hpp"
#include "doctest.h"
#include "ini.hpp"
#include "run_config.hpp"

using namespace cpa;
using namespace cpa::cli;

namespace {

const std::string kIdentity = R"(# comment line
[model]
name = identity   ; trailing comment
dimension = 1

[partition]
cells = 4
lower = 0
upper = 1

[local]
V = -1..0

[sampling]
counts = 3
seed = 11

[grid]
sites = 6

[boundary]
kind = deterministic

[initial]
symbols = 0 1 2 3 2 1

[run]
steps = 5
)";

RunConfig parse(const std::string& text) { return parse_config(IniFile::parse(text, "test.ini")); }

std::string replace(std::string text, const std::string& from, const std::string& to) {
  const auto at = text.find(from);
  REQUIRE(at != std::string::npos);
  return text.replace(at, from.size(), to);
}

// Message of the ConfigError thrown for `text`; empty when none is thrown.
std::string config_error(const std::string& text) {
  try {
    parse(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("ini syntax errors cite the line") {
    CHECK(config_error("[model\nname = x\n") == "test.ini:1: unterminated section header");
    CHECK(config_error("[a]\nx = 1\n[b]\n[a]\n").find("test.ini:4: section [a] repeats (first at line 1)") == 0);
    CHECK(config_error("[a]\nx = 1\nx = 2\n").find("test.ini:3:") == 0);
    CHECK(config_error("x = 1\n").find("key outside of a section") != std::string::npos);
    CHECK(config_error("[a]\njust text\n").find("test.ini:2: expected 'key = value'") == 0);
  }

  TEST_CASE("a complete configuration parses") {
    const auto c = parse(kIdentity);
    CHECK(c.model.name == "identity");
    CHECK(c.partition->symbol_count() == 4);
    CHECK(c.pattern == Interval{-1, 0});
    CHECK(c.estimated_pattern == Interval{-1, 0});
    CHECK(c.sites == 6);
    CHECK(c.plan == SamplingPlan::product({3}));
    CHECK(c.sampling_seed == 11);
    CHECK(c.initial.symbols == std::vector<Symbol>{0, 1, 2, 3, 2, 1});
    CHECK(c.steps == 5);
  }

  TEST_CASE("unknown keys are rejected with their line") {
    const auto text = replace(kIdentity, "steps = 5", "steps = 5\nstpes = 4");
    CHECK(config_error(text).find("test.ini:29: unknown key 'stpes' in [run]") == 0);
  }

  TEST_CASE("pattern windows too wide for the grid") {
    const auto text = replace(kIdentity, "V = -1..0", "V = -3..3");
    CHECK(config_error(text) ==
          "test.ini:12: V = {-3..3} with U = {0..0} needs 1+p+q+r+s = 7 sites, but the grid has m = 6");
    CHECK(config_error(replace(kIdentity, "V = -1..0", "V = 1..2")).find("V must contain 0") != std::string::npos);
  }

  TEST_CASE("bad values") {
    CHECK(config_error(replace(kIdentity, "counts = 3", "counts = three")).find("test.ini:15: expected") == 0);
    CHECK(config_error(replace(kIdentity, "name = identity", "name = spline")).find("unknown model") != std::string::npos);
    CHECK(config_error(replace(kIdentity, "symbols = 0 1 2 3 2 1", "symbols = 0 1 2")).find("one entry per site") !=
          std::string::npos);
    CHECK(config_error(replace(kIdentity, "steps = 5", "steps = 5\nthreshold = 1.5")).find("threshold") !=
          std::string::npos);
    CHECK(config_error(replace(kIdentity, "sites = 6", "")).find("missing key 'sites' in [grid]") != std::string::npos);
  }

  TEST_CASE("site laws") {
    const auto text = replace(replace(kIdentity, "symbols = 0 1 2 3 2 1", "site = box 0.1 .. 0.6"), "[run]",
                              "[run]\nreport_steps = 0 5");
    const auto c = parse(text);
    REQUIRE(c.initial.symbols.empty());
    const auto d = c.initial.law.density(*c.partition);
    CHECK(d.weight(0) == doctest::Approx(0.3));
    CHECK(d.weight(1) == doctest::Approx(0.5));
    CHECK(d.weight(2) == doctest::Approx(0.2));
    CHECK(c.report_steps == std::vector<std::size_t>{0, 5});
    CHECK(config_error(replace(kIdentity, "symbols = 0 1 2 3 2 1", "site = value 3")).find("outside") !=
          std::string::npos);
    CHECK(parse_symbol("3", *c.partition) == 3);
    CHECK_THROWS(parse_symbol("4", *c.partition));
  }

  TEST_CASE("identity build and run reproduce the initial state") {
    const auto c = parse(kIdentity);
    const auto built = build_table(c, 1);
    CHECK(built.seed == 11);
    CHECK_FALSE(built.seed_generated);
    CHECK(built.f0->table().explored_count() == 16);
    check_table(c, *built.f0);
    const auto run = run_automaton(c, built.f0, 1);
    REQUIRE(run.marginals.steps.size() == 6);
    for (std::size_t k = 0; k <= 5; ++k) {
      for (int site = 1; site <= 6; ++site) {
        CHECK(run.marginals.at(k, site) == SparseDensity::point_mass({0, 0}, 4, c.initial.symbols[site - 1]));
      }
    }
    const auto oracle = run_oracle(c, 1);
    CHECK(compare_marginals(run.marginals, oracle.marginals).max == 0.0);
  }

  TEST_CASE("zero steps echoes the initial marginals") {
    const auto c = parse(replace(kIdentity, "steps = 5", "steps = 0"));
    const auto run = run_automaton(c, build_table(c, 1).f0, 1);
    REQUIRE(run.marginals.steps == std::vector<std::size_t>{0});
    CHECK(run.marginals.at(0, 4) == SparseDensity::point_mass({0, 0}, 4, 3));
  }

  TEST_CASE("tables built for another configuration are refused") {
    const auto c = parse(kIdentity);
    const auto other = parse(replace(kIdentity, "V = -1..0", "V = 0..1"));
    CHECK_THROWS_AS(check_table(other, *build_table(c, 1).f0), InvalidArgument);
  }

  TEST_CASE("the shipped identity configuration loads") {
    const auto c = load_config(std::filesystem::path(CPA_TEST_DATA_DIR) / "identity.ini");
    CHECK(c.oracle.kind == OracleConfig::Kind::Transfer);
    CHECK(c.output.table == "identity_f0.json");
  }
}
