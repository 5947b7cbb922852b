// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The irscoop Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "irscoop/harness.hpp"

using namespace irscoop;
namespace fs = std::filesystem;

namespace {

ExperimentConfig tiny_config(const fs::path& out) {
  ExperimentConfig c;
  c.realizations = 2;
  c.n_list = {2, 4};
  c.d12_list = {2.0, 4.0};
  c.d12_n_elements = 2;
  c.omega_list = {0.0, 0.5, 1.0};
  c.region_n_elements = 2;
  c.optimizer.randomization_trials = 20;
  c.workers = 1;
  c.output_dir = out;
  return c;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("irscoop_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config defaults and validation") {
  const ExperimentConfig c = parse_config("");
  CHECK(c.realizations == 100);
  CHECK(c.omega_list.size() == 21);
  CHECK(c.omega_list.back() == 1.0);
  CHECK(c.d12_list.front() == 2.0);
  CHECK(c.n_list == std::vector<int>{10, 20, 30, 40, 50});
  CHECK(c.params().n0 == doctest::Approx(1e-11));
  CHECK_THROWS_AS(parse_config("realizations: 0"), ConfigError);
  CHECK_THROWS_AS(parse_config("bogus: 1"), ConfigError);
  CHECK_THROWS_AS(parse_config("schemes: [coop_irs, relay]"), ConfigError);
  CHECK_THROWS_AS(parse_config("sweep_d12: {d12_list: [9.0]}"), ConfigError);
  CHECK_THROWS_AS(parse_config("rate_region: {omega_list: [1.5]}"), ConfigError);
  CHECK_THROWS_AS(parse_config("geometry: {wd1: [1]}"), ConfigError);
  CHECK_THROWS_AS(parse_config("realizations: [1, 2"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.yaml"), ConfigError);
}

TEST_CASE("config round-trips through its YAML echo") {
  ExperimentConfig c = parse_config(
      "seed: 7\nrealizations: 3\ngeometry: {irs: [4.5, 1.5]}\n"
      "system: {p_hap_dbm: 27}\nsolver: {randomization_trials: 50}\n"
      "experiments: [rate_region]\nrate_region: {schemes: [coop_irs, coop_no_irs]}\n");
  const ExperimentConfig back = parse_config(dump_config(c));
  CHECK(back.seed == 7);
  CHECK(back.realizations == 3);
  CHECK(back.geometry.irs.x == 4.5);
  CHECK(back.p_hap_dbm == 27.0);
  CHECK(back.optimizer.randomization_trials == 50);
  CHECK(back.experiments == std::vector<ExperimentKind>{ExperimentKind::RateRegion});
  CHECK(back.region_schemes == std::vector<SchemeId>{SchemeId::CoopWithIrs, SchemeId::CoopNoIrs});
  CHECK(dump_config(back) == dump_config(c));
}

TEST_CASE("d12 geometry keeps the surface in place") {
  ExperimentConfig c;
  const ScenarioGeometry g = d12_geometry(c, 3.5);
  CHECK(g.d1() == doctest::Approx(8.0));
  CHECK(g.d12() == doctest::Approx(3.5));
  CHECK(g.irs.x == c.geometry.irs.x);
  CHECK(g.irs.y == c.geometry.irs.y);
}

TEST_CASE("statistics match direct recomputation") {
  const Stats s = compute_stats({1.0, 2.0, 3.0, 4.0}, 1);
  CHECK(s.mean == doctest::Approx(2.5));
  CHECK(s.std == doctest::Approx(std::sqrt(5.0 / 3.0)));
  CHECK(s.stderr_ == doctest::Approx(std::sqrt(5.0 / 3.0) / 2.0));
  CHECK(s.count == 4);
  CHECK(s.failures == 1);
  const Stats one = compute_stats({3.0});
  CHECK(one.std == 0.0);
}

TEST_CASE("one realization and one scheme give one row per N") {
  ExperimentConfig c = tiny_config(scratch("rows"));
  c.realizations = 1;
  c.schemes = {SchemeId::CoopNoIrs};
  c.n_list = {1, 2, 3};
  const ResultTable t = run_sweep_n(c);
  REQUIRE(t.rows.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(t.rows[i].sweep_value == static_cast<double>(i + 1));
    CHECK(t.rows[i].ok());
    CHECK_FALSE(t.rows[i].solve_time_s.has_value());
  }
}

TEST_CASE("schemes at a sweep point share their realization") {
  const ResultTable t = run_sweep_n(tiny_config(scratch("paired")));
  REQUIRE(t.rows.size() == 2 * 2 * 4);
  for (std::size_t i = 0; i < t.rows.size(); i += 4) {
    for (std::size_t s = 1; s < 4; ++s) {
      CHECK(t.rows[i + s].seed == t.rows[i].seed);
      CHECK(t.rows[i + s].realization == t.rows[i].realization);
    }
  }
  CHECK(t.rows[0].seed != t.rows[4].seed);
}

TEST_CASE("CSV round trip is exact") {
  ResultTable t;
  ResultRow r;
  r.scheme = "coop_irs";
  r.sweep_variable = "d12";
  r.sweep_value = 2.5;
  r.realization = 3;
  r.seed = 18446744073709551615ull;
  r.status = "optimal";
  r.min_rate = 0.1 + 0.2;
  r.r1 = 1.0 / 3.0;
  r.r2 = std::nextafter(1.0, 2.0);
  r.r_bar_star = 1e-300;
  r.gap = -2.5e-17;
  t.rows.push_back(r);
  r.solve_time_s = 0.125;
  r.status = "numerical_limit";
  t.rows.push_back(r);
  const fs::path dir = scratch("csv");
  fs::create_directories(dir);
  write_csv(t, dir / "x.csv");
  const auto back = read_csv(dir / "x.csv");
  REQUIRE(back.size() == 2);
  CHECK(back[0].min_rate == t.rows[0].min_rate);
  CHECK(back[0].r1 == t.rows[0].r1);
  CHECK(back[0].r2 == t.rows[0].r2);
  CHECK(back[0].r_bar_star == t.rows[0].r_bar_star);
  CHECK(back[0].gap == t.rows[0].gap);
  CHECK(back[0].seed == t.rows[0].seed);
  CHECK_FALSE(back[0].solve_time_s.has_value());
  CHECK(*back[1].solve_time_s == 0.125);
  CHECK(slurp(dir / "x.csv").rfind(csv_header() + "\n", 0) == 0);
}

TEST_CASE("emitted manifest agrees with the CSV rows") {
  const fs::path dir = scratch("emit");
  ExperimentConfig c = tiny_config(dir);
  std::vector<ResultTable> tables;
  for (ExperimentKind k : c.experiments) tables.push_back(run_experiment(c, k));
  const auto files = emit_outputs(tables, c);
  CHECK(files.size() == 5);
  for (const auto& f : files) CHECK(fs::exists(f));

  const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(manifest["version"] == "0.1.0");
  for (const auto& e : manifest["experiments"]) {
    const auto rows = read_csv(dir / e["csv"].get<std::string>());
    for (const auto& g : e["groups"]) {
      std::vector<double> vals;
      for (const auto& r : rows) {
        if (r.scheme == g["scheme"] && r.sweep_value == g["sweep_value"].get<double>() && r.ok()) {
          vals.push_back(r.min_rate);
        }
      }
      const Stats s = compute_stats(vals);
      CHECK(g["min_rate"]["mean"].get<double>() == doctest::Approx(s.mean).epsilon(1e-14));
      CHECK(g["min_rate"]["stderr"].get<double>() == doctest::Approx(s.stderr_).epsilon(1e-12));
      CHECK(g["min_rate"]["count"].get<std::size_t>() == vals.size());
    }
  }
  const auto& sweep = manifest["experiments"][0];
  CHECK(sweep["gains_percent"].contains("coop_irs_over_indep_no_irs"));
  const std::string script = slurp(dir / "plot_figures.py");
  CHECK(script.find("fig5_rate_region.csv") != std::string::npos);
}

TEST_CASE("outputs are identical across reruns and worker counts") {
  ExperimentConfig c = tiny_config(scratch("det_a"));
  const ResultTable a = run_sweep_d12(c);
  c.workers = 3;
  const ResultTable b = run_sweep_d12(c);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) CHECK(format_row(a.rows[i]) == format_row(b.rows[i]));
}

TEST_CASE("unwritable output directory is an I/O error") {
  ExperimentConfig c = tiny_config("/proc/irscoop_cannot_write");
  ResultTable t;
  ResultRow row;
  row.scheme = "coop_irs";
  row.status = "optimal";
  t.rows.push_back(row);
  CHECK_THROWS_AS(emit_outputs({t}, c), OutputError);
  CHECK_THROWS_AS(emit_outputs({}, c), OutputError);
}

TEST_CASE("region helpers") {
  const std::vector<double> omegas{0.0, 0.5, 1.0};
  const std::vector<std::array<double, 3>> big{{0.0, 0.0, 2.0}, {0.5, 1.5, 1.5}, {1.0, 2.0, 0.0}};
  const std::vector<std::array<double, 3>> small{{0.0, 0.0, 1.0}, {0.5, 0.8, 0.8}, {1.0, 1.0, 0.0}};
  CHECK(region_dominates(big, small, omegas, 0.0));
  CHECK_FALSE(region_dominates(small, big, omegas, 0.0));
  CHECK(region_on_hull(big, 1e-9));
  std::vector<std::array<double, 3>> dented = big;
  dented[1] = {0.5, 0.5, 0.5};
  CHECK_FALSE(region_on_hull(dented, 1e-6));
}

TEST_CASE("sweep gains under both conventions") {
  ResultTable t;
  auto add = [&](const char* s, double x, double v) {
    ResultRow r;
    r.scheme = s;
    r.sweep_value = x;
    r.status = "optimal";
    r.min_rate = v;
    t.rows.push_back(r);
  };
  add("a", 1, 2.0);
  add("a", 2, 3.0);
  add("b", 1, 1.0);
  add("b", 2, 2.0);
  const SweepGain g = sweep_gain(t, "a", "b");
  CHECK(g.mean_of_ratios == doctest::Approx(75.0));
  CHECK(g.ratio_of_means == doctest::Approx(200.0 / 3.0));
}

TEST_CASE("validation audit passes on small instances") {
  ExperimentConfig c;
  c.optimizer.randomization_trials = 20;
  for (const AuditLine& line : run_validation(c, 8)) {
    INFO(line.name << ": " << line.detail);
    CHECK(line.passed);
  }
}
