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

#include "generators.hpp"
#include "oracles.hpp"
#include "irscoop/baselines.hpp"

using namespace irscoop;

namespace {

ChannelRealization draw(int n, std::uint64_t k) {
  return sample_realization(ScenarioGeometry{}, PathLossModel{}, n, realization_seed(55, k));
}

OptimizerSettings fast_settings() {
  OptimizerSettings s;
  s.randomization_trials = 100;
  return s;
}

}  // namespace

TEST_CASE("scheme names round-trip") {
  for (SchemeId id : {SchemeId::CoopWithIrs, SchemeId::IndepWithIrs, SchemeId::CoopNoIrs,
                      SchemeId::IndepNoIrs}) {
    CHECK(scheme_from_string(to_string(id)) == id);
  }
  CHECK(std::string(to_string(SchemeId::CoopNoIrs)) == "coop_no_irs");
  CHECK_THROWS_AS(scheme_from_string("relay"), std::invalid_argument);
}

TEST_CASE("harvest-then-transmit allocation matches a time grid") {
  gen::Source src(6);
  SystemParams p;
  for (int trial = 0; trial < 10; ++trial) {
    HttGains g{std::pow(10.0, src.uniform(-8.0, -5.0)), std::pow(10.0, src.uniform(-8.0, -5.0)),
               std::pow(10.0, src.uniform(-8.0, -5.0)), std::pow(10.0, src.uniform(-8.0, -5.0))};
    const HttRefit fit = solve_htt_allocation(g, p);
    REQUIRE(fit.status == SolveStatus::Optimal);
    const double grid = oracle::htt_grid(g, p.eta * p.p_hap, p.rho(), 0.005);
    CHECK(fit.objective >= grid - 1e-6);
    CHECK(fit.objective <= grid + 1e-2);
    CHECK(fit.alloc.total_time() <= 1.0 + 1e-7);
  }
}

TEST_CASE("independent scheme without a surface is the direct-link baseline") {
  SystemParams p;
  const auto r = draw(6, 1);
  const RecoveredSolution a = solve_scheme(SchemeId::IndepNoIrs, r, p, fast_settings());
  const RecoveredSolution b = maximize_independent(r.without_irs(), p, fast_settings());
  CHECK(a.min_rate == b.min_rate);
  CHECK(a.scheme == SchemeId::IndepNoIrs);
  const RecoveredSolution c = solve_scheme(SchemeId::IndepWithIrs, r.without_irs(), p);
  CHECK(c.min_rate == doctest::Approx(b.min_rate).epsilon(1e-9));
}

TEST_CASE("cooperation without a surface equals the main optimizer on N = 0") {
  SystemParams p;
  const auto r = draw(5, 2);
  const RecoveredSolution a = solve_scheme(SchemeId::CoopNoIrs, r, p);
  const RecoveredSolution b = maximize_common_throughput(r.without_irs(), p);
  CHECK(a.min_rate == b.min_rate);
  CHECK(a.gap <= 1e-5 * (1.0 + a.r_bar_star));
}

TEST_CASE("symmetric users get equal transmit slots") {
  gen::Source src(19);
  ChannelRealization r;
  r.g = src.gaussian_vector(3, 1e-3);
  r.alpha_1r = src.gaussian_vector(3, 1e-3);
  r.alpha_2r = r.alpha_1r;
  r.alpha_1 = src.gaussian(1e-5);
  r.alpha_2 = r.alpha_1;
  const RecoveredSolution s = maximize_independent(r, SystemParams{}, fast_settings());
  REQUIRE(s.status == SolveStatus::Optimal);
  const auto& plan = std::get<HttPlan>(s.plan);
  CHECK(std::abs(plan.alloc.t1 - plan.alloc.t2) <= 1e-3);
}

TEST_CASE("degenerate direct channels") {
  ChannelRealization r;
  r.alpha_1 = {1e-3, 0.0};
  SystemParams p;
  const RecoveredSolution one = solve_scheme(SchemeId::IndepNoIrs, r, p);
  CHECK(one.min_rate == doctest::Approx(0.0).epsilon(1e-9));
  r.alpha_1 = {0.0, 0.0};
  const RecoveredSolution none = solve_scheme(SchemeId::IndepNoIrs, r, p);
  CHECK(none.min_rate == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(none.r1 == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("every scheme returns a plan that passes its own audit") {
  SystemParams p;
  for (int k = 0; k < 4; ++k) {
    const auto r = draw(1 + 2 * k, 10 + k);
    for (SchemeId id : {SchemeId::CoopWithIrs, SchemeId::IndepWithIrs, SchemeId::CoopNoIrs,
                        SchemeId::IndepNoIrs}) {
      const RecoveredSolution s = solve_scheme(id, r, p, fast_settings());
      REQUIRE(s.status == SolveStatus::Optimal);
      CHECK(s.min_rate <= s.r_bar_star + 1e-6);
      if (const auto* c = std::get_if<CoopPlan>(&s.plan)) {
        const auto& rr = (id == SchemeId::CoopNoIrs) ? r.without_irs() : r;
        CHECK(check_feasibility(rr, c->phases, p, c->alloc).feasible);
      } else {
        const auto& h = std::get<HttPlan>(s.plan);
        const auto& rr = (id == SchemeId::IndepNoIrs) ? r.without_irs() : r;
        CHECK(check_htt_feasibility(rr, h.phases, p, h.alloc).feasible);
      }
    }
  }
}

TEST_CASE("surface helps both protocols on average") {
  SystemParams p;
  double coop = 0.0, coop0 = 0.0, ind = 0.0, ind0 = 0.0;
  for (int k = 0; k < 10; ++k) {
    const auto r = draw(10, 300 + k);
    coop += solve_scheme(SchemeId::CoopWithIrs, r, p, fast_settings()).min_rate;
    coop0 += solve_scheme(SchemeId::CoopNoIrs, r, p, fast_settings()).min_rate;
    ind += solve_scheme(SchemeId::IndepWithIrs, r, p, fast_settings()).min_rate;
    ind0 += solve_scheme(SchemeId::IndepNoIrs, r, p, fast_settings()).min_rate;
  }
  CHECK(coop > coop0);
  CHECK(ind > ind0);
  CHECK(coop > ind);
}
