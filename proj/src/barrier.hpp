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

#pragma once

#include <vector>

#include "irscoop/linalg.hpp"

namespace irscoop::detail {

// Dense log-barrier method for
//   maximize c.y
//   s.t. a_i.y <= b_i                                     (linear rows)
//        y_j > lower_j        where lower_j is finite     (hard bounds)
//        sum_k w_k F(t_k, u_k(y)) + l.y + l0 >= 0          (concave rows)
// with F(t, u) = t log2(1 + u / t) and u_k affine in y.

struct LinearRow {
  RVector a;
  double b = 0.0;
};

struct ConcaveTerm {
  int t_var = -1;        // index into y, or -1 for the constant t_const
  double t_const = 0.0;
  RVector u;             // u(y) = u.y + u0
  double u0 = 0.0;
  double weight = 1.0;
};

struct ConcaveRow {
  std::vector<ConcaveTerm> terms;
  RVector lin;
  double lin0 = 0.0;
};

struct BarrierProblem {
  int n = 0;
  RVector c;
  std::vector<LinearRow> rows;
  std::vector<ConcaveRow> concave;
  std::vector<double> lower;  // -inf for free variables
};

enum class BarrierStatus { Optimal, Infeasible, Unbounded, NumericalLimit };

struct BarrierSettings {
  double gap_tol = 1e-8;       // absolute, objective units
  double feasibility_tol = 1e-8;
  int max_newton = 4000;
};

struct BarrierResult {
  BarrierStatus status = BarrierStatus::NumericalLimit;
  RVector y;
  double objective = 0.0;
  double upper_bound = 0.0;
  bool relaxed = false;  // rows were loosened by feasibility_tol / 10
  int newton_steps = 0;
};

BarrierResult barrier_solve(const BarrierProblem& problem, const BarrierSettings& settings);

// Perspective log derivatives; exposed for tests.
struct PerspectiveDerivatives {
  double f, ft, fu, ftt, ftu, fuu;
};
PerspectiveDerivatives perspective_derivatives(double t, double u);

}  // namespace irscoop::detail
