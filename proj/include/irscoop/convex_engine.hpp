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

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "irscoop/linalg.hpp"

namespace irscoop {

/// Raised when a ConeProblem is malformed or falls outside the supported
/// class (see ConeProblem).
class ProblemError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct ScalarVar {
  std::string name;
  double lower = 0.0;
  double upper = kInf;
  /// Typical magnitude; the solver works in units of `scale`.
  double scale = 1.0;
};

/// Hermitian PSD variable of size dim x dim whose diagonal entries all equal
/// the scalar `diag_var`.
struct MatrixVar {
  std::string name;
  Eigen::Index dim = 1;
  int diag_var = -1;
};

/// weight * tr(coeff * W[matrix]).
struct TraceTerm {
  int matrix = -1;
  CMatrix coeff;
  double weight = 1.0;
};

struct LinearExpr {
  std::vector<std::pair<int, double>> scalars;
  std::vector<TraceTerm> traces;
  double constant = 0.0;

  LinearExpr& add(int var, double coeff);
  LinearExpr& add_trace(int matrix, CMatrix coeff, double weight = 1.0);
  LinearExpr& add_constant(double c);
};

enum class Relation { LessEqual, Equal };

/// expr <= 0 or expr == 0.
struct LinearConstraint {
  std::string name;
  LinearExpr expr;
  Relation relation = Relation::LessEqual;
};

/// weight * t log2(1 + argument / t), with t a scalar variable.
struct PerspectiveLogTerm {
  int t_var = -1;
  LinearExpr argument;
  double weight = 1.0;
};

/// lhs <= sum of terms.
struct HypographConstraint {
  std::string name;
  LinearExpr lhs;
  std::vector<PerspectiveLogTerm> terms;
};

/// maximize objective
/// s.t.  linear constraints, variable bounds, W_k PSD with diag(W_k) = s_k,
///       lhs_i <= sum_k weight_k * t_k log2(1 + arg_k / t_k).
///
/// Supported class: every matrix variable enters only through traces against
/// Hermitian PSD coefficient matrices, with a sign that makes a larger trace
/// never hurt (nonpositive weight in a <= row, nonnegative weight inside a
/// log argument), and through at most two distinct coefficient matrices.
/// Traces may not appear in equalities, hypograph left-hand sides or the
/// objective.
struct ConeProblem {
  std::vector<ScalarVar> scalars;
  std::vector<MatrixVar> matrices;
  std::vector<LinearConstraint> linear;
  std::vector<HypographConstraint> hypographs;
  LinearExpr objective;

  int add_scalar(std::string name, double lower = 0.0, double upper = kInf,
                 double scale = 1.0);
  int add_matrix(std::string name, Eigen::Index dim, int diag_var);
  void add_linear(std::string name, LinearExpr expr, Relation relation = Relation::LessEqual);
  void add_hypograph(std::string name, LinearExpr lhs, std::vector<PerspectiveLogTerm> terms);
};

/// Throws ProblemError describing the first defect found.
void check_problem(const ConeProblem& problem);

struct ProblemSummary {
  int n_scalars = 0;
  int n_matrices = 0;
  int n_linear_le = 0;
  int n_linear_eq = 0;
  int n_hypographs = 0;
  int n_perspective_terms = 0;
  std::vector<Eigen::Index> matrix_dims;
};

ProblemSummary summarize(const ConeProblem& problem);

struct SolverSettings {
  double feasibility_tol = 1e-7;
  /// Relative tolerance on (upper bound - achieved objective).
  double objective_tol = 1e-6;
  /// Relative gap accepted as optimal when the iteration budget runs out.
  double bound_gap_tol = 1e-4;
  int max_iterations = 200;

  void validate() const;
};

enum class SolveStatus { Optimal, Infeasible, NumericalLimit };

const char* to_string(SolveStatus status);

struct Assignment {
  std::vector<double> scalars;
  std::vector<CMatrix> matrices;
};

struct SolveResult {
  SolveStatus status = SolveStatus::NumericalLimit;
  /// Objective of the returned (feasible) assignment.
  double objective = 0.0;
  /// Certified upper bound on the optimum.
  double upper_bound = 0.0;
  Assignment assignment;
  int iterations = 0;
  std::string message;

  double gap() const { return upper_bound - objective; }
};

SolveResult solve(const ConeProblem& problem, const SolverSettings& settings = {});

double evaluate(const LinearExpr& expr, const Assignment& a);
double evaluate(const PerspectiveLogTerm& term, const Assignment& a);

struct AuditReport {
  double worst_violation = 0.0;
  std::string worst_constraint;
  double objective = 0.0;
  bool ok = true;
};

/// Re-evaluates every constraint of `problem` at `a`. Violations are measured
/// in the units set by the variable scales; PSD via the smallest eigenvalue.
AuditReport validate_solution(const ConeProblem& problem, const Assignment& a,
                              double tolerance = 1e-6);

}  // namespace irscoop
