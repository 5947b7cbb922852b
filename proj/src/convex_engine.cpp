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

#include "irscoop/convex_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

#include "barrier.hpp"
#include "unit_diag_sdp.hpp"

namespace irscoop {

LinearExpr& LinearExpr::add(int var, double coeff) {
  scalars.emplace_back(var, coeff);
  return *this;
}

LinearExpr& LinearExpr::add_trace(int matrix, CMatrix coeff, double weight) {
  traces.push_back({matrix, std::move(coeff), weight});
  return *this;
}

LinearExpr& LinearExpr::add_constant(double c) {
  constant += c;
  return *this;
}

int ConeProblem::add_scalar(std::string name, double lower, double upper, double scale) {
  scalars.push_back({std::move(name), lower, upper, scale});
  return static_cast<int>(scalars.size()) - 1;
}

int ConeProblem::add_matrix(std::string name, Eigen::Index dim, int diag_var) {
  matrices.push_back({std::move(name), dim, diag_var});
  return static_cast<int>(matrices.size()) - 1;
}

void ConeProblem::add_linear(std::string name, LinearExpr expr, Relation relation) {
  linear.push_back({std::move(name), std::move(expr), relation});
}

void ConeProblem::add_hypograph(std::string name, LinearExpr lhs,
                                std::vector<PerspectiveLogTerm> terms) {
  hypographs.push_back({std::move(name), std::move(lhs), std::move(terms)});
}

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::NumericalLimit: return "numerical_limit";
  }
  return "unknown";
}

void SolverSettings::validate() const {
  if (!(feasibility_tol > 0.0) || !(objective_tol > 0.0) || !(bound_gap_tol > 0.0)) {
    throw std::invalid_argument("solver settings: tolerances must be positive");
  }
  if (max_iterations < 1) throw std::invalid_argument("solver settings: max_iterations < 1");
}

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw ProblemError(msg);
}

bool same_matrix(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  const double scale = std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
  return (a - b).cwiseAbs().maxCoeff() <= 1e-13 * scale;
}

bool is_zero(const CMatrix& a) { return a.size() == 0 || a.cwiseAbs().maxCoeff() == 0.0; }

void check_expr(const ConeProblem& p, const LinearExpr& e, const std::string& where,
                int trace_sign) {
  const int ns = static_cast<int>(p.scalars.size());
  const int nm = static_cast<int>(p.matrices.size());
  require(std::isfinite(e.constant), where + ": non-finite constant");
  for (const auto& [var, coeff] : e.scalars) {
    require(var >= 0 && var < ns, where + ": unknown scalar variable");
    require(std::isfinite(coeff), where + ": non-finite coefficient");
  }
  if (trace_sign == 0) {
    require(e.traces.empty(), where + ": matrix traces are not allowed here");
    return;
  }
  for (const TraceTerm& t : e.traces) {
    require(t.matrix >= 0 && t.matrix < nm, where + ": unknown matrix variable");
    const Eigen::Index d = p.matrices[t.matrix].dim;
    require(t.coeff.rows() == d && t.coeff.cols() == d,
            where + ": coefficient size does not match matrix '" + p.matrices[t.matrix].name + "'");
    require(std::isfinite(t.weight) && t.coeff.allFinite(), where + ": non-finite trace term");
    require(t.weight * trace_sign >= 0.0,
            where + ": trace enters with a sign that rewards a smaller trace");
    const double norm = std::max(t.coeff.cwiseAbs().maxCoeff(), 1e-300);
    require((t.coeff - t.coeff.adjoint()).cwiseAbs().maxCoeff() <= 1e-12 * norm,
            where + ": coefficient matrix is not Hermitian");
    if (!is_zero(t.coeff)) {
      const double lmin =
          Eigen::SelfAdjointEigenSolver<CMatrix>(t.coeff, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
      require(lmin >= -1e-10 * norm, where + ": coefficient matrix is not PSD");
    }
  }
}

template <typename F>
void for_each_trace(const ConeProblem& p, F&& f) {
  for (const LinearConstraint& c : p.linear) {
    for (const TraceTerm& t : c.expr.traces) f(t);
  }
  for (const HypographConstraint& h : p.hypographs) {
    for (const PerspectiveLogTerm& term : h.terms) {
      for (const TraceTerm& t : term.argument.traces) f(t);
    }
  }
}

}  // namespace

void check_problem(const ConeProblem& p) {
  for (const ScalarVar& s : p.scalars) {
    require(std::isfinite(s.scale) && s.scale > 0.0, "scalar '" + s.name + "': scale must be positive");
    require(!std::isnan(s.lower) && !std::isnan(s.upper), "scalar '" + s.name + "': NaN bound");
    require(s.lower <= s.upper, "scalar '" + s.name + "': lower > upper");
    require(s.lower < kInf && s.upper > -kInf, "scalar '" + s.name + "': empty bound");
  }
  for (const MatrixVar& m : p.matrices) {
    require(m.dim >= 1, "matrix '" + m.name + "': dimension must be positive");
    require(m.diag_var >= 0 && m.diag_var < static_cast<int>(p.scalars.size()),
            "matrix '" + m.name + "': diagonal must be pinned to a declared scalar");
    require(p.scalars[m.diag_var].lower >= 0.0,
            "matrix '" + m.name + "': diagonal variable must be nonnegative");
  }
  for (const LinearConstraint& c : p.linear) {
    check_expr(p, c.expr, "constraint '" + c.name + "'",
               c.relation == Relation::LessEqual ? -1 : 0);
  }
  for (const HypographConstraint& h : p.hypographs) {
    const std::string where = "hypograph '" + h.name + "'";
    check_expr(p, h.lhs, where, 0);
    for (const PerspectiveLogTerm& term : h.terms) {
      require(term.t_var >= 0 && term.t_var < static_cast<int>(p.scalars.size()),
              where + ": unknown perspective variable");
      require(p.scalars[term.t_var].lower >= 0.0,
              where + ": perspective variable must be nonnegative");
      require(std::isfinite(term.weight) && term.weight >= 0.0,
              where + ": term weight must be nonnegative");
      check_expr(p, term.argument, where, +1);
    }
  }
  check_expr(p, p.objective, "objective", 0);

  std::vector<std::vector<const CMatrix*>> distinct(p.matrices.size());
  for_each_trace(p, [&](const TraceTerm& t) {
    if (is_zero(t.coeff)) return;
    auto& list = distinct[t.matrix];
    for (const CMatrix* m : list) {
      if (same_matrix(*m, t.coeff)) return;
    }
    list.push_back(&t.coeff);
  });
  for (std::size_t k = 0; k < distinct.size(); ++k) {
    require(distinct[k].size() <= 2, "matrix '" + p.matrices[k].name +
                                         "': more than two distinct coefficient matrices");
  }
}

ProblemSummary summarize(const ConeProblem& p) {
  ProblemSummary s;
  s.n_scalars = static_cast<int>(p.scalars.size());
  s.n_matrices = static_cast<int>(p.matrices.size());
  for (const LinearConstraint& c : p.linear) {
    (c.relation == Relation::LessEqual ? s.n_linear_le : s.n_linear_eq) += 1;
  }
  s.n_hypographs = static_cast<int>(p.hypographs.size());
  for (const HypographConstraint& h : p.hypographs) {
    s.n_perspective_terms += static_cast<int>(h.terms.size());
  }
  for (const MatrixVar& m : p.matrices) s.matrix_dims.push_back(m.dim);
  return s;
}

double evaluate(const LinearExpr& e, const Assignment& a) {
  double v = e.constant;
  for (const auto& [var, coeff] : e.scalars) v += coeff * a.scalars.at(var);
  for (const TraceTerm& t : e.traces) {
    v += t.weight * (t.coeff * a.matrices.at(t.matrix)).trace().real();
  }
  return v;
}

double evaluate(const PerspectiveLogTerm& term, const Assignment& a) {
  const double t = a.scalars.at(term.t_var);
  const double u = evaluate(term.argument, a);
  if (t <= 0.0) return 0.0;
  if (t + u <= 0.0) return -kInf;
  return term.weight * perspective_log2(t, u);
}

AuditReport validate_solution(const ConeProblem& p, const Assignment& a, double tolerance) {
  if (a.scalars.size() != p.scalars.size() || a.matrices.size() != p.matrices.size()) {
    throw std::invalid_argument("validate_solution: assignment does not match the problem");
  }
  for (std::size_t k = 0; k < p.matrices.size(); ++k) {
    if (a.matrices[k].rows() != p.matrices[k].dim || a.matrices[k].cols() != p.matrices[k].dim) {
      throw std::invalid_argument("validate_solution: matrix '" + p.matrices[k].name +
                                  "' has the wrong size");
    }
  }
  AuditReport rep;
  auto note = [&](double v, const std::string& what) {
    if (std::isnan(v)) v = kInf;
    if (v > rep.worst_violation) {
      rep.worst_violation = v;
      rep.worst_constraint = what;
    }
  };
  for (std::size_t j = 0; j < p.scalars.size(); ++j) {
    const ScalarVar& s = p.scalars[j];
    const double y = a.scalars[j];
    if (std::isfinite(s.lower)) note((s.lower - y) / s.scale, "bound of '" + s.name + "'");
    if (std::isfinite(s.upper)) note((y - s.upper) / s.scale, "bound of '" + s.name + "'");
  }
  for (const LinearConstraint& c : p.linear) {
    double norm2 = 0.0;
    for (const auto& [var, coeff] : c.expr.scalars) {
      norm2 += std::pow(coeff * p.scalars[var].scale, 2);
    }
    for (const TraceTerm& t : c.expr.traces) {
      const double s = p.scalars[p.matrices[t.matrix].diag_var].scale;
      norm2 += std::pow(t.weight * t.coeff.trace().real() * s, 2);
    }
    const double value = evaluate(c.expr, a);
    const double norm = norm2 > 0.0 ? std::sqrt(norm2) : 1.0;
    note((c.relation == Relation::Equal ? std::abs(value) : value) / norm,
         "constraint '" + c.name + "'");
  }
  for (const HypographConstraint& h : p.hypographs) {
    double rhs = 0.0;
    for (const PerspectiveLogTerm& term : h.terms) rhs += evaluate(term, a);
    note(evaluate(h.lhs, a) - rhs, "hypograph '" + h.name + "'");
  }
  for (std::size_t k = 0; k < p.matrices.size(); ++k) {
    const MatrixVar& m = p.matrices[k];
    const CMatrix& w = a.matrices[k];
    const double s = a.scalars[m.diag_var];
    const double scale = std::max(p.scalars[m.diag_var].scale, std::abs(s));
    const std::string what = "matrix '" + m.name + "'";
    note((w - w.adjoint()).cwiseAbs().maxCoeff() / scale, what + " Hermitian");
    note((w.diagonal().array() - cplx(s, 0.0)).abs().maxCoeff() / scale, what + " diagonal");
    const CMatrix herm = 0.5 * (w + w.adjoint());
    const double lmin =
        Eigen::SelfAdjointEigenSolver<CMatrix>(herm, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
    note(-lmin / scale, what + " PSD");
  }
  rep.objective = evaluate(p.objective, a);
  rep.ok = rep.worst_violation <= tolerance;
  return rep;
}

namespace {

using detail::BarrierProblem;
using detail::BarrierResult;
using detail::BarrierStatus;
using detail::ConcaveRow;
using detail::ConcaveTerm;
using detail::LinearRow;

// value = a . y_internal + c, in the original units of whatever it describes
struct Affine {
  RVector a;
  double c = 0.0;
};

struct SupportPoint {
  double theta = 0.0;
  double ua = 0.0, ub = 0.0;
  CMatrix v;
};

struct Coefficient {
  CMatrix matrix;
  CMatrix factor;   // factor * factor^H == matrix
  double h_up = 0.0;
  double h_lo = 0.0;
  CMatrix v;        // maximizer of tr(matrix V) over unit-diagonal V
};

struct MatrixInfo {
  Eigen::Index dim = 1;
  int diag_var = -1;
  double sigma = 1.0;  // scale of the diagonal variable
  std::vector<Coefficient> coeffs;  // nonzero, distinct
  std::vector<int> x_index;         // internal variable per coefficient
  std::vector<std::pair<double, double>> cuts;  // (theta, upper support)
  std::vector<SupportPoint> points;             // sorted by theta
};

class Reduction {
 public:
  Reduction(const ConeProblem& p, const SolverSettings& s) : p_(p), settings_(s) {
    eliminate();
    setup_matrices();
  }

  bool trivially_infeasible() const { return infeasible_; }

  SolveResult run();

 private:
  void eliminate();
  void setup_matrices();
  Affine scalar_affine(int j, int n_total) const;
  Affine expr_affine(const LinearExpr& e, int n_total) const;
  Affine trace_affine(const TraceTerm& t, int n_total) const;
  int coeff_index(int matrix, const CMatrix& c) const;
  BarrierProblem build(bool inner) const;
  void add_support(MatrixInfo& m, double theta) const;
  Assignment assemble(const RVector& y) const;
  double refine(const RVector& y, double geom_tol);

  const ConeProblem& p_;
  SolverSettings settings_;
  bool infeasible_ = false;

  int n_orig_ = 0;
  std::vector<bool> eliminated_;
  std::vector<RVector> sub_row_;  // over original scalars
  std::vector<double> sub_c_;
  std::vector<int> kept_index_;   // original -> internal, -1 when eliminated
  int n_kept_ = 0;

  std::vector<MatrixInfo> mats_;
  int n_x_ = 0;
  std::vector<int> lambda_offset_;
  int n_lambda_ = 0;
};

void Reduction::eliminate() {
  n_orig_ = static_cast<int>(p_.scalars.size());
  eliminated_.assign(n_orig_, false);
  sub_row_.assign(n_orig_, RVector::Zero(n_orig_));
  sub_c_.assign(n_orig_, 0.0);
  std::vector<bool> protect(n_orig_, false);
  for (const MatrixVar& m : p_.matrices) protect[m.diag_var] = true;
  for (const HypographConstraint& h : p_.hypographs) {
    for (const PerspectiveLogTerm& t : h.terms) protect[t.t_var] = true;
  }
  for (int j = 0; j < n_orig_; ++j) {
    const ScalarVar& s = p_.scalars[j];
    if (s.lower == s.upper) {
      eliminated_[j] = true;
      sub_c_[j] = s.lower;
    }
  }
  for (const LinearConstraint& c : p_.linear) {
    if (c.relation != Relation::Equal) continue;
    RVector r = RVector::Zero(n_orig_);
    double c0 = c.expr.constant;
    for (const auto& [var, coeff] : c.expr.scalars) r[var] += coeff;
    for (int j = 0; j < n_orig_; ++j) {
      if (eliminated_[j] && r[j] != 0.0) {
        r += r[j] * sub_row_[j];
        c0 += r[j] * sub_c_[j];
        r[j] = 0.0;
      }
    }
    int pivot = -1;
    double best = 0.0;
    bool any = false;
    for (int j = 0; j < n_orig_; ++j) {
      const double w = std::abs(r[j]) * p_.scalars[j].scale;
      if (w <= 1e-14) continue;
      any = true;
      if (!protect[j] && w > best) {
        best = w;
        pivot = j;
      }
    }
    if (!any) {
      if (std::abs(c0) > settings_.feasibility_tol) infeasible_ = true;
      continue;
    }
    require(pivot >= 0, "equality '" + c.name +
                            "' only involves perspective or diagonal variables");
    RVector row = -r / r[pivot];
    row[pivot] = 0.0;
    const double cp = -c0 / r[pivot];
    for (int j = 0; j < n_orig_; ++j) {
      if (eliminated_[j] && sub_row_[j][pivot] != 0.0) {
        const double f = sub_row_[j][pivot];
        sub_row_[j] += f * row;
        sub_c_[j] += f * cp;
        sub_row_[j][pivot] = 0.0;
      }
    }
    eliminated_[pivot] = true;
    sub_row_[pivot] = row;
    sub_c_[pivot] = cp;
  }
  kept_index_.assign(n_orig_, -1);
  for (int j = 0; j < n_orig_; ++j) {
    if (!eliminated_[j]) kept_index_[j] = n_kept_++;
  }
}

int Reduction::coeff_index(int matrix, const CMatrix& c) const {
  const auto& list = mats_[matrix].coeffs;
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (same_matrix(list[i].matrix, c)) return static_cast<int>(i);
  }
  return -1;
}

void Reduction::setup_matrices() {
  mats_.resize(p_.matrices.size());
  for (std::size_t k = 0; k < p_.matrices.size(); ++k) {
    mats_[k].dim = p_.matrices[k].dim;
    mats_[k].diag_var = p_.matrices[k].diag_var;
    mats_[k].sigma = p_.scalars[p_.matrices[k].diag_var].scale;
  }
  for_each_trace(p_, [&](const TraceTerm& t) {
    MatrixInfo& m = mats_[t.matrix];
    if (m.dim == 1 || is_zero(t.coeff) || coeff_index(t.matrix, t.coeff) >= 0) return;
    Coefficient c;
    c.matrix = t.coeff;
    c.factor = detail::psd_factor(0.5 * (t.coeff + t.coeff.adjoint()));
    const detail::SupportResult r = detail::max_trace_factored(c.factor);
    c.h_up = r.upper;
    c.h_lo = r.lower;
    c.v = r.v;
    m.coeffs.push_back(std::move(c));
  });
  for (MatrixInfo& m : mats_) {
    for (std::size_t i = 0; i < m.coeffs.size(); ++i) m.x_index.push_back(n_kept_ + n_x_++);
    if (m.coeffs.size() == 2) {
      for (double theta : {0.0, 0.25 * std::numbers::pi, 0.5 * std::numbers::pi}) {
        add_support(m, theta);
      }
    }
  }
}

void Reduction::add_support(MatrixInfo& m, double theta) const {
  const double wa = theta >= 0.5 * std::numbers::pi ? 0.0 : std::cos(theta);
  const double wb = theta <= 0.0 ? 0.0 : std::sin(theta);
  const Coefficient& a = m.coeffs[0];
  const Coefficient& b = m.coeffs[1];
  const Eigen::Index ka = wa > 0.0 ? a.factor.cols() : 0;
  const Eigen::Index kb = wb > 0.0 ? b.factor.cols() : 0;
  CMatrix f(m.dim, ka + kb);
  if (ka > 0) f.leftCols(ka) = a.factor * std::sqrt(wa / a.h_up);
  if (kb > 0) f.rightCols(kb) = b.factor * std::sqrt(wb / b.h_up);
  const detail::SupportResult r = detail::max_trace_factored(f);
  SupportPoint pt;
  pt.theta = theta;
  pt.v = r.v;
  pt.ua = (a.matrix * r.v).trace().real() / a.h_up;
  pt.ub = (b.matrix * r.v).trace().real() / b.h_up;
  m.cuts.emplace_back(theta, r.upper);
  auto pos = std::lower_bound(m.points.begin(), m.points.end(), theta,
                              [](const SupportPoint& s, double t) { return s.theta < t; });
  m.points.insert(pos, std::move(pt));
}

Affine Reduction::scalar_affine(int j, int n_total) const {
  Affine out{RVector::Zero(n_total), 0.0};
  if (!eliminated_[j]) {
    out.a[kept_index_[j]] = p_.scalars[j].scale;
    return out;
  }
  out.c = sub_c_[j];
  for (int i = 0; i < n_orig_; ++i) {
    if (sub_row_[j][i] != 0.0) out.a[kept_index_[i]] += sub_row_[j][i] * p_.scalars[i].scale;
  }
  return out;
}

Affine Reduction::trace_affine(const TraceTerm& t, int n_total) const {
  const MatrixInfo& m = mats_[t.matrix];
  if (m.dim == 1) {
    Affine s = scalar_affine(m.diag_var, n_total);
    const double f = t.weight * t.coeff(0, 0).real();
    return {f * s.a, f * s.c};
  }
  Affine out{RVector::Zero(n_total), 0.0};
  const int i = coeff_index(t.matrix, t.coeff);
  if (i < 0) return out;  // zero coefficient
  out.a[m.x_index[i]] = t.weight * m.coeffs[i].h_up * m.sigma;
  return out;
}

Affine Reduction::expr_affine(const LinearExpr& e, int n_total) const {
  Affine out{RVector::Zero(n_total), e.constant};
  for (const auto& [var, coeff] : e.scalars) {
    const Affine s = scalar_affine(var, n_total);
    out.a += coeff * s.a;
    out.c += coeff * s.c;
  }
  for (const TraceTerm& t : e.traces) {
    const Affine s = trace_affine(t, n_total);
    out.a += s.a;
    out.c += s.c;
  }
  return out;
}

BarrierProblem Reduction::build(bool inner) const {
  const int n = n_kept_ + n_x_ + (inner ? n_lambda_ : 0);
  BarrierProblem bp;
  bp.n = n;
  bp.lower.assign(n, 0.0);
  bp.c = expr_affine(p_.objective, n).a;
  auto add_row = [&](const RVector& a, double b) { bp.rows.push_back({a, b}); };

  for (int j = 0; j < n_orig_; ++j) {
    const ScalarVar& s = p_.scalars[j];
    if (!eliminated_[j]) {
      const int k = kept_index_[j];
      bp.lower[k] = std::isfinite(s.lower) ? s.lower / s.scale : -kInf;
      if (std::isfinite(s.upper)) {
        RVector e = RVector::Zero(n);
        e[k] = 1.0;
        add_row(e, s.upper / s.scale);
      }
      continue;
    }
    if (s.lower == s.upper) continue;
    const Affine a = scalar_affine(j, n);
    if (std::isfinite(s.lower)) add_row(-a.a / s.scale, (a.c - s.lower) / s.scale);
    if (std::isfinite(s.upper)) add_row(a.a / s.scale, (s.upper - a.c) / s.scale);
  }
  for (const LinearConstraint& c : p_.linear) {
    if (c.relation != Relation::LessEqual) continue;
    const Affine a = expr_affine(c.expr, n);
    add_row(a.a, -a.c);
  }
  for (std::size_t k = 0; k < mats_.size(); ++k) {
    const MatrixInfo& m = mats_[k];
    if (m.coeffs.empty()) continue;
    const Affine s = scalar_affine(m.diag_var, n);
    const RVector s_hat = s.a / m.sigma;
    const double s_hat0 = s.c / m.sigma;
    if (m.coeffs.size() == 1) {
      const double ratio = inner ? m.coeffs[0].h_lo / m.coeffs[0].h_up : 1.0;
      RVector a = -ratio * s_hat;
      a[m.x_index[0]] += 1.0;
      add_row(a, ratio * s_hat0);
      continue;
    }
    if (!inner) {
      for (const auto& [theta, h] : m.cuts) {
        RVector a = -h * s_hat;
        a[m.x_index[0]] += std::cos(theta);
        a[m.x_index[1]] += std::sin(theta);
        add_row(a, h * s_hat0);
      }
      continue;
    }
    const int off = n_kept_ + n_x_ + lambda_offset_[k];
    RVector ra = RVector::Zero(n);
    RVector rb = RVector::Zero(n);
    RVector rs = -s_hat;
    ra[m.x_index[0]] = 1.0;
    rb[m.x_index[1]] = 1.0;
    for (std::size_t j = 0; j < m.points.size(); ++j) {
      ra[off + static_cast<int>(j)] = -m.points[j].ua;
      rb[off + static_cast<int>(j)] = -m.points[j].ub;
      rs[off + static_cast<int>(j)] = 1.0;
    }
    add_row(ra, 0.0);
    add_row(rb, 0.0);
    add_row(rs, s_hat0);
  }
  for (const HypographConstraint& h : p_.hypographs) {
    ConcaveRow row;
    const Affine lhs = expr_affine(h.lhs, n);
    row.lin = -lhs.a;
    row.lin0 = -lhs.c;
    for (const PerspectiveLogTerm& t : h.terms) {
      const Affine u = expr_affine(t.argument, n);
      ConcaveTerm term;
      if (eliminated_[t.t_var]) {
        term.t_const = sub_c_[t.t_var];
        term.weight = t.weight;
        term.u = u.a;
        term.u0 = u.c;
      } else {
        const double sc = p_.scalars[t.t_var].scale;
        term.t_var = kept_index_[t.t_var];
        term.weight = t.weight * sc;
        term.u = u.a / sc;
        term.u0 = u.c / sc;
      }
      row.terms.push_back(std::move(term));
    }
    bp.concave.push_back(std::move(row));
  }
  return bp;
}

Assignment Reduction::assemble(const RVector& y) const {
  Assignment out;
  const int n = static_cast<int>(y.size());
  out.scalars.resize(n_orig_);
  for (int j = 0; j < n_orig_; ++j) {
    const Affine a = scalar_affine(j, n);
    out.scalars[j] = a.a.dot(y) + a.c;
  }
  for (std::size_t k = 0; k < mats_.size(); ++k) {
    const MatrixInfo& m = mats_[k];
    const double s = out.scalars[m.diag_var];
    if (m.dim == 1) {
      out.matrices.push_back(CMatrix::Constant(1, 1, s));
    } else if (m.coeffs.empty()) {
      out.matrices.push_back(s * CMatrix::Identity(m.dim, m.dim));
    } else if (m.coeffs.size() == 1) {
      out.matrices.push_back(s * m.coeffs[0].v);
    } else {
      const int off = n_kept_ + n_x_ + lambda_offset_[k];
      CMatrix w = CMatrix::Zero(m.dim, m.dim);
      double total = 0.0;
      std::size_t top = 0;
      for (std::size_t j = 0; j < m.points.size(); ++j) {
        const double lam = std::max(0.0, y[off + static_cast<int>(j)]);
        w += lam * m.points[j].v;
        total += lam;
        if (lam > y[off + static_cast<int>(top)]) top = j;
      }
      // Unused diagonal mass goes to the most used support matrix.
      w += std::max(0.0, s / m.sigma - total) * m.points[top].v;
      out.matrices.push_back(m.sigma * w);
    }
  }
  return out;
}

// Adds supporting directions where the outer solution leaves the inner
// polygon by more than geom_tol. Returns the largest violation seen.
double Reduction::refine(const RVector& y, double geom_tol) {
  double worst = 0.0;
  for (MatrixInfo& m : mats_) {
    if (m.coeffs.size() != 2) continue;
    const Affine s = scalar_affine(m.diag_var, static_cast<int>(y.size()));
    const double s_hat = std::max(0.0, (s.a.dot(y) + s.c) / m.sigma);
    const double pa = y[m.x_index[0]];
    const double pb = y[m.x_index[1]];
    double best = std::max(pa - s_hat * m.points.front().ua, pb - s_hat * m.points.back().ub);
    double theta = -1.0;
    for (std::size_t j = 0; j + 1 < m.points.size(); ++j) {
      const SupportPoint& u = m.points[j];
      const SupportPoint& w = m.points[j + 1];
      const double ea = w.ua - u.ua;
      const double eb = w.ub - u.ub;
      const double len = std::hypot(ea, eb);
      if (len < 1e-14) continue;
      const double na = eb / len;
      const double nb = -ea / len;
      const double v = na * (pa - s_hat * u.ua) + nb * (pb - s_hat * u.ub);
      if (v > best) {
        best = v;
        const double t = std::atan2(nb, na);
        const bool fresh = t > u.theta + 1e-12 && t < w.theta - 1e-12;
        theta = fresh ? t : -1.0;
      }
    }
    worst = std::max(worst, best);
    if (best > geom_tol && theta >= 0.0) add_support(m, theta);
  }
  return worst;
}

SolveResult Reduction::run() {
  SolveResult res;
  detail::BarrierSettings bs;
  bs.feasibility_tol = settings_.feasibility_tol;
  bs.gap_tol = 0.05 * settings_.objective_tol;

  if (infeasible_) {
    res.status = SolveStatus::Infeasible;
    res.message = "inconsistent equality constraints";
    return res;
  }
  double geom_tol = 1e-6;
  double upper = kInf;
  std::optional<Assignment> best;
  double lower = -kInf;
  int iter = 0;
  while (iter < settings_.max_iterations) {
    ++iter;
    const BarrierResult outer = detail::barrier_solve(build(false), bs);
    if (outer.status == BarrierStatus::Infeasible) {
      res.status = SolveStatus::Infeasible;
      res.iterations = iter;
      res.message = "relaxation infeasible";
      return res;
    }
    if (outer.status == BarrierStatus::Unbounded) {
      res.status = SolveStatus::NumericalLimit;
      res.iterations = iter;
      res.message = "objective unbounded";
      return res;
    }
    if (outer.status != BarrierStatus::Optimal) {
      res.message = "outer barrier stalled";
      break;
    }
    upper = std::min(upper, outer.upper_bound + p_.objective.constant);
    const std::size_t before = [&] {
      std::size_t c = 0;
      for (const MatrixInfo& m : mats_) c += m.points.size();
      return c;
    }();
    refine(outer.y, geom_tol);
    std::size_t after = 0;
    for (const MatrixInfo& m : mats_) after += m.points.size();
    if (after != before) continue;

    // Outer point is inside the inner polygons up to geom_tol: certify.
    lambda_offset_.assign(mats_.size(), 0);
    n_lambda_ = 0;
    for (std::size_t k = 0; k < mats_.size(); ++k) {
      lambda_offset_[k] = n_lambda_;
      if (mats_[k].coeffs.size() == 2) n_lambda_ += static_cast<int>(mats_[k].points.size());
    }
    const BarrierResult in = detail::barrier_solve(build(true), bs);
    if (in.status == BarrierStatus::Optimal) {
      Assignment a = assemble(in.y);
      const double obj = evaluate(p_.objective, a);
      if (obj > lower) {
        lower = obj;
        best = std::move(a);
      }
    }
    if (upper - lower <= settings_.objective_tol * (1.0 + std::abs(upper))) break;
    geom_tol *= 0.1;
    if (geom_tol < 1e-15) {
      res.message = "geometric tolerance exhausted";
      break;
    }
  }
  if (!best) {
    lambda_offset_.assign(mats_.size(), 0);
    n_lambda_ = 0;
    for (std::size_t k = 0; k < mats_.size(); ++k) {
      lambda_offset_[k] = n_lambda_;
      if (mats_[k].coeffs.size() == 2) n_lambda_ += static_cast<int>(mats_[k].points.size());
    }
    const BarrierResult in = detail::barrier_solve(build(true), bs);
    if (in.status == BarrierStatus::Optimal) {
      best = assemble(in.y);
      lower = evaluate(p_.objective, *best);
    }
  }
  res.iterations = iter;
  if (!best) {
    res.status = SolveStatus::NumericalLimit;
    if (res.message.empty()) res.message = "no feasible assignment recovered";
    res.upper_bound = upper;
    return res;
  }
  res.assignment = std::move(*best);
  res.objective = lower;
  res.upper_bound = std::max(upper, lower);
  const double rel = (res.upper_bound - lower) / (1.0 + std::abs(res.upper_bound));
  if (rel <= settings_.objective_tol) {
    res.status = SolveStatus::Optimal;
  } else if (rel <= settings_.bound_gap_tol) {
    res.status = SolveStatus::Optimal;
    if (res.message.empty()) res.message = "accepted at bound gap tolerance";
  } else {
    res.status = SolveStatus::NumericalLimit;
    std::ostringstream os;
    os << "relative gap " << rel << " above tolerance";
    if (!res.message.empty()) os << " (" << res.message << ")";
    res.message = os.str();
  }
  return res;
}

}  // namespace

SolveResult solve(const ConeProblem& problem, const SolverSettings& settings) {
  settings.validate();
  check_problem(problem);
  Reduction red(problem, settings);
  return red.run();
}

}  // namespace irscoop
