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

#include "unit_diag_sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace irscoop::detail {

namespace {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

SupportResult empty_support(Eigen::Index n) {
  return {0.0, 0.0, CMatrix::Identity(n, n)};
}

// Rank one: V = u u^H with u aligned to b.
SupportResult rank_one(const CVector& b) {
  const Eigen::Index n = b.size();
  CVector u(n);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double m = std::abs(b[i]);
    u[i] = m > 0.0 ? b[i] / m : cplx(1.0, 0.0);
    sum += m;
  }
  const double value = sum * sum;
  return {value, value, u * u.adjoint()};
}

// Rank two. With Lambda = (I + r.sigma) / 2 a 2x2 density matrix, the optimum
// equals (max_{|r|<=1} sum_n sqrt(beta_n Lambda beta_n^H))^2 where beta_n is
// row n of B. Solved by a barrier on the unit ball.
SupportResult rank_two(const CMatrix& b) {
  const Eigen::Index n = b.rows();
  std::vector<double> a;
  std::vector<Vec3> q;
  std::vector<Eigen::Index> rows;
  for (Eigen::Index i = 0; i < n; ++i) {
    const cplx b0 = b(i, 0);
    const cplx b1 = b(i, 1);
    const double norm2 = std::norm(b0) + std::norm(b1);
    if (norm2 == 0.0) continue;
    const cplx z = b0 * std::conj(b1);
    a.push_back(0.5 * norm2);
    q.emplace_back(z.real(), z.imag(), 0.5 * (std::norm(b0) - std::norm(b1)));
    rows.push_back(i);
  }
  if (rows.empty()) return empty_support(n);

  auto f_value = [&](const Vec3& r) {
    double f = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) f += std::sqrt(std::max(0.0, a[k] + r.dot(q[k])));
    return f;
  };
  const double f0 = f_value(Vec3::Zero());
  Vec3 r = Vec3::Zero();
  double kappa = 0.1 * f0;
  auto merit = [&](const Vec3& x, double kap) {
    const double rr = 1.0 - x.squaredNorm();
    if (!(rr > 0.0)) return -std::numeric_limits<double>::infinity();
    return f_value(x) + kap * std::log(rr);
  };
  while (kappa > 1e-15 * f0) {
    for (int it = 0; it < 60; ++it) {
      const double rr = 1.0 - r.squaredNorm();
      Vec3 g = -2.0 * kappa * r / rr;
      Mat3 h = -2.0 * kappa * (Mat3::Identity() / rr + 2.0 * r * r.transpose() / (rr * rr));
      for (std::size_t k = 0; k < a.size(); ++k) {
        const double s = std::sqrt(std::max(1e-300, a[k] + r.dot(q[k])));
        g += q[k] / (2.0 * s);
        h -= q[k] * q[k].transpose() / (4.0 * s * s * s);
      }
      const Vec3 d = -h.ldlt().solve(g);
      const double dec = g.dot(d);
      if (!(dec > 1e-16 * f0)) break;
      const double m0 = merit(r, kappa);
      double step = 1.0;
      while (step > 1e-20 && !(merit(r + step * d, kappa) >= m0 + 0.25 * step * dec)) step *= 0.5;
      if (step <= 1e-20) break;
      r += step * d;
    }
    kappa *= 0.1;
  }

  CMatrix lambda(2, 2);
  lambda(0, 0) = 0.5 * (1.0 + r[2]);
  lambda(1, 1) = 0.5 * (1.0 - r[2]);
  lambda(0, 1) = cplx(0.5 * r[0], -0.5 * r[1]);
  lambda(1, 0) = std::conj(lambda(0, 1));

  CMatrix phi_b = CMatrix::Zero(n, 2);
  CMatrix g = CMatrix::Zero(2, 2);
  double sum_s = 0.0;
  for (Eigen::Index i : rows) {
    const double s2 = (b.row(i) * lambda * b.row(i).adjoint())(0, 0).real();
    const double s = std::sqrt(std::max(s2, 1e-300));
    phi_b.row(i) = b.row(i) / s;
    g += b.row(i).adjoint() * b.row(i) / s;
    sum_s += s;
  }
  CMatrix v = phi_b * lambda * phi_b.adjoint();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::find(rows.begin(), rows.end(), i) == rows.end()) v(i, i) = 1.0;
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = std::sqrt(std::max(v(i, i).real(), 1e-300));
    v.row(i) /= d;
    v.col(i) /= d;
  }
  const double lmax = Eigen::SelfAdjointEigenSolver<CMatrix>(g, Eigen::EigenvaluesOnly)
                          .eigenvalues()
                          .maxCoeff();
  SupportResult res;
  res.v = v;
  res.lower = (b.adjoint() * v * b).trace().real();
  res.upper = std::max(lmax * sum_s, res.lower);
  return res;
}

bool positive_definite(const CMatrix& m) {
  Eigen::LLT<CMatrix> llt(m);
  return llt.info() == Eigen::Success;
}

double max_step(const CMatrix& x, const CMatrix& dx) {
  double alpha = 1.0;
  while (alpha > 1e-12 && !positive_definite(x + alpha * dx)) alpha *= 0.8;
  return 0.95 * alpha;
}

}  // namespace

CMatrix psd_factor(const CMatrix& c) {
  const Eigen::SelfAdjointEigenSolver<CMatrix> eig(c);
  const RVector& w = eig.eigenvalues();
  const double top = w.size() > 0 ? w.maxCoeff() : 0.0;
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (top > 0.0 && w[i] > 1e-12 * top) keep.push_back(i);
  }
  CMatrix b(c.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    b.col(static_cast<Eigen::Index>(k)) = eig.eigenvectors().col(keep[k]) * std::sqrt(w[keep[k]]);
  }
  return b;
}

SupportResult max_trace_dense(const CMatrix& c_in, double rel_tol) {
  const Eigen::Index n = c_in.rows();
  if (n == 0) return {0.0, 0.0, CMatrix(0, 0)};
  const CMatrix c = 0.5 * (c_in + c_in.adjoint());
  const double scale = std::max(c.cwiseAbs().maxCoeff(), 1e-300);
  if (c.cwiseAbs().maxCoeff() == 0.0) return empty_support(n);
  const CMatrix cs = c / scale;

  CMatrix x = CMatrix::Identity(n, n);
  RVector y(n);
  for (Eigen::Index i = 0; i < n; ++i) y[i] = cs.row(i).cwiseAbs().sum() + 1.0;
  auto dual_slack = [&](const RVector& yy) {
    CMatrix z = -cs;
    z.diagonal() += yy.cast<cplx>();
    return z;
  };
  CMatrix z = dual_slack(y);
  for (int it = 0; it < 200; ++it) {
    const double primal = (cs * x).trace().real();
    const double dual = y.sum();
    if (dual - primal <= rel_tol * std::max(1.0, std::abs(dual))) break;
    const double mu = (z * x).trace().real() / (2.0 * static_cast<double>(n));
    const CMatrix zi = z.llt().solve(CMatrix::Identity(n, n));
    RMatrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) m(i, j) = (zi(i, j) * x(j, i)).real();
    }
    RVector rhs(n);
    for (Eigen::Index i = 0; i < n; ++i) rhs[i] = mu * zi(i, i).real() - 1.0;
    const RVector dy = m.ldlt().solve(rhs);
    CMatrix dx = mu * zi - x - zi * dy.cast<cplx>().asDiagonal() * x;
    dx = 0.5 * (dx + dx.adjoint()).eval();
    CMatrix dz = CMatrix::Zero(n, n);
    dz.diagonal() = dy.cast<cplx>();
    const double ap = max_step(x, dx);
    const double ad = max_step(z, dz);
    x += ap * dx;
    y += ad * dy;
    z = dual_slack(y);
    if (ap < 1e-10 && ad < 1e-10) break;
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = std::sqrt(std::max(x(i, i).real(), 1e-300));
    x.row(i) /= d;
    x.col(i) /= d;
  }
  SupportResult res;
  res.v = x;
  res.lower = (c * x).trace().real();
  res.upper = std::max(scale * y.sum(), res.lower);
  return res;
}

SupportResult max_trace_factored(const CMatrix& b) {
  const Eigen::Index n = b.rows();
  if (b.cols() == 0 || b.cwiseAbs().maxCoeff() == 0.0) return empty_support(n);
  if (b.cols() == 1) return rank_one(b.col(0));
  if (b.cols() == 2) return rank_two(b);
  return max_trace_dense(b * b.adjoint());
}

}  // namespace irscoop::detail
