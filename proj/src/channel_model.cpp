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

#include "irscoop/channel_model.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace irscoop {

double distance(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

ScenarioGeometry ScenarioGeometry::collinear(double d1, double d2, Point2 irs) {
  ScenarioGeometry geo;
  geo.hap = {0.0, 0.0};
  geo.wd1 = {d1, 0.0};
  geo.wd2 = {d2, 0.0};
  geo.irs = irs;
  return geo;
}

void ScenarioGeometry::validate() const {
  for (const Point2& p : {hap, wd1, wd2, irs}) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw std::invalid_argument("geometry: non-finite coordinate");
    }
  }
  const double ds[] = {d1(), d2(), d12(), hap_irs(), irs_wd1(), irs_wd2()};
  for (double d : ds) {
    if (!(d > 0.0)) throw std::invalid_argument("geometry: two nodes coincide");
  }
}

double PathLossModel::exponent(LinkClass link) const {
  switch (link) {
    case LinkClass::HapIrs: return exp_hap_irs;
    case LinkClass::IrsWd: return exp_irs_wd;
    case LinkClass::HapWd: return exp_hap_wd;
    case LinkClass::WdWd: return exp_wd_wd;
  }
  return exp_hap_wd;
}

double PathLossModel::c0_linear() const { return std::pow(10.0, -c0_db / 10.0); }

void PathLossModel::validate() const {
  if (!std::isfinite(c0_db)) throw std::invalid_argument("path loss: c0_db not finite");
  if (!(d0 > 0.0)) throw std::invalid_argument("path loss: d0 must be positive");
  for (double e : {exp_hap_irs, exp_irs_wd, exp_hap_wd, exp_wd_wd}) {
    if (!(e >= 0.0)) throw std::invalid_argument("path loss: negative exponent");
  }
}

double path_loss(const PathLossModel& model, double d, LinkClass link) {
  if (!(d > 0.0)) throw std::domain_error("path_loss: distance must be positive");
  return model.c0_linear() * std::pow(d / model.d0, -model.exponent(link));
}

ChannelRealization ChannelRealization::without_irs() const {
  ChannelRealization r;
  r.alpha_1 = alpha_1;
  r.alpha_2 = alpha_2;
  r.alpha_12 = alpha_12;
  return r;
}

std::uint64_t realization_seed(std::uint64_t master, std::uint64_t index) {
  // splitmix64 finalizer over a combination of both words
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

class StandardGaussian {
 public:
  explicit StandardGaussian(std::uint64_t seed) : engine_(seed) {}

  // CN(0, 1): independent real and imaginary parts of variance 1/2.
  cplx next() {
    const double re = normal_(engine_);
    const double im = normal_(engine_);
    return {re * M_SQRT1_2, im * M_SQRT1_2};
  }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace

ChannelRealization sample_realization(const ScenarioGeometry& geometry,
                                      const PathLossModel& model,
                                      int n_elements, std::uint64_t seed) {
  if (n_elements < 0) throw std::invalid_argument("sample_realization: negative N");
  geometry.validate();
  model.validate();

  const double amp_g = std::sqrt(path_loss(model, geometry.hap_irs(), LinkClass::HapIrs));
  const double amp_1r = std::sqrt(path_loss(model, geometry.irs_wd1(), LinkClass::IrsWd));
  const double amp_2r = std::sqrt(path_loss(model, geometry.irs_wd2(), LinkClass::IrsWd));
  const double amp_1 = std::sqrt(path_loss(model, geometry.d1(), LinkClass::HapWd));
  const double amp_2 = std::sqrt(path_loss(model, geometry.d2(), LinkClass::HapWd));
  const double amp_12 = std::sqrt(path_loss(model, geometry.d12(), LinkClass::WdWd));

  // Fixed draw order: direct links first so they do not depend on N.
  StandardGaussian rng(seed);
  ChannelRealization r;
  r.alpha_1 = amp_1 * rng.next();
  r.alpha_2 = amp_2 * rng.next();
  r.alpha_12 = amp_12 * rng.next();
  r.g.resize(n_elements);
  r.alpha_1r.resize(n_elements);
  r.alpha_2r.resize(n_elements);
  for (int n = 0; n < n_elements; ++n) r.g[n] = amp_g * rng.next();
  for (int n = 0; n < n_elements; ++n) r.alpha_1r[n] = amp_1r * rng.next();
  for (int n = 0; n < n_elements; ++n) r.alpha_2r[n] = amp_2r * rng.next();
  return r;
}

CompositeChannels composite_gamma(const ChannelRealization& r) {
  CompositeChannels c;
  c.gamma_1 = r.g.cwiseProduct(r.alpha_1r);
  c.gamma_2 = r.g.cwiseProduct(r.alpha_2r);
  c.gamma_21 = r.alpha_2r.cwiseProduct(r.alpha_1r);
  c.gamma_22 = r.alpha_1r.cwiseProduct(r.alpha_2r);
  return c;
}

CVector lift_vector(const CVector& gamma, cplx alpha) {
  CVector bar(gamma.size() + 1);
  bar.head(gamma.size()) = gamma;
  bar[gamma.size()] = alpha;
  return bar;
}

CMatrix lift_psi(const CVector& gamma, cplx alpha) {
  const CVector bar = lift_vector(gamma, alpha);
  return bar * bar.adjoint();
}

CVector lift_phase(const CVector& v) {
  CVector bar(v.size() + 1);
  bar.head(v.size()) = v.conjugate();
  bar[v.size()] = 1.0;
  return bar;
}

LiftedChannels lift_channels(const ChannelRealization& r) {
  const CompositeChannels c = composite_gamma(r);
  LiftedChannels l;
  l.bar_1 = lift_vector(c.gamma_1, r.alpha_1);
  l.bar_2 = lift_vector(c.gamma_2, r.alpha_2);
  l.bar_21 = lift_vector(c.gamma_21, r.alpha_12);
  l.bar_22 = lift_vector(c.gamma_22, r.alpha_12);
  l.psi_1 = l.bar_1 * l.bar_1.adjoint();
  l.psi_2 = l.bar_2 * l.bar_2.adjoint();
  l.psi_21 = l.bar_21 * l.bar_21.adjoint();
  l.psi_22 = l.bar_22 * l.bar_22.adjoint();
  return l;
}

}  // namespace irscoop
