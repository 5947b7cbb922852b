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

#include <cstdint>

#include "irscoop/linalg.hpp"

namespace irscoop {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

double distance(Point2 a, Point2 b);

/// Positions (in metres) of the access point, the two devices and the
/// reflecting surface.
struct ScenarioGeometry {
  Point2 hap{0.0, 0.0};
  Point2 wd1{8.0, 0.0};
  Point2 wd2{5.0, 0.0};
  Point2 irs{5.0, 2.0};

  /// HAP at the origin, both devices on the x-axis at distances `d1` and
  /// `d2` from it, surface at `irs`.
  static ScenarioGeometry collinear(double d1, double d2, Point2 irs);

  double d1() const { return distance(hap, wd1); }
  double d2() const { return distance(hap, wd2); }
  double d12() const { return distance(wd1, wd2); }
  double hap_irs() const { return distance(hap, irs); }
  double irs_wd1() const { return distance(irs, wd1); }
  double irs_wd2() const { return distance(irs, wd2); }

  /// Throws std::invalid_argument when two nodes coincide or a coordinate is
  /// not finite.
  void validate() const;
};

enum class LinkClass { HapIrs, IrsWd, HapWd, WdWd };

/// L(d) = C0 (d / d0)^(-lambda), with C0 given as a loss in dB.
struct PathLossModel {
  double c0_db = 30.0;
  double d0 = 1.0;
  double exp_hap_irs = 2.0;
  double exp_irs_wd = 2.2;
  double exp_hap_wd = 3.0;
  double exp_wd_wd = 3.0;

  double exponent(LinkClass link) const;
  double c0_linear() const;
  void validate() const;
};

/// Linear power gain of a link of length `d`. Throws std::domain_error for
/// d <= 0.
double path_loss(const PathLossModel& model, double d, LinkClass link);

/// One draw of every baseband channel. `g` holds the HAP->IRS row vector,
/// `alpha_1r`/`alpha_2r` the IRS->WD columns. N = 0 means no surface.
struct ChannelRealization {
  CVector g;
  CVector alpha_1r;
  CVector alpha_2r;
  cplx alpha_1{0.0, 0.0};
  cplx alpha_2{0.0, 0.0};
  cplx alpha_12{0.0, 0.0};

  Eigen::Index n_elements() const { return g.size(); }

  /// Same direct channels, reflecting surface removed.
  ChannelRealization without_irs() const;
};

/// Seed of the `index`-th realization stream under `master`.
std::uint64_t realization_seed(std::uint64_t master, std::uint64_t index);

/// Rayleigh draw: every coefficient is CN(0, path loss of its link). The
/// standardized draws depend only on (seed, N), so two geometries sampled
/// with the same seed share their fading.
ChannelRealization sample_realization(const ScenarioGeometry& geometry,
                                      const PathLossModel& model,
                                      int n_elements, std::uint64_t seed);

/// Cascaded reflect-path coefficients, one entry per element.
struct CompositeChannels {
  CVector gamma_1;   // g .* alpha_1r
  CVector gamma_2;   // g .* alpha_2r
  CVector gamma_21;  // alpha_2r .* alpha_1r  (WD1 -> WD2)
  CVector gamma_22;  // alpha_1r .* alpha_2r  (WD2 -> WD1)
};

CompositeChannels composite_gamma(const ChannelRealization& realization);

/// [gamma; alpha].
CVector lift_vector(const CVector& gamma, cplx alpha);

/// [gamma; alpha][gamma; alpha]^H.
CMatrix lift_psi(const CVector& gamma, cplx alpha);

/// Lifted phase vector [conj(v); 1], chosen so that
/// tr(lift_psi(gamma, alpha) * vbar vbar^H) == |v . gamma + alpha|^2.
CVector lift_phase(const CVector& v);

struct LiftedChannels {
  CVector bar_1, bar_2, bar_21, bar_22;
  CMatrix psi_1, psi_2, psi_21, psi_22;

  Eigen::Index dim() const { return bar_1.size(); }
};

LiftedChannels lift_channels(const ChannelRealization& realization);

}  // namespace irscoop
