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

// Hand-rolled random instance generators for property tests.
#pragma once

#include <cstdint>
#include <random>

#include "irscoop/channel_model.hpp"
#include "irscoop/rate_model.hpp"

namespace gen {

using irscoop::cplx;
using irscoop::CVector;

class Source {
 public:
  explicit Source(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  std::uint64_t word() { return rng_(); }

  cplx gaussian(double var) {
    std::normal_distribution<double> n(0.0, std::sqrt(var / 2.0));
    const double re = n(rng_);
    return {re, n(rng_)};
  }

  CVector gaussian_vector(Eigen::Index n, double var) {
    CVector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = gaussian(var);
    return v;
  }

  CVector phases(Eigen::Index n) {
    CVector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = std::polar(1.0, uniform(0.0, 2.0 * M_PI));
    return v;
  }

  // Channels with path-loss-like magnitudes: direct links ~1e-6..1e-4,
  // reflect links ~1e-3 per hop.
  irscoop::ChannelRealization realization(Eigen::Index n) {
    irscoop::ChannelRealization r;
    r.g = gaussian_vector(n, std::pow(10.0, uniform(-4.0, -2.0)));
    r.alpha_1r = gaussian_vector(n, std::pow(10.0, uniform(-4.5, -2.5)));
    r.alpha_2r = gaussian_vector(n, std::pow(10.0, uniform(-4.5, -2.5)));
    r.alpha_1 = gaussian(std::pow(10.0, uniform(-6.0, -4.0)));
    r.alpha_2 = gaussian(std::pow(10.0, uniform(-6.0, -4.0)));
    r.alpha_12 = gaussian(std::pow(10.0, uniform(-5.0, -3.0)));
    return r;
  }

  irscoop::PhaseConfig phase_config(Eigen::Index n) { return {phases(n), phases(n), phases(n), phases(n)}; }

  // Random feasible allocation: times on the simplex, energies within what
  // was harvested.
  irscoop::Allocation allocation(double e1_rate, double e2_rate, const irscoop::SystemParams& p) {
    double w[5];
    double sum = 0.0;
    for (double& x : w) sum += (x = uniform(0.05, 1.0));
    irscoop::Allocation a;
    a.t1 = w[0] / sum;
    a.t21 = w[1] / sum;
    a.t22 = w[2] / sum;
    a.t31 = w[3] / sum;
    a.t32 = w[4] / sum;
    const double e1 = p.eta * p.p_hap * a.t1 * e1_rate;
    const double e2 = p.eta * p.p_hap * a.t1 * e2_rate;
    const double f1 = uniform(0.0, 1.0), f2 = uniform(0.0, 1.0);
    a.p21 = f1 * e1 / a.t21;
    a.p22 = f2 * e2 / a.t22;
    a.p31 = (1.0 - f1) * e1 / (a.t31 + a.t32);
    a.p32 = (1.0 - f2) * e2 / (a.t31 + a.t32);
    return a;
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace gen
