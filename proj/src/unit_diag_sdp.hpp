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

#include "irscoop/linalg.hpp"

namespace irscoop::detail {

/// maximize tr(C V)  s.t.  V PSD, diag(V) = 1.
struct SupportResult {
  double lower = 0.0;  // tr(C v), attained
  double upper = 0.0;  // dual certificate
  CMatrix v;           // unit-diagonal PSD matrix attaining `lower`
};

/// C = B B^H. Columns of B beyond two fall back to the interior-point method.
SupportResult max_trace_factored(const CMatrix& b);

/// Primal-dual interior-point method on a dense Hermitian PSD C.
SupportResult max_trace_dense(const CMatrix& c, double rel_tol = 1e-10);

/// B with B B^H = C, dropping eigenvalues below 1e-12 of the largest.
CMatrix psd_factor(const CMatrix& c);

}  // namespace irscoop::detail
