// Copyright 2026 The stageig Authors
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

#include <cmath>

#include "stageig/tessellation.hpp"
#include "stageig/types.hpp"

namespace stageig {

struct Hamiltonians {
  CMatrix H_A;
  CMatrix H_B;
};

/// H_A = 2AA^† - I and H_B = 2BB^† - I.
inline Hamiltonians build_hamiltonians(const TessellatedSystem& s) {
  const CMatrix A = operator_A(s);
  const CMatrix B = operator_B(s);
  const CMatrix I = CMatrix::Identity(s.nu(), s.nu());
  return {2.0 * A * A.adjoint() - I, 2.0 * B * B.adjoint() - I};
}

/// e^{iθH} for an involution H (H^2 = I), i.e. cos θ I + i sin θ H.
inline CMatrix involution_exp(const CMatrix& H, double theta) {
  return std::cos(theta) * CMatrix::Identity(H.rows(), H.cols()) +
         Complex(0.0, std::sin(theta)) * H;
}

/// U = -e^{iθH_B} e^{iθH_A}.
inline CMatrix build_U(const TessellatedSystem& s) {
  const auto h = build_hamiltonians(s);
  return -involution_exp(h.H_B, s.theta()) * involution_exp(h.H_A, s.theta());
}

/// m x n block with entries <alpha_i|beta_j>.
inline CMatrix build_T_AB(const TessellatedSystem& s) {
  return operator_A(s).adjoint() * operator_B(s);
}

/// The (m+n) x (m+n) discriminant [[0, A^†B], [B^†A, 0]].
inline CMatrix build_T(const TessellatedSystem& s) {
  const int m = s.m();
  const int n = s.n();
  const CMatrix tab = build_T_AB(s);
  CMatrix T = CMatrix::Zero(m + n, m + n);
  T.topRightCorner(m, n) = tab;
  T.bottomLeftCorner(n, m) = tab.adjoint();
  return T;
}

/// L = [A B], the nu x (m+n) lift from polygon space to vertex space.
inline CMatrix build_L(const TessellatedSystem& s) {
  CMatrix L(s.nu(), s.m() + s.n());
  L << operator_A(s), operator_B(s);
  return L;
}

/// The reduced operator with U L = L Λ.
inline CMatrix build_Lambda(const TessellatedSystem& s) {
  const int m = s.m();
  const int n = s.n();
  const double th = s.theta();
  const double sn = std::sin(th);
  const CMatrix tab = build_T_AB(s);
  const CMatrix tba = tab.adjoint();
  CMatrix Lambda(m + n, m + n);
  Lambda.topLeftCorner(m, m) = CMatrix::Identity(m, m);
  Lambda.topRightCorner(m, n) = (2.0 * kI * cis(-th) * sn) * tab;
  Lambda.bottomLeftCorner(n, m) = (2.0 * kI * cis(th) * sn) * tba;
  Lambda.bottomRightCorner(n, n) = CMatrix::Identity(n, n) - 4.0 * sn * sn * tba * tab;
  return -Lambda;
}

/// D(f ⊕ g) = f ⊕ i e^{i(θ+φ)} g, with f the first `left_count` entries.
inline CVector apply_D(double theta, double phi, int left_count, const CVector& v) {
  CVector out = v;
  out.tail(v.size() - left_count) *= kI * cis(theta + phi);
  return out;
}

/// Every dense operator of the walk, built once.
struct WalkOperators {
  CMatrix A;
  CMatrix B;
  CMatrix H_A;
  CMatrix H_B;
  CMatrix U;
  CMatrix T;
  CMatrix Lambda;
  CMatrix L;
};

inline WalkOperators build_operators(const TessellatedSystem& s) {
  WalkOperators ops;
  ops.A = operator_A(s);
  ops.B = operator_B(s);
  auto h = build_hamiltonians(s);
  ops.H_A = std::move(h.H_A);
  ops.H_B = std::move(h.H_B);
  ops.U = -involution_exp(ops.H_B, s.theta()) * involution_exp(ops.H_A, s.theta());
  ops.T = build_T(s);
  ops.Lambda = build_Lambda(s);
  ops.L = build_L(s);
  return ops;
}

}  // namespace stageig
