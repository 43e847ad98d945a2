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

// Reference computations used only by tests. They avoid the library's
// closed forms: exponentials go through a Hermitian eigendecomposition,
// operators are assembled from the raw edge list.

#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "stageig/multigraph.hpp"
#include "stageig/tessellation.hpp"
#include "stageig/types.hpp"

namespace stageig::testing {

/// exp(iθH) for Hermitian H by spectral decomposition.
inline CMatrix expm_i_hermitian(const CMatrix& H, double theta) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (H + H.adjoint()));
  CVector phases(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < phases.size(); ++i) phases[i] = cis(theta * es.eigenvalues()[i]);
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

struct RawOperators {
  CMatrix A, B, U, T;
};

inline RawOperators raw_operators(const TessellatedSystem& s) {
  const auto& g = s.graph();
  RawOperators r;
  r.A = CMatrix::Zero(s.nu(), s.m());
  r.B = CMatrix::Zero(s.nu(), s.n());
  for (EdgeId e = 0; e < s.nu(); ++e) {
    r.A(e, g.edges()[e].left) += s.a()[e];
    r.B(e, g.edges()[e].right) += s.b()[e];
  }
  const CMatrix I = CMatrix::Identity(s.nu(), s.nu());
  const CMatrix HA = 2.0 * r.A * r.A.adjoint() - I;
  const CMatrix HB = 2.0 * r.B * r.B.adjoint() - I;
  r.U = -expm_i_hermitian(HB, s.theta()) * expm_i_hermitian(HA, s.theta());
  const int k = s.m() + s.n();
  r.T = CMatrix::Zero(k, k);
  r.T.topRightCorner(s.m(), s.n()) = r.A.adjoint() * r.B;
  r.T.bottomLeftCorner(s.n(), s.m()) = r.B.adjoint() * r.A;
  return r;
}

/// det(λI - U) by LU.
inline Complex char_poly_direct(const CMatrix& U, Complex lambda) {
  const CMatrix M = lambda * CMatrix::Identity(U.rows(), U.cols()) - U;
  return M.fullPivLu().determinant();
}

/// Right-hand side of the factorization, evaluated as a rational function
/// (negative exponents occur when ν < m + n).
inline Complex char_poly_factored(const RawOperators& r, double theta, Complex lambda) {
  const int nu = static_cast<int>(r.A.rows());
  const int m = static_cast<int>(r.A.cols());
  const int n = static_cast<int>(r.B.cols());
  const double s2 = std::sin(theta) * std::sin(theta);
  const CMatrix G = r.A.adjoint() * r.B * r.B.adjoint() * r.A;
  const CMatrix M = (lambda + 1.0) * (lambda + 1.0) * CMatrix::Identity(m, m) - 4.0 * lambda * s2 * G;
  return std::pow(lambda + 1.0, n - m) * std::pow(lambda + cis(-2.0 * theta), nu - m - n) *
         M.fullPivLu().determinant();
}

/// Number of singular values above rel_tol·σ_max, by full SVD.
inline int svd_rank(const CMatrix& M, double rel_tol) {
  if (M.size() == 0) return 0;
  Eigen::JacobiSVD<CMatrix> svd(M);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv[0] == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) r += sv[i] > rel_tol * sv[0] ? 1 : 0;
  return r;
}

/// dim null([A B]†) = ν - rank [A B].
inline int perp_dimension(const RawOperators& r, double rel_tol = 1e-9) {
  CMatrix L(r.A.rows(), r.A.cols() + r.B.cols());
  L << r.A, r.B;
  return static_cast<int>(r.A.rows()) - svd_rank(L, rel_tol);
}

/// Eigenvectors of T with eigenvalue within tol of `mu`, as columns.
inline CMatrix eigenspace(const CMatrix& T, double mu, double tol) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (T + T.adjoint()));
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    if (std::abs(es.eigenvalues()[i] - mu) < tol) keep.push_back(i);
  }
  CMatrix out(T.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t i = 0; i < keep.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = es.eigenvectors().col(keep[i]);
  return out;
}

/// max_e |a(e) π(left) - b(e) π(right)| for π = π1 ⊕ π2.
inline double qdb_defect(const TessellatedSystem& s, const CVector& pi) {
  double worst = 0.0;
  for (EdgeId e = 0; e < s.nu(); ++e) {
    const auto& ep = s.graph().edges()[e];
    worst = std::max(worst, std::abs(s.a()[e] * pi[ep.left] - s.b()[e] * pi[s.m() + ep.right]));
  }
  return worst;
}

/// Smallest distance from angle x to any entry of `angles`.
inline double nearest_angle(const std::vector<double>& angles, double x) {
  double best = 1e300;
  for (double a : angles) best = std::min(best, circle_distance(a, x));
  return best;
}

/// Multiset distance on the circle: greedy nearest matching of `x` into `y`,
/// returning the worst matched angular distance (infinity on size mismatch).
inline double spectrum_distance(const std::vector<Complex>& x, const std::vector<Complex>& y) {
  if (x.size() != y.size()) return std::numeric_limits<double>::infinity();
  std::vector<bool> used(y.size(), false);
  double worst = 0.0;
  for (Complex z : x) {
    std::size_t best = y.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < y.size(); ++j) {
      if (used[j]) continue;
      const double d = circle_distance(unit_angle(z), unit_angle(y[j]));
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    used[best] = true;
    worst = std::max(worst, best_d);
  }
  return worst;
}

/// Eigenvalues of a unitary matrix via complex Schur.
inline std::vector<Complex> unitary_spectrum(const CMatrix& U) {
  Eigen::ComplexSchur<CMatrix> schur(U);
  const CMatrix& R = schur.matrixT();
  std::vector<Complex> out;
  for (Eigen::Index i = 0; i < R.rows(); ++i) out.push_back(R(i, i));
  return out;
}

}  // namespace stageig::testing
