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

#include <algorithm>

#include <Eigen/SVD>

#include "stageig/types.hpp"

namespace stageig::linalg {

/// Singular values of M in descending order.
inline RVector singular_values(const CMatrix& M) {
  if (M.size() == 0) return RVector();
  return Eigen::BDCSVD<CMatrix>(M).singularValues();
}

/// Number of singular values above rel_tol * σ_max.
inline int numeric_rank(const CMatrix& M, double rel_tol) {
  const RVector sv = singular_values(M);
  if (sv.size() == 0 || sv[0] == 0.0) return 0;
  return static_cast<int>((sv.array() > rel_tol * sv[0]).count());
}

/// Orthonormal basis of the orthogonal complement of range(M), i.e. of
/// null(M^†). Singular values below rel_tol * σ_max count as zero.
inline CMatrix range_complement(const CMatrix& M, double rel_tol) {
  const auto rows = M.rows();
  if (M.cols() == 0) return CMatrix::Identity(rows, rows);
  Eigen::BDCSVD<CMatrix> svd(M, Eigen::ComputeFullU);
  const RVector& sv = svd.singularValues();
  int rank = 0;
  if (sv.size() > 0 && sv[0] > 0.0) rank = static_cast<int>((sv.array() > rel_tol * sv[0]).count());
  return svd.matrixU().rightCols(rows - rank);
}

/// Orthonormal basis of the column span of M.
inline CMatrix orthonormal_span(const CMatrix& M, double rel_tol) {
  if (M.cols() == 0) return CMatrix(M.rows(), 0);
  Eigen::BDCSVD<CMatrix> svd(M, Eigen::ComputeThinU);
  const RVector& sv = svd.singularValues();
  int rank = 0;
  if (sv.size() > 0 && sv[0] > 0.0) rank = static_cast<int>((sv.array() > rel_tol * sv[0]).count());
  return svd.matrixU().leftCols(rank);
}

/// Sine of the largest principal angle between span(Q1) and span(Q2), both
/// with orthonormal columns: || (I - Q2 Q2^†) Q1 ||_2.
inline double max_principal_sine(const CMatrix& Q1, const CMatrix& Q2) {
  if (Q1.cols() == 0) return 0.0;
  const CMatrix residual = Q1 - Q2 * (Q2.adjoint() * Q1);
  const RVector sv = singular_values(residual);
  return sv.size() == 0 ? 0.0 : std::min(1.0, sv[0]);
}

/// Symmetric part (M + M^†)/2.
inline CMatrix hermitian_part(const CMatrix& M) { return 0.5 * (M + M.adjoint()); }

}  // namespace stageig::linalg
