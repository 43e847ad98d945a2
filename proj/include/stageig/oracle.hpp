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
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "stageig/error.hpp"
#include "stageig/linalg.hpp"
#include "stageig/operators.hpp"
#include "stageig/spectral.hpp"
#include "stageig/types.hpp"

namespace stageig::oracle {

inline constexpr double kUnitaryTolerance = 1e-10;
inline constexpr double kNullRankCut = 1e-9;

/// Brute-force diagonalization of a unitary matrix.
struct OracleDecomposition {
  CMatrix unitary;
  std::vector<Complex> eigenvalues;  // sorted by angle in [0, 2π)
  CMatrix eigenvectors;              // column i belongs to eigenvalues[i]
  CMatrix perp_basis;                // orthonormal basis of null([A B]^†), if requested
};

/// Schur-based diagonalization. U is normal, so its Schur form is diagonal
/// and the Schur vectors are eigenvectors.
inline OracleDecomposition decompose(const CMatrix& U) {
  const auto nu = U.rows();
  const double defect = max_abs(U.adjoint() * U - CMatrix::Identity(nu, nu));
  if (defect > kUnitaryTolerance) {
    throw Error(ErrorCode::NotUnitary, "||U^†U - I||_max = " + std::to_string(defect));
  }
  Eigen::ComplexSchur<CMatrix> schur(U);
  const CMatrix& T = schur.matrixT();
  const CMatrix& Q = schur.matrixU();
  std::vector<Eigen::Index> order(nu);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) {
    return unit_angle(T(i, i)) < unit_angle(T(j, j));
  });
  OracleDecomposition od;
  od.unitary = U;
  od.eigenvectors.resize(nu, nu);
  for (Eigen::Index k = 0; k < nu; ++k) {
    od.eigenvalues.push_back(T(order[k], order[k]));
    od.eigenvectors.col(k) = Q.col(order[k]);
  }
  return od;
}

/// Orthonormal basis of (A+B)^⊥ = null(L^†), L = [A B].
inline CMatrix perp_null_basis(const WalkOperators& ops) {
  return linalg::range_complement(ops.L, kNullRankCut);
}

inline OracleDecomposition decompose(const WalkOperators& ops) {
  OracleDecomposition od = decompose(ops.U);
  od.perp_basis = perp_null_basis(ops);
  return od;
}

struct CompareOptions {
  double residual_tolerance = 1e-9;
  double eigenvalue_tolerance = 1e-8;
  double subspace_tolerance = 1e-7;
  double cluster_tolerance = 1e-7;
};

struct CompareReport {
  bool pass = false;
  int expected = 0;
  int pairs = 0;
  int gram_rank = 0;
  double max_residual = 0.0;
  double max_eigenvalue_defect = 0.0;
  double max_subspace_sine = 0.0;
  std::string message;
};

/// Checks an analytic basis against the oracle: pair count and Gram rank,
/// eigen-residuals, a multiset match of eigenvalues on the circle and the
/// largest principal angle between matching eigenspaces.
inline CompareReport compare(const EigenBasis& basis, const OracleDecomposition& od,
                             const CompareOptions& opt = {}) {
  CompareReport r;
  const int nu = static_cast<int>(od.unitary.rows());
  r.expected = nu;
  r.pairs = static_cast<int>(basis.pairs.size());
  r.gram_rank = r.pairs == 0 ? 0 : gram_rank(basis, nu);
  r.max_residual = max_residual(od.unitary, basis);

  // Greedy nearest matching, analytic values in angle order.
  std::vector<double> oracle_angles;
  for (auto z : od.eigenvalues) oracle_angles.push_back(unit_angle(z));
  std::vector<bool> used(oracle_angles.size(), false);
  std::vector<std::size_t> by_angle(basis.pairs.size());
  std::iota(by_angle.begin(), by_angle.end(), 0);
  std::sort(by_angle.begin(), by_angle.end(), [&](auto i, auto j) {
    return unit_angle(basis.pairs[i].eigenvalue) < unit_angle(basis.pairs[j].eigenvalue);
  });
  bool multiset_ok = r.pairs == nu;
  for (auto i : by_angle) {
    const double a = unit_angle(basis.pairs[i].eigenvalue);
    std::size_t best = oracle_angles.size();
    double best_d = 0.0;
    for (std::size_t k = 0; k < oracle_angles.size(); ++k) {
      if (used[k]) continue;
      const double d = circle_distance(a, oracle_angles[k]);
      if (best == oracle_angles.size() || d < best_d) {
        best = k;
        best_d = d;
      }
    }
    if (best == oracle_angles.size()) {
      multiset_ok = false;
      break;
    }
    used[best] = true;
    r.max_eigenvalue_defect = std::max(r.max_eigenvalue_defect, best_d);
  }

  // Eigenspaces: cluster both spectra together and compare spans per cluster.
  std::vector<double> angles;
  for (const auto& p : basis.pairs) angles.push_back(unit_angle(p.eigenvalue));
  for (auto z : od.eigenvalues) angles.push_back(unit_angle(z));
  const auto labels = cluster_labels(angles, opt.cluster_tolerance);
  const int cluster_count =
      labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
  bool spaces_ok = true;
  for (int label = 0; label < cluster_count; ++label) {
    std::vector<Eigen::Index> mine;
    std::vector<Eigen::Index> theirs;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] != label) continue;
      if (i < basis.pairs.size()) {
        mine.push_back(static_cast<Eigen::Index>(i));
      } else {
        theirs.push_back(static_cast<Eigen::Index>(i - basis.pairs.size()));
      }
    }
    if (mine.size() != theirs.size()) {
      spaces_ok = false;
      r.max_subspace_sine = 1.0;
      continue;
    }
    if (mine.empty()) continue;
    CMatrix V(nu, static_cast<Eigen::Index>(mine.size()));
    CMatrix Q(nu, static_cast<Eigen::Index>(theirs.size()));
    for (std::size_t i = 0; i < mine.size(); ++i) V.col(i) = basis.pairs[mine[i]].vector;
    for (std::size_t i = 0; i < theirs.size(); ++i) Q.col(i) = od.eigenvectors.col(theirs[i]);
    const CMatrix span = linalg::orthonormal_span(V, kGramRankTolerance);
    if (span.cols() != V.cols()) {
      spaces_ok = false;
      r.max_subspace_sine = 1.0;
      continue;
    }
    r.max_subspace_sine = std::max(r.max_subspace_sine, linalg::max_principal_sine(span, Q));
  }

  r.pass = multiset_ok && spaces_ok && r.gram_rank == nu &&
           r.max_residual <= opt.residual_tolerance &&
           r.max_eigenvalue_defect <= opt.eigenvalue_tolerance &&
           r.max_subspace_sine <= opt.subspace_tolerance;
  if (r.pairs != nu) {
    r.message = "basis has " + std::to_string(r.pairs) + " vectors for dimension " +
                std::to_string(nu);
  } else if (!r.pass) {
    r.message = "analytic and oracle decompositions disagree";
  }
  return r;
}

}  // namespace stageig::oracle
