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
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Eigenvalues>

#include "stageig/balance.hpp"
#include "stageig/error.hpp"
#include "stageig/linalg.hpp"
#include "stageig/multigraph.hpp"
#include "stageig/operators.hpp"
#include "stageig/tessellation.hpp"
#include "stageig/types.hpp"

namespace stageig {

inline constexpr double kLiftTolerance = 1e-8;
inline constexpr double kPerpTolerance = 1e-10;
inline constexpr double kDegenerateBalance = 1e-10;
inline constexpr double kClusterTolerance = 1e-8;
inline constexpr double kGramRankTolerance = 1e-8;

/// Which invariant subspace produced an eigenvector.
enum class SubspaceTag { Intersection, Inherited, CyclePerp };

constexpr std::string_view to_string(SubspaceTag t) {
  switch (t) {
    case SubspaceTag::Intersection: return "A∩B";
    case SubspaceTag::Inherited: return "A+B";
    case SubspaceTag::CyclePerp: return "cycle-perp";
  }
  return "unknown";
}

/// μ ∈ σ(T), φ = arccos(μ sin θ) ∈ [0, π], λ = e^{2iφ}.
struct SpectralPoint {
  double mu = 0.0;
  double phi = 0.0;
  Complex lambda;
};

/// The cycle (or pair of cycles) an eigenvector in (A+B)^⊥ was built on.
struct CycleWitness {
  EdgeId chord = kNone;
  EdgeId base_chord = kNone;  // c0's chord; kNone for a single balanced cycle
  std::vector<EdgeId> ordered_edges;
  std::vector<EdgeId> connector;
  Complex delta;
  std::vector<EdgeId> support;
};

struct EigenPair {
  Complex eigenvalue;
  CVector vector;
  SubspaceTag tag = SubspaceTag::Inherited;
  std::optional<SpectralPoint> source;
  std::optional<CycleWitness> witness;
};

struct EigenCluster {
  double angle = 0.0;  // of the representative eigenvalue, in [0, 2π)
  Complex lambda;
  int count = 0;
};

struct EigenBasis {
  std::vector<EigenPair> pairs;
  std::vector<EigenCluster> multiplicities;
  bool reversible = false;
};

/// Eigenvalues of T ascending, with orthonormal eigenvectors in columns.
struct TDecomposition {
  RVector mu;
  CMatrix vectors;
};

inline TDecomposition decompose_T(const CMatrix& T) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(linalg::hermitian_part(T));
  return {es.eigenvalues(), es.eigenvectors()};
}

inline double phi_of(double mu, double theta) {
  return std::acos(std::clamp(mu * std::sin(theta), -1.0, 1.0));
}

/// The endpoint μ = ±1 whose lift L D (f ⊕ g) vanishes for a reversible
/// system: +1 below θ = π/2, -1 from π/2 on. At π/2 both endpoints map to
/// λ = 1 and -1 is the one dropped.
inline int vanishing_endpoint(double theta) { return theta < kPi / 2 - 1e-12 ? +1 : -1; }

/// Indices into the ascending σ(T) that are kept when mapping onto U.
/// Reversible systems drop one endpoint (see vanishing_endpoint); with
/// `drop_both_endpoints` the surviving endpoint is dropped as well since
/// its eigenvector is the A∩B vector A π1.
inline std::vector<int> retained_indices(const TDecomposition& td, bool reversible, double theta,
                                         bool drop_both_endpoints) {
  const int size = static_cast<int>(td.mu.size());
  std::vector<int> keep;
  for (int i = 0; i < size; ++i) {
    if (reversible && size > 0) {
      const bool is_top = (i == size - 1);
      const bool is_bottom = (i == 0);
      const bool vanishing = vanishing_endpoint(theta) > 0 ? is_top : is_bottom;
      if (vanishing) continue;
      if (drop_both_endpoints && (is_top || is_bottom)) continue;
    }
    keep.push_back(i);
  }
  return keep;
}

/// σ(U) restricted to A+B, read off σ(T) through cos φ = μ sin θ.
inline std::vector<SpectralPoint> spectrum_from_T(const TessellatedSystem& s,
                                                  const TDecomposition& td,
                                                  const ReversibilityReport& report) {
  std::vector<SpectralPoint> out;
  for (int i : retained_indices(td, report.reversible, s.theta(), false)) {
    const double mu = td.mu[i];
    const double phi = phi_of(mu, s.theta());
    out.push_back({mu, phi, cis(2.0 * phi)});
  }
  return out;
}

inline std::vector<SpectralPoint> spectrum_from_T(const TessellatedSystem& s) {
  return spectrum_from_T(s, decompose_T(build_T(s)), detect_reversibility(s));
}

/// Eigenvectors of U in A+B lifted from eigenvectors f ⊕ g of T:
/// v = A f + i e^{i(θ+φ)} B g. For reversible systems the μ = ±1 pair is
/// excluded here; the surviving one is the A∩B vector.
inline std::vector<EigenPair> inherited_eigenvectors(const TessellatedSystem& s,
                                                     const WalkOperators& ops,
                                                     const TDecomposition& td,
                                                     const ReversibilityReport& report) {
  std::vector<EigenPair> out;
  const int m = s.m();
  for (int i : retained_indices(td, report.reversible, s.theta(), true)) {
    const double mu = td.mu[i];
    const double phi = phi_of(mu, s.theta());
    CVector v = ops.L * apply_D(s.theta(), phi, m, td.vectors.col(i));
    const double norm = v.norm();
    if (norm < kLiftTolerance) {
      throw Error(ErrorCode::DegenerateLift,
                  "eigenvector of T with mu = " + std::to_string(mu) + " lies in ker L");
    }
    EigenPair p;
    p.eigenvalue = cis(2.0 * phi);
    p.vector = v / norm;
    p.tag = SubspaceTag::Inherited;
    p.source = SpectralPoint{mu, phi, p.eigenvalue};
    out.push_back(std::move(p));
  }
  return out;
}

/// A π1 with eigenvalue -e^{2iθ} when the system is reversible.
inline std::optional<EigenPair> intersection_eigenvector(const TessellatedSystem& s,
                                                         const WalkOperators& ops,
                                                         const ReversibilityReport& report) {
  if (!report.reversible || !report.pi) return std::nullopt;
  CVector v = ops.A * report.pi->head(s.m());
  EigenPair p;
  p.eigenvalue = -cis(2.0 * s.theta());
  p.vector = v.normalized();
  p.tag = SubspaceTag::Intersection;
  return p;
}

namespace detail {

/// Walks a rooted cycle from ψ(e_1) = `start`, enforcing the balance
/// condition at every non-root vertex:
///   conj(w(e_j)) ψ(e_j) + conj(w(e_{j+1})) ψ(e_{j+1}) = 0,
/// with w the amplitude in the polygon at that vertex. Writes into `psi`
/// (accumulating) and returns the defect left at the root.
inline Complex propagate_cycle(const TessellatedSystem& s, const FundamentalCycle& c,
                               Complex start, CVector& psi) {
  const int len = c.length();
  std::vector<Complex> vals(len);
  vals[0] = start;
  for (int j = 0; j + 1 < len; ++j) {
    const VertexId u = c.vertices[j];
    vals[j + 1] = -std::conj(s.amplitude_at(c.edges[j], u)) * vals[j] /
                  std::conj(s.amplitude_at(c.edges[j + 1], u));
  }
  for (int j = 0; j < len; ++j) psi[c.edges[j]] += vals[j];
  const VertexId root = c.root();
  return std::conj(s.amplitude_at(c.edges[len - 1], root)) * vals[len - 1] +
         std::conj(s.amplitude_at(c.edges[0], root)) * vals[0];
}

/// Normalizes ψ and checks A^†ψ = B^†ψ = 0.
inline CVector finish_perp_vector(const WalkOperators& ops, CVector psi, const std::string& what) {
  psi.normalize();
  const double da = (ops.A.adjoint() * psi).norm();
  const double db = (ops.B.adjoint() * psi).norm();
  if (da >= kPerpTolerance || db >= kPerpTolerance) {
    throw Error(ErrorCode::ClosureInconsistent,
                what + " is not orthogonal to the polygon vectors (|A^†ψ| = " +
                    std::to_string(da) + ", |B^†ψ| = " + std::to_string(db) + ")");
  }
  return psi;
}

/// Single-cycle vector; valid whenever the cycle itself is balanced.
inline EigenPair balanced_cycle_vector(const TessellatedSystem& s, const WalkOperators& ops,
                                       const FundamentalCycle& c) {
  CVector psi = CVector::Zero(s.nu());
  const Complex defect = propagate_cycle(s, c, 1.0, psi);
  const Complex w1 = s.amplitude_at(c.edges[0], c.root());
  if (std::abs(defect) > 10.0 * kReversibilityTolerance * std::abs(w1)) {
    throw Error(ErrorCode::ClosureInconsistent,
                "cycle with chord " + std::to_string(c.chord) + " does not close (defect " +
                    std::to_string(std::abs(defect)) + ")");
  }
  EigenPair p;
  p.eigenvalue = -cis(-2.0 * s.theta());
  p.vector = finish_perp_vector(ops, std::move(psi), "cycle vector " + std::to_string(c.chord));
  p.tag = SubspaceTag::CyclePerp;
  p.witness = CycleWitness{c.chord, kNone, c.edges, {}, rooted_balancing_index(s, c),
                           std::vector<EdgeId>(c.edges.begin(), c.edges.end())};
  std::sort(p.witness->support.begin(), p.witness->support.end());
  return p;
}

}  // namespace detail

/// Eigenvector with eigenvalue -e^{-2iθ} supported on one fundamental cycle
/// of a reversible system: ψ(e_1) = 1 and alternating conjugate amplitude
/// ratios around the cycle.
inline EigenPair cycle_eigenvector(const TessellatedSystem& s, const WalkOperators& ops,
                                   const ReversibilityReport& report, const FundamentalCycle& c) {
  if (!report.reversible) {
    throw Error(ErrorCode::NotReversible, "cycle eigenvectors need a reversible system");
  }
  return detail::balanced_cycle_vector(s, ops, c);
}

/// Eigenvector with eigenvalue -e^{-2iθ} supported on two cycles of a
/// nonreversible system, joined by the connector when they are disjoint.
///
/// c0 is walked from its attachment vertex x with ψ(e_1) = 1, leaving the
/// defect fixed by Δ(c0). The connector carries
///   conj ψ(g_1) = w(e_1) Δ(c0) / w(g_1)
/// and c is seeded at its attachment vertex y with
///   conj ψ(f_1) = ± κ(p) w(e_1) Δ(c0) / (w(f_1) Δ(c)),
/// minus for even connector length (including the overlapping case, κ = 1)
/// and plus for odd length. Here w is a or b according to the polygon at the
/// attachment vertex, and Δ is read in that polygon's tessellation (Δ̃ for
/// right polygons).
inline EigenPair cycle_path_eigenvector(const TessellatedSystem& s, const WalkOperators& ops,
                                        const ReversibilityReport& report,
                                        const CyclePathSubgraph& gcc) {
  if (report.reversible) {
    throw Error(ErrorCode::NotNonreversible, "cycle-path eigenvectors need a nonreversible system");
  }
  const auto& g = s.graph();
  VertexId x;
  VertexId y;
  if (gcc.overlap == OverlapKind::DisjointWithPath) {
    x = gcc.connector_vertices.front();
    y = gcc.connector_vertices.back();
  } else {
    auto left = std::find_if(gcc.shared_vertices.begin(), gcc.shared_vertices.end(),
                             [&](VertexId v) { return g.is_left(v); });
    x = left != gcc.shared_vertices.end() ? *left : gcc.shared_vertices.front();
    y = x;
  }
  const FundamentalCycle c0 = rooted_at(gcc.c0, x);
  const FundamentalCycle c = rooted_at(gcc.c, y);
  const Complex delta0 = rooted_balancing_index(s, c0);
  const Complex delta = rooted_balancing_index(s, c);
  if (std::abs(delta0) < kDegenerateBalance || std::abs(delta) < kDegenerateBalance) {
    throw Error(ErrorCode::DegenerateBalance,
                "cycle with chord " +
                    std::to_string(std::abs(delta0) < kDegenerateBalance ? c0.chord : c.chord) +
                    " is balanced inside a nonreversible system");
  }

  CVector psi = CVector::Zero(s.nu());
  detail::propagate_cycle(s, c0, 1.0, psi);

  const Complex w_e1 = s.amplitude_at(c0.edges[0], x);
  const Complex w_f1 = s.amplitude_at(c.edges[0], y);
  const auto& path = gcc.connector;
  const std::size_t ell = path.size();
  if (ell > 0) {
    Complex value = std::conj(w_e1 * delta0 / s.amplitude_at(path[0], x));
    psi[path[0]] += value;
    for (std::size_t j = 1; j < ell; ++j) {
      const VertexId z = gcc.connector_vertices[j];
      value = -std::conj(s.amplitude_at(path[j - 1], z)) * value /
              std::conj(s.amplitude_at(path[j], z));
      psi[path[j]] += value;
    }
  }
  const Complex kappa = path_factor(s, path, g.is_left(x));
  const double sign = (ell % 2 == 1) ? 1.0 : -1.0;
  const Complex psi_f1 = std::conj(sign * kappa * w_e1 * delta0 / (w_f1 * delta));
  detail::propagate_cycle(s, c, psi_f1, psi);

  EigenPair p;
  p.eigenvalue = -cis(-2.0 * s.theta());
  p.vector = detail::finish_perp_vector(ops, std::move(psi),
                                        "cycle-path vector (" + std::to_string(c0.chord) + ", " +
                                            std::to_string(c.chord) + ")");
  p.tag = SubspaceTag::CyclePerp;
  p.witness = CycleWitness{c.chord, c0.chord, c.edges, path, delta, gcc.support()};
  return p;
}

/// Cluster label for every angle: sorted neighbours closer than `tol` share
/// a label, and the first and last clusters merge across 0 ≡ 2π.
inline std::vector<int> cluster_labels(const std::vector<double>& angles, double tol) {
  const std::size_t count = angles.size();
  std::vector<std::size_t> order(count);
  for (std::size_t i = 0; i < count; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto i, auto j) { return angles[i] < angles[j]; });
  std::vector<int> labels(count, 0);
  int next = 0;
  for (std::size_t k = 0; k < count; ++k) {
    if (k > 0 && angles[order[k]] - angles[order[k - 1]] >= tol) ++next;
    labels[order[k]] = next;
  }
  if (count > 1 && next > 0 && angles[order.front()] + 2.0 * kPi - angles[order.back()] < tol) {
    for (auto& l : labels) {
      if (l == next) l = 0;
    }
  }
  return labels;
}

/// Groups eigenvalues whose angles differ by less than `tol` (with
/// wrap-around at 0 ≡ 2π), in increasing angle of the first member.
inline std::vector<EigenCluster> cluster_eigenvalues(const std::vector<Complex>& values,
                                                     double tol = kClusterTolerance) {
  std::vector<double> angles;
  angles.reserve(values.size());
  for (auto z : values) angles.push_back(unit_angle(z));
  const auto labels = cluster_labels(angles, tol);
  std::vector<EigenCluster> out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto label = static_cast<std::size_t>(labels[i]);
    if (out.size() <= label) out.resize(label + 1);
    auto& cl = out[label];
    if (cl.count == 0 || angles[i] < cl.angle) {
      cl.angle = angles[i];
      cl.lambda = values[i];
    }
    ++cl.count;
  }
  std::erase_if(out, [](const EigenCluster& c) { return c.count == 0; });
  for (auto& cl : out) cl.lambda = cis(cl.angle);
  return out;
}

/// Columns are the eigenvectors of the basis, in order.
inline CMatrix basis_matrix(const EigenBasis& basis, int nu) {
  CMatrix V(nu, static_cast<Eigen::Index>(basis.pairs.size()));
  for (std::size_t i = 0; i < basis.pairs.size(); ++i) V.col(i) = basis.pairs[i].vector;
  return V;
}

/// Full eigenbasis of U assembled from A∩B, the lift of σ(T) and the cycle
/// vectors of (A+B)^⊥.
inline EigenBasis full_eigenbasis(const TessellatedSystem& s) {
  const auto& g = s.graph();
  const WalkOperators ops = build_operators(s);
  const SpanningTree tree = spanning_tree(g);
  const auto cycles = fundamental_cycles(g, tree);
  const ReversibilityReport report = detect_reversibility(s, tree, cycles);
  const TDecomposition td = decompose_T(ops.T);

  EigenBasis basis;
  basis.reversible = report.reversible;
  if (auto p = intersection_eigenvector(s, ops, report)) basis.pairs.push_back(std::move(*p));
  for (auto& p : inherited_eigenvectors(s, ops, td, report)) basis.pairs.push_back(std::move(p));

  if (report.reversible) {
    for (const auto& c : cycles) basis.pairs.push_back(cycle_eigenvector(s, ops, report, c));
  } else if (!cycles.empty()) {
    std::size_t base = 0;
    while (std::abs(report.cycle_defects[base].delta) < kReversibilityTolerance) ++base;
    for (std::size_t i = 0; i < cycles.size(); ++i) {
      if (i == base) continue;
      if (std::abs(report.cycle_defects[i].delta) < kReversibilityTolerance) {
        // c is balanced on its own, so its single-cycle vector already closes.
        basis.pairs.push_back(detail::balanced_cycle_vector(s, ops, cycles[i]));
      } else {
        basis.pairs.push_back(
            cycle_path_eigenvector(s, ops, report, cycle_path(g, cycles[base], cycles[i])));
      }
    }
  }

  if (static_cast<int>(basis.pairs.size()) != s.nu()) {
    throw Error(ErrorCode::BasisIncomplete, "assembled " + std::to_string(basis.pairs.size()) +
                                                " eigenvectors for dimension " +
                                                std::to_string(s.nu()));
  }
  std::vector<Complex> values;
  for (const auto& p : basis.pairs) values.push_back(p.eigenvalue);
  basis.multiplicities = cluster_eigenvalues(values);
  return basis;
}

/// Max over pairs of ||U v - λ v||.
inline double max_residual(const CMatrix& U, const EigenBasis& basis) {
  double worst = 0.0;
  for (const auto& p : basis.pairs) {
    worst = std::max(worst, (U * p.vector - p.eigenvalue * p.vector).norm());
  }
  return worst;
}

inline int gram_rank(const EigenBasis& basis, int nu) {
  return linalg::numeric_rank(basis_matrix(basis, nu), kGramRankTolerance);
}

}  // namespace stageig
