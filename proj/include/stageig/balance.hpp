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
#include <span>
#include <utility>
#include <vector>

#include "stageig/multigraph.hpp"
#include "stageig/tessellation.hpp"
#include "stageig/types.hpp"

namespace stageig {

inline constexpr double kReversibilityTolerance = 1e-9;
inline constexpr double kBorderlineTolerance = 1e-6;

/// Balancing index of a cycle read from its root:
///   Δ(c) = a(e_2k) b(e_2k-1) ... a(e_2) b(e_1) / (b(e_2k) a(e_2k-1) ... b(e_2) a(e_1)) - 1.
/// With `swap_tessellations` a and b trade places, giving Δ̃.
inline Complex balancing_index(const TessellatedSystem& s, const FundamentalCycle& c,
                               bool swap_tessellations = false) {
  Complex ratio = 1.0;
  for (int i = 0; i < c.length(); ++i) {
    const EdgeId e = c.edges[i];
    Complex num = s.a(e);
    Complex den = s.b(e);
    if (i % 2 == 0) std::swap(num, den);  // odd positions e_1, e_3, ...
    if (swap_tessellations) std::swap(num, den);
    ratio *= num / den;
  }
  return ratio - 1.0;
}

inline Complex tilde_balancing_index(const TessellatedSystem& s, const FundamentalCycle& c) {
  return balancing_index(s, c, true);
}

/// Δ for the tessellation that owns the root: Δ when the root is a left
/// polygon, Δ̃ when it is a right polygon.
inline Complex rooted_balancing_index(const TessellatedSystem& s, const FundamentalCycle& c) {
  return balancing_index(s, c, !s.graph().is_left(c.root()));
}

/// κ(p) for a path g_1..g_l leaving a left polygon:
/// odd-position edges contribute b/a and even-position edges a/b, which is
/// the common form of the even-l and odd-l expressions. κ(empty) = 1.
inline Complex path_factor(const TessellatedSystem& s, std::span<const EdgeId> path,
                           bool starts_left = true) {
  Complex k = 1.0;
  for (std::size_t j = 0; j < path.size(); ++j) {
    const EdgeId g = path[j];
    Complex ratio = (j % 2 == 0) ? s.b(g) / s.a(g) : s.a(g) / s.b(g);
    k *= starts_left ? ratio : 1.0 / ratio;
  }
  return k;
}

struct CycleDefect {
  EdgeId chord;
  Complex delta;
};

struct ReversibilityReport {
  bool reversible = false;
  /// Unit-norm π1 ⊕ π2 over left then right polygons, when reversible.
  std::optional<CVector> pi;
  std::vector<CycleDefect> cycle_defects;
  double max_cycle_defect = 0.0;
  /// Some defect lies in [tolerance, kBorderlineTolerance).
  bool borderline = false;
  double tolerance_used = kReversibilityTolerance;
};

/// max over edges of |a(e) π(left(e)) - b(e) π(right(e))|.
inline double qdb_residual(const TessellatedSystem& s, const CVector& pi) {
  const auto& g = s.graph();
  double worst = 0.0;
  for (EdgeId e = 0; e < s.nu(); ++e) {
    worst = std::max(worst, std::abs(s.a(e) * pi[g.left_vertex(e)] -
                                     s.b(e) * pi[g.right_vertex(e)]));
  }
  return worst;
}

/// Propagates π from the tree root with a(e)π(left) = b(e)π(right) and then
/// checks every fundamental cycle's balancing index.
inline ReversibilityReport detect_reversibility(const TessellatedSystem& s, const SpanningTree& t,
                                                const std::vector<FundamentalCycle>& cycles,
                                                double tolerance = kReversibilityTolerance) {
  const auto& g = s.graph();
  ReversibilityReport report;
  report.tolerance_used = tolerance;
  for (const auto& c : cycles) {
    Complex d = balancing_index(s, c);
    report.cycle_defects.push_back({c.chord, d});
    report.max_cycle_defect = std::max(report.max_cycle_defect, std::abs(d));
    if (std::abs(d) >= tolerance && std::abs(d) < kBorderlineTolerance) report.borderline = true;
  }
  report.reversible = report.max_cycle_defect < tolerance;
  if (!report.reversible) return report;

  // BFS order guarantees parents are assigned first.
  std::vector<VertexId> order(g.vertex_count());
  for (VertexId v = 0; v < g.vertex_count(); ++v) order[v] = v;
  std::sort(order.begin(), order.end(),
            [&](VertexId x, VertexId y) { return t.depth[x] < t.depth[y]; });
  CVector pi = CVector::Zero(g.vertex_count());
  pi[t.root] = 1.0;
  for (VertexId v : order) {
    if (v == t.root) continue;
    const EdgeId e = t.parent_edge[v];
    const Complex parent = pi[t.parent[v]];
    pi[v] = g.is_left(v) ? s.b(e) * parent / s.a(e) : s.a(e) * parent / s.b(e);
  }
  pi.normalize();
  report.pi = std::move(pi);
  return report;
}

inline ReversibilityReport detect_reversibility(const TessellatedSystem& s,
                                                double tolerance = kReversibilityTolerance) {
  const auto t = spanning_tree(s.graph());
  return detect_reversibility(s, t, fundamental_cycles(s.graph(), t), tolerance);
}

/// Classical chain on the underlying multigraph. P(β, α) sums |a(e)|^2 over
/// the edges joining α to β, and P(α, β) sums |b(e)|^2; each column sums to 1.
struct ClassicalChain {
  Eigen::MatrixXd P;
  std::optional<RVector> zeta;  // |π|^2 when reversible
};

inline ClassicalChain classical_chain(const TessellatedSystem& s,
                                      const ReversibilityReport& report) {
  const auto& g = s.graph();
  ClassicalChain chain;
  chain.P = Eigen::MatrixXd::Zero(g.vertex_count(), g.vertex_count());
  for (EdgeId e = 0; e < s.nu(); ++e) {
    const VertexId l = g.left_vertex(e);
    const VertexId r = g.right_vertex(e);
    chain.P(r, l) += std::norm(s.a(e));
    chain.P(l, r) += std::norm(s.b(e));
  }
  if (report.pi) chain.zeta = report.pi->cwiseAbs2();
  return chain;
}

inline ClassicalChain classical_chain(const TessellatedSystem& s) {
  return classical_chain(s, detect_reversibility(s));
}

}  // namespace stageig
