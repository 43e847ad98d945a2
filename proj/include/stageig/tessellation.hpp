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
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "stageig/error.hpp"
#include "stageig/multigraph.hpp"
#include "stageig/types.hpp"

namespace stageig {

inline constexpr double kNormalizationTolerance = 1e-12;
inline constexpr double kZeroAmplitude = 1e-12;

/// A 2-tessellable walk in edge coordinates: each edge e of the underlying
/// multigraph is a vertex of the walk graph, with amplitude a(e) in its left
/// polygon and b(e) in its right polygon.
class TessellatedSystem {
 public:
  /// Validates the amplitudes. Polygon norms within kNormalizationTolerance
  /// of one are renormalized exactly; anything else is rejected.
  static TessellatedSystem make(BipartiteMultigraph graph, CVector a, CVector b, double theta) {
    if (!(theta > 0.0 && theta < kPi)) {
      throw Error(ErrorCode::ThetaOutOfRange, "theta = " + std::to_string(theta) +
                                                  " is outside the open interval (0, pi)");
    }
    const int nu = graph.edge_count();
    if (a.size() != nu || b.size() != nu) {
      throw Error(ErrorCode::IndexOutOfRange, "expected " + std::to_string(nu) +
                                                  " amplitudes per tessellation");
    }
    for (EdgeId e = 0; e < nu; ++e) {
      if (std::abs(a[e]) < kZeroAmplitude || std::abs(b[e]) < kZeroAmplitude) {
        throw Error(ErrorCode::ZeroAmplitude, "vertex " + std::to_string(e) +
                                                  " has a zero amplitude in one of its polygons");
      }
    }
    normalize(graph, a, true);
    normalize(graph, b, false);
    return TessellatedSystem(std::move(graph), std::move(a), std::move(b), theta);
  }

  const BipartiteMultigraph& graph() const { return graph_; }
  const CVector& a() const { return a_; }
  const CVector& b() const { return b_; }
  Complex a(EdgeId e) const { return a_[e]; }
  Complex b(EdgeId e) const { return b_[e]; }
  double theta() const { return theta_; }

  int nu() const { return graph_.edge_count(); }
  int m() const { return graph_.left_count(); }
  int n() const { return graph_.right_count(); }

  /// Amplitude of edge e in the polygon `v` (one of its endpoints).
  Complex amplitude_at(EdgeId e, VertexId v) const {
    return graph_.is_left(v) ? a_[e] : b_[e];
  }

  TessellatedSystem with_theta(double theta) const { return make(graph_, a_, b_, theta); }

 private:
  TessellatedSystem(BipartiteMultigraph g, CVector a, CVector b, double theta)
      : graph_(std::move(g)), a_(std::move(a)), b_(std::move(b)), theta_(theta) {}

  static void normalize(const BipartiteMultigraph& g, CVector& amp, bool left) {
    const int count = left ? g.left_count() : g.right_count();
    for (int i = 0; i < count; ++i) {
      VertexId v = left ? i : g.right_vertex_id(i);
      double norm2 = 0.0;
      for (EdgeId e : g.incident(v)) norm2 += std::norm(amp[e]);
      if (std::abs(norm2 - 1.0) > kNormalizationTolerance) {
        throw Error(ErrorCode::NotNormalized, "polygon " + g.describe_vertex(v) +
                                                  " has squared norm " + std::to_string(norm2));
      }
      const double scale = 1.0 / std::sqrt(norm2);
      for (EdgeId e : g.incident(v)) amp[e] *= scale;
    }
  }

  BipartiteMultigraph graph_;
  CVector a_;
  CVector b_;
  double theta_;
};

/// a(e) = 1/sqrt(deg left endpoint), b(e) = 1/sqrt(deg right endpoint).
inline TessellatedSystem uniform_amplitudes(const BipartiteMultigraph& g, double theta) {
  CVector a(g.edge_count());
  CVector b(g.edge_count());
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    a[e] = 1.0 / std::sqrt(static_cast<double>(g.degree(g.left_vertex(e))));
    b[e] = 1.0 / std::sqrt(static_cast<double>(g.degree(g.right_vertex(e))));
  }
  return TessellatedSystem::make(g, std::move(a), std::move(b), theta);
}

/// The nu x m isometry whose columns are the left polygon vectors.
inline CMatrix operator_A(const TessellatedSystem& s) {
  CMatrix A = CMatrix::Zero(s.nu(), s.m());
  for (EdgeId e = 0; e < s.nu(); ++e) A(e, s.graph().edge(e).left) = s.a(e);
  return A;
}

/// The nu x n isometry whose columns are the right polygon vectors.
inline CMatrix operator_B(const TessellatedSystem& s) {
  CMatrix B = CMatrix::Zero(s.nu(), s.n());
  for (EdgeId e = 0; e < s.nu(); ++e) B(e, s.graph().edge(e).right) = s.b(e);
  return B;
}

/// A walk graph with two tessellations. Polygons list walk-graph vertices;
/// `amps1[i][k]` is the amplitude of `t1[i][k]` in polygon i. Missing
/// amplitude lists mean uniform amplitudes.
struct CoverInput {
  int vertex_count = 0;
  std::vector<std::pair<int, int>> edges;
  std::vector<std::vector<int>> t1;
  std::vector<std::vector<int>> t2;
  std::optional<std::vector<std::vector<Complex>>> amps1;
  std::optional<std::vector<std::vector<Complex>>> amps2;
};

namespace detail {

inline std::string polygon_name(int which, std::size_t index) {
  return "T" + std::to_string(which) + " polygon " + std::to_string(index);
}

inline void check_polygon_indices(const CoverInput& c, const std::vector<std::vector<int>>& t,
                                  int which) {
  for (std::size_t p = 0; p < t.size(); ++p) {
    if (t[p].empty()) {
      throw Error(ErrorCode::NotAPartition, polygon_name(which, p) + " is empty");
    }
    for (int u : t[p]) {
      if (u < 0 || u >= c.vertex_count) {
        throw Error(ErrorCode::IndexOutOfRange,
                    polygon_name(which, p) + " names vertex " + std::to_string(u));
      }
    }
  }
}

inline void check_amplitude_shape(const std::optional<std::vector<std::vector<Complex>>>& amps,
                                  const std::vector<std::vector<int>>& t, int which) {
  if (!amps) return;
  if (amps->size() != t.size()) {
    throw Error(ErrorCode::IndexOutOfRange, "T" + std::to_string(which) + " has " +
                                                std::to_string(t.size()) + " polygons but " +
                                                std::to_string(amps->size()) +
                                                " amplitude lists");
  }
  for (std::size_t p = 0; p < t.size(); ++p) {
    if ((*amps)[p].size() != t[p].size()) {
      throw Error(ErrorCode::IndexOutOfRange,
                  polygon_name(which, p) + " amplitude list has the wrong length");
    }
  }
}

/// owner[u] = polygon of u; throws NotAPartition on overlap or a gap.
inline std::vector<int> polygon_owner(const CoverInput& c, const std::vector<std::vector<int>>& t,
                                      int which) {
  std::vector<int> owner(c.vertex_count, kNone);
  for (std::size_t p = 0; p < t.size(); ++p) {
    for (int u : t[p]) {
      if (owner[u] != kNone) {
        throw Error(ErrorCode::NotAPartition,
                    "vertex " + std::to_string(u) + " lies in " + polygon_name(which, owner[u]) +
                        " and " + polygon_name(which, p));
      }
      owner[u] = static_cast<int>(p);
    }
  }
  for (int u = 0; u < c.vertex_count; ++u) {
    if (owner[u] == kNone) {
      throw Error(ErrorCode::NotAPartition, "vertex " + std::to_string(u) +
                                                " lies in no polygon of T" +
                                                std::to_string(which));
    }
  }
  return owner;
}

}  // namespace detail

/// Checks the tessellation-cover axioms: polygons are cliques, every edge is
/// inside a polygon of one tessellation, and each tessellation partitions the
/// vertex set. Returns the input unchanged on success.
inline const CoverInput& validate_cover(const CoverInput& c) {
  if (c.vertex_count <= 0) throw Error(ErrorCode::IndexOutOfRange, "cover has no vertices");
  std::set<std::pair<int, int>> edge_set;
  for (const auto& [u, v] : c.edges) {
    if (u < 0 || v < 0 || u >= c.vertex_count || v >= c.vertex_count || u == v) {
      throw Error(ErrorCode::IndexOutOfRange,
                  "edge (" + std::to_string(u) + "," + std::to_string(v) + ") is invalid");
    }
    edge_set.insert(std::minmax(u, v));
  }
  detail::check_polygon_indices(c, c.t1, 1);
  detail::check_polygon_indices(c, c.t2, 2);
  detail::check_amplitude_shape(c.amps1, c.t1, 1);
  detail::check_amplitude_shape(c.amps2, c.t2, 2);

  std::set<std::pair<int, int>> covered;
  auto scan = [&](const std::vector<std::vector<int>>& t, int which) {
    for (std::size_t p = 0; p < t.size(); ++p) {
      const auto& poly = t[p];
      for (std::size_t i = 0; i < poly.size(); ++i) {
        for (std::size_t j = i + 1; j < poly.size(); ++j) {
          auto key = std::minmax(poly[i], poly[j]);
          if (!edge_set.count(key)) {
            throw Error(ErrorCode::PolygonNotClique,
                        detail::polygon_name(which, p) + " contains non-adjacent vertices " +
                            std::to_string(key.first) + " and " + std::to_string(key.second));
          }
          covered.insert(key);
        }
      }
    }
  };
  scan(c.t1, 1);
  scan(c.t2, 2);
  for (const auto& key : edge_set) {
    if (!covered.count(key)) {
      throw Error(ErrorCode::EdgeUncovered, "edge (" + std::to_string(key.first) + "," +
                                                std::to_string(key.second) +
                                                ") lies in no polygon");
    }
  }
  detail::polygon_owner(c, c.t1, 1);
  detail::polygon_owner(c, c.t2, 2);
  return c;
}

/// Builds the underlying multigraph (left = T1 polygons, right = T2
/// polygons, edge id = walk-graph vertex id) and moves the amplitudes onto
/// its edges.
inline TessellatedSystem from_cover(const CoverInput& c, double theta) {
  validate_cover(c);
  auto owner1 = detail::polygon_owner(c, c.t1, 1);
  auto owner2 = detail::polygon_owner(c, c.t2, 2);
  std::vector<Endpoints> edges(c.vertex_count);
  for (int u = 0; u < c.vertex_count; ++u) edges[u] = {owner1[u], owner2[u]};
  auto g = BipartiteMultigraph::build(static_cast<int>(c.t1.size()),
                                      static_cast<int>(c.t2.size()), std::move(edges));

  auto fill = [&](const std::vector<std::vector<int>>& t,
                  const std::optional<std::vector<std::vector<Complex>>>& amps) {
    CVector out(c.vertex_count);
    for (std::size_t p = 0; p < t.size(); ++p) {
      for (std::size_t k = 0; k < t[p].size(); ++k) {
        out[t[p][k]] = amps ? (*amps)[p][k]
                            : Complex(1.0 / std::sqrt(static_cast<double>(t[p].size())));
      }
    }
    return out;
  };
  return TessellatedSystem::make(std::move(g), fill(c.t1, c.amps1), fill(c.t2, c.amps2), theta);
}

}  // namespace stageig
