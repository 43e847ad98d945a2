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
#include <cstddef>
#include <deque>
#include <limits>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "stageig/error.hpp"

namespace stageig {

using EdgeId = int;
using VertexId = int;

inline constexpr int kNone = -1;

/// One edge of the bipartite multigraph: a left polygon and a right polygon.
struct Endpoints {
  int left = 0;
  int right = 0;

  friend bool operator==(const Endpoints&, const Endpoints&) = default;
};

/// Connected bipartite multigraph with dense edge ids.
///
/// Vertices are numbered globally: left vertex i is `i`, right vertex j is
/// `left_count() + j`. Parallel edges are allowed and keep distinct ids.
class BipartiteMultigraph {
 public:
  static BipartiteMultigraph build(int left_count, int right_count,
                                   std::vector<Endpoints> edges) {
    if (edges.empty()) throw Error(ErrorCode::EmptyEdgeList, "graph has no edges");
    if (left_count <= 0 || right_count <= 0) {
      throw Error(ErrorCode::IndexOutOfRange, "both vertex classes must be nonempty");
    }
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const auto& ep = edges[e];
      if (ep.left < 0 || ep.left >= left_count || ep.right < 0 || ep.right >= right_count) {
        throw Error(ErrorCode::IndexOutOfRange,
                    "edge " + std::to_string(e) + " = (" + std::to_string(ep.left) + "," +
                        std::to_string(ep.right) + ") is outside " + std::to_string(left_count) +
                        "x" + std::to_string(right_count));
      }
    }
    BipartiteMultigraph g(left_count, right_count, std::move(edges));
    std::vector<bool> seen(g.vertex_count(), false);
    std::deque<VertexId> queue{0};
    seen[0] = true;
    int reached = 1;
    while (!queue.empty()) {
      VertexId v = queue.front();
      queue.pop_front();
      for (EdgeId e : g.incident(v)) {
        VertexId w = g.other_end(e, v);
        if (!seen[w]) {
          seen[w] = true;
          ++reached;
          queue.push_back(w);
        }
      }
    }
    if (reached != g.vertex_count()) {
      auto it = std::find(seen.begin(), seen.end(), false);
      VertexId v = static_cast<VertexId>(it - seen.begin());
      throw Error(ErrorCode::DisconnectedGraph, "vertex " + g.describe_vertex(v) +
                                                    " is unreachable from left vertex 0");
    }
    return g;
  }

  int left_count() const { return left_count_; }
  int right_count() const { return right_count_; }
  int vertex_count() const { return left_count_ + right_count_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }

  /// First Betti number |E| - |V| + 1.
  int betti_number() const { return edge_count() - vertex_count() + 1; }

  std::span<const Endpoints> edges() const { return edges_; }
  const Endpoints& edge(EdgeId e) const { return edges_.at(e); }

  VertexId left_vertex(EdgeId e) const { return edges_[e].left; }
  VertexId right_vertex(EdgeId e) const { return left_count_ + edges_[e].right; }
  VertexId right_vertex_id(int j) const { return left_count_ + j; }

  bool is_left(VertexId v) const { return v < left_count_; }

  /// Index of `v` inside its own class.
  int class_index(VertexId v) const { return is_left(v) ? v : v - left_count_; }

  /// Incident edges of `v` in ascending id order.
  const std::vector<EdgeId>& incident(VertexId v) const { return incidence_.at(v); }

  int degree(VertexId v) const { return static_cast<int>(incidence_.at(v).size()); }

  VertexId other_end(EdgeId e, VertexId v) const {
    VertexId l = left_vertex(e);
    VertexId r = right_vertex(e);
    return v == l ? r : l;
  }

  bool touches(EdgeId e, VertexId v) const { return left_vertex(e) == v || right_vertex(e) == v; }

  std::string describe_vertex(VertexId v) const {
    return is_left(v) ? "left " + std::to_string(v) : "right " + std::to_string(v - left_count_);
  }

 private:
  BipartiteMultigraph(int m, int n, std::vector<Endpoints> edges)
      : left_count_(m), right_count_(n), edges_(std::move(edges)), incidence_(m + n) {
    for (EdgeId e = 0; e < edge_count(); ++e) {
      incidence_[left_vertex(e)].push_back(e);
      incidence_[right_vertex(e)].push_back(e);
    }
  }

  int left_count_;
  int right_count_;
  std::vector<Endpoints> edges_;
  std::vector<std::vector<EdgeId>> incidence_;
};

struct SpanningTree {
  VertexId root = 0;
  std::vector<VertexId> parent;     // kNone at the root
  std::vector<EdgeId> parent_edge;  // kNone at the root
  std::vector<int> depth;
  std::vector<EdgeId> tree_edges;   // ascending
  std::vector<bool> in_tree;        // indexed by edge id

  std::vector<EdgeId> chords() const {
    std::vector<EdgeId> out;
    for (EdgeId e = 0; e < static_cast<EdgeId>(in_tree.size()); ++e) {
      if (!in_tree[e]) out.push_back(e);
    }
    return out;
  }
};

/// Breadth-first tree from left vertex 0; neighbours are explored in
/// ascending edge id, so the result depends only on the edge order.
inline SpanningTree spanning_tree(const BipartiteMultigraph& g) {
  SpanningTree t;
  const int nv = g.vertex_count();
  t.root = 0;
  t.parent.assign(nv, kNone);
  t.parent_edge.assign(nv, kNone);
  t.depth.assign(nv, -1);
  t.in_tree.assign(g.edge_count(), false);
  t.depth[0] = 0;
  std::deque<VertexId> queue{0};
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop_front();
    for (EdgeId e : g.incident(v)) {
      VertexId w = g.other_end(e, v);
      if (t.depth[w] >= 0) continue;
      t.depth[w] = t.depth[v] + 1;
      t.parent[w] = v;
      t.parent_edge[w] = e;
      t.in_tree[e] = true;
      queue.push_back(w);
    }
  }
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    if (t.in_tree[e]) t.tree_edges.push_back(e);
  }
  return t;
}

/// A closed walk e_1, ..., e_{2k} with vertices u_j = e_j ∩ e_{j+1} and
/// u_{2k} = e_{2k} ∩ e_1. `vertices[j]` is u_{j+1}; the last vertex is the
/// root the walk starts from and returns to.
///
/// Fundamental cycles are produced in canonical orientation: the root u_{2k}
/// is a left vertex, so u_{2j} are left and u_{2j-1} are right.
struct FundamentalCycle {
  EdgeId chord = kNone;
  std::vector<EdgeId> edges;
  std::vector<VertexId> vertices;

  int length() const { return static_cast<int>(edges.size()); }
  VertexId root() const { return vertices.back(); }

  bool contains_edge(EdgeId e) const {
    return std::find(edges.begin(), edges.end(), e) != edges.end();
  }
  bool contains_vertex(VertexId v) const {
    return std::find(vertices.begin(), vertices.end(), v) != vertices.end();
  }
};

/// Same cycle and direction, rotated so that `v` becomes the root.
inline FundamentalCycle rooted_at(const FundamentalCycle& c, VertexId v) {
  auto it = std::find(c.vertices.begin(), c.vertices.end(), v);
  if (it == c.vertices.end()) {
    throw Error(ErrorCode::IndexOutOfRange, "vertex " + std::to_string(v) + " is not on the cycle");
  }
  const int len = c.length();
  const int shift = static_cast<int>(it - c.vertices.begin()) + 1;
  FundamentalCycle out;
  out.chord = c.chord;
  out.edges.resize(len);
  out.vertices.resize(len);
  for (int j = 0; j < len; ++j) {
    out.edges[j] = c.edges[(j + shift) % len];
    out.vertices[j] = c.vertices[(j + shift) % len];
  }
  return out;
}

namespace detail {

/// Tree path from `from` to `to` as (edges, vertices after each edge).
inline std::pair<std::vector<EdgeId>, std::vector<VertexId>> tree_path(const SpanningTree& t,
                                                                       VertexId from,
                                                                       VertexId to) {
  std::vector<EdgeId> up_edges;
  std::vector<VertexId> up_vertices;
  std::vector<EdgeId> down_edges;
  std::vector<VertexId> down_vertices;
  VertexId a = from;
  VertexId b = to;
  while (t.depth[a] > t.depth[b]) {
    up_edges.push_back(t.parent_edge[a]);
    a = t.parent[a];
    up_vertices.push_back(a);
  }
  while (t.depth[b] > t.depth[a]) {
    down_edges.push_back(t.parent_edge[b]);
    down_vertices.push_back(b);
    b = t.parent[b];
  }
  while (a != b) {
    up_edges.push_back(t.parent_edge[a]);
    a = t.parent[a];
    up_vertices.push_back(a);
    down_edges.push_back(t.parent_edge[b]);
    down_vertices.push_back(b);
    b = t.parent[b];
  }
  std::reverse(down_edges.begin(), down_edges.end());
  std::reverse(down_vertices.begin(), down_vertices.end());
  up_edges.insert(up_edges.end(), down_edges.begin(), down_edges.end());
  up_vertices.insert(up_vertices.end(), down_vertices.begin(), down_vertices.end());
  return {up_edges, up_vertices};
}

}  // namespace detail

/// One cycle per chord, in ascending chord id. Each starts with its chord,
/// traversed from its left endpoint, and closes along the tree path.
inline std::vector<FundamentalCycle> fundamental_cycles(const BipartiteMultigraph& g,
                                                        const SpanningTree& t) {
  std::vector<FundamentalCycle> cycles;
  for (EdgeId chord : t.chords()) {
    const VertexId left = g.left_vertex(chord);
    const VertexId right = g.right_vertex(chord);
    auto [path_edges, path_vertices] = detail::tree_path(t, right, left);
    FundamentalCycle c;
    c.chord = chord;
    c.edges.push_back(chord);
    c.vertices.push_back(right);
    c.edges.insert(c.edges.end(), path_edges.begin(), path_edges.end());
    c.vertices.insert(c.vertices.end(), path_vertices.begin(), path_vertices.end());
    cycles.push_back(std::move(c));
  }
  return cycles;
}

enum class OverlapKind { DisjointWithPath, SharedVertex, SharedPath };

constexpr std::string_view to_string(OverlapKind k) {
  switch (k) {
    case OverlapKind::DisjointWithPath: return "disjoint-with-path";
    case OverlapKind::SharedVertex: return "shared-vertex";
    case OverlapKind::SharedPath: return "shared-path";
  }
  return "unknown";
}

/// Two fundamental cycles plus, when vertex-disjoint, a connector path
/// g_1..g_l running from `connector_vertices.front()` on c0 to
/// `connector_vertices.back()` on c.
struct CyclePathSubgraph {
  FundamentalCycle c0;
  FundamentalCycle c;
  std::vector<EdgeId> connector;
  std::vector<VertexId> connector_vertices;  // z_1 .. z_{l+1}; empty when overlapping
  OverlapKind overlap = OverlapKind::DisjointWithPath;
  std::vector<VertexId> shared_vertices;     // ascending

  std::vector<EdgeId> support() const {
    std::set<EdgeId> s(c0.edges.begin(), c0.edges.end());
    s.insert(c.edges.begin(), c.edges.end());
    s.insert(connector.begin(), connector.end());
    return {s.begin(), s.end()};
  }
};

/// Combines two fundamental cycles. Vertex-disjoint cycles are joined by the
/// shortest path that avoids both cycles' edges; among shortest paths the
/// lexicographically smallest edge-id sequence wins.
inline CyclePathSubgraph cycle_path(const BipartiteMultigraph& g, const FundamentalCycle& c0,
                                    const FundamentalCycle& c) {
  CyclePathSubgraph out;
  out.c0 = c0;
  out.c = c;
  for (VertexId v : c0.vertices) {
    if (c.contains_vertex(v)) out.shared_vertices.push_back(v);
  }
  std::sort(out.shared_vertices.begin(), out.shared_vertices.end());
  if (!out.shared_vertices.empty()) {
    bool shares_edge = std::any_of(c0.edges.begin(), c0.edges.end(),
                                   [&](EdgeId e) { return c.contains_edge(e); });
    out.overlap = shares_edge ? OverlapKind::SharedPath : OverlapKind::SharedVertex;
    return out;
  }

  std::vector<bool> blocked(g.edge_count(), false);
  for (EdgeId e : c0.edges) blocked[e] = true;
  for (EdgeId e : c.edges) blocked[e] = true;

  // Distance of every vertex to V(c) through unblocked edges.
  constexpr int kInf = std::numeric_limits<int>::max();
  std::vector<int> dist(g.vertex_count(), kInf);
  std::deque<VertexId> queue;
  for (VertexId v : c.vertices) {
    if (dist[v] == kInf) {
      dist[v] = 0;
      queue.push_back(v);
    }
  }
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop_front();
    for (EdgeId e : g.incident(v)) {
      if (blocked[e]) continue;
      VertexId w = g.other_end(e, v);
      if (dist[w] == kInf) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
  int best = kInf;
  for (VertexId v : c0.vertices) best = std::min(best, dist[v]);
  if (best == kInf) {
    throw Error(ErrorCode::NoConnectingPath, "cycles with chords " + std::to_string(c0.chord) +
                                                 " and " + std::to_string(c.chord) +
                                                 " cannot be joined");
  }

  // Greedy descent on dist with smallest edge id at each step.
  std::vector<VertexId> frontier;
  for (VertexId v : c0.vertices) {
    if (dist[v] == best) frontier.push_back(v);
  }
  while (best > 0) {
    EdgeId pick = kNone;
    VertexId from = kNone;
    for (VertexId v : frontier) {
      for (EdgeId e : g.incident(v)) {
        if (blocked[e] || dist[g.other_end(e, v)] != best - 1) continue;
        if (pick == kNone || e < pick) {
          pick = e;
          from = v;
        }
      }
    }
    VertexId to = g.other_end(pick, from);
    if (out.connector_vertices.empty()) out.connector_vertices.push_back(from);
    out.connector.push_back(pick);
    out.connector_vertices.push_back(to);
    frontier = {to};
    --best;
  }
  out.overlap = OverlapKind::DisjointWithPath;
  return out;
}

/// Line graph of a multigraph, kept as a multigraph: one edge for every
/// shared endpoint, so two parallel edges are joined twice.
struct LineGraph {
  int vertex_count = 0;
  struct Link {
    EdgeId a;
    EdgeId b;
    VertexId via;
  };
  std::vector<Link> links;

  /// Simple adjacency: pairs (a < b) adjacent through at least one endpoint.
  std::vector<std::pair<EdgeId, EdgeId>> simple_edges() const {
    std::set<std::pair<EdgeId, EdgeId>> s;
    for (const auto& l : links) s.insert({l.a, l.b});
    return {s.begin(), s.end()};
  }
};

/// Vertices are the edge ids of `g` (the bijection onto the walk graph is the
/// identity on ids).
inline LineGraph line_graph(const BipartiteMultigraph& g) {
  LineGraph lg;
  lg.vertex_count = g.edge_count();
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    const auto& inc = g.incident(v);
    for (std::size_t i = 0; i < inc.size(); ++i) {
      for (std::size_t j = i + 1; j < inc.size(); ++j) {
        lg.links.push_back({inc[i], inc[j], v});
      }
    }
  }
  std::sort(lg.links.begin(), lg.links.end(), [](const auto& x, const auto& y) {
    return std::tie(x.a, x.b, x.via) < std::tie(y.a, y.b, y.via);
  });
  return lg;
}

}  // namespace stageig
