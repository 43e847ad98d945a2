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

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "stageig/balance.hpp"
#include "stageig/error.hpp"
#include "stageig/multigraph.hpp"
#include "stageig/oracle.hpp"
#include "stageig/spectral.hpp"
#include "stageig/tessellation.hpp"
#include "stageig/types.hpp"

namespace stageig::io {

using nlohmann::json;

namespace detail {

[[noreturn]] inline void schema(const std::string& msg) { throw Error(ErrorCode::SchemaError, msg); }

inline const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) schema(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

inline int as_int(const json& j, const std::string& what) {
  if (!j.is_number_integer()) schema(what + " must be an integer");
  return j.get<int>();
}

inline double as_real(const json& j, const std::string& what) {
  if (!j.is_number()) schema(what + " must be a number");
  return j.get<double>();
}

inline std::vector<int> int_list(const json& j, const std::string& what) {
  if (!j.is_array()) schema(what + " must be an array");
  std::vector<int> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_int(j[i], what + "[" + std::to_string(i) + "]"));
  return out;
}

}  // namespace detail

inline json to_json(Complex z) { return json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2) detail::schema(what + " must be a [re, im] pair");
  return {detail::as_real(j[0], what), detail::as_real(j[1], what)};
}

inline json to_json(const CVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v[i]));
  return out;
}

inline json to_json(const RVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

inline CVector cvector_from_json(const json& j, const std::string& what) {
  if (!j.is_array()) detail::schema(what + " must be an array of [re, im] pairs");
  CVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = complex_from_json(j[i], what + "[" + std::to_string(i) + "]");
  }
  return v;
}

/// Row-major array of rows of [re, im] pairs.
inline json matrix_to_json(const CMatrix& M) {
  json out = json::array();
  for (Eigen::Index r = 0; r < M.rows(); ++r) out.push_back(to_json(CVector(M.row(r).transpose())));
  return out;
}

// Graph: {"m": int, "n": int, "edges": [[l, r], ...]}

inline json to_json(const BipartiteMultigraph& g) {
  json edges = json::array();
  for (const auto& e : g.edges()) edges.push_back(json::array({e.left, e.right}));
  return {{"m", g.left_count()}, {"n", g.right_count()}, {"edges", edges}};
}

inline BipartiteMultigraph graph_from_json(const json& j) {
  const int m = detail::as_int(detail::field(j, "m"), "m");
  const int n = detail::as_int(detail::field(j, "n"), "n");
  const json& ej = detail::field(j, "edges");
  if (!ej.is_array()) detail::schema("edges must be an array");
  std::vector<Endpoints> edges;
  for (std::size_t i = 0; i < ej.size(); ++i) {
    auto pair = detail::int_list(ej[i], "edges[" + std::to_string(i) + "]");
    if (pair.size() != 2) detail::schema("edges[" + std::to_string(i) + "] must be [l, r]");
    edges.push_back({pair[0], pair[1]});
  }
  return BipartiteMultigraph::build(m, n, std::move(edges));
}

// System: {"graph": <graph>, "a": [[re, im], ...], "b": [...], "theta": float}

inline json to_json(const TessellatedSystem& s) {
  return {{"graph", to_json(s.graph())}, {"a", to_json(s.a())}, {"b", to_json(s.b())},
          {"theta", s.theta()}};
}

/// `theta` overrides the value stored in the file when given.
inline TessellatedSystem system_from_json(const json& j, std::optional<double> theta = std::nullopt) {
  auto g = graph_from_json(detail::field(j, "graph"));
  CVector a = cvector_from_json(detail::field(j, "a"), "a");
  CVector b = cvector_from_json(detail::field(j, "b"), "b");
  if (!theta) {
    if (!j.contains("theta")) detail::schema("no theta in the input and none given");
    theta = detail::as_real(j.at("theta"), "theta");
  }
  return TessellatedSystem::make(std::move(g), std::move(a), std::move(b), *theta);
}

// Cover: {"vertices": int, "edges": [[u, v], ...], "t1": [[...]], "t2": [[...]],
//         "amps1": [[[re, im], ...], ...], "amps2": [...]}

inline CoverInput cover_from_json(const json& j) {
  CoverInput c;
  c.vertex_count = detail::as_int(detail::field(j, "vertices"), "vertices");
  const json& ej = detail::field(j, "edges");
  if (!ej.is_array()) detail::schema("edges must be an array");
  for (std::size_t i = 0; i < ej.size(); ++i) {
    auto pair = detail::int_list(ej[i], "edges[" + std::to_string(i) + "]");
    if (pair.size() != 2) detail::schema("edges[" + std::to_string(i) + "] must be [u, v]");
    c.edges.emplace_back(pair[0], pair[1]);
  }
  auto polygons = [](const json& t, const std::string& name) {
    if (!t.is_array()) detail::schema(name + " must be an array of polygons");
    std::vector<std::vector<int>> out;
    for (std::size_t i = 0; i < t.size(); ++i) out.push_back(detail::int_list(t[i], name + "[" + std::to_string(i) + "]"));
    return out;
  };
  c.t1 = polygons(detail::field(j, "t1"), "t1");
  c.t2 = polygons(detail::field(j, "t2"), "t2");
  auto amps = [](const json& t, const std::string& name) {
    if (!t.is_array()) detail::schema(name + " must be an array");
    std::vector<std::vector<Complex>> out;
    for (std::size_t i = 0; i < t.size(); ++i) {
      const std::string where = name + "[" + std::to_string(i) + "]";
      CVector v = cvector_from_json(t[i], where);
      out.emplace_back(v.data(), v.data() + v.size());
    }
    return out;
  };
  if (j.contains("amps1") && !j.at("amps1").is_null()) c.amps1 = amps(j.at("amps1"), "amps1");
  if (j.contains("amps2") && !j.at("amps2").is_null()) c.amps2 = amps(j.at("amps2"), "amps2");
  return c;
}

inline json to_json(const CoverInput& c) {
  json edges = json::array();
  for (auto [u, v] : c.edges) edges.push_back(json::array({u, v}));
  json out = {{"vertices", c.vertex_count}, {"edges", edges}, {"t1", c.t1}, {"t2", c.t2}};
  auto amps = [](const std::vector<std::vector<Complex>>& a) {
    json t = json::array();
    for (const auto& poly : a) {
      json p = json::array();
      for (Complex z : poly) p.push_back(to_json(z));
      t.push_back(p);
    }
    return t;
  };
  if (c.amps1) out["amps1"] = amps(*c.amps1);
  if (c.amps2) out["amps2"] = amps(*c.amps2);
  return out;
}

/// Accepts a system, a cover, or a bare graph (uniform amplitudes).
inline TessellatedSystem load_system(const json& j, std::optional<double> theta) {
  if (!j.is_object()) detail::schema("top-level value must be an object");
  if (j.contains("graph")) return system_from_json(j, theta);
  auto need_theta = [&]() {
    if (theta) return *theta;
    if (!j.contains("theta")) detail::schema("no theta in the input and none given");
    return detail::as_real(j.at("theta"), "theta");
  };
  if (j.contains("vertices")) {
    CoverInput c = cover_from_json(j);
    return from_cover(c, need_theta());
  }
  if (j.contains("m")) return uniform_amplitudes(graph_from_json(j), need_theta());
  detail::schema("input is neither a system, a cover nor a graph");
}

// Reports.

inline json to_json(const ReversibilityReport& r) {
  json out = {{"reversible", r.reversible},
              {"pi", r.pi ? to_json(*r.pi) : json(nullptr)},
              {"max_cycle_defect", r.max_cycle_defect}};
  json defects = json::array();
  for (const auto& d : r.cycle_defects) defects.push_back({{"chord", d.chord}, {"delta", to_json(d.delta)}});
  out["cycle_defects"] = defects;
  out["borderline"] = r.borderline;
  return out;
}

inline json to_json(const std::vector<EigenCluster>& clusters) {
  json out = json::array();
  for (const auto& c : clusters) {
    out.push_back({{"angle", c.angle}, {"lambda", to_json(c.lambda)}, {"count", c.count}});
  }
  return out;
}

inline json to_json(const EigenBasis& basis) {
  json pairs = json::array();
  for (const auto& p : basis.pairs) {
    json e = {{"lambda", to_json(p.eigenvalue)},
              {"tag", std::string(to_string(p.tag))},
              {"vector", to_json(p.vector)}};
    if (p.witness) {
      e["chord"] = p.witness->chord;
      if (p.witness->base_chord != kNone) e["base_chord"] = p.witness->base_chord;
    }
    pairs.push_back(e);
  }
  return {{"reversible", basis.reversible},
          {"pairs", pairs},
          {"multiplicities", to_json(basis.multiplicities)}};
}

inline json to_json(const oracle::CompareReport& r) {
  return {{"pass", r.pass},
          {"expected", r.expected},
          {"pairs", r.pairs},
          {"gram_rank", r.gram_rank},
          {"max_residual", r.max_residual},
          {"max_eigenvalue_defect", r.max_eigenvalue_defect},
          {"max_subspace_sine", r.max_subspace_sine},
          {"message", r.message}};
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace stageig::io
