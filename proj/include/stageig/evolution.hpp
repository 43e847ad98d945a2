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

#include <string>
#include <vector>

#include "stageig/error.hpp"
#include "stageig/operators.hpp"
#include "stageig/tessellation.hpp"
#include "stageig/types.hpp"

namespace stageig {

/// Probability distributions |ψ_t(u)|² for t = 0..steps under ψ_{t+1} = U ψ_t.
inline std::vector<RVector> evolve(const CMatrix& U, const CVector& initial, int steps) {
  if (steps < 0) throw Error(ErrorCode::IndexOutOfRange, "steps must be non-negative");
  if (initial.size() != U.rows()) {
    throw Error(ErrorCode::IndexOutOfRange, "initial state has " + std::to_string(initial.size()) +
                                                " entries, expected " + std::to_string(U.rows()));
  }
  const double norm = initial.norm();
  if (norm == 0.0) throw Error(ErrorCode::NotNormalized, "initial state is zero");
  CVector psi = initial / norm;
  std::vector<RVector> out;
  out.reserve(static_cast<std::size_t>(steps) + 1);
  out.push_back(psi.cwiseAbs2());
  for (int t = 0; t < steps; ++t) {
    psi = U * psi;
    out.push_back(psi.cwiseAbs2());
  }
  return out;
}

inline std::vector<RVector> evolve(const TessellatedSystem& s, int seed_vertex, int steps) {
  if (seed_vertex < 0 || seed_vertex >= s.nu()) {
    throw Error(ErrorCode::IndexOutOfRange, "seed vertex " + std::to_string(seed_vertex) +
                                                " outside [0, " + std::to_string(s.nu()) + ")");
  }
  CVector delta = CVector::Zero(s.nu());
  delta[seed_vertex] = 1.0;
  return evolve(build_U(s), delta, steps);
}

}  // namespace stageig
