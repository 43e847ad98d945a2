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
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "stageig/error.hpp"
#include "stageig/multigraph.hpp"
#include "stageig/operators.hpp"
#include "stageig/tessellation.hpp"
#include "stageig/types.hpp"

namespace stageig::kagome {

/// Quasi-momentum (k, l).
struct MomentumPoint {
  double k = 0.0;
  double l = 0.0;
};

inline constexpr double kSingularGuard = 1e-6;

/// W_{k,l} = diag(1, e^{il}, e^{i(k+l)}): phases picked up by the three
/// corners of a right polygon, which sit in cells (x,y), (x,y+1), (x+1,y+1).
inline CVector phases(const MomentumPoint& p) {
  CVector w(3);
  w << 1.0, cis(p.l), cis(p.k + p.l);
  return w;
}

inline CVector uniform_polygon() { return CVector::Constant(3, 1.0 / std::sqrt(3.0)); }

/// Quotient of the lattice under translations: two polygons joined by three
/// parallel edges, with a ≡ 1/√3 and b = W_{k,l} (1,1,1)/√3.
inline TessellatedSystem quotient_system(double theta, const MomentumPoint& p) {
  auto g = BipartiteMultigraph::build(1, 1, {{0, 0}, {0, 0}, {0, 0}});
  return TessellatedSystem::make(std::move(g), uniform_polygon(),
                                 phases(p).cwiseProduct(uniform_polygon()), theta);
}

/// Û_θ(k,l) = -e^{iθE_2'} e^{iθE_1} with E_1 = 2|α><α| - I and
/// E_2' = 2|β'><β'| - I, β' = W_{k,l} β.
inline CMatrix reduced_operator(double theta, const MomentumPoint& p) {
  if (!(theta > 0.0 && theta < kPi)) {
    throw Error(ErrorCode::ThetaOutOfRange, "theta = " + std::to_string(theta));
  }
  const CVector alpha = uniform_polygon();
  const CVector beta = phases(p).cwiseProduct(uniform_polygon());
  const CMatrix I = CMatrix::Identity(3, 3);
  const CMatrix E1 = 2.0 * alpha * alpha.adjoint() - I;
  const CMatrix E2 = 2.0 * beta * beta.adjoint() - I;
  return -involution_exp(E2, theta) * involution_exp(E1, theta);
}

struct Dispersion {
  double cos_eta = 0.0;
  double eta = 0.0;      // in [0, π]
  Complex band_plus;     // e^{iη}
  Complex band_minus;    // e^{-iη}
  Complex flat;          // -e^{-2iθ}
};

/// Band structure at (k, l):
///   cos η = -1 + (2/3) sin²θ + (4/9) sin²θ (cos k + cos l + cos(k+l)),
/// i.e. cos η = 2 μ² sin²θ - 1 with μ = |1 + e^{il} + e^{i(k+l)}| / 3, plus
/// the flat band -e^{-2iθ}.
///
/// η itself is taken from the half-angle split
///   sin²(η/2) = cos²θ + (4/9) sin²θ (sin²(k/2) + sin²(l/2) + sin²((k+l)/2)),
///   cos²(η/2) = μ² sin²θ,
/// whose terms are all non-negative; acos(cos η) loses half the digits
/// near η = 0 and η = π.
inline Dispersion dispersion(double theta, const MomentumPoint& p) {
  if (!(theta > 0.0 && theta < kPi)) {
    throw Error(ErrorCode::ThetaOutOfRange, "theta = " + std::to_string(theta));
  }
  const double s2 = std::sin(theta) * std::sin(theta);
  const double c = -1.0 + 2.0 * s2 / 3.0 +
                   4.0 * s2 / 9.0 * (std::cos(p.k) + std::cos(p.l) + std::cos(p.k + p.l));
  if (std::abs(c) > 1.0 + 1e-12) {
    throw Error(ErrorCode::FormulaOutOfRange, "cos eta = " + std::to_string(c));
  }
  auto sq = [](double x) { return x * x; };
  const double q = sq(std::sin(p.k / 2)) + sq(std::sin(p.l / 2)) + sq(std::sin((p.k + p.l) / 2));
  const double half_sin2 = sq(std::cos(theta)) + 4.0 * s2 / 9.0 * q;
  const double half_cos2 = s2 * std::norm(1.0 + cis(p.l) + cis(p.k + p.l)) / 9.0;

  Dispersion d;
  d.cos_eta = std::clamp(c, -1.0, 1.0);
  d.eta = 2.0 * std::atan2(std::sqrt(half_sin2), std::sqrt(half_cos2));
  d.band_plus = cis(d.eta);
  d.band_minus = cis(-d.eta);
  d.flat = -cis(-2.0 * theta);
  return d;
}

/// Flat-band eigenvector scaled to be entire in (k, l):
///   (1 - e^{-ik}, e^{-ik} - e^{il}, e^{il} - 1).
/// It vanishes only at (0, 0) and is the Fourier transform of the
/// localized hexagon vector centred at the origin.
inline CVector momentum_eigenvector_regular(const MomentumPoint& p) {
  CVector v(3);
  v << 1.0 - cis(-p.k), cis(-p.k) - cis(p.l), cis(p.l) - 1.0;
  return v;
}

/// (1, (e^{-ik} - e^{il}) / (1 - e^{-ik}), (e^{il} - 1) / (1 - e^{-ik})),
/// eigenvalue -e^{-2iθ}. Undefined on the line k = 0, where
/// momentum_eigenvector_regular still applies.
inline CVector momentum_eigenvector(const MomentumPoint& p) {
  const Complex den = 1.0 - cis(-p.k);
  if (std::abs(den) < kSingularGuard) {
    throw Error(ErrorCode::SingularMomentum, "k = " + std::to_string(p.k) + " is on the k = 0 line");
  }
  return momentum_eigenvector_regular(p) / den;
}

/// Lattice site (cell x, cell y, corner j) with j in {1, 2, 3}.
struct Site {
  int x = 0;
  int y = 0;
  int j = 1;
};

struct LocalizedEigenvector {
  int center_x = 0;
  int center_y = 0;
  struct Entry {
    Site site;
    int value;
  };
  std::vector<Entry> entries;  // the six sites of the hexagon
};

/// ±1 on the hexagon around cell (x, y):
///   +1 at (x,y,1), (x,y+1,3), (x-1,y,2); -1 at (x,y,3), (x,y+1,2), (x-1,y,1).
inline LocalizedEigenvector localized_eigenvector(int x, int y) {
  LocalizedEigenvector v{x, y, {}};
  v.entries = {{{x, y, 1}, +1},     {{x, y + 1, 3}, +1}, {{x - 1, y, 2}, +1},
               {{x, y, 3}, -1},     {{x, y + 1, 2}, -1}, {{x - 1, y, 1}, -1}};
  return v;
}

inline constexpr int kMinPatch = 4;

/// Periodic L x L patch of the lattice. Left polygons are the cells
/// {(x,y,1), (x,y,2), (x,y,3)}; right polygons are
/// {(x,y,1), (x,y+1,2), (x+1,y+1,3)}.
class Patch {
 public:
  explicit Patch(int size) : size_(size) {
    if (size < kMinPatch) {
      throw Error(ErrorCode::PatchTooSmall, "periodic patch must be at least " +
                                                std::to_string(kMinPatch) + "x" +
                                                std::to_string(kMinPatch));
    }
  }

  int size() const { return size_; }
  int vertex_count() const { return 3 * size_ * size_; }

  int index(const Site& s) const {
    auto wrap = [&](int v) { return ((v % size_) + size_) % size_; };
    return (wrap(s.x) * size_ + wrap(s.y)) * 3 + (s.j - 1);
  }

  CoverInput cover() const {
    CoverInput c;
    c.vertex_count = vertex_count();
    for (int x = 0; x < size_; ++x) {
      for (int y = 0; y < size_; ++y) {
        c.t1.push_back({index({x, y, 1}), index({x, y, 2}), index({x, y, 3})});
        c.t2.push_back({index({x, y, 1}), index({x, y + 1, 2}), index({x + 1, y + 1, 3})});
      }
    }
    for (const auto* t : {&c.t1, &c.t2}) {
      for (const auto& poly : *t) {
        for (std::size_t i = 0; i < poly.size(); ++i) {
          for (std::size_t k = i + 1; k < poly.size(); ++k) c.edges.push_back({poly[i], poly[k]});
        }
      }
    }
    return c;
  }

  TessellatedSystem system(double theta) const { return from_cover(cover(), theta); }

  CVector embed(const LocalizedEigenvector& v) const {
    CVector psi = CVector::Zero(vertex_count());
    for (const auto& e : v.entries) psi[index(e.site)] += static_cast<double>(e.value);
    return psi;
  }

 private:
  int size_;
};

/// ||U ψ + e^{-2iθ} ψ|| / ||ψ|| for the hexagon vector on a periodic patch.
inline double localized_residual(const Patch& patch, double theta, int x, int y) {
  const CMatrix U = build_U(patch.system(theta));
  const CVector psi = patch.embed(localized_eigenvector(x, y));
  return (U * psi + cis(-2.0 * theta) * psi).norm() / psi.norm();
}

/// Inverse Fourier transform of momentum_eigenvector_regular on an N x N
/// trapezoid grid, evaluated at one site.
inline Complex lift_to_site(int grid, const Site& s) {
  Complex sum = 0.0;
  const double step = 2.0 * kPi / grid;
  for (int a = 0; a < grid; ++a) {
    for (int b = 0; b < grid; ++b) {
      const MomentumPoint p{a * step, b * step};
      sum += momentum_eigenvector_regular(p)[s.j - 1] * cis(-(p.k * s.x + p.l * s.y));
    }
  }
  return sum / static_cast<double>(grid * grid);
}

}  // namespace stageig::kagome
