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

#include <gtest/gtest.h>

#include "stageig/balance.hpp"
#include "stageig/operators.hpp"
#include "support/oracles.hpp"
#include "support/random_systems.hpp"
#include "support/systems.hpp"

namespace stageig {
namespace {

using testing::Rng;

TEST(Reversibility, TreeIsAlwaysReversible) {
  Rng rng(3);
  auto g = BipartiteMultigraph::build(3, 2, {{0, 0}, {1, 0}, {1, 1}, {2, 1}});
  auto s = testing::random_system(rng, g, 1.0);
  auto r = detect_reversibility(s);
  EXPECT_TRUE(r.reversible);
  ASSERT_TRUE(r.pi.has_value());
  EXPECT_NEAR(r.pi->norm(), 1.0, 1e-14);
  EXPECT_LT(qdb_residual(s, *r.pi), 1e-14);
  EXPECT_TRUE(r.cycle_defects.empty());
}

TEST(Reversibility, KagomeQuotientAwayFromOrigin) {
  auto r = detect_reversibility(testing::kagome_quotient(1.0, 0.7, 1.9));
  EXPECT_FALSE(r.reversible);
  EXPECT_FALSE(r.pi.has_value());
  EXPECT_EQ(r.cycle_defects.size(), 2u);
}

TEST(Reversibility, UniformFourCycleHasConstantPi) {
  auto r = detect_reversibility(testing::c4_uniform(1.0));
  ASSERT_TRUE(r.reversible);
  for (Eigen::Index i = 0; i < 4; ++i) EXPECT_NEAR(std::abs((*r.pi)[i] - 0.5), 0.0, 1e-15);
}

TEST(Reversibility, BorderlineFlag) {
  // Doubled edge whose second right amplitude carries a tiny extra phase.
  auto g = BipartiteMultigraph::build(1, 1, {{0, 0}, {0, 0}});
  const double r = 1.0 / std::sqrt(2.0);
  CVector a(2), b(2);
  a << r, r;
  b << r, r * cis(1e-7);
  auto report = detect_reversibility(TessellatedSystem::make(g, a, b, 1.0));
  EXPECT_FALSE(report.reversible);
  EXPECT_TRUE(report.borderline);
  EXPECT_NEAR(report.max_cycle_defect, 1e-7, 1e-12);

  b << r, r * cis(1e-12);
  report = detect_reversibility(TessellatedSystem::make(g, a, b, 1.0));
  EXPECT_TRUE(report.reversible);
  EXPECT_FALSE(report.borderline);
}

TEST(BalancingIndex, KagomeBaseCycle) {
  const double k = 0.4, l = 1.1;
  auto s = testing::kagome_quotient(1.0, k, l);
  // e_1 = edge 0, e_2 = edge 1, u_1 = right polygon, u_2 = left polygon.
  FundamentalCycle c0{1, {0, 1}, {1, 0}};
  EXPECT_LT(std::abs(balancing_index(s, c0) - (cis(-l) - 1.0)), 1e-14);
  // Library orientation starts from the chord, which reverses the cycle.
  auto cycles = fundamental_cycles(s.graph(), spanning_tree(s.graph()));
  EXPECT_LT(std::abs(balancing_index(s, cycles[0]) - (cis(l) - 1.0)), 1e-14);
  EXPECT_LT(std::abs(balancing_index(s, cycles[1]) - (cis(k + l) - 1.0)), 1e-14);
}

TEST(BalancingIndex, TildeSwapsTessellations) {
  Rng rng(5);
  auto s = testing::random_system(rng, testing::c4_graph(), 1.0);
  auto c = fundamental_cycles(s.graph(), spanning_tree(s.graph()))[0];
  const Complex d = balancing_index(s, c);
  const Complex dt = tilde_balancing_index(s, c);
  EXPECT_LT(std::abs((1.0 + d) * (1.0 + dt) - 1.0), 1e-12);
}

TEST(BalancingIndex, UniformCycles) {
  auto s = testing::c4_uniform(1.0);
  for (const auto& c : fundamental_cycles(s.graph(), spanning_tree(s.graph()))) {
    EXPECT_LT(std::abs(balancing_index(s, c)), 1e-15);
  }
}

TEST(PathFactor, Examples) {
  Rng rng(9);
  auto s = testing::random_system(rng, testing::random_multigraph(rng, 3, 3, 8), 1.0);
  EXPECT_EQ(path_factor(s, std::vector<EdgeId>{}), Complex(1.0));

  auto g = BipartiteMultigraph::build(1, 1, {{0, 0}});
  auto one = uniform_amplitudes(g, 1.0);
  EXPECT_LT(std::abs(path_factor(one, std::vector<EdgeId>{0}) - 1.0), 1e-15);

  auto p = uniform_amplitudes(BipartiteMultigraph::build(2, 1, {{0, 0}, {1, 0}}), 1.0);
  EXPECT_LT(std::abs(path_factor(p, std::vector<EdgeId>{0, 1}) - 1.0), 1e-15);
}

TEST(PathFactor, EvenAndOddBranches) {
  Rng rng(13);
  auto s = testing::random_system(rng, testing::random_multigraph(rng, 3, 3, 9), 1.0);
  // l = 2: b(g1) a(g2) / (a(g1) b(g2)); l = 3 appends b(g3) / a(g3).
  const std::vector<EdgeId> p2{0, 1};
  const std::vector<EdgeId> p3{0, 1, 2};
  const Complex k2 = s.b(0) * s.a(1) / (s.a(0) * s.b(1));
  EXPECT_LT(std::abs(path_factor(s, p2) - k2), 1e-13);
  EXPECT_LT(std::abs(path_factor(s, p3) - k2 * s.b(2) / s.a(2)), 1e-13);
  EXPECT_LT(std::abs(path_factor(s, p3, false) * path_factor(s, p3) - 1.0), 1e-13);
}

TEST(ClassicalChain, Examples) {
  const Eigen::Matrix2d swap = (Eigen::Matrix2d() << 0, 1, 1, 0).finished();
  EXPECT_LT((classical_chain(testing::single_edge(1.0)).P - swap).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((classical_chain(testing::kagome_quotient(1.0, 0, 0)).P - swap).cwiseAbs().maxCoeff(),
            1e-15);
  auto P = classical_chain(testing::c4_uniform(1.0)).P;
  Eigen::Matrix4d expected = Eigen::Matrix4d::Zero();
  expected.topRightCorner(2, 2).setConstant(0.5);
  expected.bottomLeftCorner(2, 2).setConstant(0.5);
  EXPECT_LT((P - expected).cwiseAbs().maxCoeff(), 1e-15);
}

class RandomBalance : public ::testing::TestWithParam<int> {};

TEST_P(RandomBalance, ThreeCriteriaAgree) {
  Rng rng(800 + GetParam());
  auto g = testing::random_multigraph(rng, 25);
  const bool build_reversible = GetParam() % 2 == 0;
  auto s = build_reversible ? testing::random_reversible_system(rng, g, 1.0)
                            : testing::random_system(rng, g, 1.0);
  auto report = detect_reversibility(s);

  bool all_balanced = true;
  for (const auto& c : fundamental_cycles(g, spanning_tree(g))) {
    all_balanced = all_balanced && std::abs(balancing_index(s, c)) < kReversibilityTolerance;
  }

  auto raw = testing::raw_operators(s);
  const CMatrix ker = testing::eigenspace(raw.T, 1.0, 1e-9);
  const bool spectral = ker.cols() == 1 && testing::qdb_defect(s, ker.col(0)) < 1e-9;

  EXPECT_EQ(report.reversible, all_balanced);
  EXPECT_EQ(report.reversible, spectral);
  if (build_reversible) {
    EXPECT_TRUE(report.reversible);
  }
  if (!build_reversible && g.betti_number() > 0) {
    EXPECT_FALSE(report.reversible);
  }
  if (!report.reversible) {
    EXPECT_EQ(ker.cols(), 0);
    EXPECT_EQ(testing::eigenspace(raw.T, -1.0, 1e-9).cols(), 0);
  }
}

TEST_P(RandomBalance, ReversibleEigenfunction) {
  Rng rng(900 + GetParam());
  auto g = testing::random_multigraph(rng, 25);
  auto s = testing::random_reversible_system(rng, g, 1.3);
  auto report = detect_reversibility(s);
  ASSERT_TRUE(report.reversible);
  const CVector& pi = *report.pi;
  EXPECT_LT(qdb_residual(s, pi), 1e-12);
  EXPECT_LT(qdb_residual(s, cis(0.8) * pi), 1e-12);

  const CMatrix T = build_T(s);
  EXPECT_LT((T * pi - pi).norm(), 1e-12);
  CVector flipped = pi;
  flipped.tail(s.n()) *= -1.0;
  EXPECT_LT((T * flipped + flipped).norm(), 1e-12);
  EXPECT_EQ(testing::eigenspace(T, 1.0, 1e-9).cols(), 1);

  auto chain = classical_chain(s, report);
  ASSERT_TRUE(chain.zeta.has_value());
  const RVector& zeta = *chain.zeta;
  EXPECT_LT((chain.P * zeta - zeta).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((chain.P.colwise().sum().array() - 1.0).abs().maxCoeff(), 1e-12);
  for (int i = 0; i < g.vertex_count(); ++i) {
    for (int j = 0; j < g.vertex_count(); ++j) {
      EXPECT_NEAR(chain.P(i, j) * zeta[j], chain.P(j, i) * zeta[i], 1e-12);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomBalance, ::testing::Range(0, 30));

}  // namespace
}  // namespace stageig
