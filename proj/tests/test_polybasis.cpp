// Copyright 2026 The optipred Authors.
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

#include <cmath>
#include <numbers>
#include <random>

#include "optipred/polybasis.hpp"
#include "reference.hpp"

namespace optipred {
namespace {

TEST(PolyBasis, DimensionMatchesEnumeration) {
  EXPECT_EQ(PolyBasis(BasisKind::chebyshev, 2).dimension(), 3u);
  EXPECT_EQ(PolyBasis(BasisKind::total_degree_monomial, 1, 2).dimension(), 3u);
  EXPECT_EQ(PolyBasis(BasisKind::total_degree_monomial, 3, 2).dimension(), 10u);
  for (int d = 1; d <= 4; ++d) {
    for (int n = 0; n <= 6; ++n) {
      const PolyBasis b(BasisKind::total_degree_monomial, n, d);
      EXPECT_EQ(b.dimension(), static_cast<std::size_t>(testing::count_monomials(n, d))) << n << " " << d;
      EXPECT_EQ(polynomial_space_dimension(n, d), b.dimension());
    }
  }
}

TEST(PolyBasis, GradedLexOrder) {
  const PolyBasis b(BasisKind::total_degree_monomial, 2, 2);
  const std::vector<std::vector<int>> expected{{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
  EXPECT_EQ(b.exponents(), expected);
  EXPECT_EQ(b.term_name(4), "x1*x2");
  EXPECT_EQ(PolyBasis(BasisKind::chebyshev, 3).term_name(3), "T3(x)");
}

TEST(PolyBasis, UnivariateKindsRejectHigherDimension) {
  EXPECT_THROW(PolyBasis(BasisKind::chebyshev, 2, 2), InputError);
  EXPECT_THROW(PolyBasis(BasisKind::monomial, 2, 3), InputError);
  EXPECT_THROW(PolyBasis(BasisKind::monomial, -1), InputError);
}

TEST(EvalBasis, ChebyshevAtTwo) {
  const Eigen::VectorXcd v = eval_basis(PolyBasis(BasisKind::chebyshev, 2), EvalPoint{2.0});
  EXPECT_EQ(v(0), Complex(1.0));
  EXPECT_EQ(v(1), Complex(2.0));
  EXPECT_NEAR(v(2).real(), testing::chebyshev_closed_form(2, 2.0), 1e-12);
  EXPECT_EQ(v(2), Complex(7.0));
}

TEST(EvalBasis, MonomialAtOrigin) {
  const Eigen::VectorXcd v = eval_basis(PolyBasis(BasisKind::monomial, 2), EvalPoint{0.0});
  EXPECT_EQ(v, Eigen::Vector3cd(1, 0, 0));
}

TEST(EvalBasis, ChebyshevMatchesClosedForm) {
  const PolyBasis b(BasisKind::chebyshev, 9);
  for (double x : {-3.0, -1.2, -0.7, 0.0, 0.3, 0.99, 1.5, 4.0}) {
    const Eigen::VectorXd v = b.eval(Eigen::VectorXd::Constant(1, x));
    for (int k = 0; k <= 9; ++k) {
      const double ref = testing::chebyshev_closed_form(k, x);
      EXPECT_NEAR(v(k), ref, 1e-12 * (1.0 + std::abs(ref))) << "k=" << k << " x=" << x;
    }
  }
  const Eigen::VectorXd t4 = PolyBasis(BasisKind::chebyshev, 4).eval(Eigen::VectorXd::Constant(1, std::cos(std::numbers::pi / 4)));
  EXPECT_NEAR(t4(4), -1.0, 1e-14);
}

TEST(EvalBasis, ComplexArgument) {
  // T_2(i) = 2 i^2 - 1 = -3, T_3(i) = 4 i^3 - 3 i = -7 i.
  const Eigen::VectorXcd v = eval_basis(PolyBasis(BasisKind::chebyshev, 3), EvalPoint(std::vector<Complex>{{0, 1}}));
  EXPECT_EQ(v(2), Complex(-3, 0));
  EXPECT_EQ(v(3), Complex(0, -7));
}

TEST(EvalBasis, TensorChebyshevProduct) {
  const PolyBasis b(BasisKind::total_degree_chebyshev_product, 3, 2);
  const Eigen::VectorXd v = b.eval(Eigen::Vector2d(0.4, -1.7));
  for (std::size_t j = 0; j < b.dimension(); ++j) {
    const auto& e = b.exponents()[j];
    EXPECT_NEAR(v(static_cast<Eigen::Index>(j)),
                testing::chebyshev_closed_form(e[0], 0.4) * testing::chebyshev_closed_form(e[1], -1.7), 1e-12);
  }
}

TEST(EvalBasis, DimensionMismatchThrows) {
  EXPECT_THROW(eval_basis(PolyBasis(BasisKind::total_degree_monomial, 2, 2), EvalPoint{1.0}), InputError);
}

TEST(EvalBasis, GradedPrefixProperty) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2, 2);
  for (auto kind : {BasisKind::total_degree_monomial, BasisKind::total_degree_chebyshev_product}) {
    const PolyBasis big(kind, 5, 3);
    for (int trial = 0; trial < 20; ++trial) {
      const Eigen::Vector3d x(u(rng), u(rng), u(rng));
      const Eigen::VectorXd full = big.eval(x);
      for (int n = 0; n < 5; ++n) {
        const PolyBasis small(kind, n, 3);
        EXPECT_EQ(full.head(static_cast<Eigen::Index>(small.dimension())), small.eval(x));
      }
    }
  }
}

TEST(ChebyshevExtremePoints, SmallDegrees) {
  EXPECT_EQ(chebyshev_extreme_points(1), Eigen::Vector2d(-1, 1));
  EXPECT_EQ(chebyshev_extreme_points(2), Eigen::Vector3d(-1, 0, 1));
  const Eigen::VectorXd x4 = chebyshev_extreme_points(4);
  const double h = std::sqrt(2.0) / 2.0;
  ASSERT_EQ(x4.size(), 5);
  EXPECT_EQ(x4(0), -1.0);
  EXPECT_NEAR(x4(1), -h, 1e-15);
  EXPECT_EQ(x4(2), 0.0);
  EXPECT_NEAR(x4(3), h, 1e-15);
  EXPECT_EQ(x4(4), 1.0);
  EXPECT_THROW(chebyshev_extreme_points(0), InputError);
}

TEST(ChebyshevExtremePoints, Alternation) {
  for (int n = 1; n <= 25; ++n) {
    const Eigen::VectorXd x = chebyshev_extreme_points(n);
    const PolyBasis b(BasisKind::chebyshev, n);
    for (int k = 0; k <= n; ++k) {
      if (k > 0) {
        EXPECT_LT(x(k - 1), x(k));
      }
      const double t = b.eval(Eigen::VectorXd::Constant(1, x(k)))(n);
      const double expected = ((n - k) % 2 == 0) ? 1.0 : -1.0;
      EXPECT_NEAR(t, expected, 1e-12) << "n=" << n << " k=" << k;
    }
  }
}

TEST(LagrangeValues, TwoNodes) {
  const Eigen::VectorXcd c = lagrange_values(PolyBasis(BasisKind::chebyshev, 1), Eigen::Vector2d(-1, 1), EvalPoint{2.0});
  EXPECT_NEAR(c(0).real(), -0.5, 1e-15);
  EXPECT_NEAR(c(1).real(), 1.5, 1e-15);
}

TEST(LagrangeValues, ThreeNodesAgainstProductFormula) {
  const auto ref = testing::lagrange_product({-1, 0, 1}, 2.0);
  const Eigen::VectorXcd c = lagrange_values(PolyBasis(BasisKind::chebyshev, 2), Eigen::Vector3d(-1, 0, 1), EvalPoint{2.0});
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(std::abs(c(i) - ref[static_cast<std::size_t>(i)]), 0.0, 1e-14);
  EXPECT_NEAR(c(0).real(), 1.0, 1e-14);
  EXPECT_NEAR(c(1).real(), -3.0, 1e-14);
  EXPECT_NEAR(c(2).real(), 3.0, 1e-14);
}

TEST(LagrangeValues, TriangleClosedForm) {
  Eigen::MatrixXd nodes(3, 2);
  nodes << 0, 0, 0, 1, 1, 0;
  const PolyBasis b(BasisKind::total_degree_monomial, 1, 2);
  for (auto [x0, y0] : {std::pair{1.0, 1.0}, {2.0, 0.5}, {0.3, 0.7}, {-0.4, 3.0}}) {
    const Eigen::VectorXcd c = lagrange_values(b, nodes, EvalPoint{x0, y0});
    EXPECT_NEAR(c(0).real(), 1 - x0 - y0, 1e-14);
    EXPECT_NEAR(c(1).real(), y0, 1e-14);
    EXPECT_NEAR(c(2).real(), x0, 1e-14);
  }
}

TEST(LagrangeValues, SingularVandermondeThrows) {
  Eigen::MatrixXd collinear(3, 2);
  collinear << 0, 0, 1, 1, 2, 2;
  EXPECT_THROW(lagrange_values(PolyBasis(BasisKind::total_degree_monomial, 1, 2), collinear, EvalPoint{3.0, 0.0}),
               UnisolvenceError);
  EXPECT_THROW(lagrange_values(PolyBasis(BasisKind::chebyshev, 2), Eigen::Vector2d(0, 1), EvalPoint{3.0}), InputError);
}

TEST(LagrangeValues, PartitionOfUnityAndDeltaProperty) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 4;
    const PolyBasis b(BasisKind::total_degree_monomial, n, 2);
    const auto m = static_cast<Eigen::Index>(b.dimension());
    Eigen::MatrixXd nodes(m, 2);
    for (Eigen::Index i = 0; i < m; ++i) nodes.row(i) = Eigen::RowVector2d(u(rng), u(rng));
    const EvalPoint z(std::vector<Complex>{{1.0 + u(rng), u(rng)}, {u(rng), 0.5 * u(rng)}});
    const Eigen::VectorXcd c = lagrange_values(b, nodes, z);
    EXPECT_NEAR(std::abs(c.sum() - Complex(1.0)), 0.0, 1e-8);
    for (Eigen::Index j = 0; j < m; ++j) {
      const Eigen::VectorXcd delta = lagrange_values(b, nodes, EvalPoint::real(Eigen::VectorXd(nodes.row(j).transpose())));
      for (Eigen::Index i = 0; i < m; ++i) EXPECT_NEAR(std::abs(delta(i) - Complex(i == j ? 1.0 : 0.0)), 0.0, 1e-10);
    }
  }
}

}  // namespace
}  // namespace optipred
