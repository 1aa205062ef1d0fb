#include <cmath>

#include <gtest/gtest.h>

#include "cases.hpp"

using namespace bratteli;
using cases::frac;
using cases::matrix;

TEST(Scc, ComponentsOfATriangularMatrix) {
  auto scc = strongly_connected_components(matrix({{1, 1, 0}, {1, 1, 0}, {0, 1, 2}}));
  ASSERT_EQ(scc.components.size(), 2u);
  EXPECT_EQ(scc.component_of[0], scc.component_of[1]);
  EXPECT_NE(scc.component_of[0], scc.component_of[2]);
}

TEST(Scc, IrreducibilityAndPeriod) {
  EXPECT_TRUE(is_irreducible(matrix({{0, 2}, {2, 0}})));
  EXPECT_FALSE(is_irreducible(matrix({{1, 1}, {0, 1}})));
  EXPECT_FALSE(is_irreducible(matrix({{0}})));
  EXPECT_EQ(imprimitivity_index(matrix({{0, 2}, {2, 0}})), 2u);
  EXPECT_EQ(imprimitivity_index(matrix({{0, 1, 0}, {0, 0, 1}, {1, 0, 0}})), 3u);
  EXPECT_EQ(imprimitivity_index(matrix({{1, 1}, {1, 0}})), 1u);
  EXPECT_THROW(imprimitivity_index(matrix({{0}})), ZeroBlock);
}

TEST(Perron, IntegerRadiusIsExact) {
  auto p = perron(matrix({{1, 1}, {1, 1}}));
  ASSERT_TRUE(p.rho.is_exact());
  EXPECT_EQ(p.rho.value.rational(), 2);
  EXPECT_EQ(p.exact_vector, (RatVector{frac(1, 2), frac(1, 2)}));
}

TEST(Perron, IrrationalRadiusCarriesABracket) {
  auto rho = spectral_radius(matrix({{1, 1}, {2, 1}}));
  ASSERT_FALSE(rho.is_exact());
  const long double expected = 1.0L + std::sqrt(2.0L);
  EXPECT_NEAR(static_cast<double>(rho.approx()), static_cast<double>(expected), 1e-12);
  EXPECT_LE(rho.lower, expected + 1e-15L);
  EXPECT_GE(rho.upper, expected - 1e-15L);
  EXPECT_LT(rho.residual_bound, 1e-12L);
}

TEST(Perron, RejectsZeroAndReducibleBlocks) {
  EXPECT_THROW(perron(matrix({{0}})), ZeroBlock);
  EXPECT_THROW(perron(matrix({{1, 1}, {0, 1}})), PreconditionFailed);
}

TEST(Compare, ExactAndApproximate) {
  auto two = NumericValue::exact(2);
  auto silver = spectral_radius(matrix({{1, 1}, {2, 1}}));
  EXPECT_EQ(compare(two, two), 0);
  EXPECT_EQ(compare(silver, two), 1);
  EXPECT_EQ(compare(two, silver), -1);
  NumericValue near = silver;
  near.value = Real::approx(silver.approx() + 1e-12L);
  EXPECT_THROW(compare(near, silver), AmbiguousComparison);
}

TEST(Decompose, ClassesInTopologicalOrder) {
  auto dc = decompose(cases::b2());
  ASSERT_EQ(dc.size(), 3u);
  EXPECT_EQ(dc.classes[0].vertices, (std::vector<std::size_t>{1}));
  EXPECT_TRUE(dc.classes[0].distinguished);
  EXPECT_FALSE(dc.classes[1].distinguished);
  EXPECT_FALSE(dc.classes[2].distinguished);
  EXPECT_TRUE(dc.above(0, 1));
  EXPECT_TRUE(dc.above(0, 2));
  EXPECT_FALSE(dc.accesses(1, 2));
  EXPECT_EQ(dc.initial_classes, (std::vector<std::size_t>{0}));
  auto edges = reduced_graph_edges(dc);
  EXPECT_EQ(edges.size(), 2u);
}

TEST(Decompose, DistinguishedNeedsStrictlyLargerRadius) {
  auto dc = decompose(cases::two_blocks().base);
  EXPECT_EQ(distinguished_classes(dc), (std::vector<std::size_t>{0, 1}));
  auto dc1 = decompose(cases::b1());
  EXPECT_EQ(distinguished_classes(dc1), (std::vector<std::size_t>{0}));
}

TEST(Decompose, ZeroClassesAreNeverDistinguished) {
  auto dc = decompose(StationaryDiagram(matrix({{2, 0}, {1, 0}})));
  ASSERT_EQ(dc.size(), 2u);
  std::size_t zero = dc.class_of[1];
  EXPECT_TRUE(dc.classes[zero].is_zero);
  EXPECT_FALSE(dc.classes[zero].distinguished);
}

TEST(Eigenvector, TwoBlocksFullySupported) {
  auto ed = distinguished_eigenvector(cases::two_blocks().base, 1);
  EXPECT_EQ(ed.exact_xi(), (RatVector{frac(2, 3), frac(1, 3)}));
  EXPECT_EQ(ed.support, (std::vector<std::size_t>{0, 1}));
  EXPECT_THROW(distinguished_eigenvector(cases::b1(), 1), NotDistinguished);
}

TEST(Eigenvector, SatisfiesTheEigenEquation) {
  for (const auto& d : {cases::five_adic(), cases::weak_mixing()}) {
    auto dc = decompose(d);
    for (auto alpha : distinguished_classes(dc)) {
      auto ed = distinguished_eigenvector(dc, alpha);
      auto x = ed.exact_xi();
      auto lambda = ed.lambda.value.rational();
      for (std::size_t i = 0; i < x.size(); ++i) {
        Rational s = 0;
        for (std::size_t j = 0; j < x.size(); ++j) s += Rational(dc.a[i][j]) * x[j];
        EXPECT_EQ(s, lambda * x[i]);
      }
    }
  }
}

TEST(Eigenvector, ApproximateModeResidual) {
  auto dc = decompose(diagram_from_substitution(cases::sigma()).base);
  auto ed = distinguished_eigenvector(dc, 0);
  EXPECT_FALSE(ed.is_exact());
  EXPECT_LT(ed.residual, 1e-12L);
  EXPECT_TRUE(ed.xi[2].is_zero());
}

TEST(Core, MembershipOfRaysAndOutsiders) {
  auto dc = decompose(cases::two_blocks().base);
  auto in = core_membership(dc, {frac(5, 6), frac(1, 6)});
  EXPECT_EQ(in.kind, CoreVerdict::Kind::InCore);
  ASSERT_EQ(in.coefficients.size(), 2u);
  EXPECT_EQ(in.coefficients[0].rational(), frac(1, 2));
  EXPECT_EQ(in.coefficients[1].rational(), frac(1, 2));
  auto out = core_membership(dc, {frac(1, 2), frac(1, 2)});
  EXPECT_EQ(out.kind, CoreVerdict::Kind::NotInCore);
  EXPECT_FALSE(core_preimage(dc.a, {frac(1, 2), frac(1, 2)}, out.failing_k).feasible);
  EXPECT_THROW(core_membership(dc, {1}), DimensionMismatch);
}

TEST(Aperiodicity, Verdicts) {
  EXPECT_TRUE(aperiodicity_check(decompose(cases::b1())).aperiodic());
  auto identity = aperiodicity_check(decompose(StationaryDiagram(matrix({{1, 0}, {0, 1}}))));
  EXPECT_EQ(identity.kind, AperiodicityVerdict::Kind::NotAperiodic);
  auto invalid = aperiodicity_check(decompose(StationaryDiagram(matrix({{0, 0}, {1, 1}}))));
  EXPECT_EQ(invalid.kind, AperiodicityVerdict::Kind::InvalidDiagram);
  // A unit class fed by a growing class is fine.
  EXPECT_TRUE(aperiodicity_check(decompose(StationaryDiagram(matrix({{2, 0}, {1, 1}})))).aperiodic());
  EXPECT_THROW(require_aperiodic(decompose(StationaryDiagram(matrix({{1}})))), NotAperiodic);
}

TEST(Telescoping, PrimitivityPower) {
  StationaryDiagram d(matrix({{0, 2}, {2, 0}}));
  auto dc = decompose(d);
  EXPECT_FALSE(primitive_blocks(dc));
  EXPECT_EQ(primitivity_power(dc), 2u);
  auto [t, q] = telescope_to_primitive(d);
  EXPECT_EQ(q, 2u);
  EXPECT_TRUE(primitive_blocks(decompose(t)));
}
