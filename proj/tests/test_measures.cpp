#include <gtest/gtest.h>

#include "cases.hpp"

using namespace bratteli;
using cases::frac;
using cases::matrix;

TEST(MeasureValue, InfinityArithmetic) {
  auto inf = MeasureValue::infinity();
  MeasureValue one(Real(1));
  EXPECT_TRUE((inf + one).is_infinite());
  EXPECT_EQ((one + one).str(), "2");
  EXPECT_EQ(inf.str(), "inf");
  EXPECT_TRUE(one < inf);
  EXPECT_FALSE(inf < one);
  EXPECT_THROW(inf.value(), std::logic_error);
}

TEST(Ergodic, CylinderValuesScaleByLambda) {
  auto dc = decompose(cases::two_blocks().base);
  auto mu = ergodic_measure(dc, 1);
  EXPECT_EQ(mu.value(0, 1).rational(), frac(2, 3));
  EXPECT_EQ(mu.value(1, 3).rational(), frac(1, 27));
  EXPECT_THROW(mu.value(0, 0), std::invalid_argument);
}

TEST(Ergodic, EnumerationAndSupport) {
  auto dc = decompose(cases::five_adic());
  auto mus = enumerate_ergodic(dc);
  ASSERT_EQ(mus.size(), 2u);
  EXPECT_EQ(mus[1].xi[0].rational(), frac(1, 121));
  EXPECT_EQ(borel_invariant(dc), 2u);
  EXPECT_EQ(minimal_components(dc), (std::vector<std::size_t>{0}));
  auto sup = support_classes(dc, mus[1]);
  EXPECT_TRUE(sup.full);
  EXPECT_FALSE(support_classes(dc, mus[0]).full);
}

TEST(Ergodic, RequiresPrimitiveBlocks) {
  auto dc = decompose(StationaryDiagram(matrix({{0, 2}, {2, 0}})));
  EXPECT_THROW(enumerate_ergodic(dc), PreconditionFailed);
}

TEST(Invariant, FromPointAndBarycentric) {
  auto dc = decompose(cases::two_blocks().base);
  auto m = measure_from_point(dc, {frac(5, 6), frac(1, 6)});
  ASSERT_EQ(m.barycentric.size(), 2u);
  EXPECT_EQ(m.barycentric[0].rational(), frac(1, 2));
  EXPECT_EQ(m.value(1, 1).rational(), frac(1, 6));
  EXPECT_THROW(measure_from_point(dc, {frac(1, 2), frac(1, 2)}), NotInD);
  EXPECT_THROW(measure_from_point(dc, {frac(1, 2), frac(1, 4)}), NotInD);
  EXPECT_THROW(measure_from_point(dc, {1}), DimensionMismatch);
  auto b = measure_from_barycentric(dc, {Real(frac(1, 3)), Real(frac(2, 3))});
  EXPECT_EQ(b.value(0, 1).rational(), frac(1, 3) + frac(2, 3) * frac(2, 3));
  EXPECT_THROW(measure_from_barycentric(dc, {Real(1)}), DimensionMismatch);
}

TEST(Tail, AtomicFlagAndInfiniteVertices) {
  auto dc = decompose(StationaryDiagram(matrix({{2, 0}, {1, 1}})));
  auto nus = enumerate_infinite(dc);
  ASSERT_EQ(nus.size(), 1u);
  EXPECT_TRUE(nus[0].atomic);
  EXPECT_TRUE(nus[0].value(0, 4).is_infinite());
  EXPECT_EQ(nus[0].value(1, 4).str(), "1");
  EXPECT_TRUE(enumerate_infinite(dc, false).empty());
}

TEST(Tail, PartialSumsConverge) {
  auto dc = decompose(cases::b2());
  auto nu = tail_construction(dc, 1);
  for (std::size_t v = 0; v < 3; ++v) {
    if (nu.level_one[v].is_infinite()) continue;
    auto s = tail_partial_sum(dc, nu, v, 60);
    EXPECT_NEAR(static_cast<double>(s.value()), static_cast<double>(nu.level_one[v].value().value()), 1e-9);
  }
  auto zero = decompose(StationaryDiagram(matrix({{2, 0}, {1, 0}})));
  EXPECT_THROW(tail_construction(zero, zero.class_of[1]), ZeroBlock);
}

TEST(Analyze, TelescopesImprimitiveBlocks) {
  StationaryDiagram d(matrix({{0, 2, 0}, {2, 0, 0}, {1, 1, 3}}));
  auto an = analyze(d);
  EXPECT_EQ(an.q, 2u);
  ASSERT_TRUE(an.aperiodicity.aperiodic());
  ASSERT_EQ(an.ergodic.size(), 3u);
  // Level vectors at original levels satisfy A p(n+1) = p(n).
  auto a = d.a_matrix();
  for (std::size_t k = 0; k < an.ergodic.size(); ++k)
    for (std::size_t n = 1; n <= 6; ++n) {
      auto p = an.ergodic_level_vector(k, n);
      auto next = an.ergodic_level_vector(k, n + 1);
      for (std::size_t i = 0; i < 3; ++i) {
        Real s = 0;
        for (std::size_t w = 0; w < 3; ++w) s += Real(Rational(a[i][w])) * next[w];
        EXPECT_EQ(s.rational(), p[i].rational());
      }
    }
}

TEST(Analyze, NonAperiodicHasNoMeasures) {
  auto an = analyze(StationaryDiagram(matrix({{1, 0}, {1, 2}})));
  EXPECT_FALSE(an.aperiodicity.aperiodic());
  EXPECT_TRUE(an.ergodic.empty());
}
