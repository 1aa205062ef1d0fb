#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "cases.hpp"

using namespace bratteli;
using cases::matrix;

TEST(Vershik, MinMaxAndSuccessorWalk) {
  auto od = cases::two_blocks();
  auto p = min_path(od, 1, 3);
  EXPECT_EQ(rank(od, p), 0);
  EXPECT_FALSE(is_maximal(od, p));
  BigInt steps = 0;
  while (auto next = successor(od, p)) {
    p = *next;
    ++steps;
    EXPECT_EQ(rank(od, p), steps);
  }
  EXPECT_EQ(steps + 1, heights(od.base, 3).values[1]);
  EXPECT_EQ(p, max_path(od, 1, 3));
  EXPECT_TRUE(is_maximal(od, p));
}

TEST(Vershik, PathAtRankInvertsRank) {
  auto od = default_order(cases::b2());
  auto table = height_table(od.base, 4);
  for (std::size_t v = 0; v < 3; ++v)
    for (BigInt r = 0; r < table[4][v]; ++r) EXPECT_EQ(rank(od, path_at_rank(od, v, 4, r)), r);
}

TEST(Vershik, QRequiresCommonEndpoint) {
  auto od = cases::two_blocks();
  auto a = min_path(od, 1, 2), b = max_path(od, 1, 2);
  EXPECT_EQ(Q(od, a, b), 4);
  EXPECT_EQ(Q(od, b, a), -4);
  EXPECT_THROW(Q(od, a, min_path(od, 0, 2)), EndpointMismatch);
}

TEST(Vershik, OrderedTelescopeMatchesSubstitutionPower) {
  auto od = cases::two_blocks();
  auto t = telescope(od, 2);
  EXPECT_EQ(t.base.incidence(), matrix_power(od.base.incidence(), 2));
  EXPECT_EQ(substitution_from_diagram(t), power(substitution_from_diagram(od), 2));
}

TEST(Vershik, RestrictKeepsRelativeOrder) {
  auto od = cases::two_blocks();
  auto r = restrict(od, {0});
  EXPECT_EQ(r.size(), 1u);
  EXPECT_EQ(r.order[0], (std::vector<std::size_t>{0, 0}));
}

TEST(Diamonds, CanonicalizedAndEnumerated) {
  auto od = cases::two_blocks();
  auto d = make_diamond({LegEdge{1, 1, 2}}, {LegEdge{1, 1, 0}});
  EXPECT_EQ(d.omega[0].index, 0u);
  EXPECT_THROW(make_diamond({LegEdge{1, 1, 0}}, {LegEdge{1, 1, 0}}), std::invalid_argument);
  EXPECT_THROW(make_diamond({LegEdge{0, 1, 0}}, {LegEdge{1, 1, 0}}), EndpointMismatch);
  auto dc = decompose(od.base);
  // Three parallel edges 2 -> 2 give three length-1 diamonds.
  EXPECT_EQ(enumerate_diamonds(od, dc, 1).size(), 3u);
  auto all = enumerate_diamonds(od, std::nullopt, 2);
  EXPECT_GT(all.size(), 3u);
}

TEST(PSequence, FormulaMatchesRankDifference) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 10; ++t) {
    auto od = cases::random_ordered(rng, 3, 2);
    for (const auto& dm : enumerate_diamonds(od, std::nullopt, 2))
      for (std::size_t n = 1; n <= 4; ++n) EXPECT_EQ(P_formula(od, dm, n), P_brute(od, dm, n));
  }
}

TEST(PSequence, RecurrenceAndExtension) {
  auto od = cases::two_blocks();
  auto dm = make_diamond({LegEdge{1, 1, 0}}, {LegEdge{1, 1, 1}});
  auto seq = P_sequence(od, dm, 5);
  extend(seq, 30);
  auto direct = P_sequence(od, dm, 30);
  EXPECT_EQ(seq.values, direct.values);
  EXPECT_TRUE(direct.satisfies_recurrence());
}

TEST(Eigenvalues, DecisiveWindow) {
  EXPECT_EQ(max_prime_exponent(BigInt(64)), 6u);
  EXPECT_EQ(max_prime_exponent(BigInt(90)), 2u);
  EXPECT_EQ(max_prime_exponent(BigInt(1)), 0u);
  auto w = decisive_window(3, BigInt(25));
  EXPECT_EQ(w.first, 7u);
  EXPECT_EQ(w.last, 9u);
}

TEST(Eigenvalues, ChecksAndSearch) {
  auto od = cases::two_blocks();
  auto dc = decompose(od.base);
  EXPECT_TRUE(eigenvalue_check(od, dc, 1, Rational(0), Window{2, 6}).pass);
  auto third = eigenvalue_check(od, dc, 1, Rational(1, 3), Window{2, 6});
  EXPECT_FALSE(third.pass);
  EXPECT_EQ(third.failing_n, 2u);
  // On the minimal component every dyadic theta is an eigenvalue.
  EXPECT_TRUE(eigenvalue_check(od, dc, 0, Rational(3, 8), Window{4, 12}).pass);
  EXPECT_THROW(eigenvalue_check(od, decompose(cases::b1()), 1, Rational(1, 2), Window{1, 2}), NotDistinguished);

  auto five = default_order(cases::five_adic());
  auto dc5 = decompose(five.base);
  auto res = eigenvalue_search(five, dc5, 2, 30, 4);
  EXPECT_EQ(res.denominators, (std::vector<std::size_t>{1, 5, 25}));
  EXPECT_EQ(res.eigenvalues.size(), 25u);
  EXPECT_TRUE(res.decided);
  auto threaded = eigenvalue_search(five, dc5, 2, 30, Window{3, 9}, 3);
  EXPECT_EQ(threaded.denominators, (std::vector<std::size_t>{1, 5}));
}

TEST(Eigenvalues, HeightCriterionImpliesDiamondCriterion) {
  auto od = default_order(cases::five_adic());
  auto dc = decompose(od.base);
  for (std::size_t k = 1; k <= 3; ++k) {
    Rational theta(1, static_cast<long>(std::pow(5, k)));
    Window w{k + 2, k + 8};
    auto h = rational_eigenvalue_sufficient(od.base, dc, 2, theta, w);
    EXPECT_TRUE(h.pass);
    EXPECT_TRUE(eigenvalue_check(od, dc, 2, theta, w).pass);
  }
  EXPECT_FALSE(rational_eigenvalue_sufficient(cases::two_blocks().base, decompose(cases::two_blocks().base), 1,
                                              Rational(1, 2), Window{1, 5})
                   .pass);
}

TEST(NonMixing, WitnessAndZeroCylinder) {
  auto od = cases::two_blocks();
  auto dc = decompose(od.base);
  auto dm = make_diamond({LegEdge{1, 1, 0}}, {LegEdge{1, 1, 1}});
  PathWord e;
  e.edges.push_back(Edge{1, kRoot, 1, 0});
  auto rep = nonmixing_witness(dc, 1, dm, e, Window{5, 25});
  EXPECT_EQ(rep.limit.rational(), Rational(1, 3));
  EXPECT_NEAR(static_cast<double>(rep.ratios.back().value()), 1.0 / 3.0, 1e-4);
  PathWord dead;
  dead.edges.push_back(Edge{1, kRoot, 1, 0});
  auto b1 = decompose(cases::b1());
  auto dm1 = make_diamond({LegEdge{0, 0, 0}}, {LegEdge{0, 0, 1}});
  EXPECT_THROW(nonmixing_witness(b1, 0, dm1, dead, Window{3, 5}), ZeroMeasureCylinder);
}
