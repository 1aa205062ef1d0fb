#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "cases.hpp"

using namespace bratteli;
using cases::frac;
using cases::matrix;

TEST(Substitution, ValidatesRules) {
  EXPECT_THROW(Substitution({}, {}), DimensionMismatch);
  EXPECT_THROW(Substitution({"a"}, {{}}), DimensionMismatch);
  EXPECT_THROW(Substitution({"a"}, {{1}}), DimensionMismatch);
  EXPECT_THROW(Substitution({"a", "b"}, {{0}}), DimensionMismatch);
}

TEST(Substitution, MatrixCountsOccurrences) {
  EXPECT_EQ(substitution_matrix(cases::two_minimal()),
            matrix({{1, 1, 0, 0, 1}, {1, 1, 0, 0, 0}, {0, 0, 1, 1, 1}, {0, 0, 1, 1, 0}, {0, 0, 0, 0, 3}}));
  EXPECT_EQ(substitution_matrix(cases::five_letters()),
            matrix({{1, 1, 2, 1, 0}, {1, 1, 0, 1, 0}, {0, 0, 3, 0, 1}, {0, 0, 0, 2, 1}, {0, 0, 0, 0, 4}}));
}

TEST(Substitution, DiagramReading) {
  auto od = diagram_from_substitution(cases::sigma());
  EXPECT_EQ(od.base.incidence(), matrix({{1, 2, 0}, {1, 1, 0}, {1, 1, 2}}));
  EXPECT_EQ(od.base.name(2), "c");
  EXPECT_EQ(od.order[2], (std::vector<std::size_t>{0, 2, 2, 1}));
  EXPECT_EQ(substitution_from_diagram(od), cases::sigma());
}

TEST(Substitution, PowerAndExpansion) {
  auto s = cases::sigma();
  auto s2 = power(s, 2);
  EXPECT_EQ(s.word_string(s2.rules[0]), "abbabab");
  EXPECT_EQ(s.word_string(expand(s, 0, 2)), "abbabab");
  EXPECT_EQ(expansion_length(s, 2, 3), BigInt(expand(s, 2, 3).size()));
  EXPECT_THROW(expand(s, 2, 30, 1000), CapExceeded);
  EXPECT_EQ(s.word_string({0, 1}, true), "a b");
}

TEST(Substitution, Growth) {
  EXPECT_TRUE(growth_check(cases::sigma()).all_growing());
  // a -> ab, b -> b: b is bounded, a grows linearly.
  auto g = growth_check(cases::substitution("ab", {"ab", "b"}));
  EXPECT_TRUE(g.growing[0]);
  EXPECT_FALSE(g.growing[1]);
  EXPECT_THROW(substitution_measures(cases::substitution("ab", {"ab", "b"})), NotGrowing);
}

TEST(Substitution, CountsMatchTheExpandedWord) {
  const auto s = cases::two_minimal();
  auto word = expand(s, 4, 8);
  auto counts = letter_counts(s, 4, 8);
  for (std::size_t a = 0; a < s.size(); ++a)
    EXPECT_EQ(counts[a], BigInt(std::count(word.begin(), word.end(), a)));
}

TEST(Substitution, FrequenciesApproachTheEigenvector) {
  const double expected[] = {2.0 / 9, 1.0 / 9, 2.0 / 9, 1.0 / 9, 1.0 / 3};
  auto f = letter_frequencies(cases::two_minimal(), 4, 14);
  for (std::size_t a = 0; a < 5; ++a) EXPECT_NEAR(static_cast<double>(to_long_double(f[a])), expected[a], 1e-3);
  // The error decays like (2/3)^n, so n = 12 is still just outside.
  auto early = letter_frequencies(cases::two_minimal(), 4, 12);
  EXPECT_GT(std::fabs(static_cast<double>(to_long_double(early[4])) - 1.0 / 3), 1e-3);
}

TEST(Substitution, UniqueErgodicity) {
  EXPECT_TRUE(substitution_measures(cases::sigma()).uniquely_ergodic);
  EXPECT_FALSE(substitution_measures(cases::tau()).uniquely_ergodic);
  auto rep = substitution_measures(cases::sigma());
  ASSERT_EQ(rep.sigma_finite.size(), 1u);
  EXPECT_FALSE(rep.sigma_finite[0].atomic);
}
