#include <gtest/gtest.h>

#include "cases.hpp"

using namespace bratteli;
using cases::frac;
using cases::matrix;

TEST(Oracle, InvarianceOfEnumeratedMeasures) {
  for (const auto& d : {cases::b1(), cases::b2(), cases::two_blocks().base, cases::five_adic()}) {
    auto dc = decompose(d);
    for (const auto& mu : enumerate_ergodic(dc)) {
      auto rep = verify_invariance(d, mu, 4);
      EXPECT_TRUE(rep.ok());
      EXPECT_GT(rep.cylinders_checked, 0u);
    }
  }
}

TEST(Oracle, InvarianceDetectsCorruption) {
  auto d = cases::two_blocks().base;
  auto mu = ergodic_measure(decompose(d), 1);
  mu.xi[0] = Real(frac(1, 2));
  auto rep = verify_invariance(d, mu, 3);
  EXPECT_FALSE(rep.ok());
  bool saw_b = false, saw_c = false;
  for (const auto& v : rep.violations) {
    saw_b = saw_b || v.check == 'b';
    saw_c = saw_c || v.check == 'c';
  }
  EXPECT_TRUE(saw_b);
  EXPECT_TRUE(saw_c);
}

TEST(Oracle, BruteForceQ) {
  auto od = cases::two_blocks();
  auto a = min_path(od, 1, 3), b = max_path(od, 1, 3);
  EXPECT_EQ(brute_force_Q(od, a, b), Q(od, a, b));
  EXPECT_EQ(brute_force_Q(od, b, a), -Q(od, a, b));
  EXPECT_THROW(brute_force_Q(od, a, b, 3), CapExceeded);
  EXPECT_THROW(brute_force_Q(od, a, min_path(od, 0, 3)), EndpointMismatch);
}

TEST(Oracle, CorePreimageCertificates) {
  auto a = decompose(cases::two_blocks().base).a;
  auto yes = core_preimage_oracle(a, {frac(5, 6), frac(1, 6)}, 3);
  EXPECT_TRUE(yes.feasible);
  EXPECT_TRUE(yes.verified);
  auto no = core_preimage_oracle(a, {frac(1, 2), frac(1, 2)}, 2);
  EXPECT_FALSE(no.feasible);
  EXPECT_TRUE(no.verified);
  EXPECT_THROW(core_preimage_oracle(a, {1, 1}, 5), SizeRefused);
  EXPECT_THROW(core_preimage_oracle(identity_matrix(13), RatVector(13, 1), 1), SizeRefused);
}

TEST(Oracle, OrbitFrequencyOfTheFullySupportedMeasure) {
  auto od = cases::two_blocks();
  PathWord start;
  start.edges.push_back(Edge{1, kRoot, 1, 0});
  PathWord target_path;
  target_path.edges.push_back(Edge{1, kRoot, 0, 0});
  auto target = make_cylinder(od.base, target_path);
  auto f = empirical_orbit_frequency(od, start, 200'000, target);
  EXPECT_EQ(f.steps, 200'000u);
  EXPECT_NEAR(static_cast<double>(to_long_double(f.frequency())), 2.0 / 3.0, 0.05);
  EXPECT_THROW(empirical_orbit_frequency(od, start, 2'000'000, target), CapExceeded);
}

TEST(Oracle, AsymptoticsVerdicts) {
  auto dc = decompose(cases::two_blocks().base);
  auto three = NumericValue::exact(3);
  EXPECT_EQ(asymptotics_check(dc.a, three, 0, 1, 5, 40).verdict,
            AsymptoticsReport::Verdict::ConvergingPositive);
  EXPECT_EQ(asymptotics_check(dc.a, three, 0, 0, 5, 40).verdict, AsymptoticsReport::Verdict::Vanishing);
  EXPECT_EQ(asymptotics_check(dc.a, NumericValue::exact(2), 0, 1, 5, 40).verdict,
            AsymptoticsReport::Verdict::Diverging);
  EXPECT_STREQ(to_string(AsymptoticsReport::Verdict::Inconclusive), "inconclusive");
}
