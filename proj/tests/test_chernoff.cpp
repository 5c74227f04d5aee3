#include <qfp/chernoff.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"

using namespace qfp;

TEST(VisibilityPair, Invariants) {
  EXPECT_NO_THROW(VisibilityPair::make(0.5, 0.25));
  EXPECT_NO_THROW(VisibilityPair::make(1.0, 1.0));
  EXPECT_THROW(VisibilityPair::make(0.2, 0.3), DomainError);
  EXPECT_THROW(VisibilityPair::make(1.1, 0.3), DomainError);
  EXPECT_THROW(VisibilityPair::make(0.5, -0.1), DomainError);
}

TEST(LambdaStar, SecondOrderExpansionAtLowVisibility) {
  const double expected = 0.5 + (0.01 * 0.01 - 0.02 * 0.02) / 24.0;
  EXPECT_NEAR(lambda_star({0.02, 0.01}), expected, 1e-7);
  EXPECT_NEAR(lambda_star({0.02, 0.01}), 0.4999875, 1e-7);
}

TEST(LambdaStar, ExtremePairUsesFallback) {
  const ChernoffResult r = per_count({1.0, 0.0});
  EXPECT_EQ(r.lambda_star, 0.0);
  EXPECT_EQ(r.per_count, 0.5);
  EXPECT_EQ(r.method, ChernoffMethod::numeric_fallback);
}

TEST(LambdaStar, MatchesMillionPointGrid) {
  const oracle::GridMax g = oracle::chernoff_grid(0.5, 0.1, 1'000'001);
  const ChernoffResult r = per_count({0.5, 0.1});
  EXPECT_EQ(r.method, ChernoffMethod::closed_form);
  EXPECT_NEAR(r.lambda_star, g.lambda, 1e-5);
  EXPECT_NEAR(r.per_count, g.value, 1e-12);
  EXPECT_GE(r.per_count, g.value - 1e-12);
}

TEST(LambdaStar, DegenerateWhenEqual) {
  EXPECT_THROW(lambda_star({0.3, 0.3}), DegenerateError);
  EXPECT_THROW(lambda_star({0.3, 0.3}), DomainError);
}

TEST(PerCount, EqualArgumentsGiveZero) {
  for (double v : {0.0, 0.01, 0.3, 0.999, 1.0}) {
    const ChernoffResult r = per_count({v, v});
    EXPECT_EQ(r.per_count, 0.0);
    EXPECT_EQ(r.lambda_star, 0.5);
  }
}

TEST(PerCount, AnchorsAtCorners) {
  EXPECT_EQ(per_count({1.0, 0.0}).per_count, 0.5);
  EXPECT_EQ(chernoff_surface(0.0, 1.0).per_count, 0.5);
  EXPECT_EQ(chernoff_surface(0.0, 1.0).lambda_star, 1.0);
}

TEST(PerCount, LowVisibilityValue) {
  const double grid = oracle::chernoff_grid_fine(0.02, 0.01).value;
  const double c = per_count({0.02, 0.01}).per_count;
  EXPECT_NEAR(c / grid, 1.0, 1e-6);
  EXPECT_NEAR(c / 1.25e-5, 1.0, 0.01);
}

TEST(PerCount, ClosedFormAtZeroDifferentVisibility) {
  // v_d = 0 keeps the closed form; only v_e = 1 needs the fallback.
  const ChernoffResult r = per_count({0.6, 0.0});
  EXPECT_EQ(r.method, ChernoffMethod::closed_form);
  EXPECT_NEAR(r.per_count, oracle::chernoff_grid_fine(0.6, 0.0).value, 1e-12);
  const ChernoffResult s = per_count({1.0, 0.4});
  EXPECT_EQ(s.method, ChernoffMethod::numeric_fallback);
  // Supremum sits at lambda -> 0+, where F -> (1 - v_d)/2; a grid only
  // approaches it from below.
  EXPECT_NEAR(s.per_count, 0.3, 1e-12);
  const double grid = oracle::chernoff_grid_fine(1.0, 0.4).value;
  EXPECT_LE(grid, s.per_count + 1e-12);
  EXPECT_GT(grid, s.per_count - 1e-6);
}

TEST(PerCount, SmallVisibilities) {
  for (double v : {1e-20, 1e-12, 1e-7, 9.9e-6}) {
    const ChernoffResult r = per_count({v, 0.4 * v});
    EXPECT_EQ(r.lambda_star, 0.5);
    const double d = 0.6 * v;
    EXPECT_NEAR(r.per_count / (d * d / 8.0), 1.0, 1e-6) << v;
  }
  // Continuity across the switch to the closed form.
  const double below = per_count({0.999999e-5, 0.4e-5}).per_count;
  const double above = per_count({1.000001e-5, 0.4e-5}).per_count;
  EXPECT_NEAR(below / above, 1.0, 1e-5);
  EXPECT_NEAR(per_count({1.000001e-5, 0.4e-5}).lambda_star, 0.5, 1e-9);
}

TEST(PerCount, Symmetry) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const double a = u(rng), b = u(rng);
    const ChernoffResult ab = chernoff_surface(a, b);
    const ChernoffResult ba = chernoff_surface(b, a);
    EXPECT_NEAR(ab.per_count, ba.per_count, 1e-14);
    EXPECT_NEAR(ab.lambda_star, 1.0 - ba.lambda_star, 1e-9);
  }
}

TEST(PerCount, RangeAndMaximum) {
  for (int i = 0; i <= 40; ++i) {
    for (int j = 0; j <= 40; ++j) {
      const double a = i / 40.0, b = j / 40.0;
      const double c = chernoff_surface(a, b).per_count;
      EXPECT_GE(c, 0.0);
      EXPECT_LE(c, 0.5);
      if (a != b) {
        EXPECT_GT(c, 0.0);
      }
      if (!((a == 1.0 && b == 0.0) || (a == 0.0 && b == 1.0))) {
        EXPECT_LT(c, 0.5);
      }
    }
  }
}

TEST(PerCount, DecreasingInDifferentVisibility) {
  for (double ve : {0.05, 0.3, 0.8, 1.0}) {
    double prev = per_count({ve, 0.0}).per_count;
    for (int j = 1; j <= 200; ++j) {
      const double vd = ve * j / 200.0;
      const double c = per_count({ve, vd}).per_count;
      EXPECT_LT(c, prev) << ve << " " << vd;
      prev = c;
    }
  }
}

TEST(PerCount, ClosedFormNeverWorseThanGrid) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 0.999);
  for (int i = 0; i < 40; ++i) {
    double a = u(rng), b = u(rng);
    if (a < b) std::swap(a, b);
    const oracle::GridMax g = oracle::chernoff_grid_fine(a, b);
    const ChernoffResult r = per_count({a, b});
    ASSERT_EQ(r.method, ChernoffMethod::closed_form);
    EXPECT_NEAR(r.lambda_star, g.lambda, 1e-5);
    EXPECT_GE(oracle::chernoff_f(a, b, r.lambda_star), g.value - 1e-12);
  }
}

TEST(PerCount, StationaryAtInteriorOptimum) {
  for (auto [a, b] : {std::pair{0.5, 0.1}, {0.9, 0.2}, {0.05, 0.01}, {0.7, 0.69}}) {
    const double l = lambda_star({a, b});
    ASSERT_GT(l, 0.0);
    ASSERT_LT(l, 1.0);
    const double h = 1e-5;
    const double slope = (chernoff_exponent(a, b, l + h) - chernoff_exponent(a, b, l - h)) / (2 * h);
    EXPECT_LT(std::abs(slope), 1e-6);
  }
}

TEST(PerCountLowVis, Values) {
  EXPECT_DOUBLE_EQ(per_count_low_vis({0.02, 0.01}), 1.25e-5);
  EXPECT_EQ(per_count_low_vis({0.4, 0.4}), 0.0);
  EXPECT_DOUBLE_EQ(per_count_low_vis({0.3, 0.1}), 0.005);
  const double exact = per_count({0.3, 0.1}).per_count;
  EXPECT_LT(std::abs(exact - 0.005) / exact, 0.10);
}

TEST(PerCountLowVis, ConsistentBelowFivePercent) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 0.05);
  for (int i = 0; i < 500; ++i) {
    double a = u(rng), b = u(rng);
    if (a == b) continue;
    if (a < b) std::swap(a, b);
    const double approx = per_count_low_vis({a, b});
    EXPECT_LT(std::abs(per_count({a, b}).per_count - approx) / approx, 0.05);
  }
}

TEST(ChernoffExponent, StableForTinyDifferences) {
  // Direct pow evaluation loses everything at a - b = 1e-9; the stable form
  // should follow the (a - b)^2 / 8 law.
  const double a = 0.3 + 1e-9, b = 0.3;
  const double c = per_count({a, b}).per_count;
  EXPECT_NEAR(c / (1e-18 / 8.0 / (1.0 - 0.09)), 1.0, 1e-3);
}

TEST(ErrorBound, Values) {
  EXPECT_EQ(error_bound(0.0, {0.5, 0.1}), 0.5);
  EXPECT_NEAR(error_bound(-std::log(2e-5), {1.0, 0.0}), 1e-5, 1e-15);
  const double c = oracle::chernoff_grid_fine(0.1, 0.05).value;
  EXPECT_NEAR(error_bound(100.0, {0.1, 0.05}) / (0.5 * std::exp(-200.0 * c)), 1.0, 1e-9);
  EXPECT_THROW(error_bound(-1.0, {0.5, 0.1}), DomainError);
}
