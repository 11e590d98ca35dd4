#include <gtest/gtest.h>

#include <random>

#include "horo/periodic.hpp"

using namespace horo;

namespace {

bool has_point(const std::vector<PeriodicPoint>& pts, Complex z, double tol = 1e-9) {
  return std::any_of(pts.begin(), pts.end(), [&](const PeriodicPoint& p) { return std::abs(p.location - z) < tol; });
}

// Number of points of exact period n for a generic degree-2 polynomial.
int exact_period_count(int n) {
  int total = 1 << n;
  for (int p = 1; p < n; ++p)
    if (n % p == 0) total -= exact_period_count(p);
  return total;
}

}  // namespace

TEST(Classify, Examples) {
  EXPECT_EQ(classify(2.0), PointClass::Repelling);
  EXPECT_EQ(classify(0.0), PointClass::Superattracting);
  EXPECT_EQ(classify(1.0), PointClass::Parabolic);
  EXPECT_EQ(classify(std::polar(1.0, 2 * M_PI * 3 / 7)), PointClass::Parabolic);
  EXPECT_EQ(classify({0.3, -0.4}), PointClass::Attracting);
  EXPECT_EQ(classify({-1.0, 1.0}), PointClass::Repelling);
  EXPECT_EQ(classify(1e-10), PointClass::Superattracting);
  // Golden-mean rotation: no root of unity up to order 64.
  EXPECT_EQ(classify(std::polar(1.0, M_PI * (std::sqrt(5.0) - 1.0))), PointClass::Indifferent);
  // Order 65 lies past the parabolic bound.
  EXPECT_EQ(classify(std::polar(1.0, 2 * M_PI / 65), 64), PointClass::Indifferent);
}

TEST(PeriodicPoints, QuadraticFixedPoints) {
  for (double e : {-3.0, -1.0, -0.5, 0.1, 0.2, 0.24}) {
    const auto pts = periodic_points(RationalMap::quadratic(e), 1);
    ASSERT_EQ(pts.size(), 2u);
    // Roots of z^2 - z + eps.
    for (const auto& p : pts) EXPECT_LT(std::abs(p.location * p.location - p.location + e), 1e-13);
    EXPECT_TRUE(has_point(pts, 0.5 * (1.0 + std::sqrt(1.0 - 4.0 * e))));
  }
}

TEST(PeriodicPoints, SquareMap) {
  const auto pts = periodic_points(RationalMap::quadratic(0.0), 1);
  ASSERT_EQ(pts.size(), 2u);
  EXPECT_EQ(pts[0].location, Complex{});
  EXPECT_EQ(pts[0].cls, PointClass::Superattracting);
  EXPECT_NEAR(std::abs(pts[1].location - 1.0), 0.0, 1e-14);
  EXPECT_EQ(pts[1].cls, PointClass::Repelling);
  EXPECT_NEAR(std::abs(pts[1].multiplier - 2.0), 0.0, 1e-13);
}

TEST(PeriodicPoints, BasilicaTwoCycle) {
  const auto pts = periodic_points(RationalMap::quadratic(-1.0), 2);
  ASSERT_EQ(pts.size(), 2u);
  EXPECT_TRUE(has_point(pts, 0.0));
  EXPECT_TRUE(has_point(pts, -1.0));
  for (const auto& p : pts) {
    EXPECT_EQ(p.cls, PointClass::Superattracting);
    EXPECT_LT(std::abs(p.multiplier), 1e-9);
  }
}

TEST(PeriodicPoints, ExactPeriodCountsAndResiduals) {
  const auto f = RationalMap::quadratic({-0.12, 0.75});
  for (int n = 1; n <= 7; ++n) {
    const auto pts = periodic_points(f, n);
    EXPECT_EQ(static_cast<int>(pts.size()), exact_period_count(n)) << "period " << n;
    for (const auto& p : pts) {
      EXPECT_EQ(p.period, n);
      EXPECT_LT(std::abs(f.iterate(p.location, n).z - p.location), 1e-9 * std::max(1.0, std::abs(p.location)));
      EXPECT_EQ(p.cls, classify(p.multiplier));
    }
  }
}

TEST(PeriodicPoints, SortedOutput) {
  const auto pts = periodic_points(RationalMap::quadratic(0.3), 4);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const auto &a = pts[i - 1].location, &b = pts[i].location;
    EXPECT_TRUE(a.real() < b.real() || (a.real() == b.real() && a.imag() <= b.imag()));
  }
}

TEST(PeriodicPoints, BudgetIsEnforced) {
  try {
    periodic_points(RationalMap::quadratic(0.1), 13);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Precondition);
  }
}

TEST(PeriodicPoints, FixedPointCountOnSphere) {
  const auto q = count_fixed_points(RationalMap::quadratic(0.1));
  EXPECT_EQ(q.finite, 2);
  EXPECT_EQ(q.at_infinity, 1);
  // Degree-2 rational map with infinity not fixed: 3 finite fixed points.
  const RationalMap r({0.3, 0, 1}, {2, -0.5, 1});
  const auto c = count_fixed_points(r);
  EXPECT_EQ(c.total(), r.degree() + 1);
  EXPECT_EQ(c.at_infinity, 0);
  // 1/z^2... shifted: (2 z^2 + 1) / z^2 fixes no point at infinity either.
  const RationalMap s({1, 0, 2}, {0, 0, 1});
  EXPECT_EQ(count_fixed_points(s).total(), 3);
}

TEST(PeriodicPoints, RationalMapResiduals) {
  const RationalMap r({0.3, 0, 1}, {2, -0.5, 1});
  for (int n = 1; n <= 3; ++n)
    for (const auto& p : periodic_points(r, n))
      EXPECT_LT(std::abs(r.iterate(p.location, n).z - p.location), 1e-9 * std::max(1.0, std::abs(p.location)));
}

TEST(Linearizer, SquareMapIsLogarithm) {
  const auto f = RationalMap::quadratic(0.0);
  const auto lin = Linearizer::build(f, periodic_points(f, 1)[1]);
  EXPECT_GT(lin.radius(), 0.1);
  EXPECT_EQ(lin(1.0), Complex{});
  for (int r = 1; r <= 10; ++r)
    for (int k = 0; k < 24; ++k) {
      const Complex z = 1.0 + std::polar(0.95 * lin.radius() * r / 10, 2 * M_PI * k / 24);
      EXPECT_LT(std::abs(lin(z) - std::log(z)), 1e-12) << z;
    }
}

TEST(Linearizer, NormalizationAndFunctionalEquation) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (Complex e : {Complex(0.1), Complex(-1.0), Complex(-3.0), Complex(0.1, 0.02), Complex(-0.12, 0.75)}) {
    const auto f = RationalMap::quadratic(e);
    const auto a = dominant_repelling_fixed_point(f);
    const auto lin = Linearizer::build(f, a);
    EXPECT_EQ(lin(a.location), Complex{});
    const double h = 1e-6;
    EXPECT_LT(std::abs((lin(a.location + h) - lin(a.location - h)) / (2 * h) - 1.0), 1e-8);
    double worst = 0.0;
    for (int i = 0; i < 256; ++i) {
      const Complex z = a.location + std::polar(lin.radius() * std::sqrt(u(rng)), 2 * M_PI * u(rng));
      worst = std::max(worst, std::abs(lin(f.eval(z).z) - a.multiplier * lin(z)));
    }
    EXPECT_LT(worst, 1e-9) << e;
  }
}

TEST(Linearizer, RejectsNonRepellingBase) {
  const auto f = RationalMap::quadratic(0.0);
  try {
    Linearizer::build(f, periodic_points(f, 1)[0]);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Precondition);
  }
}

TEST(Linearizer, InverseBranchFixesBase) {
  const auto f = RationalMap::quadratic(-1.0);
  const auto a = dominant_repelling_fixed_point(f);
  const auto lin = Linearizer::build(f, a);
  const Complex z = a.location + 0.3 * lin.radius();
  const Complex g = lin.inverse_branch(z);
  EXPECT_LT(std::abs(f.eval(g).z - z), 1e-13);
  EXPECT_LT(std::abs(g - a.location), std::abs(z - a.location));
}

TEST(Collinearity, RealChebyshevLikeCaseIsLine) {
  const auto f = RationalMap::quadratic(-3.0);
  const auto lin = Linearizer::build(f, dominant_repelling_fixed_point(f));
  // Oracle: every preimage of a(-3) is real.
  for (const auto& v : preimage_tree_offsets(lin.centered(), 8)) EXPECT_LT(std::abs(v.imag()), 1e-9);
  const auto rep = collinearity_in_linearizer(lin, 8);
  EXPECT_EQ(rep.verdict, Collinearity::Line);
  EXPECT_LT(rep.deviation, 1e-8 * rep.spread);
  EXPECT_GE(rep.points_used, 3);
}

TEST(Collinearity, BasilicaIsFull) {
  const auto f = RationalMap::quadratic(-1.0);
  const auto lin = Linearizer::build(f, dominant_repelling_fixed_point(f));
  const auto rep = collinearity_in_linearizer(lin, 8);
  EXPECT_EQ(rep.verdict, Collinearity::Full);
  EXPECT_GT(rep.deviation, 0.01);
}

TEST(Collinearity, SquareMapRawVerdict) {
  // Preimages of 1 are roots of unity, and log sends them to the imaginary
  // axis; the raw verdict is whatever that oracle gives.
  const auto f = RationalMap::quadratic(0.0);
  const auto lin = Linearizer::build(f, periodic_points(f, 1)[1]);
  const auto rep = collinearity_in_linearizer(lin, 10);
  double worst_re = 0.0;
  for (const auto& v : preimage_tree_offsets(lin.centered(), 10))
    if (v != Complex{} && std::abs(v) < lin.radius()) worst_re = std::max(worst_re, std::abs(std::log(1.0 + v).real()));
  const Collinearity oracle = worst_re < 1e-8 * rep.spread ? Collinearity::Line : Collinearity::Full;
  EXPECT_EQ(rep.verdict, oracle);
  EXPECT_NEAR(std::abs(std::cos(rep.direction)), 0.0, 1e-8);
}

TEST(Collinearity, TreeSizeWithoutCollisions) {
  const auto f = RationalMap::quadratic(-1.0);
  const auto lin = Linearizer::build(f, dominant_repelling_fixed_point(f));
  // a, then -a, then 2^k new points per level (a maps to itself once).
  EXPECT_EQ(static_cast<int>(preimage_tree_offsets(lin.centered(), 6).size()), 1 << 6);
}
