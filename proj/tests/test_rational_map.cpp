#include <gtest/gtest.h>

#include <random>

#include "horo/rational_map.hpp"

using namespace horo;

namespace {

RationalMap cube() { return RationalMap::polynomial({0, 0, 0, 1}); }

RationalMap some_rational() {
  // (z^2 + 0.3) / (z^2 - 0.5 z + 2)
  return RationalMap({0.3, 0, 1}, {2, -0.5, 1});
}

std::vector<RationalMap> zoo() {
  return {RationalMap::quadratic(0.1), RationalMap::quadratic({-0.12, 0.75}), cube(),
          RationalMap::polynomial({0, -3, 0, 1}), some_rational(), RationalMap({1, 0, 0, 2}, {0, 0, 3})};
}

}  // namespace

TEST(RationalMap, EvalExamples) {
  const auto f = RationalMap::quadratic(0.1);
  EXPECT_EQ(f.eval(0.0).z, Complex(0.1));
  EXPECT_EQ(RationalMap::quadratic(0.0).eval(2.0).z, Complex(4.0));
  const Complex a = 0.5 * (1.0 + std::sqrt(0.6));
  EXPECT_NEAR(std::abs(a - 0.8872983346), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(f.eval(a).z - a), 0.0, 1e-15);
}

TEST(RationalMap, DerivativeExamples) {
  const auto f = RationalMap::quadratic(0.1);
  EXPECT_EQ(f.derivative(1.0).z, Complex(2.0));
  EXPECT_EQ(f.derivative(0.0).z, Complex(0.0));
  EXPECT_EQ(cube().derivative(2.0).z, Complex(12.0));
}

TEST(RationalMap, IterateExamples) {
  const auto f = RationalMap::quadratic(0.1);
  const Complex a = 0.5 * (1.0 + std::sqrt(0.6));
  EXPECT_NEAR(std::abs(f.iterate(a, 50).z - a), 0.0, 1e-10);
  EXPECT_EQ(f.iterate(Complex(0.3, 0.2), 0).z, Complex(0.3, 0.2));
  EXPECT_EQ(RationalMap::quadratic(0.0).iterate(2.0, 3).z, Complex(256.0));
}

TEST(RationalMap, CriticalPointExamples) {
  for (Complex e : {Complex(0.1), Complex(-2.0), Complex(0.3, -0.4)}) {
    const auto c = RationalMap::quadratic(e).critical_points();
    ASSERT_EQ(c.size(), 1u);
    EXPECT_EQ(c[0], Complex{});
  }
  const auto c = RationalMap::polynomial({0, -3, 0, 1}).critical_points();
  ASSERT_EQ(c.size(), 2u);
  EXPECT_NEAR(std::abs(c[0] + 1.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(c[1] - 1.0), 0.0, 1e-12);
  for (const auto& z : RationalMap::polynomial({0, 0, 0, 0, 0, 1}).critical_points()) EXPECT_EQ(z, Complex{});
}

TEST(RationalMap, ChainRuleOnUnitDisk) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& f : zoo()) {
    // (f o f)' from the composed coefficients A/B, independent of derivative().
    const auto [A, B] = f.iterate_coefficients(2);
    int tested = 0;
    for (int i = 0; i < 1000; ++i) {
      const Complex z = std::polar(std::sqrt(u(rng)), 2 * M_PI * u(rng));
      const auto fz = f.eval(z), d1 = f.derivative(z);
      if (fz.infinite || d1.infinite) continue;
      const auto d2 = f.derivative(fz.z);
      if (d2.infinite) continue;
      const auto [a, da] = poly::eval_d(A, z);
      const auto [b, db] = poly::eval_d(B, z);
      const Complex ff = (da * b - a * db) / (b * b);
      EXPECT_LT(std::abs(ff - d2.z * d1.z), 1e-10 * std::max(1.0, std::abs(ff)));
      ++tested;
    }
    EXPECT_GT(tested, 900);
  }
}

TEST(RationalMap, DerivativeMatchesCentralDifference) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  const double h = 1e-6;
  for (const auto& f : zoo()) {
    int tested = 0;
    for (int i = 0; i < 300; ++i) {
      const Complex z(u(rng), u(rng));
      bool near_pole = false;
      for (const auto& p : f.poles()) near_pole = near_pole || std::abs(z - p) < 0.1;
      if (near_pole) continue;
      const Complex fd = (f.eval(z + h).z - f.eval(z - h).z) / (2 * h);
      const Complex d = f.derivative(z).z;
      if (std::abs(d) < 1e-3) continue;
      EXPECT_LT(std::abs(fd - d) / std::abs(d), 1e-6);
      ++tested;
    }
    EXPECT_GT(tested, 100);
  }
}

TEST(RationalMap, IterateComposes) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (const auto& f : zoo())
    for (int i = 0; i < 50; ++i) {
      const Complex z(u(rng), u(rng));
      for (int m : {0, 1, 3})
        for (int n : {0, 2, 5}) {
          const auto lhs = f.iterate(z, m + n), rhs = f.iterate(f.iterate(z, m), n);
          EXPECT_EQ(lhs.infinite, rhs.infinite);
          if (!lhs.infinite) {
            EXPECT_EQ(lhs.z, rhs.z);
          }
        }
    }
}

TEST(RationalMap, EscapeGoesToInfinityTag) {
  const auto f = RationalMap::quadratic(0.0);
  const auto w = f.iterate(3.0, 40);
  EXPECT_TRUE(w.infinite);
  EXPECT_TRUE(f.eval(ExtPoint::infinity()).infinite);
}

TEST(RationalMap, PolesAndInfinity) {
  const auto f = some_rational();
  ASSERT_EQ(f.poles().size(), 2u);
  for (const auto& p : f.poles()) {
    const auto w = f.eval(p);
    EXPECT_TRUE(w.infinite || std::abs(w.z) > 1e12);
  }
  EXPECT_FALSE(f.eval(ExtPoint::infinity()).infinite);
  EXPECT_NEAR(std::abs(f.eval(ExtPoint::infinity()).z - 1.0), 0.0, 1e-15);
}

TEST(RationalMap, PreimagesMapBack) {
  for (const auto& f : zoo())
    for (Complex w : {Complex(0.3, 0.1), Complex(-1.2, 0.0), Complex(0.0, 2.0)}) {
      const auto pre = f.preimages(w);
      EXPECT_EQ(static_cast<int>(pre.size()), f.degree());
      for (const auto& z : pre) EXPECT_LT(std::abs(f.eval(z).z - w), 1e-10 * std::max(1.0, std::abs(w)));
    }
}

TEST(RationalMap, IterateCoefficientsAgreeWithIteration) {
  const auto f = RationalMap::quadratic({0.2, -0.3});
  auto [A, B] = f.iterate_coefficients(3);
  for (Complex z : {Complex(0.1, 0.2), Complex(-0.7, 0.3)})
    EXPECT_LT(std::abs(poly::eval(A, z) / poly::eval(B, z) - f.iterate(z, 3).z), 1e-12);
}

TEST(RationalMap, CanonicalForm) {
  const RationalMap f({2, 0, 4}, {2});
  EXPECT_TRUE(f.is_polynomial());
  EXPECT_EQ(f.denominator().size(), 1u);
  EXPECT_EQ(f.numerator()[2], Complex(2.0));
  EXPECT_EQ(RationalMap::quadratic(0.4).quadratic_epsilon().value(), Complex(0.4));
  EXPECT_FALSE(cube().quadratic_epsilon().has_value());
}

TEST(RationalMap, RejectsInvalidMaps) {
  auto code = [](auto&& make) {
    try {
      make();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Config;
  };
  EXPECT_EQ(code([] { RationalMap({0, 1}, {1}); }), ErrorCode::InvalidMap);       // degree 1
  EXPECT_EQ(code([] { RationalMap({1, 0, 1}, {0}); }), ErrorCode::InvalidMap);    // zero denominator
  EXPECT_EQ(code([] { RationalMap({-1, 0, 1}, {-1, 1}); }), ErrorCode::InvalidMap);  // shares z = 1
}
