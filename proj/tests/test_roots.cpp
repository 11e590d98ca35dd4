#include <gtest/gtest.h>

#include <random>

#include "horo/roots.hpp"

using namespace horo;

namespace {

poly::Poly from_roots(const std::vector<Complex>& r) {
  poly::Poly p{Complex{1.0}};
  for (const auto& z : r) p = poly::mul(p, poly::Poly{-z, Complex{1.0}});
  return p;
}

double match_error(std::vector<Complex> got, std::vector<Complex> want) {
  // Greedy matching; fine for well separated roots.
  double worst = 0.0;
  for (const auto& w : want) {
    auto it = std::min_element(got.begin(), got.end(),
                               [&](Complex a, Complex b) { return std::abs(a - w) < std::abs(b - w); });
    worst = std::max(worst, std::abs(*it - w));
    got.erase(it);
  }
  return worst;
}

}  // namespace

TEST(Roots, RecoversRandomRoots) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int n : {2, 3, 5, 8, 13}) {
    std::vector<Complex> want;
    for (int k = 0; k < n; ++k) want.emplace_back(u(rng), u(rng));
    const auto got = roots::polynomial_roots(from_roots(want));
    ASSERT_EQ(got.size(), want.size());
    EXPECT_LT(match_error(got, want), 1e-9) << "degree " << n;
  }
}

TEST(Roots, SortedLexicographically) {
  const auto r = roots::polynomial_roots(from_roots({{1, 1}, {-1, 0}, {1, -1}, {0, 2}}));
  for (std::size_t i = 1; i < r.size(); ++i)
    EXPECT_TRUE(r[i - 1].real() < r[i].real() || (r[i - 1].real() == r[i].real() && r[i - 1].imag() <= r[i].imag()));
}

TEST(Roots, ExactZeroRootsKeepMultiplicity) {
  // z^3 (z - 2)
  const auto r = roots::polynomial_roots({0, 0, 0, -2, 1});
  ASSERT_EQ(r.size(), 4u);
  EXPECT_EQ(std::count(r.begin(), r.end(), Complex{}), 3);
  EXPECT_NEAR(std::abs(r.back() - 2.0), 0.0, 1e-14);
}

TEST(Roots, RootsOfUnity) {
  poly::Poly p(17, Complex{});
  p[0] = -1.0;
  p[16] = 1.0;
  for (const auto& z : roots::polynomial_roots(p)) EXPECT_NEAR(std::abs(std::pow(z, 16) - 1.0), 0.0, 1e-12);
}

TEST(Roots, RadiusBoundsAllRoots) {
  const poly::Poly p = from_roots({{3, 4}, {-0.1, 0}, {0, -7}});
  const double r = roots::root_radius(p);
  for (const auto& z : roots::polynomial_roots(p)) EXPECT_LE(std::abs(z), r);
}

TEST(Roots, QuadraticFormulaAvoidsCancellation) {
  // z^2 - 1e8 z + 1: small root 1e-8 is lost by the naive formula.
  const auto [a, b] = roots::quadratic_roots(1.0, -1e8, 1.0);
  const double small = std::min(std::abs(a), std::abs(b));
  EXPECT_NEAR(small, 1e-8, 1e-22);
}

TEST(Roots, ZeroPolynomialIsDomainError) {
  try {
    roots::polynomial_roots({0, 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Domain);
  }
}
