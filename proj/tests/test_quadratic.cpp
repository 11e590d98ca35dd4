#include <gtest/gtest.h>

#include <random>

#include "horo/quadratic.hpp"

using namespace horo;
namespace q = horo::quadratic;

namespace {

std::vector<Complex> julia(double e, int n = 10000, std::uint64_t seed = 7) {
  return inverse_iteration_sample(RationalMap::quadratic(e), q::fixed_point_a(e), n, 40, seed).points;
}

}  // namespace

TEST(FixedPoint, Examples) {
  EXPECT_EQ(q::fixed_point_a(0.0), Complex(1.0));
  EXPECT_EQ(q::fixed_point_a(-2.0), Complex(2.0));
  EXPECT_NEAR(std::abs(q::fixed_point_a(0.21) - 0.7), 0.0, 1e-15);
  EXPECT_NEAR(0.7 * 0.7 + 0.21, 0.7, 1e-15);
  EXPECT_NEAR(q::fixed_point_a(0.1).real(), 0.8872983346, 1e-10);
  try {
    q::fixed_point_a(0.25);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Domain);
  }
}

TEST(FixedPoint, RandomComplexIdentity) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int tested = 0;
  while (tested < 1000) {
    const Complex e(2 * u(rng), 2 * u(rng));
    const Complex w = 1.0 - 4.0 * e;
    if (w.real() < 0 && std::abs(w.imag()) < 0.1) continue;  // stay off the branch cut
    const Complex a = q::fixed_point_a(e);
    EXPECT_LT(std::abs(a * a + e - a), 1e-12 * std::max(1.0, std::abs(a)));
    ++tested;
  }
}

TEST(FixedPoint, RepellingAndMonotoneNearQuarter) {
  double prev = 0.0;
  for (int k = 1; k <= 200; ++k) {
    const double t = 0.25 * (201 - k) / 200.0;  // t decreases to 0
    const double lam = std::abs(2.0 * q::fixed_point_a(0.25 - t));
    EXPECT_GT(lam, 1.0);
    if (k > 1) {
      EXPECT_LT(lam, prev);
    }
    prev = lam;
  }
  EXPECT_LT(std::abs(2.0 * q::fixed_point_a(0.25 - 1e-12)) - 1.0, 1e-5);
  for (double e : {-3.0, -2.0, -1.0, -0.1, 0.1, 0.2}) EXPECT_EQ(q::base_point(e).cls, PointClass::Repelling);
}

TEST(Exceptional, Examples) {
  EXPECT_TRUE(q::branch_exceptional(-2.0));
  EXPECT_FALSE(q::branch_exceptional(-1.0));
  EXPECT_FALSE(q::branch_exceptional(0.1));
  EXPECT_TRUE(q::degenerate_parameter(0.0));
  EXPECT_TRUE(q::degenerate_parameter(-2.0));
  EXPECT_FALSE(q::degenerate_parameter(-1.99));
  // Inverse iteration for the Chebyshev map starts on a repelling 2-cycle.
  const Complex s = q::julia_start(-2.0);
  EXPECT_NEAR(std::abs(s * s - 2.0 - (-1.0 - s)), 0.0, 1e-14);
  EXPECT_EQ(q::julia_start(-1.0), q::fixed_point_a(-1.0));
}

TEST(Containment, NoViolations) {
  for (double e : {-1.0, 0.1}) {
    const auto r = q::disk_containment_check(e, julia(e), 1e-6);
    EXPECT_EQ(r.checked, 10000);
    EXPECT_EQ(r.violations, 0) << e;
    EXPECT_EQ(r.near_violations, 0) << e;
  }
}

TEST(Containment, BoundaryPointsAreNearNotViolations) {
  for (double e : {-1.0, 0.1, -0.5}) {
    const double a = q::fixed_point_a(e).real();
    const auto r = q::disk_containment_check(e, {Complex(a), Complex(-a)}, 1e-6);
    EXPECT_EQ(r.violations, 0);
    EXPECT_EQ(r.near_boundary, 2);
    EXPECT_EQ(r.near_violations, 0);
  }
}

TEST(Containment, DetectsViolationAndRejectsExceptional) {
  const auto r = q::disk_containment_check(-1.0, {Complex(0.0, 1.7)}, 1e-6);
  EXPECT_EQ(r.violations, 1);
  EXPECT_THROW(q::disk_containment_check(0.0, {Complex(1.0)}, 1e-6), Error);
  EXPECT_THROW(q::disk_containment_check(-2.0, {Complex(1.0)}, 1e-6), Error);
  EXPECT_THROW(q::disk_containment_check(-1.0, {}, 1e-6), Error);
}

TEST(Extremality, Examples) {
  const auto m = q::derivative_extremality_check(-1.0, julia(-1.0), 1e-6);
  EXPECT_TRUE(m.holds);
  EXPECT_NEAR(m.bound, 3.2360679775, 1e-10);
  EXPECT_LE(m.extreme, m.bound + 1e-6);
  const auto p = q::derivative_extremality_check(0.1, julia(0.1), 1e-6);
  EXPECT_TRUE(p.holds);
  EXPECT_NEAR(p.bound, 1.7745966692, 1e-10);
  EXPECT_GE(p.extreme, p.bound - 1e-6);
  const double a = q::fixed_point_a(0.1).real();
  const auto eq = q::derivative_extremality_check(0.1, {Complex(-a)}, 1e-15);
  EXPECT_EQ(eq.extreme, eq.bound);
  EXPECT_EQ(eq.equality_points, 1);
  EXPECT_EQ(eq.equality_distance, 0.0);
}

TEST(SigmaDelta, FrozenBaselines) {
  // Reference values for the 10^4-point sample with seed 7.
  const auto p = q::find_sigma_delta(0.1, julia(0.1));
  EXPECT_NEAR(p.sigma, q::fixed_point_a(0.1).real() / 4, 1e-15);
  EXPECT_NEAR(p.delta, 0.016278781443474687, 1e-12);
  EXPECT_GT(p.margin_cover, q::kCertificateMargin);
  const auto m = q::find_sigma_delta(-1.0, julia(-1.0));
  EXPECT_NEAR(m.sigma, q::fixed_point_a(-1.0).real() / 4, 1e-15);
  EXPECT_NEAR(m.delta, 0.039796084567451588, 1e-12);
}

TEST(SigmaDelta, UnivalentOnDisk) {
  for (double e : {0.1, -1.0, -0.5}) {
    const auto sd = q::find_sigma_delta(e, julia(e, 2000));
    EXPECT_LT(sd.sigma, std::abs(sd.a));
    // No antipodal pair z, -z inside the disk: the disk misses 0.
    EXPECT_GT(std::abs(sd.a) - sd.sigma, 0.0);
    EXPECT_GT(sd.delta, 0.0);
  }
}

TEST(SigmaDelta, ComplexParameter) {
  const Complex e(-1.0, 0.03);
  const auto js = inverse_iteration_sample(RationalMap::quadratic(e), 4000, 40, 2).points;
  const auto sd = q::find_sigma_delta(e, js);
  EXPECT_GT(sd.sigma, 0.0);
  EXPECT_GT(sd.delta, 0.0);
}

TEST(SigmaDelta, Preconditions) {
  EXPECT_THROW(q::find_sigma_delta(0.0, {Complex(1.0)}), Error);
  EXPECT_THROW(q::find_sigma_delta(-2.0, {Complex(1.0)}), Error);
  EXPECT_THROW(q::find_sigma_delta(0.1, {}), Error);
}

TEST(Excursions, SingleExcursion) {
  for (double e : {0.1, -1.0}) {
    const auto sd = q::find_sigma_delta(e, julia(e));
    const auto base = q::make_base(e, sd);
    const auto st = q::excursion_stats(OrbitWord::parse(base, "-"));
    ASSERT_EQ(st.s, 1);
    EXPECT_EQ(st.leaving[0], 0);
    EXPECT_EQ(st.d, st.returning[0] - 1);
    EXPECT_TRUE(st.interleaved);
    EXPECT_TRUE(st.min_length_ok);
    // Oracle: first depth at which the square-root orbit re-enters the disk.
    const auto r = realize(OrbitWord::parse(base, "-"), 60);
    int k = 1;
    while (std::abs(r.points[k] - sd.a) >= sd.sigma) ++k;
    EXPECT_EQ(st.returning[0], k);
  }
}

TEST(Excursions, CountsPrefixDrivenExits) {
  const double e = -1.0;
  const auto sd = q::find_sigma_delta(e, julia(e));
  const auto base = q::make_base(e, sd);
  std::mt19937_64 rng(4);
  for (int n = 0; n < 100; ++n) {
    const auto w = q::random_word(base, rng, 12);
    if (!is_in_Pi_a(w, w.length()).member) continue;
    const auto st = q::excursion_stats(w);
    EXPECT_TRUE(st.ok()) << w.str();
    // Every exit is caused by a '-' symbol; the principal branch never leaves the disk.
    auto o = realize(w, w.length() + 40);
    for (int j : st.leaving) {
      EXPECT_LT(j, w.length());
      EXPECT_EQ(w.prefix()[static_cast<std::size_t>(j)], 1);
    }
    for (int r = 0; r < st.s; ++r) EXPECT_GE(st.returning[r] - st.leaving[r], 4);
    for (int j = 0; j < st.returning.back(); ++j) {
      const bool in = std::abs(o.offsets[j]) < sd.sigma, next = std::abs(o.offsets[j + 1]) < sd.sigma;
      if (in && !next) {
        EXPECT_NE(std::find(st.leaving.begin(), st.leaving.end(), j), st.leaving.end());
      }
    }
  }
}

TEST(Excursions, Normalization) {
  const auto base = q::make_base(0.1);
  const auto w = OrbitWord::parse(base, "++-+-");
  EXPECT_FALSE(q::is_normalized(w));
  EXPECT_EQ(q::normalize(w).str(), "-+-");
  EXPECT_THROW(q::excursion_stats(w), Error);
}

TEST(LowerBound, Examples) {
  const auto sd = q::find_sigma_delta(0.1, julia(0.1));
  const auto base = q::make_base(0.1, sd);
  const auto lb = q::cocycle_lower_bound_check(OrbitWord::parse(base, "-"), sd, 1e-12);
  EXPECT_TRUE(lb.holds);
  EXPECT_GT(lb.margin, 0.0);
  EXPECT_GT(std::abs(lb.beta), sd.delta);

  const auto sdm = q::find_sigma_delta(-1.0, julia(-1.0));
  const auto bm = q::make_base(-1.0, sdm);
  for (const auto& w : q::accepted_words(bm, 17, 200, 10)) {
    const auto r = q::cocycle_lower_bound_check(w, sdm, 1e-12);
    EXPECT_TRUE(r.holds) << w.str();
    EXPECT_GT(std::abs(r.beta), sdm.delta) << w.str();
  }
}

TEST(BEpsilon, SignsAndFloor) {
  for (double e : {0.1, -1.0}) {
    const auto sd = q::find_sigma_delta(e, julia(e));
    const auto base = q::make_base(e, sd);
    const auto words = q::accepted_words(base, 23, 200, 10);
    const auto r = q::build_B_epsilon(words, 1, 1e-12);
    EXPECT_TRUE(r.sign_ok);
    EXPECT_EQ(r.sign, e > 0 ? 1 : -1);
    for (double v : r.singles) EXPECT_GT(r.sign * v, sd.delta) << e;
    EXPECT_GT(r.min_abs, sd.delta);
  }
}

TEST(BEpsilon, ComplexPerturbationsKeepSign) {
  for (double e0 : {-1.0, 0.1})
    for (double im : {-0.05, 0.02, 0.05}) {
      const Complex e(e0, im);
      const auto base = q::make_base(e);
      const auto r = q::build_B_epsilon(q::accepted_words(base, 29, 40, 8), 2, 1e-12);
      EXPECT_TRUE(r.sign_ok) << e;
    }
}

TEST(BEpsilon, PairSumsMatchConcatenation) {
  const auto base = q::make_base(0.1);
  const auto words = q::accepted_words(base, 31, 6, 6);
  for (std::size_t i = 0; i < words.size(); ++i)
    for (std::size_t j = 0; j < words.size(); ++j) {
      const double sum = cocycle_vs_fixed(words[i], 1e-13).value + cocycle_vs_fixed(words[j], 1e-13).value;
      const double cat = cocycle_vs_fixed(concatenate(words[i], words[j], 50), 1e-13).value;
      EXPECT_LT(std::abs(cat - sum), 1e-6) << words[i].str() << " " << words[j].str();
    }
}

TEST(BEpsilon, Preconditions) {
  const auto base = q::make_base(0.0);
  EXPECT_THROW(q::build_B_epsilon({OrbitWord::parse(base, "-")}, 1, 1e-12), Error);
  EXPECT_THROW(q::build_B_epsilon({}, 1, 1e-12), Error);
  const auto b1 = q::make_base(0.1);
  EXPECT_THROW(q::build_B_epsilon({OrbitWord::parse(b1, "-")}, 4, 1e-12), Error);
}

TEST(LimitDecomposition, TwoComponents) {
  const auto base = q::make_base(0.1);
  const auto y = OrbitWord::parse(base, "-");
  const auto r = q::limit_decomposition_check(y, y, {10, 20, 30, 40, 50}, 1e-13);
  EXPECT_EQ(r.l, 2);
  EXPECT_TRUE(r.ok());
  EXPECT_LT(r.defects.back(), 1e-8);
  // Geometric approach of the junction point to a.
  for (std::size_t i = 1; i < r.nu2_distance.size(); ++i)
    EXPECT_LT(r.nu2_distance[i], 0.01 * r.nu2_distance[i - 1]);
  EXPECT_NEAR(r.betas.back(), 2 * cocycle_vs_fixed(y, 1e-13).value, 1e-8);
}

TEST(LimitDecomposition, FixedTailIsOneComponent) {
  const auto base = q::make_base(-1.0);
  const auto y = OrbitWord::parse(base, "-+-");
  const auto r = q::limit_decomposition_check(y, fixed_word(base), {10, 20}, 1e-12);
  EXPECT_EQ(r.l, 1);
  EXPECT_TRUE(r.ok());
  EXPECT_NEAR(r.betas.back(), cocycle_vs_fixed(y, 1e-12).value, 1e-12);
}

TEST(LimitDecomposition, ThreeFoldNesting) {
  const auto base = q::make_base(0.1);
  const auto y = OrbitWord::parse(base, "-"), c = OrbitWord::parse(base, "--");
  const double d25 = q::nested_defect(y, c, 25, 1e-13), d50 = q::nested_defect(y, c, 50, 1e-13);
  EXPECT_LT(d50, d25);
  EXPECT_LT(d50, 1e-6);
}

TEST(LimitDecomposition, RejectsUnsortedJunctions) {
  const auto base = q::make_base(0.1);
  const auto y = OrbitWord::parse(base, "-");
  EXPECT_THROW(q::limit_decomposition_check(y, y, {20, 10}, 1e-12), Error);
  EXPECT_THROW(q::limit_decomposition_check(y, y, {}, 1e-12), Error);
}

TEST(Words, AcceptedWordsAreDistinctNormalizedMembers) {
  const auto base = q::make_base(-1.0);
  const auto words = q::accepted_words(base, 3, 100, 10);
  ASSERT_EQ(words.size(), 100u);
  for (std::size_t i = 0; i < words.size(); ++i) {
    EXPECT_TRUE(q::is_normalized(words[i]));
    EXPECT_TRUE(is_in_Pi_a(words[i], words[i].length()).member);
    for (std::size_t j = 0; j < i; ++j) EXPECT_NE(words[i].prefix(), words[j].prefix());
  }
  EXPECT_EQ(q::accepted_words(base, 3, 100, 10), words);
  EXPECT_THROW(q::accepted_words(q::make_base(-2.0), 3, 5, 6), Error);
}
