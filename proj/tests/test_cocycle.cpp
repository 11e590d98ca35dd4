#include <gtest/gtest.h>

#include "horo/cocycle.hpp"
#include "horo/quadratic.hpp"

using namespace horo;

namespace {

// Plain truncated sum of ln|2 y_j| - ln|2a| along a square-root backward orbit,
// accumulated in long double.
double direct_sum(Complex eps, const std::string& word, int depth) {
  const Complex a = 0.5 * (1.0 + std::sqrt(1.0 - 4.0 * eps));
  Complex y = a;
  long double s = 0;
  for (int j = 1; j <= depth; ++j) {
    const Complex r = std::sqrt(y - eps);
    const bool near_r = std::abs(r - a) < std::abs(-r - a) ||
                        (std::abs(r - a) == std::abs(-r - a) && r.imag() >= -r.imag());
    const bool minus = j <= static_cast<int>(word.size()) && word[j - 1] == '-';
    y = (near_r != minus) ? r : -r;
    s += std::log(static_cast<long double>(std::abs(y))) - std::log(static_cast<long double>(std::abs(a)));
  }
  return static_cast<double>(s);
}

}  // namespace

TEST(Cocycle, SameWordIsExactlyZero) {
  const auto base = quadratic::make_base(0.1);
  const auto w = OrbitWord::parse(base, "-+-");
  const auto v = basic_cocycle(w, w, 1e-12);
  EXPECT_EQ(v.value, 0.0);
  EXPECT_EQ(v.tail_bound, 0.0);
}

TEST(Cocycle, SquareMapVanishes) {
  const auto base = quadratic::make_base(0.0);
  for (const std::string w : {"-", "-+-", "--", "-++--+-"})
    EXPECT_NEAR(cocycle_vs_fixed(OrbitWord::parse(base, w), 1e-12).value, 0.0, 1e-12) << w;
}

TEST(Cocycle, SignsMatchParameter) {
  EXPECT_GT(cocycle_vs_fixed(OrbitWord::parse(quadratic::make_base(0.1), "-"), 1e-12).value, 0.0);
  EXPECT_LT(cocycle_vs_fixed(OrbitWord::parse(quadratic::make_base(-1.0), "-"), 1e-12).value, 0.0);
}

TEST(Cocycle, AllPrincipalPrefixIsZero) {
  const auto base = quadratic::make_base(0.1);
  EXPECT_EQ(cocycle_vs_fixed(OrbitWord::parse(base, "+++"), 1e-12).value, 0.0);
}

TEST(Cocycle, AgreesWithDeepDirectSum) {
  for (Complex eps : {Complex(0.1), Complex(-1.0), Complex(-0.5), Complex(0.2)}) {
    const auto base = quadratic::make_base(eps);
    for (const std::string w : {"-", "-+-", "--", "-+++-"}) {
      const auto v = cocycle_vs_fixed(OrbitWord::parse(base, w), 1e-13);
      EXPECT_LE(v.tail_bound, 1e-13);
      EXPECT_NEAR(v.value, direct_sum(eps, w, 2000), 1e-11) << eps << " " << w;
    }
  }
}

TEST(Cocycle, KnownValue) {
  const auto base = quadratic::make_base(0.1);
  EXPECT_NEAR(cocycle_vs_fixed(OrbitWord::parse(base, "-"), 1e-12).value, direct_sum(0.1, "-", 2000), 1e-11);
  EXPECT_NEAR(direct_sum(0.1, "-", 2000), 0.45047941, 1e-7);
}

TEST(Cocycle, AntisymmetryAndCocycleIdentity) {
  const auto base = quadratic::make_base(-1.0);
  const auto x = OrbitWord::parse(base, "-"), y = OrbitWord::parse(base, "-+-");
  const double tol = 1e-13;
  const double bxy = basic_cocycle(x, y, tol).value, byx = basic_cocycle(y, x, tol).value;
  EXPECT_NEAR(bxy, -byx, 1e-12);
  EXPECT_NEAR(bxy, cocycle_vs_fixed(y, tol).value - cocycle_vs_fixed(x, tol).value, 1e-12);
}

TEST(Cocycle, ShiftInvariance) {
  const double tol = 1e-12;
  const auto base = quadratic::make_base(0.1);
  const auto w = OrbitWord::parse(base, "-");
  const double b = cocycle_vs_fixed(w, tol).value;
  for (int n : {1, 5, 17}) EXPECT_NEAR(cocycle_vs_fixed(shift(w, n), tol).value, b, 2 * tol);
}

TEST(Cocycle, DifferentBasesRejected) {
  const auto b1 = quadratic::make_base(0.1), b2 = quadratic::make_base(0.1);
  EXPECT_THROW(basic_cocycle(OrbitWord::parse(b1, "-"), OrbitWord::parse(b2, "-"), 1e-12), Error);
}

TEST(Cocycle, CriticalOrbitIsSingular) {
  const auto base = quadratic::make_base(-2.0);
  try {
    cocycle_vs_fixed(OrbitWord::parse(base, "-"), 1e-12);
    FAIL();
  } catch (const Error& e) {
    EXPECT_TRUE(e.code() == ErrorCode::SingularTerm || e.code() == ErrorCode::DegenerateBranch);
  }
}

TEST(Field, AtCenterEqualsCocycle) {
  for (Complex eps : {Complex(0.1), Complex(-1.0)}) {
    const auto base = quadratic::make_base(eps);
    for (const std::string w : {"-", "-+-"}) {
      const auto c = OrbitWord::parse(base, w);
      EXPECT_NEAR(cocycle_field(c, base->a(), 1e-13).value, cocycle_vs_fixed(c, 1e-13).value, 1e-12);
    }
  }
}

TEST(Field, MeanValueProperty) {
  const auto base = quadratic::make_base(0.1);
  const auto c = OrbitWord::parse(base, "-");
  for (Complex center : {base->a(), base->a() + std::polar(base->sigma / 3, 1.0)}) {
    CompensatedSum s;
    for (int k = 0; k < 16; ++k)
      s.add(cocycle_field(c, center + std::polar(base->sigma / 10, 2 * M_PI * k / 16), 1e-13).value);
    EXPECT_NEAR(s.value() / 16, cocycle_field(c, center, 1e-13).value, 1e-6);
  }
}

TEST(Field, NotConstant) {
  const auto base = quadratic::make_base(0.1);
  const auto c = OrbitWord::parse(base, "-");
  std::vector<double> v;
  for (int k = 0; k < 50; ++k) {
    const double r = base->sigma / 2 * std::sqrt((k + 0.5) / 50.0);
    v.push_back(cocycle_field(c, base->a() + std::polar(r, 2.399963 * k), 1e-12).value);
  }
  double mean = 0, var = 0;
  for (double x : v) mean += x / v.size();
  for (double x : v) var += (x - mean) * (x - mean) / (v.size() - 1);
  EXPECT_GT(var, 1e-10);
}

TEST(Field, OutsideDiskIsPrecondition) {
  const auto base = quadratic::make_base(0.1);
  EXPECT_THROW(cocycle_field(OrbitWord::parse(base, "-"), base->a() + 2.0 * base->sigma, 1e-12), Error);
}

TEST(Heights, Pushforward) {
  const auto base = quadratic::make_base(-1.0);
  const double M = std::log(std::abs(base->fixed.multiplier));
  const HeightPoint p{fixed_word(base), 0.0, 0};
  const auto q = pushforward_height(p, 3);
  EXPECT_EQ(q.word, fixed_word(base));
  EXPECT_NEAR(q.height(), 3 * M, 1e-15);
  const HeightPoint w{OrbitWord::parse(base, "-+"), 0.25, 0};
  const auto same = pushforward_height(w, 0);
  EXPECT_EQ(same.word, w.word);
  EXPECT_EQ(same.height(), w.height());
  const auto back = pushforward_height(pushforward_height(w, 4), -4);
  EXPECT_EQ(back.word, w.word);
  EXPECT_EQ(back.height(), w.height());
  EXPECT_THROW(pushforward_height(w, -1), Error);
}

TEST(Heights, SingleWord) {
  const auto base = quadratic::make_base(0.1);
  const auto w = OrbitWord::parse(base, "-");
  const auto r = height_set({w}, 0, 0, 1e-12, -10, 10);
  ASSERT_EQ(r.count, 1);
  EXPECT_EQ(r.values[0].v, cocycle_vs_fixed(w, 1e-12).value);
}

TEST(Heights, SquareMapIsAProgression) {
  const auto base = quadratic::make_base(0.0);
  const auto words = quadratic::accepted_words(base, 3, 40, 10);
  const auto r = height_set(words, -5, 5, 1e-12, 0.0, 1.0);
  EXPECT_NEAR(r.max_gap, std::log(2.0), 1e-11);
  for (const auto& e : r.values) EXPECT_TRUE(std::abs(e.v) < 1e-11 || std::abs(e.v - std::log(2.0)) < 1e-11) << e.v;
}

TEST(Heights, BasilicaIsDense) {
  const auto base = quadratic::make_base(-1.0);
  const auto words = quadratic::accepted_words(base, 11, 500, 12);
  const auto r = height_set(words, -40, 40, 1e-11, 0.0, 1.0);
  EXPECT_LT(r.max_gap, 0.1);
}

TEST(Heights, RejectsNonMembers) {
  const auto base = quadratic::make_base(0.1);
  EXPECT_THROW(height_set({fixed_word(base)}, 0, 0, 1e-12), Error);
  EXPECT_THROW(height_set({OrbitWord::parse(base, "-")}, 1, 0, 1e-12), Error);
}

TEST(Semigroup, DefectDecays) {
  const auto base = quadratic::make_base(0.1);
  const auto y = OrbitWord::parse(base, "-");
  const auto rows = semigroup_convergence(y, y, {10, 20, 30, 40}, 1e-13);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LT(rows[i].defect, rows[i - 1].defect);
  EXPECT_LT(rows.back().defect, 1e-8);
  // Measured per-step rate sits near 1/|lambda|.
  const double rate = fitted_decay_rate(rows);
  const double inv = 1.0 / std::abs(base->fixed.multiplier);
  EXPECT_GT(rate, inv / 2);
  EXPECT_LT(rate, inv * 2);
  EXPECT_NEAR(rate, inv, 0.01);
  // The looser factor-2 band around 1/|lambda|^2 also holds at this parameter.
  EXPECT_GT(rate, inv * inv / 2);
  EXPECT_LT(rate, inv * inv * 2);
}

TEST(Semigroup, AlignedDefectMatchesDirectDifference) {
  const auto base = quadratic::make_base(0.1);
  const auto y = OrbitWord::parse(base, "-"), c = OrbitWord::parse(base, "-+-");
  const double tol = 1e-13;
  for (int j : {10, 15, 20}) {
    const double direct = cocycle_vs_fixed(concatenate(y, c, j), tol).value - cocycle_vs_fixed(y, tol).value -
                          cocycle_vs_fixed(c, tol).value;
    EXPECT_NEAR(semigroup_defect(y, c, j, tol).value, direct, 1e-11) << j;
  }
}

TEST(Semigroup, FixedTailHasNoDefect) {
  const auto base = quadratic::make_base(0.1);
  const auto y = OrbitWord::parse(base, "-");
  for (const auto& r : semigroup_convergence(y, fixed_word(base), {10, 20, 30}, 1e-12)) EXPECT_EQ(r.defect, 0.0);
}

TEST(Progression, Examples) {
  EXPECT_TRUE(progression_density_check({0.30, 0.31}, 1.0, 0.0, 1.0, 0.02).dense);
  const auto deg = progression_density_check({std::log(2.0)}, std::log(2.0), 0.0, 1.0, 0.5);
  EXPECT_FALSE(deg.dense);
  EXPECT_NEAR(deg.max_gap, std::log(2.0), 1e-12);
  try {
    progression_density_check({}, 1.0, 0.0, 1.0, 0.1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Precondition);
  }
}

TEST(Progression, AgreesWithBruteForce) {
  // Sums s*0.30 + t*0.31 + m with s + t <= 200 reduced into [0, 1).
  std::vector<double> v;
  for (int s = 0; s <= 200; ++s)
    for (int t = 0; s + t <= 200; ++t) {
      if (s + t == 0) continue;
      v.push_back(std::fmod(0.30 * s + 0.31 * t, 1.0));
    }
  std::sort(v.begin(), v.end());
  double gap = v.front();
  for (std::size_t i = 1; i < v.size(); ++i) gap = std::max(gap, v[i] - v[i - 1]);
  gap = std::max(gap, 1.0 - v.back());
  const auto r = progression_density_check({0.30, 0.31}, 1.0, 0.0, 1.0, 0.02);
  EXPECT_NEAR(r.max_gap, gap, 0.02 / 8 + 1e-12);
}
