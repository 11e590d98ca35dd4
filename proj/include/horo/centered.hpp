#pragma once

// A rational map written in coordinates centered at one of its fixed points.
//
// With v = z - a, the map becomes F(v) = A(v) / B(v) with A(0) = 0 exactly.
// Working with offsets instead of absolute positions keeps relative precision
// for points converging to a, which is where every tail of a backward orbit
// lives.

#include <cmath>
#include <vector>

#include "horo/poly.hpp"
#include "horo/rational_map.hpp"
#include "horo/roots.hpp"

namespace horo {

class CenteredMap {
 public:
  CenteredMap(const RationalMap& f, Complex a) : center_(a) {
    const auto p = poly::taylor_shift(f.numerator(), a);
    b_ = poly::taylor_shift(f.denominator(), a);
    a_ = poly::sub(p, poly::scale(b_, a));
    a_[0] = Complex{};
    multiplier_ = a_.size() > 1 ? a_[1] / b_[0] : Complex{};
    // D(v) = A'B - AB' - lambda B^2 vanishes at 0 by the choice of lambda.
    const auto da = poly::derivative(a_);
    const auto db = poly::derivative(b_);
    d_ = poly::sub(poly::sub(poly::mul(da, b_), poly::mul(a_, db)),
                   poly::scale(poly::mul(b_, b_), multiplier_));
    if (!d_.empty()) d_[0] = Complex{};
  }

  Complex center() const { return center_; }
  Complex multiplier() const { return multiplier_; }

  /// F(v) = f(a + v) - a.
  Complex forward(Complex v) const { return poly::eval(a_, v) / poly::eval(b_, v); }

  /// All finite v with F(v) = u.
  std::vector<Complex> preimages(Complex u) const {
    auto c = poly::trimmed(poly::sub(a_, poly::scale(b_, u)), 1e-15);
    if (poly::degree(c) == 2) {
      const auto [r1, r2] = roots::quadratic_roots(c[0], c[1], c[2]);
      return {r1, r2};
    }
    return roots::polynomial_roots(std::move(c));
  }

  /// ln|f'(a + v)| - ln|f'(a)|, accurate to relative precision as v -> 0.
  /// Returns -infinity at critical points.
  double log_derivative_ratio(Complex v) const {
    const Complex bv = poly::eval(b_, v);
    const Complex w = poly::eval(d_, v) / (multiplier_ * bv * bv);
    const double s = 2.0 * w.real() + std::norm(w);
    if (s <= -1.0) return -std::numeric_limits<double>::infinity();
    return 0.5 * std::log1p(s);
  }

  /// |f''/f'| at a + v: the gradient norm of ln|f'|.
  double log_derivative_gradient(const RationalMap& f, Complex v) const {
    const auto j = f.jet(center_ + v);
    return std::abs(j.d2 / j.d1);
  }

 private:
  Complex center_;
  Complex multiplier_;
  poly::Poly a_, b_, d_;
};

}  // namespace horo
