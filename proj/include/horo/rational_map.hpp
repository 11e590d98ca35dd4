#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "horo/poly.hpp"
#include "horo/roots.hpp"
#include "horo/types.hpp"

namespace horo {

/// Hard ceiling on forward iteration counts.
inline constexpr int kMaxIterate = 1 << 24;

/// A rational map P/Q of degree at least two, stored in canonical form:
/// polynomials have denominator exactly {1}; genuinely rational maps have a
/// monic denominator.
class RationalMap {
 public:
  RationalMap(poly::Poly num, poly::Poly den) {
    num = poly::trimmed(std::move(num));
    den = poly::trimmed(std::move(den));
    if (poly::degree(den) < 0) throw Error(ErrorCode::InvalidMap, "denominator is identically zero");
    if (poly::degree(num) < 0) throw Error(ErrorCode::InvalidMap, "numerator is identically zero");
    const Complex lead = den.back();
    for (auto& c : num) c /= lead;
    for (auto& c : den) c /= lead;
    num_ = std::move(num);
    den_ = std::move(den);
    degree_ = std::max(poly::degree(num_), poly::degree(den_));
    if (degree_ < 2)
      throw Error(ErrorCode::InvalidMap, "map degree " + std::to_string(degree_) + " < 2");
    if (!is_polynomial()) {
      // Common-root test on max-normalized coefficients.
      const double sn = poly::max_abs(num_), sd = poly::max_abs(den_);
      const auto res = poly::resultant(poly::scale(num_, 1.0 / sn), poly::scale(den_, 1.0 / sd));
      if (!(std::abs(res) >= 1e-12))
        throw Error(ErrorCode::InvalidMap, "numerator and denominator share a root");
    }
    double s = 0.0;
    for (const auto& c : num_) s += std::abs(c);
    overflow_radius_ = std::pow(1e250 / s, 1.0 / degree_);
  }

  /// z^2 + epsilon.
  static RationalMap quadratic(Complex epsilon) {
    return RationalMap({epsilon, Complex{}, Complex{1.0}}, {Complex{1.0}});
  }

  static RationalMap polynomial(poly::Poly coeffs) { return RationalMap(std::move(coeffs), {Complex{1.0}}); }

  const poly::Poly& numerator() const { return num_; }
  const poly::Poly& denominator() const { return den_; }
  int degree() const { return degree_; }
  bool is_polynomial() const { return den_.size() == 1; }

  /// Epsilon when the map is exactly z^2 + epsilon.
  std::optional<Complex> quadratic_epsilon() const {
    if (is_polynomial() && num_.size() == 3 && num_[1] == Complex{} && num_[2] == Complex{1.0})
      return num_[0];
    return std::nullopt;
  }

  ExtPoint eval(Complex z) const {
    if (is_polynomial()) {
      if (std::abs(z) > overflow_radius_) return ExtPoint::infinity();
      const Complex w = poly::eval(num_, z);
      return finite_or_inf(w);
    }
    const Complex q = poly::eval(den_, z);
    if (q == Complex{}) return ExtPoint::infinity();
    return finite_or_inf(poly::eval(num_, z) / q);
  }

  ExtPoint eval(const ExtPoint& z) const {
    if (!z.infinite) return eval(z.z);
    if (is_polynomial()) return ExtPoint::infinity();
    const int dp = poly::degree(num_), dq = poly::degree(den_);
    if (dp > dq) return ExtPoint::infinity();
    if (dp < dq) return ExtPoint::finite(Complex{});
    return ExtPoint::finite(num_.back() / den_.back());
  }

  /// f'(z); a pole of f yields the infinity tag.
  ExtPoint derivative(Complex z) const {
    if (is_polynomial()) return finite_or_inf(poly::eval_d(num_, z).second);
    const auto [p, dp] = poly::eval_d(num_, z);
    const auto [q, dq] = poly::eval_d(den_, z);
    if (q == Complex{}) return ExtPoint::infinity();
    return finite_or_inf((dp * q - p * dq) / (q * q));
  }

  /// f(z), f'(z), f''(z) at a finite non-pole point.
  poly::Jet2 jet(Complex z) const {
    const auto p = poly::eval_d2(num_, z);
    if (is_polynomial()) return p;
    const auto q = poly::eval_d2(den_, z);
    // Taylor division of (p0 + p1 h + p2 h^2) by (q0 + q1 h + q2 h^2).
    const Complex p2 = 0.5 * p.d2, q2 = 0.5 * q.d2;
    const Complex c0 = p.v / q.v;
    const Complex c1 = (p.d1 - c0 * q.d1) / q.v;
    const Complex c2 = (p2 - c0 * q2 - c1 * q.d1) / q.v;
    return {c0, c1, 2.0 * c2};
  }

  ExtPoint iterate(ExtPoint z, int n) const {
    if (n < 0 || n > kMaxIterate)
      throw Error(ErrorCode::Precondition, "iteration count outside budget: " + std::to_string(n));
    for (int i = 0; i < n; ++i) {
      if (z.infinite && is_polynomial()) break;
      z = eval(z);
    }
    return z;
  }
  ExtPoint iterate(Complex z, int n) const { return iterate(ExtPoint::finite(z), n); }

  /// Numerator P'Q - PQ' of f', with cancelled leading terms removed.
  poly::Poly derivative_numerator() const {
    auto n = poly::sub(poly::mul(poly::derivative(num_), den_), poly::mul(num_, poly::derivative(den_)));
    return poly::trimmed(std::move(n), 1e-13);
  }

  /// Finite critical points with multiplicity.
  std::vector<Complex> critical_points() const { return roots::polynomial_roots(derivative_numerator()); }

  /// Finite images of the finite critical points.
  std::vector<Complex> critical_values() const {
    std::vector<Complex> out;
    for (const auto& c : critical_points()) {
      const auto v = eval(c);
      if (!v.infinite) out.push_back(v.z);
    }
    return out;
  }

  std::vector<Complex> poles() const {
    if (is_polynomial()) return {};
    return roots::polynomial_roots(den_);
  }

  /// Finite solutions of f(z) = w, with multiplicity, unordered.
  std::vector<Complex> preimages(Complex w) const {
    auto c = poly::trimmed(poly::sub(num_, poly::scale(den_, w)), 1e-15);
    if (poly::degree(c) == 2) {
      const auto [r1, r2] = roots::quadratic_roots(c[0], c[1], c[2]);
      return {r1, r2};
    }
    return roots::polynomial_roots(std::move(c));
  }

  /// Numerator and denominator of f^n (denominator {1} for polynomials).
  std::pair<poly::Poly, poly::Poly> iterate_coefficients(int n) const {
    poly::Poly A{Complex{}, Complex{1.0}}, B{Complex{1.0}};
    for (int i = 0; i < n; ++i) {
      auto A2 = poly::homogenize(num_, A, B, degree_);
      auto B2 = is_polynomial() ? poly::Poly{Complex{1.0}} : poly::homogenize(den_, A, B, degree_);
      A = std::move(A2);
      B = std::move(B2);
    }
    return {A, B};
  }

  double overflow_radius() const { return overflow_radius_; }

 private:
  static ExtPoint finite_or_inf(Complex w) {
    if (!std::isfinite(w.real()) || !std::isfinite(w.imag()) || std::abs(w) > 1e250)
      return ExtPoint::infinity();
    return ExtPoint::finite(w);
  }

  poly::Poly num_, den_;
  int degree_ = 0;
  double overflow_radius_ = 0.0;
};

/// The quadratic family parameter.
struct QuadraticParam {
  Complex epsilon;
};

}  // namespace horo
