#pragma once

// Simultaneous all-roots iteration (Aberth-Ehrlich) with Newton polishing.

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "horo/poly.hpp"
#include "horo/types.hpp"

namespace horo::roots {

struct Options {
  int max_iter = 600;
  /// Stop once every correction is below this fraction of the root modulus.
  double step_tol = 1e-15;
  /// Accept a root when |p(z)| <= residual_tol * sum |c_i| |z|^i.
  double residual_tol = 1e-9;
  int polish_steps = 3;
};

/// Upper bound on root moduli (Fujiwara): 2 max |c_i / c_n|^(1/(n-i)).
inline double root_radius(std::span<const Complex> p) {
  const int n = poly::degree(p);
  if (n <= 0) return 1.0;
  double r = 0.0;
  for (int i = 0; i < n; ++i) {
    double q = std::abs(p[i] / p[n]);
    if (q == 0.0) continue;
    if (i == 0) q *= 0.5;
    r = std::max(r, std::pow(q, 1.0 / (n - i)));
  }
  return r > 0.0 ? 2.0 * r : 1.0;
}

/// n starting points on a circle, rotated off the real axis.
inline std::vector<Complex> circle_start(int n, double radius) {
  std::vector<Complex> z(n);
  for (int k = 0; k < n; ++k)
    z[k] = std::polar(radius, 2.0 * kPi * k / n + 0.5 * kPi / n + 0.4);
  return z;
}

/// Orders by real part, then imaginary part.
inline void sort_lex(std::vector<Complex>& z) {
  std::sort(z.begin(), z.end(), [](const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
}

/// Aberth-Ehrlich iteration driven by a Newton-ratio callback.
///
/// `ratio(z)` must return p(z) / p'(z) for the polynomial whose roots are
/// sought (an infinite or NaN ratio is treated as a stalled point). The
/// callback form lets callers evaluate through a stable route, e.g. iterating
/// a map instead of expanding f^n(z) - z into coefficients.
namespace detail {

template <class Ratio>
void aberth_sweeps(Ratio& ratio, std::vector<Complex>& z, std::vector<bool> done, const Options& opt) {
  const std::size_t n = z.size();
  for (int it = 0; it < opt.max_iter; ++it) {
    bool all_done = true;
    for (std::size_t k = 0; k < n; ++k) {
      if (done[k]) continue;
      const Complex w = ratio(z[k]);
      if (w == Complex{}) {
        done[k] = true;
        continue;
      }
      if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) {
        z[k] *= Complex(0.9, 0.1);
        all_done = false;
        continue;
      }
      Complex s{};
      for (std::size_t j = 0; j < n; ++j)
        if (j != k) {
          const Complex diff = z[k] - z[j];
          s += diff == Complex{} ? Complex{1e300} : 1.0 / diff;
        }
      const Complex corr = w / (1.0 - w * s);
      z[k] -= corr;
      if (std::abs(corr) <= opt.step_tol * std::max(std::abs(z[k]), 1e-300))
        done[k] = true;
      else
        all_done = false;
    }
    if (all_done) break;
  }
}

}  // namespace detail

/// Aberth-Ehrlich iteration driven by a Newton-ratio callback.
///
/// `ratio(z)` must return p(z) / p'(z) for the polynomial whose roots are
/// sought (an infinite or NaN ratio is treated as a stalled point). The
/// callback form lets callers evaluate through a stable route, e.g. iterating
/// a map instead of expanding f^n(z) - z into coefficients.
///
/// Two approximations that land on the same point (closer than 1e-11
/// relative; true multiple roots stay about sqrt(eps) apart) are split by
/// restarting one of them from a rotated start while the others stay fixed.
template <class Ratio>
std::vector<Complex> aberth(Ratio&& ratio, std::vector<Complex> z, const Options& opt = {}) {
  const std::size_t n = z.size();
  const std::vector<Complex> start = z;
  detail::aberth_sweeps(ratio, z, std::vector<bool>(n, false), opt);
  for (int round = 1; round <= 8; ++round) {
    std::vector<bool> done(n, true);
    bool any = false;
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < k; ++j)
        if (done[j] && std::abs(z[k] - z[j]) <= 1e-11 * std::max(1.0, std::abs(z[k]))) {
          done[k] = false;
          any = true;
          z[k] = start[k] * std::polar(1.0 + 0.05 * round, 0.37 * round);
          break;
        }
    if (!any) break;
    detail::aberth_sweeps(ratio, z, done, opt);
  }
  return z;
}

/// Plain Newton polishing; keeps the iterate only while the step shrinks.
template <class Ratio>
Complex polish(Ratio&& ratio, Complex z, int steps) {
  double last = std::numeric_limits<double>::infinity();
  for (int i = 0; i < steps; ++i) {
    const Complex w = ratio(z);
    const double s = std::abs(w);
    if (!std::isfinite(s) || s >= last) break;
    z -= w;
    last = s;
    if (s == 0.0) break;
  }
  return z;
}

/// All roots of a coefficient polynomial, with multiplicity, sorted
/// lexicographically. Exact zero roots are factored out first.
inline std::vector<Complex> polynomial_roots(poly::Poly p, const Options& opt = {}) {
  p = poly::trimmed(std::move(p));
  const int n = poly::degree(p);
  if (n < 0) throw Error(ErrorCode::Domain, "roots of the zero polynomial");
  int zeros = 0;
  while (zeros < n && p[zeros] == Complex{}) ++zeros;
  poly::Poly q(p.begin() + zeros, p.end());
  const int m = n - zeros;

  std::vector<Complex> out(zeros, Complex{});
  if (m > 0) {
    auto ratio = [&q](Complex z) {
      auto [v, d] = poly::eval_d(q, z);
      return v / d;
    };
    std::vector<Complex> z;
    if (m == 1) {
      z = {-q[0] / q[1]};
    } else {
      z = aberth(ratio, circle_start(m, root_radius(q)), opt);
      for (auto& r : z) r = polish(ratio, r, opt.polish_steps);
    }
    std::vector<double> bad;
    for (const auto& r : z) {
      const double res = std::abs(poly::eval(q, r));
      const double scale = poly::abs_eval(q, std::abs(r));
      if (!(res <= opt.residual_tol * scale)) bad.push_back(res / scale);
    }
    if (!bad.empty()) {
      std::ostringstream os;
      os << "root finder did not converge; relative residuals:";
      for (double b : bad) os << ' ' << b;
      throw Error(ErrorCode::RootNotConverged, os.str());
    }
    out.insert(out.end(), z.begin(), z.end());
  }
  sort_lex(out);
  return out;
}

/// Roots of c2 z^2 + c1 z + c0 by the cancellation-free formula.
inline std::pair<Complex, Complex> quadratic_roots(Complex c0, Complex c1, Complex c2) {
  const Complex disc = std::sqrt(c1 * c1 - 4.0 * c2 * c0);
  // Choose the sign that avoids cancellation in c1 + disc.
  const Complex s = (std::real(std::conj(c1) * disc) >= 0.0) ? disc : -disc;
  const Complex q = -0.5 * (c1 + s);
  if (q == Complex{}) return {Complex{}, Complex{}};
  return {q / c2, c0 / q};
}

}  // namespace horo::roots
