#pragma once

// Dense complex polynomials in ascending coefficient order.

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "horo/types.hpp"

namespace horo::poly {

using Poly = std::vector<Complex>;

/// Degree ignoring exactly-zero leading coefficients; -1 for the zero polynomial.
inline int degree(std::span<const Complex> p) {
  for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i)
    if (p[i] != Complex{}) return i;
  return -1;
}

inline double max_abs(std::span<const Complex> p) {
  double m = 0.0;
  for (const auto& c : p) m = std::max(m, std::abs(c));
  return m;
}

/// Drops leading coefficients below rel_tol times the largest coefficient.
inline Poly trimmed(Poly p, double rel_tol = 0.0) {
  const double cut = rel_tol * max_abs(p);
  while (!p.empty() && std::abs(p.back()) <= cut) p.pop_back();
  return p;
}

inline Complex eval(std::span<const Complex> p, Complex z) {
  Complex r{};
  for (auto it = p.rbegin(); it != p.rend(); ++it) r = r * z + *it;
  return r;
}

/// Value and first derivative by Horner's scheme.
inline std::pair<Complex, Complex> eval_d(std::span<const Complex> p, Complex z) {
  Complex r{}, d{};
  for (auto it = p.rbegin(); it != p.rend(); ++it) {
    d = d * z + r;
    r = r * z + *it;
  }
  return {r, d};
}

/// Value, first and second derivative.
struct Jet2 {
  Complex v, d1, d2;
};

inline Jet2 eval_d2(std::span<const Complex> p, Complex z) {
  Complex r{}, d{}, dd{};
  for (auto it = p.rbegin(); it != p.rend(); ++it) {
    dd = dd * z + d;
    d = d * z + r;
    r = r * z + *it;
  }
  return {r, d, 2.0 * dd};
}

/// Sum of |c_i| |z|^i, the natural rounding scale for Horner evaluation.
inline double abs_eval(std::span<const Complex> p, double r) {
  double s = 0.0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) s = s * r + std::abs(*it);
  return s;
}

inline Poly derivative(std::span<const Complex> p) {
  if (p.size() <= 1) return {};
  Poly d(p.size() - 1);
  for (std::size_t i = 1; i < p.size(); ++i) d[i - 1] = p[i] * static_cast<double>(i);
  return d;
}

inline Poly add(std::span<const Complex> a, std::span<const Complex> b) {
  Poly r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return r;
}

inline Poly sub(std::span<const Complex> a, std::span<const Complex> b) {
  Poly r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  return r;
}

inline Poly mul(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

inline Poly scale(Poly p, Complex s) {
  for (auto& c : p) c *= s;
  return p;
}

/// Multiplication by z^k.
inline Poly shift_up(std::span<const Complex> p, int k) {
  Poly r(static_cast<std::size_t>(k), Complex{});
  r.insert(r.end(), p.begin(), p.end());
  return r;
}

inline Poly power(std::span<const Complex> p, int n) {
  Poly r{Complex{1.0}};
  for (int i = 0; i < n; ++i) r = mul(r, p);
  return r;
}

/// Coefficients of u -> p(c + u).
inline Poly taylor_shift(Poly p, Complex c) {
  const int n = static_cast<int>(p.size());
  for (int k = 0; k < n - 1; ++k)
    for (int i = n - 2; i >= k; --i) p[i] += c * p[i + 1];
  return p;
}

/// Homogeneous substitution sum_i c_i A^i B^(d-i), the numerator of p(A/B) * B^d.
inline Poly homogenize(std::span<const Complex> p, std::span<const Complex> A,
                       std::span<const Complex> B, int d) {
  Poly r;
  for (int i = 0; i < static_cast<int>(p.size()); ++i) {
    if (p[i] == Complex{}) continue;
    r = add(r, scale(mul(power(A, i), power(B, d - i)), p[i]));
  }
  return r;
}

/// Determinant of a square complex matrix by partial-pivot elimination.
inline Complex determinant(std::vector<std::vector<Complex>> m) {
  const std::size_t n = m.size();
  Complex det{1.0};
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
    if (m[piv][c] == Complex{}) return Complex{};
    if (piv != c) {
      std::swap(m[piv], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      const Complex f = m[r][c] / m[c][c];
      if (f == Complex{}) continue;
      for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
    }
  }
  return det;
}

/// Sylvester resultant of p and q with respect to their exact degrees.
inline Complex resultant(std::span<const Complex> p, std::span<const Complex> q) {
  const int m = degree(p), n = degree(q);
  if (m < 0 || n < 0) return Complex{};
  if (m == 0) return std::pow(p[0], n);
  if (n == 0) return std::pow(q[0], m);
  const int size = m + n;
  std::vector<std::vector<Complex>> s(size, std::vector<Complex>(size));
  for (int r = 0; r < n; ++r)
    for (int i = 0; i <= m; ++i) s[r][r + i] = p[m - i];
  for (int r = 0; r < m; ++r)
    for (int i = 0; i <= n; ++i) s[n + r][r + i] = q[n - i];
  return determinant(std::move(s));
}

}  // namespace horo::poly
