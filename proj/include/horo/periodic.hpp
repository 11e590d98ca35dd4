#pragma once

// Periodic points, their classification, Koenigs linearization at repelling
// fixed points, and the collinearity test for the preimage cloud of a fixed
// point in its linearizing chart.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "horo/centered.hpp"
#include "horo/rational_map.hpp"
#include "horo/roots.hpp"

namespace horo {

/// Indifferent covers |lambda| = 1 without a detected root of unity.
enum class PointClass { Attracting, Repelling, Parabolic, Superattracting, Indifferent };

inline const char* to_string(PointClass c) {
  switch (c) {
    case PointClass::Attracting: return "attracting";
    case PointClass::Repelling: return "repelling";
    case PointClass::Parabolic: return "parabolic";
    case PointClass::Superattracting: return "superattracting";
    case PointClass::Indifferent: return "indifferent";
  }
  return "?";
}

struct PeriodicPoint {
  Complex location;
  int period = 1;
  Complex multiplier;
  PointClass cls = PointClass::Repelling;
};

/// Largest root-of-unity order tried by the parabolic test.
inline constexpr int kParabolicOrder = 64;

inline PointClass classify(Complex multiplier, int max_order = kParabolicOrder) {
  const double m = std::abs(multiplier);
  if (m < 1e-9) return PointClass::Superattracting;
  Complex p{1.0};
  for (int q = 1; q <= max_order; ++q) {
    p *= multiplier;
    if (std::abs(p - 1.0) < 1e-8) return PointClass::Parabolic;
  }
  if (std::abs(m - 1.0) < 1e-12) return PointClass::Indifferent;
  return m < 1.0 ? PointClass::Attracting : PointClass::Repelling;
}

struct PeriodicOptions {
  /// Ceiling on the degree of the fixed-point polynomial of f^n.
  int max_degree = 4096;
  double residual_tol = 1e-9;
};

namespace detail {

/// Multiplier of z along n forward steps; nullopt if the orbit meets a pole.
inline std::optional<Complex> cycle_multiplier(const RationalMap& f, Complex z, int n) {
  Complex m{1.0};
  for (int k = 0; k < n; ++k) {
    const auto d = f.derivative(z);
    const auto w = f.eval(z);
    if (d.infinite || w.infinite) return std::nullopt;
    m *= d.z;
    z = w.z;
  }
  return m;
}

inline double cycle_residual(const RationalMap& f, Complex z, int n) {
  const auto w = f.iterate(z, n);
  if (w.infinite) return std::numeric_limits<double>::infinity();
  return std::abs(w.z - z) / std::max(1.0, std::abs(z));
}

}  // namespace detail

/// Points of exact period `period` in the finite plane, with multiplicity,
/// sorted by real then imaginary part.
inline std::vector<PeriodicPoint> periodic_points(const RationalMap& f, int period,
                                                  const PeriodicOptions& opt = {}) {
  if (period < 1) throw Error(ErrorCode::Precondition, "period must be positive");
  const double deg = std::pow(static_cast<double>(f.degree()), period);
  if (deg > opt.max_degree)
    throw Error(ErrorCode::Precondition,
                "period " + std::to_string(period) + " exceeds root-finder budget");

  auto [A, B] = f.iterate_coefficients(period);
  // Polynomial iterates are monic of exact degree, whatever the size of the
  // lower coefficients; only rational maps can lose leading terms.
  auto N = poly::trimmed(poly::sub(A, poly::shift_up(B, 1)), f.is_polynomial() ? 0.0 : 1e-14);
  const int n = poly::degree(N);

  std::vector<Complex> candidates;
  if (n >= 1) {
    // Polynomial maps: evaluate f^n(z) - z by iteration, which stays accurate
    // where the expanded coefficients do not.
    auto coeff_ratio = [&N](Complex z) {
      auto [v, d] = poly::eval_d(N, z);
      return v / d;
    };
    auto ratio = [&](Complex z) -> Complex {
      if (!f.is_polynomial()) return coeff_ratio(z);
      Complex w = z, d{1.0};
      for (int k = 0; k < period; ++k) {
        d *= poly::eval_d(f.numerator(), w).second;
        w = poly::eval(f.numerator(), w);
        if (std::abs(w) > 1e100) return coeff_ratio(z);
      }
      return (w - z) / (d - 1.0);
    };
    int zeros = 0;
    while (zeros < n && N[zeros] == Complex{}) ++zeros;
    candidates.assign(zeros, Complex{});
    if (n - zeros > 0) {
      poly::Poly q(N.begin() + zeros, N.end());
      // N = z^k q, so q/q' = 1 / (N'/N - k/z).
      auto deflated = [&](Complex z) -> Complex {
        if (zeros == 0) return ratio(z);
        return 1.0 / (1.0 / ratio(z) - static_cast<double>(zeros) / z);
      };
      auto z = roots::aberth(deflated, roots::circle_start(n - zeros, roots::root_radius(q)));
      for (auto& r : z) r = roots::polish(deflated, r, 4);
      candidates.insert(candidates.end(), z.begin(), z.end());
    }
  }

  std::vector<PeriodicPoint> out;
  std::vector<double> bad;
  for (const auto& z : candidates) {
    const double res = detail::cycle_residual(f, z, period);
    if (!(res < opt.residual_tol)) {
      bad.push_back(res);
      continue;
    }
    int exact = period;
    for (int p = 1; p < period; ++p)
      if (period % p == 0 && detail::cycle_residual(f, z, p) < opt.residual_tol) {
        exact = p;
        break;
      }
    if (exact != period) continue;
    const auto m = detail::cycle_multiplier(f, z, period);
    if (!m) continue;
    out.push_back({z, period, *m, classify(*m)});
  }
  if (!bad.empty()) {
    std::string msg = "periodic point residuals above tolerance:";
    for (double b : bad) msg += " " + std::to_string(b);
    throw Error(ErrorCode::RootNotConverged, msg);
  }
  std::sort(out.begin(), out.end(), [](const PeriodicPoint& a, const PeriodicPoint& b) {
    if (a.location.real() != b.location.real()) return a.location.real() < b.location.real();
    return a.location.imag() < b.location.imag();
  });
  return out;
}

/// Fixed points counted on the Riemann sphere.
struct FixedPointCount {
  int finite = 0;
  int at_infinity = 0;
  int total() const { return finite + at_infinity; }
};

inline FixedPointCount count_fixed_points(const RationalMap& f) {
  FixedPointCount c;
  c.finite = static_cast<int>(periodic_points(f, 1).size());
  if (f.is_polynomial()) {
    c.at_infinity = 1;
  } else {
    auto N = poly::trimmed(poly::sub(f.numerator(), poly::shift_up(f.denominator(), 1)), 1e-14);
    c.at_infinity = f.degree() + 1 - poly::degree(N);
  }
  return c;
}

/// Repelling fixed point with the largest multiplier modulus (ties: larger real part).
inline PeriodicPoint dominant_repelling_fixed_point(const RationalMap& f) {
  std::optional<PeriodicPoint> best;
  for (const auto& p : periodic_points(f, 1)) {
    if (p.cls != PointClass::Repelling) continue;
    if (!best || std::abs(p.multiplier) > std::abs(best->multiplier) + 1e-12 ||
        (std::abs(std::abs(p.multiplier) - std::abs(best->multiplier)) <= 1e-12 &&
         p.location.real() > best->location.real()))
      best = p;
  }
  if (!best) throw Error(ErrorCode::Domain, "map has no finite repelling fixed point");
  return *best;
}

// ---------------------------------------------------------------------------
// Linearization

struct LinearizerOptions {
  int boundary_samples = 256;
  /// Largest admissible contraction of the inverse branch on the trial disk.
  double max_contraction = 0.95;
  /// Radius floor, relative to max(1, |a|).
  double radius_floor = 1e-6;
  int max_depth = 4000;
};

/// Koenigs coordinate phi at a repelling fixed point a: phi(f(z)) = lambda phi(z),
/// phi(a) = 0, phi'(a) = 1, evaluated as lim lambda^n (g^n(z) - a) with g the
/// inverse branch fixing a.
class Linearizer {
 public:
  static Linearizer build(const RationalMap& f, const PeriodicPoint& a, const LinearizerOptions& opt = {}) {
    if (a.period != 1 || a.cls != PointClass::Repelling)
      throw Error(ErrorCode::Precondition, "linearizer needs a repelling fixed point");
    Linearizer lin(f, a, opt);
    double r0 = std::numeric_limits<double>::infinity();
    std::vector<Complex> obstacles = f.critical_points();
    for (const auto& v : f.critical_values()) obstacles.push_back(v);
    for (const auto& p : f.poles()) obstacles.push_back(p);
    for (const auto& o : obstacles) r0 = std::min(r0, std::abs(o - a.location));
    r0 = std::isfinite(r0) ? 0.5 * r0 : 0.5 * std::max(1.0, std::abs(a.location));
    const double floor = opt.radius_floor * std::max(1.0, std::abs(a.location));
    for (double r = r0; r >= floor; r *= 0.5) {
      if (auto kappa = lin.certify(r, obstacles)) {
        lin.radius_ = r;
        lin.contraction_ = *kappa;
        int depth = 0;
        for (int k = 0; k < opt.boundary_samples; k += 8) {
          int used = 0;
          lin.eval_offset(std::polar(0.999 * r, 2.0 * kPi * k / opt.boundary_samples), &used);
          depth = std::max(depth, used);
        }
        lin.convergence_depth_ = depth;
        return lin;
      }
    }
    throw Error(ErrorCode::NonContraction, "inverse branch does not contract above the radius floor");
  }

  const PeriodicPoint& base() const { return base_; }
  const CenteredMap& centered() const { return centered_; }
  Complex multiplier() const { return centered_.multiplier(); }
  /// Radius of the certified disk D_r(a).
  double radius() const { return radius_; }
  /// Sampled sup of |g(z) - a| / r on the boundary of the certified disk.
  double contraction() const { return contraction_; }
  int convergence_depth() const { return convergence_depth_; }

  /// Principal inverse in centered coordinates: the unique preimage in the disk.
  Complex inverse_offset(Complex u) const {
    const auto pre = centered_.preimages(u);
    const Complex* best = nullptr;
    int inside = 0;
    for (const auto& v : pre) {
      if (std::abs(v) < radius_) ++inside;
      if (!best || std::abs(v) < std::abs(*best)) best = &v;
    }
    if (inside != 1 || !best)
      throw Error(ErrorCode::Domain, "point has no unique preimage in the certified disk");
    return *best;
  }

  Complex inverse_branch(Complex z) const { return base_.location + inverse_offset(z - base_.location); }

  /// phi at a + v; outside the disk the point is pulled back by the principal
  /// inverse first and pushed forward by powers of lambda.
  Complex eval_offset(Complex v, int* depth_used = nullptr) const {
    const Complex lambda = centered_.multiplier();
    Complex scale{1.0};
    int pulls = 0;
    while (std::abs(v) >= radius_) {
      if (++pulls > 200) throw Error(ErrorCode::Domain, "pullback did not reach the certified disk");
      v = inverse_offset(v);
      scale *= lambda;
    }
    Complex phi = v, lam_pow{1.0};
    int n = 0;
    for (; n < opt_.max_depth; ++n) {
      if (v == Complex{}) break;
      v = inverse_offset(v);
      lam_pow *= lambda;
      const Complex next = lam_pow * v;
      const double diff = std::abs(next - phi);
      phi = next;
      if (diff <= 1e-15 * std::max(1.0, std::abs(phi))) break;
    }
    if (depth_used) *depth_used = n + 1;
    return scale * phi;
  }

  Complex operator()(Complex z) const { return eval_offset(z - base_.location); }

 private:
  Linearizer(const RationalMap& f, const PeriodicPoint& a, const LinearizerOptions& opt)
      : map_(f), base_(a), centered_(f, a.location), opt_(opt) {}

  /// Disk certificate: no obstacle inside, f maps the boundary outside the disk
  /// with winding number one, and the principal inverse maps the boundary
  /// strictly inside. Returns the contraction factor on success.
  std::optional<double> certify(double r, const std::vector<Complex>& obstacles) {
    for (const auto& o : obstacles)
      if (std::abs(o - base_.location) <= r) return std::nullopt;
    const int n = opt_.boundary_samples;
    double kappa = 0.0, winding = 0.0;
    Complex prev = centered_.forward(Complex(r, 0.0));
    for (int k = 0; k < n; ++k) {
      const Complex u = std::polar(r, 2.0 * kPi * k / n);
      const Complex fu = centered_.forward(u);
      if (!(std::abs(fu) > r)) return std::nullopt;
      if (k > 0) winding += std::arg(fu / prev);
      prev = fu;
      int inside = 0;
      double best = std::numeric_limits<double>::infinity();
      for (const auto& v : centered_.preimages(u)) {
        if (std::abs(v) < r) ++inside;
        best = std::min(best, std::abs(v));
      }
      if (inside != 1) return std::nullopt;
      kappa = std::max(kappa, best / r);
    }
    winding += std::arg(centered_.forward(Complex(r, 0.0)) / prev);
    if (std::abs(winding / (2.0 * kPi) - 1.0) > 0.25) return std::nullopt;
    if (!(kappa < opt_.max_contraction)) return std::nullopt;
    radius_ = r;
    return kappa;
  }

  RationalMap map_;
  PeriodicPoint base_;
  CenteredMap centered_;
  LinearizerOptions opt_;
  double radius_ = 0.0;
  double contraction_ = 0.0;
  int convergence_depth_ = 0;
};

// ---------------------------------------------------------------------------
// Collinearity of the preimage cloud

enum class Collinearity { Line, Full, Inconclusive };

inline const char* to_string(Collinearity c) {
  switch (c) {
    case Collinearity::Line: return "line";
    case Collinearity::Full: return "full";
    case Collinearity::Inconclusive: return "inconclusive";
  }
  return "?";
}

struct CollinearityReport {
  Collinearity verdict = Collinearity::Inconclusive;
  /// Largest distance from a chart point to the fitted line through 0.
  double deviation = 0.0;
  /// Largest chart modulus among the points used.
  double spread = 0.0;
  /// Direction of the fitted line, radians.
  double direction = 0.0;
  int points_used = 0;
  int tree_size = 0;
};

/// Preimages of a up to `depth` levels, as offsets from a, deduplicated.
inline std::vector<Complex> preimage_tree_offsets(const CenteredMap& cm, int depth) {
  std::vector<Complex> all{Complex{}}, level{Complex{}};
  auto key = [](Complex v) {
    return std::pair<long long, long long>(std::llround(v.real() * 1e11), std::llround(v.imag() * 1e11));
  };
  std::set<std::pair<long long, long long>> seen{key(Complex{})};
  for (int k = 0; k < depth; ++k) {
    std::vector<Complex> next;
    for (const auto& u : level)
      for (const auto& v : cm.preimages(u))
        if (seen.insert(key(v)).second) next.push_back(v);
    all.insert(all.end(), next.begin(), next.end());
    level = std::move(next);
  }
  return all;
}

/// Fits a line through 0 to the chart images of the preimage cloud of a that
/// falls inside the linearizer's disk. Verdict "line" when the largest
/// perpendicular deviation is below rel_threshold times the spread.
inline CollinearityReport collinearity_in_linearizer(const Linearizer& lin, int depth,
                                                     double rel_threshold = 1e-8) {
  CollinearityReport rep;
  const auto tree = preimage_tree_offsets(lin.centered(), depth);
  rep.tree_size = static_cast<int>(tree.size());
  std::vector<Complex> w;
  for (const auto& v : tree)
    if (v != Complex{} && std::abs(v) < lin.radius()) w.push_back(lin.eval_offset(v));
  rep.points_used = static_cast<int>(w.size());
  if (w.size() < 3) return rep;
  double sxx = 0, syy = 0, sxy = 0;
  for (const auto& p : w) {
    sxx += p.real() * p.real();
    syy += p.imag() * p.imag();
    sxy += p.real() * p.imag();
    rep.spread = std::max(rep.spread, std::abs(p));
  }
  rep.direction = 0.5 * std::atan2(2.0 * sxy, sxx - syy);
  const Complex rot = std::polar(1.0, -rep.direction);
  for (const auto& p : w) rep.deviation = std::max(rep.deviation, std::abs((p * rot).imag()));
  rep.verdict = rep.deviation < rel_threshold * rep.spread ? Collinearity::Line : Collinearity::Full;
  return rep;
}

}  // namespace horo
