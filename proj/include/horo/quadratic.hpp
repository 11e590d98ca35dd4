#pragma once

// The quadratic family z^2 + epsilon: the fixed point a(epsilon), the
// contraction disk and separation constant (sigma, delta), excursions of
// backward orbits away from a, and the semigroup of cocycle values.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "horo/cocycle.hpp"
#include "horo/julia.hpp"
#include "horo/orbits.hpp"

namespace horo::quadratic {

/// (1 + sqrt(1 - 4 epsilon)) / 2, principal square root.
inline Complex fixed_point_a(Complex eps) {
  if (eps.imag() == 0.0 && eps.real() >= 0.25)
    throw Error(ErrorCode::Domain, "real epsilon must be below 1/4");
  return 0.5 * (1.0 + std::sqrt(1.0 - 4.0 * eps));
}

inline PeriodicPoint base_point(Complex eps) {
  const Complex a = fixed_point_a(eps);
  return {a, 1, 2.0 * a, classify(2.0 * a)};
}

/// The critical value epsilon coincides with -a, the non-fixed preimage of a.
inline bool branch_exceptional(Complex eps) { return std::abs(-fixed_point_a(eps) - eps) < 1e-10; }

/// Start for inverse iteration: a, unless a lies on the critical orbit. Then
/// almost every backward path meets the critical value, so start from a
/// repelling point of period 2, a root of z^2 + z + eps + 1.
inline Complex julia_start(Complex eps) {
  if (!branch_exceptional(eps)) return fixed_point_a(eps);
  return 0.5 * (-1.0 + std::sqrt(-3.0 - 4.0 * eps));
}

/// z^2 and the Chebyshev map z^2 - 2.
inline bool degenerate_parameter(Complex eps) {
  return std::abs(eps) < 1e-12 || std::abs(eps + 2.0) < 1e-12;
}

// ---------------------------------------------------------------------------
// Containment of J relative to the circle |z| = a

struct ContainmentReport {
  int checked = 0;
  int violations = 0;
  int near_boundary = 0;
  /// Near-boundary points farther than near_radius from both +a and -a.
  int near_violations = 0;
  double max_near_distance = 0.0;
  /// max |z| for epsilon < 0, min |z| for epsilon > 0.
  double extreme_modulus = 0.0;
};

inline ContainmentReport disk_containment_check(double eps, const std::vector<Complex>& sample, double tol,
                                                double near_radius = 1e-3) {
  if (!(eps < 0.25) || eps == 0.0 || eps == -2.0)
    throw Error(ErrorCode::Precondition, "containment needs epsilon < 1/4 outside {0, -2}");
  if (sample.empty()) throw Error(ErrorCode::Precondition, "empty sample");
  const double a = fixed_point_a(eps).real();
  ContainmentReport r;
  r.extreme_modulus = eps < 0 ? 0.0 : std::numeric_limits<double>::infinity();
  for (const auto& z : sample) {
    const double m = std::abs(z);
    ++r.checked;
    bool near;
    if (eps < 0) {
      r.extreme_modulus = std::max(r.extreme_modulus, m);
      if (m > a + tol) ++r.violations;
      near = m > a - tol;
    } else {
      r.extreme_modulus = std::min(r.extreme_modulus, m);
      if (m < a - tol) ++r.violations;
      near = m < a + tol;
    }
    if (near) {
      ++r.near_boundary;
      const double d = std::min(std::abs(z - a), std::abs(z + a));
      r.max_near_distance = std::max(r.max_near_distance, d);
      if (d > near_radius) ++r.near_violations;
    }
  }
  return r;
}

struct ExtremalityReport {
  bool holds = false;
  /// max |f'| over the sample for epsilon < 0, min for epsilon > 0.
  double extreme = 0.0;
  double bound = 0.0;
  /// Sample points attaining the bound within tol, and their largest distance to +-a.
  int equality_points = 0;
  double equality_distance = 0.0;
};

inline ExtremalityReport derivative_extremality_check(double eps, const std::vector<Complex>& sample, double tol) {
  if (!(eps < 0.25) || eps == 0.0) throw Error(ErrorCode::Precondition, "needs epsilon < 1/4, nonzero");
  if (sample.empty()) throw Error(ErrorCode::Precondition, "empty sample");
  const double a = fixed_point_a(eps).real();
  ExtremalityReport r;
  r.bound = 2.0 * a;
  r.extreme = eps < 0 ? 0.0 : std::numeric_limits<double>::infinity();
  for (const auto& z : sample) {
    const double d = std::abs(2.0 * z);
    r.extreme = eps < 0 ? std::max(r.extreme, d) : std::min(r.extreme, d);
    if (std::abs(d - r.bound) <= tol) {
      ++r.equality_points;
      r.equality_distance = std::max(r.equality_distance, std::min(std::abs(z - a), std::abs(z + a)));
    }
  }
  r.holds = eps < 0 ? r.extreme <= r.bound + tol : r.extreme >= r.bound - tol;
  return r;
}

// ---------------------------------------------------------------------------
// sigma and delta

struct SigmaDelta {
  Complex epsilon;
  Complex a;
  double sigma = 0.0;
  double delta = 0.0;
  /// Smallest sampled margin for the covering condition f(D) containing the closed disk.
  double margin_cover = 0.0;
  /// Smallest sampled margin for mutual disjointness of the four sets.
  double margin_disjoint = 0.0;
  int boundary_samples = 0;
  /// Julia points that entered the delta minimum.
  int delta_points = 0;
  /// Julia point attaining the delta minimum.
  Complex delta_witness;
};

inline constexpr double kCertificateMargin = 1e-6;

namespace detail {

/// Membership predicates for D = D_sigma(a), D' (the component of f^{-1}(D)
/// around -a) and its first two preimages. margin(z) > 0 means outside, with
/// the value measured in the plane where the defining disk lives.
struct DiskSystem {
  Complex eps, a;
  double sigma;

  Complex f(Complex z) const { return z * z + eps; }
  double out0(Complex z) const { return std::abs(z - a) - sigma; }
  double out1(Complex z) const {
    if (std::abs(z + a) >= sigma) return std::abs(z + a) - 0.99 * sigma;
    return std::abs(f(z) - a) - sigma;
  }
  double out2(Complex z) const { return out1(f(z)); }
  double out3(Complex z) const { return out1(f(f(z))); }
  double out(int k, Complex z) const {
    switch (k) {
      case 0: return out0(z);
      case 1: return out1(z);
      case 2: return out2(z);
      default: return out3(z);
    }
  }
};

inline std::vector<Complex> all_square_roots(const std::vector<Complex>& pts, Complex eps) {
  std::vector<Complex> out;
  out.reserve(2 * pts.size());
  for (const auto& p : pts) {
    const Complex r = std::sqrt(p - eps);
    out.push_back(r);
    out.push_back(-r);
  }
  return out;
}

struct Certificate {
  double cover = 0.0;
  double disjoint = 0.0;
};

inline std::optional<Certificate> certify(Complex eps, Complex a, double sigma, int n) {
  if (!(sigma < std::abs(a))) return std::nullopt;  // univalence: no antipodal pair in the disk
  const CenteredMap cm(RationalMap::quadratic(eps), a);
  DiskSystem sys{eps, a, sigma};
  if (std::abs(eps - a) <= sigma) return std::nullopt;  // critical value inside D
  std::vector<std::vector<Complex>> bd(4);
  Certificate c{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  double winding = 0.0;
  Complex prev = cm.forward(Complex(sigma, 0.0));
  for (int k = 0; k < n; ++k) {
    const Complex u = std::polar(sigma, 2.0 * kPi * k / n);
    bd[0].push_back(a + u);
    const Complex fu = cm.forward(u);
    c.cover = std::min(c.cover, std::abs(fu) - sigma);
    if (k > 0) winding += std::arg(fu / prev);
    prev = fu;
    // Boundary of the component around a is g(boundary); D' is its negative.
    const auto pre = ranked_preimages(cm, u);
    bd[1].push_back(-(a + pre[0]));
  }
  winding += std::arg(cm.forward(Complex(sigma, 0.0)) / prev);
  if (std::abs(winding / (2.0 * kPi) - 1.0) > 0.25) return std::nullopt;
  if (!(c.cover >= kCertificateMargin)) return std::nullopt;
  for (const auto& p : bd[1])
    if (!(std::abs(p + a) < 0.99 * sigma)) return std::nullopt;  // D' well inside D_sigma(-a)
  bd[2] = all_square_roots(bd[1], eps);
  bd[3] = all_square_roots(bd[2], eps);

  // Critical value outside D' and f^{-1}(D'), so the sampled preimage curves
  // bound the listed components.
  if (!(sys.out1(eps) > 0.0) || !(sys.out2(eps) > 0.0)) return std::nullopt;

  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      if (i == j) continue;
      for (const auto& p : bd[i]) c.disjoint = std::min(c.disjoint, sys.out(j, p));
    }
  // Representative interior points exclude nesting.
  const Complex r1 = -a;
  const Complex r2 = std::sqrt(r1 - eps);
  const Complex r3 = std::sqrt(r2 - eps);
  const Complex reps[4] = {a, r1, r2, r3};
  for (int i = 0; i < 4; ++i) {
    if (!(sys.out(i, reps[i]) < 0.0)) return std::nullopt;
    for (int j = 0; j < 4; ++j)
      if (i != j && !(sys.out(j, reps[i]) > 0.0)) return std::nullopt;
  }
  if (!(c.disjoint >= kCertificateMargin)) return std::nullopt;
  return c;
}

}  // namespace detail

inline SigmaDelta find_sigma_delta(Complex eps, const std::vector<Complex>& julia, int samples = 1024) {
  if (degenerate_parameter(eps)) throw Error(ErrorCode::Precondition, "sigma/delta search excludes epsilon 0 and -2");
  if (julia.empty()) throw Error(ErrorCode::Precondition, "empty Julia sample");
  const Complex a = fixed_point_a(eps);
  const double top = std::abs(a) / 4.0, floor = 1e-4 * std::abs(a);
  double sigma = top;
  auto cert = detail::certify(eps, a, top, samples);
  if (!cert) {
    auto low = detail::certify(eps, a, floor, samples);
    if (!low) throw Error(ErrorCode::Construction, "no admissible sigma above the floor");
    double lo = floor, hi = top;
    cert = low;
    for (int it = 0; it < 40; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (auto c = detail::certify(eps, a, mid, samples)) {
        lo = mid;
        cert = c;
      } else {
        hi = mid;
      }
    }
    sigma = lo;
  }
  SigmaDelta sd;
  sd.epsilon = eps;
  sd.a = a;
  sd.sigma = sigma;
  sd.margin_cover = cert->cover;
  sd.margin_disjoint = cert->disjoint;
  sd.boundary_samples = samples;
  const CenteredMap cm(RationalMap::quadratic(eps), a);
  const detail::DiskSystem sys{eps, a, sigma};
  double best = std::numeric_limits<double>::infinity();
  for (const auto& z : julia) {
    if (sys.out0(z) <= 0.0 || sys.out1(z) <= 0.0) continue;
    ++sd.delta_points;
    const double t = std::abs(cm.log_derivative_ratio(z - a));
    if (t < best) {
      best = t;
      sd.delta_witness = z;
    }
  }
  sd.delta = 0.5 * best;
  if (!(sd.delta > 0.0) || !std::isfinite(sd.delta))
    throw Error(ErrorCode::Construction, "delta is not positive on the Julia sample");
  return sd;
}

/// Orbit base for z^2 + epsilon with sigma from the search (or the linearizer
/// for the two exceptional parameters).
inline BasePtr make_base(Complex eps, const SigmaDelta& sd) {
  return horo::make_base(RationalMap::quadratic(eps), base_point(eps), sd.sigma, "quadratic-search");
}

inline BasePtr make_base(Complex eps) {
  return make_base_from_linearizer(RationalMap::quadratic(eps), base_point(eps));
}

// ---------------------------------------------------------------------------
// Excursions

/// Drops leading principal symbols so that y_{-1} = -a.
inline OrbitWord normalize(const OrbitWord& w) {
  int u = 0;
  while (u < w.length() && w.prefix()[u] == 0) ++u;
  return shift(w, -u);
}

inline bool is_normalized(const OrbitWord& w) { return !w.prefix().empty() && w.prefix()[0] == 1; }

struct ExcursionStats {
  std::vector<int> leaving;
  std::vector<int> returning;
  int s = 0;
  int d = 0;
  bool interleaved = false;
  bool min_length_ok = false;
  bool s_le_d = false;
  bool ok() const { return interleaved && min_length_ok && s_le_d; }
};

inline ExcursionStats excursion_stats(const OrbitWord& w) {
  if (w.base().map.degree() != 2) throw Error(ErrorCode::Precondition, "excursions are defined for z^2 + epsilon");
  if (!is_normalized(w)) throw Error(ErrorCode::Precondition, "word not normalized: first symbol must be '-'");
  const auto m = is_in_Pi_a(w, w.length());
  if (!m.member) throw Error(ErrorCode::Precondition, std::string("word not in Pi_a: ") + to_string(m.reason));
  auto o = LazyOrbit::of(w);
  const int tail = o.tail_start();
  const double sigma = w.base().sigma;
  auto in = [&](int j) { return std::abs(o.offset(j)) < sigma; };
  ExcursionStats st;
  for (int j = 0; j < tail; ++j)
    if (in(j) && !in(j + 1)) {
      st.leaving.push_back(j);
      int k = j + 1;
      while (!in(k)) ++k;
      st.returning.push_back(k);
      st.d += k - j - 1;
    }
  st.s = static_cast<int>(st.leaving.size());
  st.interleaved = st.s > 0 && st.leaving[0] == 0;
  for (int r = 0; r < st.s; ++r) {
    if (!(st.leaving[r] < st.returning[r])) st.interleaved = false;
    if (r + 1 < st.s && !(st.returning[r] <= st.leaving[r + 1])) st.interleaved = false;
  }
  st.min_length_ok = true;
  for (int r = 0; r < st.s; ++r)
    if (st.returning[r] - st.leaving[r] < 4) st.min_length_ok = false;
  st.s_le_d = st.s <= st.d;
  return st;
}

struct LowerBound {
  bool holds = false;
  double beta = 0.0;
  double tail_bound = 0.0;
  int d = 0;
  /// |beta| - tail_bound - delta_used * d.
  double margin = 0.0;
};

/// |beta(a, y)| - tail > scale * delta * d(y).
inline LowerBound cocycle_lower_bound_check(const OrbitWord& w, const SigmaDelta& sd, double tol,
                                            double delta_scale = 1.0) {
  const auto st = excursion_stats(w);
  const auto b = cocycle_vs_fixed(w, tol);
  LowerBound r;
  r.beta = b.value;
  r.tail_bound = b.tail_bound;
  r.d = st.d;
  r.margin = std::abs(b.value) - b.tail_bound - delta_scale * sd.delta * st.d;
  r.holds = r.margin > 0.0;
  return r;
}

// ---------------------------------------------------------------------------
// Word sampling

/// Random normalized word: first symbol '-', last symbol '-', length in [1, max_len].
inline OrbitWord random_word(const BasePtr& base, std::mt19937_64& rng, int max_len) {
  const int len = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_len));
  std::vector<int> p(static_cast<std::size_t>(len));
  for (int i = 0; i < len; ++i) p[i] = static_cast<int>(rng() % 2);
  p.front() = 1;
  p.back() = 1;
  return OrbitWord(base, std::move(p));
}

/// `count` distinct normalized words in Pi_a, drawn deterministically from seed.
inline std::vector<OrbitWord> accepted_words(const BasePtr& base, std::uint64_t seed, int count, int max_len,
                                             int max_draws = 100000) {
  std::mt19937_64 rng(seed);
  std::vector<OrbitWord> out;
  std::vector<std::vector<int>> seen;
  for (int draw = 0; draw < max_draws && static_cast<int>(out.size()) < count; ++draw) {
    auto w = random_word(base, rng, max_len);
    if (std::find(seen.begin(), seen.end(), w.prefix()) != seen.end()) continue;
    seen.push_back(w.prefix());
    if (is_in_Pi_a(w, w.length()).member) out.push_back(std::move(w));
  }
  if (static_cast<int>(out.size()) < count)
    throw Error(ErrorCode::Construction, "could not draw enough accepted words");
  return out;
}

// ---------------------------------------------------------------------------
// The semigroup B_epsilon

struct BEpsilonReport {
  DensityReport report;
  std::vector<double> singles;
  int sign = 0;
  bool sign_ok = false;
  double min_abs = 0.0;
};

/// Sums of up to l_max single-word cocycle values (with repetition).
inline BEpsilonReport build_B_epsilon(const std::vector<OrbitWord>& words, int l_max, double tol) {
  if (words.empty()) throw Error(ErrorCode::Precondition, "empty word sample");
  if (l_max < 1 || l_max > 3) throw Error(ErrorCode::Precondition, "sum length must be 1..3");
  const Complex eps = words.front().base().map.numerator()[0];
  if (degenerate_parameter(eps)) throw Error(ErrorCode::Precondition, "B_epsilon excludes epsilon 0 and -2");
  if (eps.real() == 0.0) throw Error(ErrorCode::Precondition, "Re epsilon must have a definite sign");
  BEpsilonReport r;
  r.sign = eps.real() > 0 ? 1 : -1;
  std::vector<DensityEntry> singles;
  for (const auto& w : words) {
    const auto b = cocycle_vs_fixed(w, tol);
    singles.push_back({b.value, b.tail_bound});
    r.singles.push_back(b.value);
  }
  std::vector<DensityEntry> all;
  const std::size_t n = singles.size();
  for (std::size_t i = 0; i < n; ++i) {
    all.push_back(singles[i]);
    if (l_max < 2) continue;
    for (std::size_t j = i; j < n; ++j) {
      all.push_back({singles[i].v + singles[j].v, singles[i].bound + singles[j].bound});
      if (l_max < 3) continue;
      for (std::size_t k = j; k < n; ++k)
        all.push_back({singles[i].v + singles[j].v + singles[k].v,
                       singles[i].bound + singles[j].bound + singles[k].bound});
    }
  }
  double lo = all.front().v, hi = lo;
  r.min_abs = std::numeric_limits<double>::infinity();
  r.sign_ok = true;
  for (const auto& e : all) {
    lo = std::min(lo, e.v);
    hi = std::max(hi, e.v);
    r.min_abs = std::min(r.min_abs, std::abs(e.v));
    if (!(r.sign * e.v > e.bound)) r.sign_ok = false;
  }
  r.report = make_density_report(std::move(all), lo, hi);
  return r;
}

// ---------------------------------------------------------------------------
// Limit decomposition of concatenation sequences

struct LimitDecomposition {
  int l = 0;
  std::vector<int> junctions;
  std::vector<std::vector<int>> nu;
  std::vector<OrbitWord> components;
  std::vector<CocycleValue> component_betas;
  std::vector<double> betas;
  std::vector<double> defects;
  /// |a^n_{-nu_2} - a| per sequence term.
  std::vector<double> nu2_distance;
  /// max_i |a^n_{-nu_2 - i} - c_{-i}| over the comparison window.
  std::vector<double> window_error;
  double component_sum = 0.0;
  bool defect_decreasing = false;
  bool nu2_decreasing = false;
  bool window_decreasing = false;
  bool sum_matches = false;
  bool ok() const { return defect_decreasing && nu2_decreasing && window_decreasing && sum_matches; }
};

inline LimitDecomposition limit_decomposition_check(const OrbitWord& y, const OrbitWord& c,
                                                    const std::vector<int>& junctions, double tol,
                                                    int window = 10) {
  if (junctions.empty() || !std::is_sorted(junctions.begin(), junctions.end()) ||
      std::adjacent_find(junctions.begin(), junctions.end()) != junctions.end())
    throw Error(ErrorCode::Precondition, "junctions must be strictly increasing");
  LimitDecomposition r;
  r.junctions = junctions;
  const auto by = cocycle_vs_fixed(y, tol);
  if (c.is_fixed_orbit()) {
    r.l = 1;
    r.components = {y};
    r.component_betas = {by};
    r.component_sum = by.value;
    for (int j : junctions) {
      r.nu.push_back({0});
      r.betas.push_back(cocycle_vs_fixed(concatenate(y, c, j), tol).value);
      r.defects.push_back(std::abs(r.betas.back() - by.value));
    }
    r.defect_decreasing = r.nu2_decreasing = r.window_decreasing = true;
    r.sum_matches = r.defects.back() <= 2.0 * tol;
    return r;
  }
  const auto bc = cocycle_vs_fixed(c, tol);
  r.l = 2;
  r.components = {y, c};
  r.component_betas = {by, bc};
  r.component_sum = by.value + bc.value;
  auto oc = LazyOrbit::of(c);
  double slack = 0.0;
  for (int j : junctions) {
    const auto w = concatenate(y, c, j);
    auto ow = LazyOrbit::of(w);
    const auto bw = cocycle_vs_fixed(w, tol);
    r.nu.push_back({0, j});
    r.betas.push_back(bw.value);
    r.defects.push_back(std::abs(semigroup_defect(y, c, j, tol).value));
    r.nu2_distance.push_back(std::abs(ow.offset(j)));
    double err = 0.0;
    for (int i = 1; i <= window; ++i) err = std::max(err, std::abs(ow.offset(j + i) - oc.offset(i)));
    r.window_error.push_back(err);
    slack = bw.tail_bound + by.tail_bound + bc.tail_bound;
  }
  auto decreasing = [](const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
      if (!(v[i] < v[i - 1])) return false;
    return true;
  };
  r.defect_decreasing = decreasing(r.defects);
  r.nu2_decreasing = decreasing(r.nu2_distance);
  r.window_decreasing = decreasing(r.window_error);
  r.sum_matches = std::abs(r.betas.back() - r.component_sum) <= r.defects.back() + slack + 1e-12;
  return r;
}

/// |beta(concat(concat(y, c, j), c, 2j)) - beta(y) - 2 beta(c)|.
inline double nested_defect(const OrbitWord& y, const OrbitWord& c, int j, double tol) {
  const auto w1 = concatenate(y, c, j);
  const auto w2 = concatenate(w1, c, 2 * j);
  return std::abs(cocycle_vs_fixed(w2, tol).value - cocycle_vs_fixed(y, tol).value -
                  2.0 * cocycle_vs_fixed(c, tol).value);
}

}  // namespace horo::quadratic
