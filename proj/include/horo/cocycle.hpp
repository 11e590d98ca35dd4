#pragma once

// The basic cocycle as a certified series of log-derivative differences,
// the harmonic field it induces near a, heights and density diagnostics.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <vector>

#include "horo/orbits.hpp"

namespace horo {

struct CocycleValue {
  double value = 0.0;
  /// Certified bound on the truncated remainder.
  double tail_bound = 0.0;
  int depth_used = 0;
};

namespace detail {

struct SeriesPart {
  LazyOrbit* orbit;
  double sign;
  /// Term i reads the orbit at index i + offset.
  int offset;
};

/// Sums sum_{i>=1} sum_k sign_k t(orbit_k[i + offset_k]), t(v) = ln|f'(a+v)| - ln|lambda|,
/// until the certified remainder is at most tol.
inline CocycleValue certified_series(const OrbitBase& base, std::vector<SeriesPart> parts, double tol,
                                     int budget = kMaxOrbitDepth) {
  if (!(tol >= 1e-15)) throw Error(ErrorCode::Precondition, "tolerance below 1e-15");
  int settled = 1;
  for (auto& p : parts) settled = std::max(settled, p.orbit->tail_start(budget) - p.offset);
  const double q = base.rho / (1.0 - base.rho);
  CompensatedSum sum;
  for (int i = 1;; ++i) {
    double size = 0.0;
    for (auto& p : parts) {
      if (i + p.offset > budget) throw Error(ErrorCode::DepthBudget, "series depth budget exhausted", i);
      const Complex v = p.orbit->offset(i + p.offset);
      const Complex z = base.a() + v;
      for (const auto& c : base.critical_points)
        if (std::abs(z - c) < kCriticalProximity)
          throw Error(ErrorCode::SingularTerm, "orbit point within 1e-8 of a critical point", i + p.offset);
      sum.add(p.sign * base.centered.log_derivative_ratio(v));
      size += std::abs(v);
    }
    if (i >= settled) {
      const double bound = base.lipschitz * size * q;
      if (bound <= tol) return {sum.value(), bound, i};
    }
  }
}

}  // namespace detail

/// beta(x, y) = sum_j (ln|f'(y_{-j})| - ln|f'(x_{-j})|).
inline CocycleValue basic_cocycle(const OrbitWord& x, const OrbitWord& y, double tol) {
  if (x.base_ptr() != y.base_ptr()) throw Error(ErrorCode::Precondition, "words on different bases");
  if (x == y) return {0.0, 0.0, 0};
  auto ox = LazyOrbit::of(x);
  auto oy = LazyOrbit::of(y);
  return detail::certified_series(x.base(), {{&oy, 1.0, 0}, {&ox, -1.0, 0}}, tol);
}

inline CocycleValue cocycle_vs_fixed(const OrbitWord& y, double tol) {
  return basic_cocycle(fixed_word(y.base_ptr()), y, tol);
}

/// beta_{a,c}(z) for z in D_sigma(a): the series between the principal orbit of
/// z and the orbit of z continuing c's branch choices.
inline CocycleValue cocycle_field(const OrbitWord& c, Complex z, double tol) {
  const auto& base = c.base();
  const Complex v0 = z - base.a();
  if (!(std::abs(v0) < base.sigma)) throw Error(ErrorCode::Precondition, "field point outside D_sigma(a)");
  LazyOrbit principal(c.base_ptr(), v0, std::vector<int>{});
  auto oc = LazyOrbit::of(c);
  LazyOrbit cont(c.base_ptr(), v0, &oc);
  return detail::certified_series(base, {{&cont, 1.0, 0}, {&principal, -1.0, 0}}, tol);
}

/// Individual series terms ln|f'(y_{-j})| - ln|f'(a)| for j = 1..depth.
inline std::vector<double> series_terms(const OrbitWord& y, int depth) {
  auto o = LazyOrbit::of(y);
  std::vector<double> t;
  for (int j = 1; j <= depth; ++j) t.push_back(y.base().centered.log_derivative_ratio(o.offset(j)));
  return t;
}

// ---------------------------------------------------------------------------
// Semigroup defect

/// beta(a, concat(y, c, j)) - beta(a, y) - beta(a, c), summed as one aligned
/// series so the small difference keeps relative accuracy.
inline CocycleValue semigroup_defect(const OrbitWord& y, const OrbitWord& c, int junction, double tol) {
  if (y.base_ptr() != c.base_ptr()) throw Error(ErrorCode::Precondition, "words on different bases");
  auto oy = LazyOrbit::of(y);
  if (junction < oy.entry_index())
    throw Error(ErrorCode::Precondition, "junction below the entry index of the first word");
  if (c.is_fixed_orbit()) return {0.0, 0.0, 0};
  auto oc = LazyOrbit::of(c);
  LazyOrbit follow(y.base_ptr(), oy.offset(junction), &oc);
  return detail::certified_series(y.base(), {{&follow, 1.0, 0}, {&oy, -1.0, junction}, {&oc, -1.0, 0}}, tol);
}

struct DefectRow {
  int junction = 0;
  double defect = 0.0;
  double tail_bound = 0.0;
};

inline std::vector<DefectRow> semigroup_convergence(const OrbitWord& y, const OrbitWord& c,
                                                    const std::vector<int>& junctions, double tol) {
  std::vector<DefectRow> rows;
  for (int j : junctions) {
    const auto d = semigroup_defect(y, c, j, tol);
    rows.push_back({j, std::abs(d.value), d.tail_bound});
  }
  return rows;
}

/// Least-squares slope of ln(defect) against junction, as a per-step ratio.
inline double fitted_decay_rate(const std::vector<DefectRow>& rows) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const auto& r : rows) {
    if (!(r.defect > 0.0)) continue;
    const double x = r.junction, yv = std::log(r.defect);
    sx += x, sy += yv, sxx += x * x, sxy += x * yv;
    ++n;
  }
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  return std::exp((n * sxy - sx * sy) / (n * sxx - sx * sx));
}

// ---------------------------------------------------------------------------
// Heights

/// A point of a horosphere family: height = base_height + shift * ln|lambda|.
/// Keeping the integer shift separate makes push-forward exactly invertible.
struct HeightPoint {
  OrbitWord word;
  double base_height = 0.0;
  long long shift = 0;

  double height() const { return base_height + static_cast<double>(shift) * word.base().log_multiplier(); }
};

inline HeightPoint pushforward_height(const HeightPoint& p, int n) {
  return {horo::shift(p.word, n), p.base_height, p.shift + n};
}

struct DensityEntry {
  double v = 0.0;
  double bound = 0.0;
};

struct DensityReport {
  std::vector<DensityEntry> values;
  double lo = 0.0, hi = 1.0;
  /// Largest spacing inside the window, edges included.
  double max_gap = 0.0;
  /// Left end of the largest gap.
  double gap_at = 0.0;
  int count = 0;
};

inline DensityReport make_density_report(std::vector<DensityEntry> all, double lo, double hi) {
  DensityReport r;
  r.lo = lo;
  r.hi = hi;
  for (const auto& e : all)
    if (e.v >= lo && e.v <= hi) r.values.push_back(e);
  std::sort(r.values.begin(), r.values.end(), [](const DensityEntry& a, const DensityEntry& b) {
    return a.v < b.v || (a.v == b.v && a.bound < b.bound);
  });
  r.count = static_cast<int>(r.values.size());
  double prev = lo;
  r.max_gap = -1.0;
  auto consider = [&](double x) {
    if (x - prev > r.max_gap) {
      r.max_gap = x - prev;
      r.gap_at = prev;
    }
    prev = x;
  };
  for (const auto& e : r.values) consider(e.v);
  consider(hi);
  return r;
}

/// All beta(a, y) + m ln|lambda| for y in words and m in [m_lo, m_hi], clipped to [lo, hi].
inline DensityReport height_set(const std::vector<OrbitWord>& words, int m_lo, int m_hi, double tol,
                                double lo = 0.0, double hi = 1.0) {
  if (m_lo > m_hi) throw Error(ErrorCode::Precondition, "empty shift range");
  std::vector<DensityEntry> all;
  for (const auto& w : words) {
    const auto m = is_in_Pi_a(w, w.length());
    if (!m.member) throw Error(ErrorCode::Precondition, std::string("word not in Pi_a: ") + to_string(m.reason));
    const auto b = cocycle_vs_fixed(w, tol);
    const double step = w.base().log_multiplier();
    for (int k = m_lo; k <= m_hi; ++k) all.push_back({b.value + k * step, b.tail_bound});
  }
  return make_density_report(std::move(all), lo, hi);
}

struct ProgressionCheck {
  bool dense = false;
  double max_gap = 0.0;
  double gap_at = 0.0;
  int count = 0;
};

/// Whether {sums of at most max_terms elements of B} + ZM fills the window
/// with gaps at most net. Residues mod |M| are merged on a grid of net/8.
inline ProgressionCheck progression_density_check(const std::vector<double>& B, double M, double lo, double hi,
                                                  double net, int max_terms = 200) {
  if (B.empty()) throw Error(ErrorCode::Precondition, "empty generator sample");
  if (M == 0.0 || !std::isfinite(M)) throw Error(ErrorCode::Precondition, "modulus must be nonzero");
  if (!(net > 0.0) || !(hi > lo)) throw Error(ErrorCode::Precondition, "invalid window or net");
  const double m = std::abs(M);
  const double cell = net / 8.0;
  auto reduce = [m](double x) {
    double r = std::fmod(x, m);
    if (r < 0) r += m;
    return r;
  };
  std::map<long long, double> seen;
  std::vector<double> frontier;
  for (double b : B) {
    const double r = reduce(b);
    if (seen.emplace(static_cast<long long>(std::floor(r / cell)), r).second) frontier.push_back(r);
  }
  for (int k = 2; k <= max_terms && !frontier.empty(); ++k) {
    std::vector<double> next;
    for (double r : frontier)
      for (double b : B) {
        const double s = reduce(r + b);
        if (seen.emplace(static_cast<long long>(std::floor(s / cell)), s).second) next.push_back(s);
      }
    frontier = std::move(next);
  }
  std::vector<DensityEntry> pts;
  const long long k0 = static_cast<long long>(std::floor(lo / m)) - 1;
  const long long k1 = static_cast<long long>(std::ceil(hi / m)) + 1;
  for (const auto& [key, r] : seen)
    for (long long k = k0; k <= k1; ++k) pts.push_back({r + static_cast<double>(k) * m, 0.0});
  const auto rep = make_density_report(std::move(pts), lo, hi);
  return {rep.max_gap <= net, rep.max_gap, rep.gap_at, rep.count};
}

}  // namespace horo
