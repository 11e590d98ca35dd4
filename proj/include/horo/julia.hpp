#pragma once

// Julia set samples: escape time for the quadratic family, seeded inverse
// iteration from a repelling fixed point, and repelling periodic points.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "horo/periodic.hpp"
#include "horo/rational_map.hpp"

namespace horo {

inline constexpr int kMaxEscapeBudget = 1 << 20;

enum class JuliaMethod { EscapeBoundary, InverseIteration, RepellingPeriodic };

inline const char* to_string(JuliaMethod m) {
  switch (m) {
    case JuliaMethod::EscapeBoundary: return "escape-boundary";
    case JuliaMethod::InverseIteration: return "inverse-iteration";
    case JuliaMethod::RepellingPeriodic: return "repelling-periodic";
  }
  return "?";
}

struct JuliaSample {
  std::vector<Complex> points;
  JuliaMethod method = JuliaMethod::InverseIteration;
  int depth = 0;
  int burn_in = 0;
  double escape_radius = 0.0;
  std::uint64_t seed = 0;
  int resampled_paths = 0;
};

struct EscapeResult {
  enum Kind { InsideFilled, Escaped, Undecided } kind = Undecided;
  int n = 0;
};

inline double escape_radius(Complex epsilon) { return std::max(2.0, std::abs(epsilon)) + 1.0; }

/// Bounded-orbit test for z^2 + epsilon.
inline EscapeResult escape_membership(QuadraticParam p, Complex z, int budget) {
  if (budget < 0 || budget > kMaxEscapeBudget) throw Error(ErrorCode::Precondition, "escape budget outside ceiling");
  const double r = escape_radius(p.epsilon);
  for (int n = 0; n <= budget; ++n) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return {EscapeResult::Undecided, n};
    if (std::abs(z) > r) return {EscapeResult::Escaped, n};
    if (n < budget) z = z * z + p.epsilon;
  }
  return {EscapeResult::InsideFilled, budget};
}

inline void sort_points(std::vector<Complex>& z) {
  std::sort(z.begin(), z.end(), [](const Complex& a, const Complex& b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
  });
}

/// One endpoint per path: `depth` random backward steps from `start`.
/// Each path draws from its own generator seeded by (seed, path, attempt), so
/// the sorted output does not depend on evaluation order.
inline JuliaSample inverse_iteration_sample(const RationalMap& f, Complex start, int n_points, int depth,
                                            std::uint64_t seed, int burn_in = 20) {
  if (n_points < 0 || depth <= burn_in) throw Error(ErrorCode::Precondition, "depth must exceed the burn-in");
  JuliaSample s;
  s.method = JuliaMethod::InverseIteration;
  s.depth = depth;
  s.burn_in = burn_in;
  s.seed = seed;
  s.points.reserve(static_cast<std::size_t>(n_points));
  for (int p = 0; p < n_points; ++p) {
    bool done = false;
    for (int attempt = 0; attempt < 64 && !done; ++attempt) {
      std::mt19937_64 rng(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(p) * 64 + attempt)));
      Complex z = start;
      bool collided = false;
      for (int k = 0; k < depth && !collided; ++k) {
        const auto pre = f.preimages(z);
        const std::size_t pick = static_cast<std::size_t>(rng() % pre.size());
        for (std::size_t q = 0; q < pre.size(); ++q)
          if (q != pick && std::abs(pre[q] - pre[pick]) < 1e-13 * std::max(1.0, std::abs(pre[pick])))
            collided = true;
        z = pre[pick];
      }
      if (collided) {
        ++s.resampled_paths;
        continue;
      }
      s.points.push_back(z);
      done = true;
    }
    if (!done) throw Error(ErrorCode::Domain, "inverse iteration path kept hitting a critical value");
  }
  sort_points(s.points);
  return s;
}

inline JuliaSample inverse_iteration_sample(const RationalMap& f, int n_points, int depth, std::uint64_t seed,
                                            int burn_in = 20) {
  return inverse_iteration_sample(f, dominant_repelling_fixed_point(f).location, n_points, depth, seed, burn_in);
}

/// All repelling periodic points of period at most max_period.
inline JuliaSample repelling_sample(const RationalMap& f, int max_period) {
  JuliaSample s;
  s.method = JuliaMethod::RepellingPeriodic;
  s.depth = max_period;
  for (int p = 1; p <= max_period; ++p)
    for (const auto& pt : periodic_points(f, p))
      if (pt.cls == PointClass::Repelling) s.points.push_back(pt.location);
  sort_points(s.points);
  return s;
}

/// max over `from` of the distance to the nearest point of `to`.
inline double one_sided_distance(const std::vector<Complex>& from, const std::vector<Complex>& to) {
  if (to.empty()) return std::numeric_limits<double>::infinity();
  // `to` sorted by real part: scan outward from the insertion point.
  std::vector<Complex> t = to;
  sort_points(t);
  double worst = 0.0;
  for (const auto& z : from) {
    auto it = std::lower_bound(t.begin(), t.end(), z.real(),
                               [](const Complex& a, double x) { return a.real() < x; });
    double best = std::numeric_limits<double>::infinity();
    for (auto r = it; r != t.end() && r->real() - z.real() < best; ++r) best = std::min(best, std::abs(*r - z));
    for (auto l = it; l != t.begin();) {
      --l;
      if (z.real() - l->real() >= best) break;
      best = std::min(best, std::abs(*l - z));
    }
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace horo
