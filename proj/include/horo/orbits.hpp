#pragma once

// Backward orbits converging to a repelling fixed point a.
//
// An OrbitWord is a finite prefix of branch ranks followed implicitly by the
// principal rank 0 forever. At every backward step the d preimages of the
// current point are ranked by distance to a (nearest first; ties broken by
// larger imaginary part, then larger real part), so rank 0 is the inverse
// branch fixing a once the orbit is close to a.

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "horo/centered.hpp"
#include "horo/periodic.hpp"
#include "horo/rational_map.hpp"

namespace horo {

/// Hard ceiling on realized orbit depth.
inline constexpr int kMaxOrbitDepth = 100000;
/// Distance to a critical point below which an orbit is rejected.
inline constexpr double kCriticalProximity = 1e-8;
/// Two preimages closer than this (relative to max(1, |v|)) are a branch collision.
inline constexpr double kBranchCollision = 1e-13;

/// Shared per-base data: the fixed point, the contraction disk D_sigma(a) and
/// the constants that certify series tails inside it.
struct OrbitBase {
  RationalMap map;
  PeriodicPoint fixed;
  CenteredMap centered;
  double sigma = 0.0;
  /// Upper bound for |g(z) - a| / |z - a| on D_sigma(a), g the branch fixing a.
  double rho = 0.0;
  /// Upper bound for |f''/f'| on D_sigma(a).
  double lipschitz = 0.0;
  std::vector<Complex> critical_points;
  std::string sigma_source;

  Complex a() const { return fixed.location; }
  double log_multiplier() const { return std::log(std::abs(fixed.multiplier)); }
};

using BasePtr = std::shared_ptr<const OrbitBase>;

/// Builds and certifies a base. rho and the Lipschitz bound are sampled on the
/// boundary circle (both quantities are maximized there by the maximum
/// principle) and inflated by 10%.
inline BasePtr make_base(const RationalMap& f, const PeriodicPoint& a, double sigma,
                         std::string source, int samples = 1024) {
  if (a.period != 1 || a.cls != PointClass::Repelling)
    throw Error(ErrorCode::Precondition, "base point must be a repelling fixed point");
  if (!(sigma > 0.0)) throw Error(ErrorCode::Precondition, "sigma must be positive");
  auto b = std::make_shared<OrbitBase>(OrbitBase{f, a, CenteredMap(f, a.location), sigma, 0, 0, {}, std::move(source)});
  b->critical_points = f.critical_points();
  for (const auto& c : b->critical_points)
    if (std::abs(c - a.location) <= sigma)
      throw Error(ErrorCode::NonContraction, "critical point inside D_sigma(a)");
  for (const auto& p : f.poles())
    if (std::abs(p - a.location) <= sigma) throw Error(ErrorCode::NonContraction, "pole inside D_sigma(a)");
  double rho = 0.0, lip = 0.0;
  for (int k = 0; k < samples; ++k) {
    const Complex u = std::polar(sigma, 2.0 * kPi * k / samples);
    int inside = 0;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& v : b->centered.preimages(u)) {
      if (std::abs(v) < sigma) ++inside;
      best = std::min(best, std::abs(v));
    }
    if (inside != 1)
      throw Error(ErrorCode::NonContraction, "principal inverse is not unique on D_sigma(a)");
    rho = std::max(rho, best / sigma);
    lip = std::max(lip, b->centered.log_derivative_gradient(f, u));
  }
  b->rho = 1.1 * rho;
  b->lipschitz = 1.1 * lip;
  if (!(b->rho < 1.0)) throw Error(ErrorCode::NonContraction, "certified contraction factor is not below 1");
  return b;
}

/// Base with sigma taken from the linearizer's certified radius.
inline BasePtr make_base_from_linearizer(const RationalMap& f, const PeriodicPoint& a) {
  const auto lin = Linearizer::build(f, a);
  return make_base(f, a, lin.radius(), "linearizer");
}

// ---------------------------------------------------------------------------

/// Preimages of a + u, as offsets, in rank order.
inline std::vector<Complex> ranked_preimages(const CenteredMap& cm, Complex u) {
  auto pre = cm.preimages(u);
  auto before = [](const Complex& x, const Complex& y) {
    const double ax = std::abs(x), ay = std::abs(y);
    if (std::abs(ax - ay) > 1e-12 * std::max(ax, ay)) return ax < ay;
    if (x.imag() != y.imag()) return x.imag() > y.imag();
    return x.real() > y.real();
  };
  // Insertion sort: the comparator has a tolerance band, keep it stable.
  for (std::size_t i = 1; i < pre.size(); ++i)
    for (std::size_t j = i; j > 0 && before(pre[j], pre[j - 1]); --j) std::swap(pre[j], pre[j - 1]);
  return pre;
}

/// Throws DegenerateBranch when the chosen root collides with another one.
inline void check_collision(const std::vector<Complex>& pre, std::size_t chosen, int index) {
  for (std::size_t k = 0; k < pre.size(); ++k)
    if (k != chosen &&
        std::abs(pre[k] - pre[chosen]) < kBranchCollision * std::max(1.0, std::abs(pre[chosen])))
      throw Error(ErrorCode::DegenerateBranch, "branch collision at depth " + std::to_string(index), index);
}

class OrbitWord {
 public:
  OrbitWord(BasePtr base, std::vector<int> prefix) : base_(std::move(base)), prefix_(std::move(prefix)) {
    if (!base_) throw Error(ErrorCode::Precondition, "word without base");
    for (int s : prefix_)
      if (s < 0 || s >= base_->map.degree())
        throw Error(ErrorCode::Precondition, "branch symbol " + std::to_string(s) + " out of range");
    while (!prefix_.empty() && prefix_.back() == 0) prefix_.pop_back();
  }

  /// Accepts '+' (rank 0), '-' or U+2212 (rank 1), and decimal digits.
  static OrbitWord parse(BasePtr base, std::string_view s) {
    std::vector<int> p;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const char c = s[i];
      if (c == '+') {
        p.push_back(0);
      } else if (c == '-') {
        p.push_back(1);
      } else if (c >= '0' && c <= '9') {
        p.push_back(c - '0');
      } else if (s.substr(i, 3) == "\xE2\x88\x92") {
        p.push_back(1);
        i += 2;
      } else if (c == ' ' || c == ',') {
        continue;
      } else {
        throw Error(ErrorCode::Config, std::string("invalid branch symbol '") + c + "'");
      }
    }
    return OrbitWord(std::move(base), std::move(p));
  }

  /// '+'/'-' for degree two, digits otherwise.
  std::string str() const {
    std::string s;
    for (int r : prefix_) s += base_->map.degree() == 2 ? (r == 0 ? '+' : '-') : static_cast<char>('0' + r);
    return s;
  }

  const std::vector<int>& prefix() const { return prefix_; }
  const BasePtr& base_ptr() const { return base_; }
  const OrbitBase& base() const { return *base_; }
  bool is_fixed_orbit() const { return prefix_.empty(); }
  int length() const { return static_cast<int>(prefix_.size()); }

  friend bool operator==(const OrbitWord& x, const OrbitWord& y) {
    return x.base_ == y.base_ && x.prefix_ == y.prefix_;
  }

 private:
  BasePtr base_;
  std::vector<int> prefix_;
};

/// The fixed orbit (a, a, ...).
inline OrbitWord fixed_word(BasePtr base) { return OrbitWord(std::move(base), {}); }

// ---------------------------------------------------------------------------

/// A backward orbit in centered coordinates, extended on demand.
///
/// Two selection policies: follow a rank prefix then rank 0, or follow the
/// analytic continuation of another orbit's branch choices (nearest preimage
/// to the guide's point) until both orbits sit in D_sigma(a), then rank 0.
class LazyOrbit {
 public:
  LazyOrbit(BasePtr base, Complex v0, std::vector<int> prefix)
      : base_(std::move(base)), prefix_(std::move(prefix)), v_{v0} {}

  LazyOrbit(BasePtr base, Complex v0, LazyOrbit* guide) : base_(std::move(base)), guide_(guide), v_{v0} {}

  static LazyOrbit of(const OrbitWord& w) { return LazyOrbit(w.base_ptr(), Complex{}, w.prefix()); }

  const OrbitBase& base() const { return *base_; }

  Complex offset(int j) {
    ensure(j);
    return v_[j];
  }
  Complex point(int j) { return base_->a() + offset(j); }

  /// Rank of the preimage chosen at step j >= 1.
  int rank(int j) {
    ensure(j);
    return ranks_[j - 1];
  }

  int depth() const { return static_cast<int>(v_.size()) - 1; }

  /// First index from which the orbit follows the principal branch inside
  /// D_sigma(a) forever. Throws DivergentWord past the budget.
  int tail_start(int budget = kMaxOrbitDepth) {
    if (tail_) return *tail_;
    int start = static_cast<int>(prefix_.size());
    if (guide_) start = guide_->tail_start(budget);
    for (int j = start; j <= budget; ++j) {
      if (std::abs(offset(j)) < base_->sigma) {
        tail_ = j;
        return j;
      }
    }
    throw Error(ErrorCode::DivergentWord, "orbit does not enter D_sigma(a) within depth " + std::to_string(budget));
  }

  /// First index N with every point from N on inside D_sigma(a).
  int entry_index(int budget = kMaxOrbitDepth) {
    int n = tail_start(budget);
    while (n > 0 && std::abs(v_[n - 1]) < base_->sigma) --n;
    return n;
  }

  void ensure(int j) {
    if (j > kMaxOrbitDepth) throw Error(ErrorCode::DepthBudget, "orbit depth budget exhausted");
    while (depth() < j) step();
  }

 private:
  void step() {
    const int j = depth() + 1;
    const Complex u = v_.back();
    auto pre = ranked_preimages(base_->centered, u);
    std::size_t pick = 0;
    const bool principal = tail_ ? j > *tail_ : false;
    if (!principal) {
      if (guide_) {
        // Principal once the guide is in its tail and this orbit is in the disk.
        const bool settled = j - 1 >= guide_->tail_start() && std::abs(u) < base_->sigma;
        if (!settled) {
          const Complex target = guide_->offset(j);
          std::vector<double> dist(pre.size());
          for (std::size_t k = 0; k < pre.size(); ++k) dist[k] = std::abs(pre[k] - target);
          pick = std::min_element(dist.begin(), dist.end()) - dist.begin();
          double second = std::numeric_limits<double>::infinity();
          for (std::size_t k = 0; k < pre.size(); ++k)
            if (k != pick) second = std::min(second, dist[k]);
          if (!(dist[pick] < 0.5 * second))
            throw Error(ErrorCode::Domain, "continuation is ambiguous at depth " + std::to_string(j), j);
        }
      } else if (j <= static_cast<int>(prefix_.size())) {
        pick = static_cast<std::size_t>(prefix_[j - 1]);
      }
    }
    if (pick >= pre.size())
      throw Error(ErrorCode::DegenerateBranch, "branch rank exceeds the number of finite preimages", j);
    check_collision(pre, pick, j);
    v_.push_back(pre[pick]);
    ranks_.push_back(static_cast<int>(pick));
  }

  BasePtr base_;
  std::vector<int> prefix_;
  LazyOrbit* guide_ = nullptr;
  std::vector<Complex> v_;
  std::vector<int> ranks_;
  std::optional<int> tail_;
};

// ---------------------------------------------------------------------------

struct RealizedOrbit {
  OrbitWord word;
  int depth = 0;
  /// y_0 .. y_{-depth}.
  std::vector<Complex> points;
  /// Offsets y_{-j} - a, accurate near a.
  std::vector<Complex> offsets;
  int entry_index = 0;
};

inline RealizedOrbit realize(const OrbitWord& w, int depth) {
  if (depth < w.length())
    throw Error(ErrorCode::Precondition, "depth shorter than the word prefix");
  auto orbit = LazyOrbit::of(w);
  RealizedOrbit r{w, depth, {}, {}, orbit.entry_index()};
  orbit.ensure(depth);
  for (int j = 0; j <= depth; ++j) {
    r.offsets.push_back(orbit.offset(j));
    r.points.push_back(w.base().a() + r.offsets.back());
  }
  r.points[0] = w.base().a();
  return r;
}

enum class MembershipReason { Ok, FixedOrbit, CriticalHit, DivergentTail };

inline const char* to_string(MembershipReason r) {
  switch (r) {
    case MembershipReason::Ok: return "ok";
    case MembershipReason::FixedOrbit: return "fixed-orbit";
    case MembershipReason::CriticalHit: return "critical-hit";
    case MembershipReason::DivergentTail: return "divergent-tail";
  }
  return "?";
}

struct Membership {
  bool member = false;
  MembershipReason reason = MembershipReason::Ok;
  /// Depth at which the failing condition was detected (0 when none).
  int index = 0;
};

/// Membership in the set of backward orbits converging to a, distinct from the
/// fixed orbit, avoiding critical points.
inline Membership is_in_Pi_a(const OrbitWord& w, int depth) {
  if (w.is_fixed_orbit()) return {false, MembershipReason::FixedOrbit, 0};
  auto orbit = LazyOrbit::of(w);
  try {
    const int tail = orbit.tail_start();
    const int last = std::max(depth, tail);
    for (int j = 0; j <= last; ++j) {
      const Complex z = orbit.point(j);
      for (const auto& c : w.base().critical_points)
        if (std::abs(z - c) < kCriticalProximity) return {false, MembershipReason::CriticalHit, j};
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::DegenerateBranch) return {false, MembershipReason::CriticalHit, e.index()};
    if (e.code() == ErrorCode::DivergentWord) return {false, MembershipReason::DivergentTail, orbit.depth()};
    throw;
  }
  return {true, MembershipReason::Ok, 0};
}

/// f-hat^n: n > 0 prepends n principal symbols, n < 0 removes them.
inline OrbitWord shift(const OrbitWord& w, int n) {
  std::vector<int> p = w.prefix();
  if (n >= 0) {
    p.insert(p.begin(), static_cast<std::size_t>(n), 0);
  } else {
    const std::size_t k = static_cast<std::size_t>(-n);
    for (std::size_t i = 0; i < std::min(k, p.size()); ++i)
      if (p[i] != 0)
        throw Error(ErrorCode::NotInPiAfterShift, "negative shift through a non-principal symbol",
                    static_cast<int>(i + 1));
    p.erase(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(std::min(k, p.size())));
  }
  return OrbitWord(w.base_ptr(), std::move(p));
}

/// The word whose orbit follows y down to depth j and then continues c's
/// branch choices analytically from y_{-j}.
inline OrbitWord concatenate(const OrbitWord& y, const OrbitWord& c, int junction) {
  if (y.base_ptr() != c.base_ptr()) throw Error(ErrorCode::Precondition, "words on different bases");
  auto oy = LazyOrbit::of(y);
  if (junction < oy.entry_index())
    throw Error(ErrorCode::Precondition, "junction depth " + std::to_string(junction) +
                                             " below the entry index of the first word");
  auto oc = LazyOrbit::of(c);
  LazyOrbit follower(y.base_ptr(), oy.offset(junction), &oc);
  const int t = follower.tail_start();
  std::vector<int> p;
  for (int j = 1; j <= junction; ++j) p.push_back(oy.rank(j));
  for (int j = 1; j <= t; ++j) p.push_back(follower.rank(j));
  OrbitWord w(y.base_ptr(), std::move(p));
  const auto m = is_in_Pi_a(w, w.length());
  if (!m.member && m.reason != MembershipReason::FixedOrbit)
    throw Error(ErrorCode::Domain, std::string("concatenation not in Pi_a: ") + to_string(m.reason), m.index);
  return w;
}

}  // namespace horo
