#pragma once

// Check batteries shared by the command-line tool and the acceptance binary.
//
// parameter_battery(eps, seed) runs the per-parameter checks and renders all
// artifacts in memory. acceptance_registry() lists the acceptance criteria in
// a fixed order; each returns a verdict plus JSON data that never contains
// timings, so reports are byte-reproducible.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "horo/cocycle.hpp"
#include "horo/io.hpp"
#include "horo/julia.hpp"
#include "horo/orbits.hpp"
#include "horo/periodic.hpp"
#include "horo/quadratic.hpp"
#include "horo/svg.hpp"

namespace horo::suite {

using io::Json;

/// Report plus the files that go next to it, keyed by file name.
struct Artifacts {
  Json report;
  std::map<std::string, std::string> files;
};

struct Check {
  std::string name;
  bool pass = false;
  Json data;
};

inline Json checks_json(const std::vector<Check>& checks) {
  Json a = Json::array();
  for (const auto& c : checks) a.push_back(Json{{"name", c.name}, {"pass", c.pass}, {"data", c.data}});
  return a;
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) { return splitmix64(seed ^ splitmix64(salt)); }

/// First `count` normalized words with entry index at most max_entry.
inline std::vector<OrbitWord> shallow_words(const BasePtr& base, std::uint64_t seed, int count, int max_len,
                                            int max_entry, int max_draws = 100000) {
  std::mt19937_64 rng(seed);
  std::vector<OrbitWord> out;
  std::vector<std::vector<int>> seen;
  for (int draw = 0; draw < max_draws && static_cast<int>(out.size()) < count; ++draw) {
    auto w = quadratic::random_word(base, rng, max_len);
    if (std::find(seen.begin(), seen.end(), w.prefix()) != seen.end()) continue;
    seen.push_back(w.prefix());
    if (is_in_Pi_a(w, w.length()).member && LazyOrbit::of(w).entry_index() <= max_entry) out.push_back(std::move(w));
  }
  if (static_cast<int>(out.size()) < count) throw Error(ErrorCode::Construction, "not enough shallow words");
  return out;
}

// ---------------------------------------------------------------------------
// Per-parameter battery

struct BatteryOptions {
  int words = 60;
  int max_len = 10;
  int julia_points = 4000;
  int julia_depth = 40;
  double tol = 1e-11;
  std::vector<int> junctions{10, 15, 20, 25, 30, 35, 40, 45, 50};
};

inline Artifacts parameter_battery(Complex eps, std::uint64_t seed, const BatteryOptions& opt = {}) {
  Artifacts art;
  std::vector<Check> checks;
  const auto f = RationalMap::quadratic(eps);
  const auto pp = quadratic::base_point(eps);
  const bool exceptional = quadratic::degenerate_parameter(eps);
  const bool real = eps.imag() == 0.0;

  {
    const double res = std::abs(f.eval(pp.location).z - pp.location);
    checks.push_back({"fixed-point", res < 1e-12 && pp.cls == PointClass::Repelling,
                      Json{{"a", io::complex_json(pp.location)},
                           {"multiplier", io::complex_json(pp.multiplier)},
                           {"class", to_string(pp.cls)},
                           {"residual", res},
                           {"branch_exceptional", quadratic::branch_exceptional(eps)},
                           {"degenerate", exceptional}}});
  }

  const auto js = inverse_iteration_sample(f, quadratic::julia_start(eps), opt.julia_points, opt.julia_depth,
                                           derive_seed(seed, 1));
  {
    io::CsvTable t({"re", "im", "method"});
    for (const auto& z : js.points) t.row().add(z.real()).add(z.imag()).add(to_string(js.method));
    art.files["julia.csv"] = t.str();
    art.files["julia-scatter.svg"] =
        svg::julia_scatter(js.points, Complex{}, std::abs(pp.location), "Julia sample with |z| = |a| overlay");
  }
  if (real && !exceptional) {
    const auto c = quadratic::disk_containment_check(eps.real(), js.points, 1e-6);
    checks.push_back({"containment", c.violations == 0 && c.near_violations == 0,
                      Json{{"points", c.checked},
                           {"violations", c.violations},
                           {"near_boundary", c.near_boundary},
                           {"max_near_distance", c.max_near_distance},
                           {"extreme_modulus", c.extreme_modulus}}});
  }

  if (exceptional) {
    // The two exceptional parameters: z^2 has identically vanishing cocycle,
    // z^2 - 2 has no admissible words at all.
    const auto base = quadratic::make_base(eps);
    if (std::abs(eps) < 1e-12) {
      std::mt19937_64 rng(derive_seed(seed, 3));
      double worst = 0.0;
      io::CsvTable t({"word", "beta", "tail_bound"});
      for (int i = 0; i < opt.words; ++i) {
        const auto w = quadratic::random_word(base, rng, opt.max_len);
        const auto b = cocycle_vs_fixed(w, opt.tol);
        worst = std::max(worst, std::abs(b.value));
        t.row().add(w.str()).add(b.value).add(b.tail_bound);
      }
      art.files["words.csv"] = t.str();
      checks.push_back({"vanishing-cocycle", worst < 1e-10, Json{{"max_abs_beta", worst}}});
    } else {
      int rejected = 0, total = 0;
      for (int len = 1; len <= 6; ++len)
        for (int bits = 0; bits < (1 << (len - 1)); ++bits) {
          std::vector<int> p{1};
          for (int k = 0; k < len - 1; ++k) p.push_back((bits >> k) & 1);
          const auto m = is_in_Pi_a(OrbitWord(base, p), len);
          ++total;
          if (!m.member && m.reason == MembershipReason::CriticalHit && m.index <= 3) ++rejected;
        }
      checks.push_back({"critical-hit", rejected == total, Json{{"candidates", total}, {"rejected", rejected}}});
    }
  } else {
    const auto sd = quadratic::find_sigma_delta(eps, js.points);
    checks.push_back({"sigma-delta", sd.delta > 0.0,
                      Json{{"sigma", sd.sigma},
                           {"delta", sd.delta},
                           {"margin_cover", sd.margin_cover},
                           {"margin_disjoint", sd.margin_disjoint},
                           {"delta_points", sd.delta_points}}});
    const auto base = quadratic::make_base(eps, sd);
    const auto words = quadratic::accepted_words(base, derive_seed(seed, 2), opt.words, opt.max_len);
    const int sign = eps.real() > 0 ? 1 : -1;
    int sign_bad = 0, bound_bad = 0, excursion_bad = 0;
    double min_margin = std::numeric_limits<double>::infinity();
    io::CsvTable t({"word", "beta", "tail_bound", "s", "d", "bound_margin"});
    for (const auto& w : words) {
      const auto st = quadratic::excursion_stats(w);
      const auto lb = quadratic::cocycle_lower_bound_check(w, sd, opt.tol, real ? 1.0 : 0.5);
      if (!(sign * lb.beta > lb.tail_bound)) ++sign_bad;
      if (!lb.holds) ++bound_bad;
      if (!st.ok()) ++excursion_bad;
      min_margin = std::min(min_margin, lb.margin);
      t.row().add(w.str()).add(lb.beta).add(lb.tail_bound).add(st.s).add(st.d).add(lb.margin);
    }
    art.files["words.csv"] = t.str();
    checks.push_back({"sign-law", sign_bad == 0, Json{{"words", static_cast<int>(words.size())}, {"violations", sign_bad}}});
    checks.push_back({"excursion-bound", bound_bad == 0, Json{{"violations", bound_bad}, {"min_margin", min_margin}}});
    checks.push_back({"excursions", excursion_bad == 0, Json{{"violations", excursion_bad}}});

    const auto B = quadratic::build_B_epsilon(words, 2, opt.tol);
    {
      io::CsvTable bt({"v", "bound"});
      std::vector<double> vals;
      for (const auto& e : B.report.values) {
        bt.row().add(e.v).add(e.bound);
        vals.push_back(e.v);
      }
      art.files["b_epsilon.csv"] = bt.str();
      art.files["gap-histogram.svg"] = svg::gap_histogram(vals, B.report.lo, B.report.hi, 60, "B_epsilon sample, sums of at most two values");
    }
    checks.push_back({"b-epsilon", B.sign_ok && B.min_abs > sd.delta,
                      Json{{"count", B.report.count},
                           {"min_abs", B.min_abs},
                           {"max_gap", B.report.max_gap},
                           {"window", Json::array({B.report.lo, B.report.hi})}}});

    const auto y = OrbitWord::parse(base, "-");
    const auto rows = semigroup_convergence(y, y, opt.junctions, 1e-15);
    {
      io::CsvTable dt({"junction", "defect", "tail_bound"});
      std::vector<double> xs, ys;
      bool mono = true;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        dt.row().add(rows[i].junction).add(rows[i].defect).add(rows[i].tail_bound);
        xs.push_back(rows[i].junction);
        ys.push_back(rows[i].defect);
        if (i && !(rows[i].defect < rows[i - 1].defect)) mono = false;
      }
      art.files["defects.csv"] = dt.str();
      art.files["defect-decay.svg"] = svg::defect_decay(xs, ys, "Semigroup defect against junction depth");
      const double rate = fitted_decay_rate(rows);
      checks.push_back({"semigroup", mono && rate < 1.0,
                        Json{{"final_defect", rows.back().defect}, {"rate", rate},
                              {"inverse_multiplier_modulus", 1.0 / std::abs(pp.multiplier)}}});
    }

    double worst = 0.0;
    for (int c = 0; c < 4; ++c) {
      const Complex center = base->a() + std::polar(0.4 * sd.sigma, c * kPi / 2);
      const double rr = sd.sigma / 10;
      const double mid = cocycle_field(y, center, 1e-13).value;
      CompensatedSum s;
      for (int k = 0; k < 16; ++k) s.add(cocycle_field(y, center + std::polar(rr, 2 * kPi * k / 16), 1e-13).value);
      worst = std::max(worst, std::abs(s.value() / 16 - mid));
    }
    checks.push_back({"harmonicity", worst < 1e-6, Json{{"max_mean_value_residual", worst}}});
  }

  bool all = true;
  for (const auto& c : checks) all = all && c.pass;
  art.report = Json{{"schema", 1},
                    {"command", "suite"},
                    {"epsilon", io::complex_json(eps)},
                    {"seed", seed},
                    {"pass", all},
                    {"checks", checks_json(checks)}};
  return art;
}

// ---------------------------------------------------------------------------
// Acceptance criteria

struct Outcome {
  bool pass = false;
  std::string summary;
  Json data;
};

struct Criterion {
  int id;
  std::string name;
  /// Runtime limit in seconds; 0 for none.
  double limit;
  std::function<Outcome(std::uint64_t)> run;
};

namespace detail {

inline std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

inline Outcome fixed_points(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Complex eps = std::polar(2.0 * std::sqrt(u(rng)), 2 * kPi * u(rng));
    if (eps.imag() == 0.0 && eps.real() >= 0.25) continue;
    const Complex a = quadratic::fixed_point_a(eps);
    worst = std::max(worst, std::abs(a * a + eps - a));
  }
  bool cls_ok = true;
  Json reals = Json::array();
  for (double e : {-3.0, -1.0, -0.5, 0.1, 0.2}) {
    const double a = quadratic::fixed_point_a(e).real();
    bool found = false;
    for (const auto& p : periodic_points(RationalMap::quadratic(e), 1))
      if (std::abs(p.location - a) < 1e-9) {
        found = p.cls == PointClass::Repelling && std::abs(p.multiplier - 2.0 * a) < 1e-9;
        reals.push_back(Json{{"epsilon", e}, {"a", a}, {"multiplier", io::complex_json(p.multiplier)},
                             {"class", to_string(p.cls)}});
      }
    cls_ok = cls_ok && found;
  }
  return {worst < 1e-12 && cls_ok, fmt("max |f(a)-a| = %.3g over 1000 eps; real cases repelling with multiplier 2a", worst),
          Json{{"max_residual", worst}, {"real_cases", reals}}};
}

inline Outcome branch_exceptional(std::uint64_t) {
  std::vector<int> hits;
  for (int k = 0; k < 1000; ++k)
    if (quadratic::branch_exceptional(-2.0 + (k - 600) / 400.0)) hits.push_back(k);
  const bool grid_ok = hits.size() == 1 && hits[0] == 600;
  const auto base = quadratic::make_base(Complex(-2.0));
  int total = 0, rejected = 0, max_index = 0;
  for (int len = 1; len <= 10; ++len)
    for (int bits = 0; bits < (1 << (len - 1)); ++bits) {
      std::vector<int> p{1};
      for (int k = 0; k < len - 1; ++k) p.push_back((bits >> k) & 1);
      if (p.back() == 0) continue;  // same word as a shorter one
      const auto m = is_in_Pi_a(OrbitWord(base, p), len);
      ++total;
      if (!m.member && m.reason == MembershipReason::CriticalHit && m.index <= 3) ++rejected;
      max_index = std::max(max_index, m.index);
    }
  return {grid_ok && rejected == total,
          fmt("%g grid hit(s), all at eps=-2: %g/%g candidate words rejected as critical-hit",
              static_cast<double>(hits.size()), rejected, total),
          Json{{"grid_hits", hits}, {"candidates", total}, {"rejected", rejected}, {"max_hit_depth", max_index}}};
}

inline Outcome degenerate_case(std::uint64_t seed) {
  const auto base = quadratic::make_base(Complex(0.0));
  std::mt19937_64 rng(seed);
  std::vector<OrbitWord> words;
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    std::vector<int> p(60);
    for (auto& s : p) s = static_cast<int>(rng() % 2);
    p.front() = 1;
    p.back() = 1;
    words.emplace_back(base, p);
    worst = std::max(worst, std::abs(cocycle_vs_fixed(words.back(), 1e-13).value));
  }
  Json gaps = Json::array();
  bool gap_ok = true;
  for (std::size_t n : {std::size_t{1}, std::size_t{20}, std::size_t{200}}) {
    const std::vector<OrbitWord> sub(words.begin(), words.begin() + static_cast<std::ptrdiff_t>(n));
    const auto r = height_set(sub, -40, 40, 1e-13);
    gaps.push_back(Json{{"words", n}, {"max_gap", r.max_gap}});
    gap_ok = gap_ok && std::abs(r.max_gap - std::log(2.0)) < 1e-9;
  }
  return {worst < 1e-10 && gap_ok, fmt("max |beta| = %.3g over 200 depth-60 words; max gap = ln 2 for every sample size", worst),
          Json{{"max_abs_beta", worst}, {"gaps", gaps}}};
}

/// Sign of every nonzero series term; zero terms only at +-a.
struct TermAudit {
  int bad_terms = 0;
  int zero_terms = 0;
  int checked = 0;
};

inline TermAudit audit_terms(const OrbitWord& w, int sign) {
  TermAudit a;
  auto o = LazyOrbit::of(w);
  const int tail = o.tail_start();
  const auto& b = w.base();
  for (int j = 1; j <= tail || std::abs(o.offset(j)) >= 1e-9; ++j) {
    const Complex v = o.offset(j);
    const double t = b.centered.log_derivative_ratio(v);
    const double to_pm = std::min(std::abs(v), std::abs(2.0 * b.a() + v));
    ++a.checked;
    if (to_pm < 1e-9) {
      ++a.zero_terms;
      if (std::abs(t) > b.lipschitz * 1e-9 + 1e-15) ++a.bad_terms;
    } else if (!(sign * t > 0.0)) {
      ++a.bad_terms;
    }
  }
  return a;
}

inline Outcome sign_law(std::uint64_t seed) {
  Json per = Json::array();
  bool ok = true;
  for (double e : {0.1, -1.0}) {
    const auto f = RationalMap::quadratic(e);
    const auto js = inverse_iteration_sample(f, quadratic::fixed_point_a(e), 4000, 40, derive_seed(seed, 1));
    const auto base = quadratic::make_base(e, quadratic::find_sigma_delta(e, js.points));
    const auto words = quadratic::accepted_words(base, derive_seed(seed, 2), 200, 10);
    const int sign = e > 0 ? 1 : -1;
    int bad_beta = 0, bad_terms = 0, terms = 0;
    for (const auto& w : words) {
      const auto b = cocycle_vs_fixed(w, 1e-12);
      if (!(sign * b.value > b.tail_bound)) ++bad_beta;
      const auto a = audit_terms(w, sign);
      bad_terms += a.bad_terms;
      terms += a.checked;
    }
    ok = ok && bad_beta == 0 && bad_terms == 0;
    per.push_back(Json{{"epsilon", e}, {"words", 200}, {"wrong_sign_beta", bad_beta}, {"terms_checked", terms},
                       {"wrong_sign_terms", bad_terms}});
  }
  return {ok, "200 words per eps in {0.1, -1}: beta and every nonzero term carry the predicted sign", per};
}

inline Outcome containment(std::uint64_t seed) {
  Json per = Json::array();
  bool ok = true;
  for (double e : {-1.0, 0.1}) {
    const auto f = RationalMap::quadratic(e);
    const auto js = inverse_iteration_sample(f, quadratic::fixed_point_a(e), 10000, 40, derive_seed(seed, 1));
    const auto c = quadratic::disk_containment_check(e, js.points, 1e-6, 1e-3);
    ok = ok && c.violations == 0 && c.near_violations == 0;
    per.push_back(Json{{"epsilon", e}, {"points", c.checked}, {"violations", c.violations},
                       {"near_boundary", c.near_boundary}, {"near_violations", c.near_violations},
                       {"max_near_distance", c.max_near_distance}, {"extreme_modulus", c.extreme_modulus}});
  }
  return {ok, "10^4 inverse-iteration points per eps on the predicted side of |z| = a", per};
}

inline Outcome sigma_delta_bound(std::uint64_t seed) {
  Json per = Json::array();
  bool ok = true;
  std::string summary;
  for (double e : {0.1, -1.0}) {
    const auto f = RationalMap::quadratic(e);
    const auto js = inverse_iteration_sample(f, quadratic::fixed_point_a(e), 10000, 40, derive_seed(seed, 1));
    const auto sd = quadratic::find_sigma_delta(e, js.points);
    const auto base = quadratic::make_base(e, sd);
    const auto words = quadratic::accepted_words(base, derive_seed(seed, 2), 200, 10);
    int bad = 0, bad_exc = 0;
    double min_margin = std::numeric_limits<double>::infinity();
    for (const auto& w : words) {
      const auto lb = quadratic::cocycle_lower_bound_check(w, sd, 1e-12);
      if (!lb.holds) ++bad;
      if (!quadratic::excursion_stats(w).ok()) ++bad_exc;
      min_margin = std::min(min_margin, lb.margin);
    }
    const auto B = quadratic::build_B_epsilon(words, 2, 1e-12);
    const bool this_ok = sd.delta > 0 && bad == 0 && bad_exc == 0 && B.min_abs > sd.delta && B.sign_ok;
    ok = ok && this_ok;
    per.push_back(Json{{"epsilon", e}, {"sigma", sd.sigma}, {"delta", sd.delta}, {"margin_cover", sd.margin_cover},
                       {"margin_disjoint", sd.margin_disjoint}, {"bound_violations", bad},
                       {"excursion_violations", bad_exc}, {"min_bound_margin", min_margin},
                       {"min_abs_B", B.min_abs}, {"B_count", B.report.count}});
    summary += fmt("eps=%g: delta=%.4g, min|B|=%.4g; ", e, sd.delta, B.min_abs);
  }
  return {ok, summary + "bound holds for all 200 words", per};
}

inline Outcome semigroup(std::uint64_t seed) {
  const double e = 0.1;
  const auto f = RationalMap::quadratic(e);
  const auto js = inverse_iteration_sample(f, quadratic::fixed_point_a(e), 4000, 40, derive_seed(seed, 1));
  const auto base = quadratic::make_base(e, quadratic::find_sigma_delta(e, js.points));
  const auto ys = shallow_words(base, derive_seed(seed, 2), 20, 6, 10);
  const auto cs = quadratic::accepted_words(base, derive_seed(seed, 3), 20, 6);
  std::vector<int> junctions;
  for (int j = 10; j <= 50; ++j) junctions.push_back(j);
  int non_mono = 0, big_final = 0, nested_bad = 0, decomp_bad = 0;
  double worst_final = 0.0, worst_nested = 0.0;
  Json pairs = Json::array();
  for (int i = 0; i < 20; ++i) {
    const auto rows = semigroup_convergence(ys[i], cs[i], junctions, 1e-15);
    bool mono = true;
    for (std::size_t k = 1; k < rows.size(); ++k)
      if (!(rows[k].defect < rows[k - 1].defect)) mono = false;
    if (!mono) ++non_mono;
    if (!(rows.back().defect < 1e-8)) ++big_final;
    worst_final = std::max(worst_final, rows.back().defect);
    // Nested at the last junction of the range (inner 50, outer 100).
    const double nd = quadratic::nested_defect(ys[i], cs[i], 50, 1e-13);
    const double nd25 = quadratic::nested_defect(ys[i], cs[i], 25, 1e-13);
    worst_nested = std::max(worst_nested, nd);
    if (!(nd < 1e-6)) ++nested_bad;
    const auto ld = quadratic::limit_decomposition_check(ys[i], cs[i], {10, 20, 30, 40, 50}, 1e-13);
    if (!ld.ok()) ++decomp_bad;
    pairs.push_back(Json{{"y", ys[i].str()}, {"c", cs[i].str()}, {"defect_10", rows.front().defect},
                         {"defect_50", rows.back().defect}, {"rate", fitted_decay_rate(rows)}, {"nested_50", nd}, {"nested_25", nd25}});
  }
  const bool ok = non_mono == 0 && big_final == 0 && nested_bad == 0 && decomp_bad == 0;
  return {ok, fmt("20 pairs: max defect at j=50 %.3g, max nested defect %.3g", worst_final, worst_nested),
          Json{{"non_monotone", non_mono}, {"final_above_1e-8", big_final}, {"nested_failures", nested_bad},
               {"decomposition_failures", decomp_bad}, {"pairs", pairs}}};
}

inline Outcome algebra(std::uint64_t seed) {
  const double tol = 1e-10;
  Json per = Json::array();
  bool ok = true;
  for (double e : {0.1, -1.0}) {
    const auto f = RationalMap::quadratic(e);
    const auto js = inverse_iteration_sample(f, quadratic::fixed_point_a(e), 4000, 40, derive_seed(seed, 1));
    const auto base = quadratic::make_base(e, quadratic::find_sigma_delta(e, js.points));
    const auto w = quadratic::accepted_words(base, derive_seed(seed, 2), 300, 12);
    std::mt19937_64 rng(derive_seed(seed, 3));
    double anti = 0, ident = 0, shift_err = 0;
    for (int i = 0; i < 100; ++i) {
      const auto &x = w[3 * i], &y = w[3 * i + 1], &z = w[3 * i + 2];
      const double bxy = basic_cocycle(x, y, tol).value, byx = basic_cocycle(y, x, tol).value;
      const double byz = basic_cocycle(y, z, tol).value, bxz = basic_cocycle(x, z, tol).value;
      anti = std::max(anti, std::abs(bxy + byx));
      ident = std::max(ident, std::abs(byz - bxz + bxy));
      const int n = 1 + static_cast<int>(rng() % 5);
      shift_err = std::max(shift_err, std::abs(basic_cocycle(shift(x, n), shift(y, n), tol).value - bxy));
    }
    const bool this_ok = anti <= 3 * tol && ident <= 3 * tol && shift_err <= 3 * tol;
    ok = ok && this_ok;
    per.push_back(Json{{"epsilon", e}, {"antisymmetry", anti}, {"cocycle_identity", ident}, {"shift_invariance", shift_err}});
  }
  return {ok, "antisymmetry, cocycle identity and shift invariance within 3 tol on 100 triples per eps", per};
}

inline Outcome harmonic(std::uint64_t seed) {
  const double e = 0.1;
  const auto f = RationalMap::quadratic(e);
  const auto js = inverse_iteration_sample(f, quadratic::fixed_point_a(e), 4000, 40, derive_seed(seed, 1));
  const auto sd = quadratic::find_sigma_delta(e, js.points);
  const auto base = quadratic::make_base(e, sd);
  std::vector<OrbitWord> cs{OrbitWord::parse(base, "-")};
  for (const auto& w : quadratic::accepted_words(base, derive_seed(seed, 2), 4, 6)) cs.push_back(w);
  std::mt19937_64 rng(derive_seed(seed, 3));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (const auto& c : cs)
    for (int k = 0; k < 5; ++k) {
      const Complex center = base->a() + (k == 0 ? Complex{} : std::polar(0.5 * sd.sigma * u(rng), 2 * kPi * u(rng)));
      const double rr = sd.sigma / 10;
      const double mid = cocycle_field(c, center, 1e-13).value;
      CompensatedSum s;
      for (int q = 0; q < 16; ++q) s.add(cocycle_field(c, center + std::polar(rr, 2 * kPi * q / 16), 1e-13).value);
      worst = std::max(worst, std::abs(s.value() / 16 - mid));
    }
  const auto minus = OrbitWord::parse(base, "-");
  std::vector<double> vals;
  for (int k = 0; k < 50; ++k)
    vals.push_back(cocycle_field(minus, base->a() + std::polar(0.5 * sd.sigma * std::sqrt(u(rng)), 2 * kPi * u(rng)), 1e-13).value);
  double mean = 0;
  for (double v : vals) mean += v / vals.size();
  double var = 0;
  for (double v : vals) var += (v - mean) * (v - mean) / (vals.size() - 1);
  const double center_gap = std::abs(cocycle_field(minus, base->a(), 1e-13).value - cocycle_vs_fixed(minus, 1e-13).value);
  return {worst < 1e-6 && var > 1e-10 && center_gap < 1e-12,
          fmt("max mean-value residual %.3g; variance over D_{sigma/2} %.3g", worst, var),
          Json{{"max_mean_value_residual", worst}, {"variance", var}, {"field_at_a_minus_beta", center_gap}}};
}

inline Outcome density(std::uint64_t seed) {
  const double e = -1.0;
  const auto f = RationalMap::quadratic(e);
  const auto js = inverse_iteration_sample(f, quadratic::fixed_point_a(e), 4000, 40, derive_seed(seed, 1));
  const auto base = quadratic::make_base(e, quadratic::find_sigma_delta(e, js.points));
  const auto words = quadratic::accepted_words(base, derive_seed(seed, 2), 500, 12);
  const auto r = height_set(words, -40, 40, 1e-12);
  std::vector<double> betas;
  for (const auto& w : words) betas.push_back(cocycle_vs_fixed(w, 1e-12).value);
  std::sort(betas.begin(), betas.end());
  double b1 = 0, b2 = 0, best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < betas.size(); ++i) {
    const double d = betas[i] - betas[i - 1];
    if (d > 1e-9 && d < best) best = d, b1 = betas[i - 1], b2 = betas[i];
  }
  const double M = base->log_multiplier();
  const auto pc = progression_density_check({b1, b2}, M, 0.0, 1.0, 0.05);
  return {r.max_gap < 0.1 && pc.dense,
          fmt("height-set max gap %.4g over [0,1]; progression max gap %.4g", r.max_gap, pc.max_gap),
          Json{{"height_max_gap", r.max_gap}, {"height_gap_at", r.gap_at}, {"height_count", r.count},
               {"generators", Json::array({b1, b2})}, {"modulus", M}, {"progression_max_gap", pc.max_gap},
               {"progression_dense", pc.dense}}};
}

inline Outcome collinearity(std::uint64_t seed) {
  Json per = Json::array();
  bool ok = true;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (double e : {-3.0, -1.0}) {
    const auto f = RationalMap::quadratic(e);
    const auto lin = Linearizer::build(f, quadratic::base_point(e));
    const auto rep = collinearity_in_linearizer(lin, 8);
    double resid = 0.0;
    for (int k = 0; k < 256; ++k) {
      const Complex z = lin.base().location + std::polar(lin.radius() * 0.95 * std::sqrt(u(rng)), 2 * kPi * u(rng));
      resid = std::max(resid, std::abs(lin(f.eval(z).z) - lin.multiplier() * lin(z)));
    }
    const bool verdict_ok = e == -3.0 ? (rep.verdict == Collinearity::Line && rep.deviation < 1e-8 * rep.spread)
                                      : (rep.verdict == Collinearity::Full && rep.deviation > 0.01);
    ok = ok && verdict_ok && resid < 1e-9;
    per.push_back(Json{{"epsilon", e}, {"verdict", to_string(rep.verdict)}, {"deviation", rep.deviation},
                       {"spread", rep.spread}, {"points", rep.points_used}, {"radius", lin.radius()},
                       {"functional_equation_residual", resid}});
  }
  return {ok, "eps=-3 preimage cloud on a line in the chart, eps=-1 not; functional equation holds", per};
}

inline Outcome addendum(std::uint64_t seed) {
  Json per = Json::array();
  bool ok = true;
  for (double e0 : {0.1, -1.0}) {
    const auto js = inverse_iteration_sample(RationalMap::quadratic(e0), quadratic::fixed_point_a(e0), 10000, 40,
                                             derive_seed(seed, 1));
    const auto sd0 = quadratic::find_sigma_delta(e0, js.points);
    const Complex eps(e0, 0.02);
    const auto base = horo::make_base(RationalMap::quadratic(eps), quadratic::base_point(eps), sd0.sigma, "real-neighbor");
    const auto words = quadratic::accepted_words(base, derive_seed(seed, 2), 200, 10);
    const int sign = e0 > 0 ? 1 : -1;
    int bad_sign = 0, bad_bound = 0;
    double min_margin = std::numeric_limits<double>::infinity();
    for (const auto& w : words) {
      const auto lb = quadratic::cocycle_lower_bound_check(w, sd0, 1e-12, 0.5);
      if (!(sign * lb.beta > lb.tail_bound)) ++bad_sign;
      if (!lb.holds) ++bad_bound;
      min_margin = std::min(min_margin, lb.margin);
    }
    ok = ok && bad_sign == 0 && bad_bound == 0;
    per.push_back(Json{{"epsilon", io::complex_json(eps)}, {"sigma0", sd0.sigma}, {"delta0", sd0.delta},
                       {"sign_violations", bad_sign}, {"half_delta_violations", bad_bound}, {"min_margin", min_margin}});
  }
  return {ok, "eps = 0.1+0.02i and -1+0.02i: sign of Re eps and half-delta bound for 200 words each", per};
}

}  // namespace detail

/// Criteria 1-12. Determinism (13) needs the runner and is added by callers.
inline std::vector<Criterion> acceptance_registry() {
  return {
      {1, "fixed-point and classification", 1, detail::fixed_points},
      {2, "branch-exceptional boundary", 5, detail::branch_exceptional},
      {3, "degenerate parameter eps = 0", 10, detail::degenerate_case},
      {4, "sign law", 30, detail::sign_law},
      {5, "disk containment", 30, detail::containment},
      {6, "sigma/delta and lower bound", 60, detail::sigma_delta_bound},
      {7, "semigroup convergence", 60, detail::semigroup},
      {8, "cocycle algebra", 30, detail::algebra},
      {9, "harmonicity and nonconstance", 30, detail::harmonic},
      {10, "density shadow", 120, detail::density},
      {11, "collinearity dichotomy", 30, detail::collinearity},
      {12, "complex-parameter addendum", 60, detail::addendum},
  };
}

struct CriterionReport {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string summary;
  Json data;
  double seconds = 0.0;
  double limit = 0.0;
};

/// Runs one criterion; errors become failures with the diagnostic as summary.
inline CriterionReport run_criterion(const Criterion& c, std::uint64_t seed) {
  CriterionReport r{c.id, c.name, false, "", Json::object(), 0.0, c.limit};
  const auto t0 = std::chrono::steady_clock::now();
  try {
    auto o = c.run(derive_seed(seed, static_cast<std::uint64_t>(c.id)));
    r.pass = o.pass;
    r.summary = o.summary;
    r.data = std::move(o.data);
  } catch (const Error& e) {
    r.summary = std::string("error [") + to_string(e.code()) + "]: " + e.what();
    r.data = Json{{"error", Json{{"code", to_string(e.code())}, {"message", e.what()}}}};
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

/// The three chart kinds on their reference inputs: the eps=0 height set,
/// the eps=-1 Julia sample against |z| = a, and the eps=0.1 defect decay.
inline std::map<std::string, std::string> acceptance_charts(std::uint64_t seed) {
  std::map<std::string, std::string> files;
  {
    const auto base = quadratic::make_base(Complex(0.0));
    std::mt19937_64 rng(derive_seed(seed, 101));
    std::vector<OrbitWord> words;
    for (int i = 0; i < 20; ++i) words.push_back(quadratic::random_word(base, rng, 12));
    std::vector<double> vals;
    for (const auto& e : height_set(words, -40, 40, 1e-13, 0.0, 3.0).values) vals.push_back(e.v);
    files["gap-histogram.svg"] = svg::gap_histogram(vals, 0.0, 3.0, 300, "Height set for z^2 on [0, 3]");
  }
  {
    const auto f = RationalMap::quadratic(-1.0);
    const Complex a = quadratic::fixed_point_a(-1.0);
    const auto js = inverse_iteration_sample(f, a, 10000, 40, derive_seed(seed, 102));
    files["julia-scatter.svg"] = svg::julia_scatter(js.points, Complex{}, std::abs(a), "Julia sample, eps = -1, with |z| = a");
  }
  {
    const auto base = quadratic::make_base(Complex(0.1));
    const auto y = OrbitWord::parse(base, "-");
    std::vector<int> js;
    for (int j = 10; j <= 50; ++j) js.push_back(j);
    std::vector<double> xs, ys;
    for (const auto& r : semigroup_convergence(y, y, js, 1e-15)) xs.push_back(r.junction), ys.push_back(r.defect);
    files["defect-decay.svg"] = svg::defect_decay(xs, ys, "Semigroup defect, eps = 0.1, y = c = -");
  }
  return files;
}

/// Renders a battery's artifacts into one string for byte comparison.
inline std::string fingerprint(const Artifacts& a) {
  std::string s = io::dump(a.report);
  for (const auto& [name, body] : a.files) s += "\n--" + name + "--\n" + body;
  return s;
}

}  // namespace horo::suite
