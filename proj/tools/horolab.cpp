// horolab: command-line front end for the horosphere dynamics library.
//
// Every subcommand prints report.json to stdout and writes it, plus its CSV
// tables and (with --svg) charts, into --out. Exit status: 0 ok, 1 computation
// error or failed battery, 2 configuration error.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "horo/horo.hpp"

using namespace horo;
using io::Json;

namespace {

// Hard ceilings on budgets.
constexpr int kMaxPeriod = 12;
constexpr int kMaxTreeDepth = 16;
constexpr int kMaxJuliaPoints = 1000000;
constexpr int kMaxJuliaDepth = 10000;
constexpr int kMaxWords = 100000;
constexpr int kMaxWordLength = 64;
constexpr int kMaxJunction = 50000;

struct Opts {
  std::string epsilon, map, word, word2, multiplier, point, junctions, suite;
  std::string out = "horolab-out";
  int depth = -1;
  double tol = 1e-12;
  std::uint64_t seed = 0;
  int count = -1;
  int period = 1;
  int max_len = 10;
  int m_lo = -40, m_hi = 40;
  int l_max = 2;
  double lo = 0.0, hi = 1.0;
  bool svg = false;
};

struct Output {
  Json report = Json::object();
  std::map<std::string, std::string> files;
  bool failed = false;
};

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorCode::Config, msg); }

Complex parse_complex(const std::string& s, const char* what) {
  std::string t = s;
  std::replace(t.begin(), t.end(), ',', ' ');
  std::istringstream in(t);
  double re = 0, im = 0;
  if (!(in >> re)) config_error(std::string(what) + " must be RE[,IM]");
  if (!(in >> im)) im = 0.0;
  std::string rest;
  if (in >> rest) config_error(std::string(what) + " must be RE[,IM]");
  if (!std::isfinite(re) || !std::isfinite(im)) config_error(std::string(what) + " must be finite");
  return {re, im};
}

std::vector<int> parse_int_list(const std::string& s) {
  std::string t = s;
  std::replace(t.begin(), t.end(), ',', ' ');
  std::istringstream in(t);
  std::vector<int> v;
  int x;
  while (in >> x) v.push_back(x);
  if (!in.eof()) config_error("junctions must be a comma-separated integer list");
  return v;
}

class Context {
 public:
  Context(const Opts& o, CLI::App* sub) : o_(o), sub_(sub) {
    if (o.tol <= 0.0 || !std::isfinite(o.tol) || o.tol >= 1.0) config_error("--tol must lie in (0, 1)");
    if (o.tol < 1e-15) config_error("--tol below the 1e-15 floor");
  }

  bool given(const std::string& name) const {
    auto* opt = sub_->get_option_no_throw(name);
    return opt && opt->count() > 0;
  }

  std::uint64_t seed() const {
    if (!given("--seed")) config_error("--seed is mandatory for randomized operations");
    return o_.seed;
  }

  bool quadratic() const { return given("--epsilon"); }

  Complex epsilon() const {
    if (!quadratic()) config_error("this subcommand needs --epsilon");
    return parse_complex(o_.epsilon, "--epsilon");
  }

  RationalMap map() const {
    if (given("--epsilon") && given("--map")) config_error("give either --epsilon or --map, not both");
    if (given("--epsilon")) return RationalMap::quadratic(epsilon());
    if (!given("--map")) config_error("need --epsilon or --map");
    Json j;
    try {
      j = Json::parse(io::read_file(o_.map));
    } catch (const Json::exception& e) {
      config_error(std::string("cannot parse map file: ") + e.what());
    }
    try {
      return io::map_from_json(j);
    } catch (const Error& e) {
      // Degree or normalization problems are configuration errors here.
      config_error(e.what());
    }
  }

  PeriodicPoint base_point(const RationalMap& f) const {
    return quadratic() ? quadratic::base_point(epsilon()) : dominant_repelling_fixed_point(f);
  }

  /// Base with sigma from the linearizer.
  BasePtr base() const {
    if (!base_) {
      const auto f = map();
      base_ = quadratic() ? quadratic::make_base(epsilon()) : make_base_from_linearizer(f, base_point(f));
    }
    return base_;
  }

  OrbitWord word(const BasePtr& b, const std::string& flag, const std::string& value) const {
    if (value.empty()) config_error(flag + " is required");
    try {
      return OrbitWord::parse(b, value);
    } catch (const Error& e) {
      config_error(flag + ": " + e.what());
    }
  }

  int bounded(int value, int fallback, int lo, int hi, const char* flag) const {
    const int v = value < 0 ? fallback : value;
    if (v < lo || v > hi)
      config_error(std::string(flag) + " must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return v;
  }

  std::vector<int> junctions(std::vector<int> fallback) const {
    auto js = given("--junctions") ? parse_int_list(o_.junctions) : std::move(fallback);
    if (js.empty()) config_error("--junctions is empty");
    for (std::size_t i = 0; i < js.size(); ++i) {
      if (js[i] < 0 || js[i] > kMaxJunction) config_error("junction outside [0, 50000]");
      if (i && js[i] <= js[i - 1]) config_error("junctions must be strictly increasing");
    }
    return js;
  }

  /// Search-certified sigma and delta for quadratic parameters.
  quadratic::SigmaDelta sigma_delta(int points) const {
    const Complex eps = epsilon();
    const auto js = inverse_iteration_sample(RationalMap::quadratic(eps), quadratic::fixed_point_a(eps), points, 40,
                                             suite::derive_seed(seed(), 1));
    return quadratic::find_sigma_delta(eps, js.points);
  }

  const Opts& o() const { return o_; }

 private:
  const Opts& o_;
  CLI::App* sub_;
  mutable BasePtr base_;
};

Json point_json(const PeriodicPoint& p) {
  return Json{{"location", io::complex_json(p.location)},
              {"period", p.period},
              {"multiplier", io::complex_json(p.multiplier)},
              {"class", to_string(p.cls)}};
}

Json cocycle_json(const CocycleValue& v) {
  return Json{{"value", v.value}, {"tail_bound", v.tail_bound}, {"depth_used", v.depth_used}};
}

Json word_header(const OrbitBase& b) {
  return Json{{"map", io::map_json(b.map)}, {"sigma", b.sigma}, {"tail_rule", "nearest"}};
}

Json membership_json(const Membership& m) {
  return Json{{"member", m.member}, {"reason", to_string(m.reason)}, {"index", m.index}};
}

// ---------------------------------------------------------------------------
// Subcommands

Output cmd_fixed_points(const Context& cx) {
  const auto f = cx.map();
  const int period = cx.bounded(cx.o().period, 1, 1, kMaxPeriod, "--period");
  const auto pts = periodic_points(f, period);
  Output out;
  out.report["map"] = io::map_json(f);
  out.report["period"] = period;
  if (period == 1) {
    const auto c = count_fixed_points(f);
    out.report["count"] = Json{{"finite", c.finite}, {"at_infinity", c.at_infinity}};
  }
  Json a = Json::array();
  io::CsvTable t({"re", "im", "period", "mult_re", "mult_im", "mult_abs", "class"});
  std::vector<Complex> locs;
  for (const auto& p : pts) {
    a.push_back(point_json(p));
    t.row().add(p.location.real()).add(p.location.imag()).add(p.period).add(p.multiplier.real())
        .add(p.multiplier.imag()).add(std::abs(p.multiplier)).add(to_string(p.cls));
    locs.push_back(p.location);
  }
  out.report["points"] = a;
  out.files["fixed_points.csv"] = t.str();
  if (cx.o().svg) out.files["points.svg"] = svg::julia_scatter(locs, Complex{}, 0.0, "Periodic points");
  return out;
}

Output cmd_classify(const Context& cx) {
  if (!cx.given("--multiplier")) config_error("--multiplier is required");
  const Complex m = parse_complex(cx.o().multiplier, "--multiplier");
  const auto c = classify(m);
  Output out;
  out.report["multiplier"] = io::complex_json(m);
  out.report["modulus"] = std::abs(m);
  out.report["class"] = to_string(c);
  io::CsvTable t({"multiplier_re", "multiplier_im", "class"});
  t.row().add(m.real()).add(m.imag()).add(to_string(c));
  out.files["classify.csv"] = t.str();
  return out;
}

Output cmd_linearize(const Context& cx) {
  const auto f = cx.map();
  const auto a = cx.base_point(f);
  const auto lin = Linearizer::build(f, a);
  io::CsvTable t({"z_re", "z_im", "phi_re", "phi_im", "residual"});
  double worst = 0.0;
  std::vector<Complex> chart;
  for (int r = 1; r <= 8; ++r)
    for (int k = 0; k < 32; ++k) {
      const Complex z = a.location + std::polar(lin.radius() * 0.95 * r / 8, 2 * kPi * k / 32);
      const Complex phi = lin(z);
      const double res = std::abs(lin(f.eval(z).z) - lin.multiplier() * phi);
      worst = std::max(worst, res);
      chart.push_back(phi);
      t.row().add(z.real()).add(z.imag()).add(phi.real()).add(phi.imag()).add(res);
    }
  Output out;
  out.report["base_point"] = point_json(a);
  out.report["radius"] = lin.radius();
  out.report["contraction"] = lin.contraction();
  out.report["convergence_depth"] = lin.convergence_depth();
  out.report["functional_equation_residual"] = worst;
  out.files["linearizer.csv"] = t.str();
  if (cx.o().svg) out.files["linearizer.svg"] = svg::julia_scatter(chart, Complex{}, 0.0, "Linearizer image of polar grid");
  return out;
}

Output cmd_collinearity(const Context& cx) {
  const auto f = cx.map();
  const auto a = cx.base_point(f);
  const int depth = cx.bounded(cx.o().depth, 8, 1, kMaxTreeDepth, "--depth");
  const auto lin = Linearizer::build(f, a);
  const auto rep = collinearity_in_linearizer(lin, depth);
  Output out;
  out.report["base_point"] = point_json(a);
  out.report["depth"] = depth;
  out.report["verdict"] = to_string(rep.verdict);
  out.report["deviation"] = rep.deviation;
  out.report["spread"] = rep.spread;
  out.report["direction"] = rep.direction;
  out.report["points_used"] = rep.points_used;
  out.report["tree_size"] = rep.tree_size;
  io::CsvTable t({"offset_re", "offset_im", "phi_re", "phi_im"});
  std::vector<Complex> chart;
  for (const auto& v : preimage_tree_offsets(lin.centered(), depth)) {
    if (std::abs(v) >= lin.radius()) continue;
    const Complex phi = lin.eval_offset(v);
    chart.push_back(phi);
    t.row().add(v.real()).add(v.imag()).add(phi.real()).add(phi.imag());
  }
  out.files["collinearity.csv"] = t.str();
  if (cx.o().svg) out.files["collinearity.svg"] = svg::julia_scatter(chart, Complex{}, 0.0, "Preimage tree in the linearizer");
  return out;
}

Output cmd_julia(const Context& cx) {
  const auto f = cx.map();
  const int n = cx.bounded(cx.o().count, 10000, 1, kMaxJuliaPoints, "--count");
  const int depth = cx.bounded(cx.o().depth, 40, 21, kMaxJuliaDepth, "--depth");
  const auto a = cx.base_point(f);
  const Complex start = cx.quadratic() ? quadratic::julia_start(cx.epsilon()) : a.location;
  const auto js = inverse_iteration_sample(f, start, n, depth, cx.seed());
  Output out;
  out.report["map"] = io::map_json(f);
  out.report["method"] = to_string(js.method);
  out.report["points"] = static_cast<int>(js.points.size());
  out.report["depth"] = js.depth;
  out.report["burn_in"] = js.burn_in;
  out.report["seed"] = cx.seed();
  out.report["resampled_paths"] = js.resampled_paths;
  out.report["start"] = io::complex_json(start);
  double radius = 0.0;
  if (cx.quadratic()) {
    const Complex eps = cx.epsilon();
    radius = std::abs(a.location);
    if (eps.imag() == 0.0 && !quadratic::degenerate_parameter(eps)) {
      const auto c = quadratic::disk_containment_check(eps.real(), js.points, 1e-6);
      out.report["containment"] = Json{{"violations", c.violations},
                                       {"near_boundary", c.near_boundary},
                                       {"near_violations", c.near_violations},
                                       {"max_near_distance", c.max_near_distance},
                                       {"extreme_modulus", c.extreme_modulus}};
      out.failed = c.violations || c.near_violations;
    }
  }
  io::CsvTable t({"re", "im", "method"});
  for (const auto& z : js.points) t.row().add(z.real()).add(z.imag()).add(to_string(js.method));
  out.files["julia.csv"] = t.str();
  if (cx.o().svg) out.files["julia-scatter.svg"] = svg::julia_scatter(js.points, Complex{}, radius, "Julia sample");
  return out;
}

Output cmd_cocycle(const Context& cx) {
  const auto base = cx.base();
  const auto y = cx.word(base, "--word", cx.o().word);
  const auto m = is_in_Pi_a(y, std::max(1, y.length()));
  if (!m.member && m.reason != MembershipReason::FixedOrbit)
    throw Error(ErrorCode::Domain, std::string("word is not in Pi_a: ") + to_string(m.reason), m.index);
  Output out;
  CocycleValue v;
  if (cx.given("--word2")) {
    const auto x = cx.word(base, "--word2", cx.o().word2);
    v = basic_cocycle(x, y, cx.o().tol);
    out.report["x"] = x.str();
  } else {
    v = cocycle_vs_fixed(y, cx.o().tol);
  }
  out.report["y"] = y.str();
  out.report["word_header"] = word_header(*base);
  out.report["membership"] = membership_json(m);
  out.report["value"] = v.value;
  out.report["tail_bound"] = v.tail_bound;
  out.report["depth_used"] = v.depth_used;
  out.report["tol"] = cx.o().tol;
  out.report["sigma"] = base->sigma;
  out.report["sigma_source"] = base->sigma_source;
  const int depth = std::max(v.depth_used, 1);
  auto o = LazyOrbit::of(y);
  io::CsvTable t({"j", "re", "im", "term"});
  const auto terms = series_terms(y, depth);
  for (int j = 1; j <= depth; ++j) {
    const Complex z = o.point(j);
    t.row().add(j).add(z.real()).add(z.imag()).add(terms[static_cast<std::size_t>(j - 1)]);
  }
  out.files["terms.csv"] = t.str();
  return out;
}

Output cmd_field(const Context& cx) {
  const auto base = cx.base();
  const auto c = cx.word(base, "--word", cx.o().word);
  Output out;
  out.report["word"] = c.str();
  out.report["sigma"] = base->sigma;
  if (cx.given("--point")) {
    const Complex z = parse_complex(cx.o().point, "--point");
    out.report["point"] = io::complex_json(z);
    out.report["field"] = cocycle_json(cocycle_field(c, z, cx.o().tol));
  }
  io::CsvTable t({"re", "im", "value", "tail_bound"});
  for (int r = 0; r <= 8; ++r)
    for (int k = 0; k < (r ? 16 : 1); ++k) {
      const Complex z = base->a() + std::polar(0.9 * base->sigma * r / 8, 2 * kPi * k / 16);
      const auto v = cocycle_field(c, z, cx.o().tol);
      t.row().add(z.real()).add(z.imag()).add(v.value).add(v.tail_bound);
    }
  out.files["field.csv"] = t.str();
  return out;
}

std::vector<OrbitWord> sample_words(const Context& cx, const BasePtr& base, int fallback) {
  const int n = cx.bounded(cx.o().count, fallback, 1, kMaxWords, "--count");
  const int len = cx.bounded(cx.o().max_len, 10, 1, kMaxWordLength, "--max-len");
  if (cx.given("--word")) return {cx.word(base, "--word", cx.o().word)};
  return quadratic::accepted_words(base, suite::derive_seed(cx.seed(), 2), n, len);
}

Output cmd_heights(const Context& cx) {
  const auto base = cx.base();
  const auto words = sample_words(cx, base, 100);
  if (cx.o().m_lo > cx.o().m_hi || cx.o().m_hi - cx.o().m_lo > 10000) config_error("bad shift range");
  if (!(cx.o().hi > cx.o().lo)) config_error("--hi must exceed --lo");
  const auto r = height_set(words, cx.o().m_lo, cx.o().m_hi, cx.o().tol, cx.o().lo, cx.o().hi);
  Output out;
  out.report["words"] = static_cast<int>(words.size());
  out.report["shift_range"] = Json::array({cx.o().m_lo, cx.o().m_hi});
  out.report["window"] = Json::array({r.lo, r.hi});
  out.report["count"] = r.count;
  out.report["max_gap"] = r.max_gap;
  out.report["gap_at"] = r.gap_at;
  out.report["log_multiplier"] = base->log_multiplier();
  io::CsvTable t({"v", "bound"});
  std::vector<double> vals;
  Json values = Json::array();
  for (const auto& e : r.values) {
    t.row().add(e.v).add(e.bound);
    vals.push_back(e.v);
    values.push_back(Json{{"v", e.v}, {"bound", e.bound}});
  }
  out.report["values"] = values;
  out.files["heights.csv"] = t.str();
  if (cx.o().svg) out.files["gap-histogram.svg"] = svg::gap_histogram(vals, r.lo, r.hi, 100, "Height set");
  return out;
}

Output cmd_semigroup(const Context& cx) {
  const auto base = cx.base();
  const auto y = cx.word(base, "--word", cx.o().word);
  const auto c = cx.word(base, "--word2", cx.o().word2);
  std::vector<int> dflt;
  for (int j = 10; j <= 50; ++j) dflt.push_back(j);
  const auto rows = semigroup_convergence(y, c, cx.junctions(dflt), cx.o().tol);
  Output out;
  out.report["y"] = y.str();
  out.report["c"] = c.str();
  Json a = Json::array();
  io::CsvTable t({"junction", "defect", "tail_bound"});
  std::vector<double> xs, ys;
  bool mono = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    a.push_back(Json{{"junction", rows[i].junction}, {"defect", rows[i].defect}, {"tail_bound", rows[i].tail_bound}});
    t.row().add(rows[i].junction).add(rows[i].defect).add(rows[i].tail_bound);
    xs.push_back(rows[i].junction);
    ys.push_back(rows[i].defect);
    if (i && !(rows[i].defect < rows[i - 1].defect)) mono = false;
  }
  out.report["rows"] = a;
  out.report["monotone"] = mono;
  if (rows.size() >= 2) out.report["fitted_rate"] = fitted_decay_rate(rows);
  out.report["inverse_multiplier_modulus"] = 1.0 / std::abs(base->fixed.multiplier);
  out.files["defects.csv"] = t.str();
  if (cx.o().svg) out.files["defect-decay.svg"] = svg::defect_decay(xs, ys, "Semigroup defect");
  return out;
}

Json sd_json(const quadratic::SigmaDelta& sd) {
  return Json{{"epsilon", io::complex_json(sd.epsilon)},
              {"a", io::complex_json(sd.a)},
              {"sigma", sd.sigma},
              {"delta", sd.delta},
              {"margin_cover", sd.margin_cover},
              {"margin_disjoint", sd.margin_disjoint},
              {"boundary_samples", sd.boundary_samples},
              {"delta_points", sd.delta_points},
              {"delta_witness", io::complex_json(sd.delta_witness)}};
}

Output cmd_sigma_delta(const Context& cx) {
  const int n = cx.bounded(cx.o().count, 10000, 100, kMaxJuliaPoints, "--count");
  const auto sd = cx.sigma_delta(n);
  Output out;
  out.report["sigma_delta"] = sd_json(sd);
  out.report["julia_points"] = n;
  io::CsvTable t({"epsilon_re", "epsilon_im", "a_re", "a_im", "sigma", "delta", "margin_cover", "margin_disjoint"});
  t.row().add(sd.epsilon.real()).add(sd.epsilon.imag()).add(sd.a.real()).add(sd.a.imag()).add(sd.sigma).add(sd.delta)
      .add(sd.margin_cover).add(sd.margin_disjoint);
  out.files["sigma_delta.csv"] = t.str();
  return out;
}

Output cmd_excursions(const Context& cx) {
  const auto sd = cx.sigma_delta(10000);
  const auto base = quadratic::make_base(cx.epsilon(), sd);
  const auto words = sample_words(cx, base, 50);
  Output out;
  out.report["sigma"] = sd.sigma;
  Json a = Json::array();
  io::CsvTable t({"word", "leaving", "returning", "s", "d", "interleaved", "ok"});
  for (const auto& w : words) {
    const auto st = quadratic::excursion_stats(quadratic::normalize(w));
    a.push_back(Json{{"word", w.str()}, {"leaving", st.leaving}, {"returning", st.returning}, {"s", st.s},
                     {"d", st.d}, {"ok", st.ok()}});
    t.row().add(w.str()).add(io::Json(st.leaving).dump()).add(io::Json(st.returning).dump()).add(st.s).add(st.d)
        .add(st.interleaved ? "true" : "false").add(st.ok() ? "true" : "false");
    if (!st.ok()) out.failed = true;
  }
  out.report["words"] = a;
  out.files["excursions.csv"] = t.str();
  return out;
}

Output cmd_excursion_bound(const Context& cx) {
  const auto sd = cx.sigma_delta(10000);
  const auto base = quadratic::make_base(cx.epsilon(), sd);
  const auto words = sample_words(cx, base, 200);
  Output out;
  out.report["sigma_delta"] = sd_json(sd);
  int bad = 0;
  double min_margin = std::numeric_limits<double>::infinity();
  io::CsvTable t({"word", "beta", "tail_bound", "d", "margin", "holds"});
  for (const auto& w : words) {
    const auto lb = quadratic::cocycle_lower_bound_check(w, sd, cx.o().tol);
    if (!lb.holds) ++bad;
    min_margin = std::min(min_margin, lb.margin);
    t.row().add(w.str()).add(lb.beta).add(lb.tail_bound).add(lb.d).add(lb.margin).add(lb.holds ? "true" : "false");
  }
  out.report["words"] = static_cast<int>(words.size());
  out.report["violations"] = bad;
  out.report["min_margin"] = min_margin;
  out.failed = bad > 0;
  out.files["bound.csv"] = t.str();
  return out;
}

Output cmd_b_epsilon(const Context& cx) {
  const auto sd = cx.sigma_delta(10000);
  const auto base = quadratic::make_base(cx.epsilon(), sd);
  const auto words = sample_words(cx, base, 200);
  if (cx.o().l_max < 1 || cx.o().l_max > 3) config_error("--l-max must be 1, 2 or 3");
  const auto B = quadratic::build_B_epsilon(words, cx.o().l_max, cx.o().tol);
  Output out;
  out.report["delta"] = sd.delta;
  out.report["l_max"] = cx.o().l_max;
  out.report["count"] = B.report.count;
  out.report["sign"] = B.sign;
  out.report["sign_ok"] = B.sign_ok;
  out.report["min_abs"] = B.min_abs;
  out.report["min_abs_exceeds_delta"] = B.min_abs > sd.delta;
  out.report["window"] = Json::array({B.report.lo, B.report.hi});
  out.report["max_gap"] = B.report.max_gap;
  out.report["gap_at"] = B.report.gap_at;
  io::CsvTable t({"v", "bound"});
  std::vector<double> vals;
  for (const auto& e : B.report.values) {
    t.row().add(e.v).add(e.bound);
    vals.push_back(e.v);
  }
  out.files["b_epsilon.csv"] = t.str();
  if (cx.o().svg) out.files["gap-histogram.svg"] = svg::gap_histogram(vals, B.report.lo, B.report.hi, 100, "B_epsilon");
  return out;
}

Output cmd_limit_decomp(const Context& cx) {
  const auto base = cx.base();
  const auto y = cx.word(base, "--word", cx.o().word);
  const auto c = cx.given("--word2") ? cx.word(base, "--word2", cx.o().word2) : fixed_word(base);
  const auto r = quadratic::limit_decomposition_check(y, c, cx.junctions({10, 20, 30, 40, 50}), cx.o().tol);
  Output out;
  out.report["y"] = y.str();
  out.report["c"] = c.str();
  out.report["components"] = r.l;
  out.report["component_sum"] = r.component_sum;
  out.report["defect_decreasing"] = r.defect_decreasing;
  out.report["nu2_decreasing"] = r.nu2_decreasing;
  out.report["window_decreasing"] = r.window_decreasing;
  out.report["sum_matches"] = r.sum_matches;
  out.report["ok"] = r.ok();
  out.failed = !r.ok();
  io::CsvTable t({"junction", "beta", "defect", "nu2_distance", "window_error"});
  for (std::size_t i = 0; i < r.junctions.size(); ++i) {
    t.row().add(r.junctions[i]).add(r.betas[i]).add(r.defects[i]);
    t.add(i < r.nu2_distance.size() ? r.nu2_distance[i] : 0.0).add(i < r.window_error.size() ? r.window_error[i] : 0.0);
  }
  out.files["limit_decomposition.csv"] = t.str();
  return out;
}

Json criterion_json(const suite::CriterionReport& r) {
  return Json{{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"summary", r.summary}, {"data", r.data}};
}

Output cmd_suite(const Context& cx) {
  const std::uint64_t seed = cx.seed();
  std::string which = cx.o().suite;
  if (which.empty()) which = cx.quadratic() ? "parameter" : "acceptance";
  Output out;
  if (which == "parameter") {
    auto art = suite::parameter_battery(cx.epsilon(), seed);
    out.report = art.report;
    out.report.erase("schema");
    out.report.erase("command");
    out.failed = !art.report["pass"].get<bool>();
    for (auto& [k, v] : art.files)
      if (cx.o().svg || k.size() < 4 || k.substr(k.size() - 4) != ".svg") out.files[k] = v;
    return out;
  }
  int only = 0;
  if (which != "acceptance") {
    try {
      only = std::stoi(which);
    } catch (...) {
      config_error("--suite must be acceptance, parameter or a criterion id");
    }
    if (only < 1 || only > 13) config_error("criterion id must lie in [1, 13]");
  }
  Json items = Json::array();
  io::CsvTable t({"id", "name", "pass", "summary"});
  bool all = true;
  auto add = [&](const suite::CriterionReport& r) {
    items.push_back(criterion_json(r));
    t.row().add(r.id).add(r.name).add(r.pass ? "PASS" : "FAIL").add(r.summary);
    all = all && r.pass;
    // Timings go to stderr only; the report stays reproducible.
    std::fprintf(stderr, "%s %2d %-32s %.2fs\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds);
  };
  for (const auto& c : suite::acceptance_registry())
    if (!only || only == c.id) add(suite::run_criterion(c, seed));
  if (!only || only == 13) {
    suite::CriterionReport r{13, "determinism", false, "", Json::object(), 0.0, 0.0};
    const auto a = suite::fingerprint(suite::parameter_battery(-1.0, seed));
    const auto b = suite::fingerprint(suite::parameter_battery(-1.0, seed));
    r.pass = a == b;
    r.summary = r.pass ? "in-process rerun of the eps=-1 battery is byte-identical" : "rerun differs";
    r.data = Json{{"bytes", a.size()}};
    add(r);
  }
  out.report["seed"] = seed;
  out.report["pass"] = all;
  out.report["criteria"] = items;
  out.files["criteria.csv"] = t.str();
  if (cx.o().svg)
    for (auto& [k, v] : suite::acceptance_charts(seed)) out.files[k] = std::move(v);
  out.failed = !all;
  return out;
}

// ---------------------------------------------------------------------------

/// Flat `key = value` config merged under explicit flags.
std::vector<std::string> merge_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (path.empty()) return args;
  std::ifstream in(path);
  if (!in) config_error("cannot read config file " + path);
  std::set<std::string> explicit_keys;
  for (const auto& a : args)
    if (a.rfind("--", 0) == 0) explicit_keys.insert(a.substr(2, a.find('=') == std::string::npos ? std::string::npos : a.find('=') - 2));
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) config_error(path + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    std::replace(key.begin(), key.end(), '_', '-');
    if (key.empty()) config_error(path + ":" + std::to_string(lineno) + ": empty key");
    if (explicit_keys.count(key)) continue;
    if (key == "svg") {
      if (value == "true" || value == "1") args.push_back("--svg");
      continue;
    }
    args.push_back("--" + key + "=" + value);
  }
  return args;
}

void emit_error(const std::string& code, const std::string& message, int index = -1) {
  Json e{{"code", code}, {"message", message}};
  if (index >= 0) e["index"] = index;
  std::cout << io::dump(Json{{"schema", 1}, {"error", e}});
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    args = merge_config(args);
  } catch (const Error& e) {
    emit_error(to_string(e.code()), e.what());
    return 2;
  }

  Opts o;
  CLI::App app{"Numerical lab for horosphere dynamics of rational maps and the quadratic family z^2 + eps.", "horolab"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  struct Sub {
    const char* name;
    const char* help;
    Output (*run)(const Context&);
  };
  const std::vector<Sub> subs{
      {"fixed-points", "Periodic points of a given period with multipliers and classes", cmd_fixed_points},
      {"classify", "Classify a multiplier", cmd_classify},
      {"linearize", "Build the linearizer at the base repelling fixed point", cmd_linearize},
      {"collinearity", "Collinearity of the preimage tree in the linearizer", cmd_collinearity},
      {"julia", "Seeded inverse-iteration sample of the Julia set", cmd_julia},
      {"cocycle", "Basic cocycle of one word against the fixed orbit, or of two words", cmd_cocycle},
      {"field", "Cocycle field of a word on the disk around the base point", cmd_field},
      {"heights", "Height set of sampled words shifted by multiples of ln|lambda|", cmd_heights},
      {"semigroup", "Semigroup defect of concatenations against junction depth", cmd_semigroup},
      {"b-epsilon", "Sums of sampled cocycle values (quadratic family)", cmd_b_epsilon},
      {"sigma-delta", "Certified disk radius sigma and sampled delta (quadratic family)", cmd_sigma_delta},
      {"excursions", "Excursion statistics of words (quadratic family)", cmd_excursions},
      {"bound-528", "Lower bound |beta| > delta d for sampled words (quadratic family)", cmd_excursion_bound},
      {"limit-decomp", "Limit decomposition of concatenation sequences", cmd_limit_decomp},
      {"suite", "Acceptance battery, or the per-parameter battery with --epsilon", cmd_suite},
  };
  std::map<CLI::App*, const Sub*> by_app;
  for (const auto& s : subs) {
    auto* sc = app.add_subcommand(s.name, s.help);
    by_app[sc] = &s;
    if (std::string(s.name) == "bound-528") sc->alias("excursion-bound");
    sc->add_option("--epsilon", o.epsilon, "Quadratic parameter RE[,IM]");
    sc->add_option("--map", o.map, "Rational map JSON file {num, den} or {epsilon}");
    sc->add_option("--word", o.word, "Orbit word, e.g. -+- (use --word=... when it starts with --)");
    sc->add_option("--word2", o.word2, "Second orbit word");
    sc->add_option("--depth", o.depth, "Depth");
    sc->add_option("--tol", o.tol, "Absolute tolerance");
    sc->add_option("--seed", o.seed, "Seed (mandatory for randomized operations)");
    sc->add_option("--out", o.out, "Output directory");
    sc->add_option("--suite", o.suite, "acceptance, parameter, or a criterion id");
    sc->add_option("--count", o.count, "Number of points or words");
    sc->add_option("--period", o.period, "Period");
    sc->add_option("--multiplier", o.multiplier, "Multiplier RE[,IM]");
    sc->add_option("--point", o.point, "Point RE[,IM]");
    sc->add_option("--junctions", o.junctions, "Comma-separated junction depths");
    sc->add_option("--max-len", o.max_len, "Maximum length of sampled words");
    sc->add_option("--m-lo", o.m_lo, "Lowest height shift");
    sc->add_option("--m-hi", o.m_hi, "Highest height shift");
    sc->add_option("--lo", o.lo, "Window start");
    sc->add_option("--hi", o.hi, "Window end");
    sc->add_option("--l-max", o.l_max, "Maximum number of summands");
    sc->add_flag("--svg", o.svg, "Also write SVG charts");
    sc->add_option("--config", "Flat key = value file; explicit flags win");
  }

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    emit_error("config", e.what());
    return 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  const Sub& s = *by_app.at(sub);
  Output out;
  try {
    Context cx(o, sub);
    out = s.run(cx);
  } catch (const Error& e) {
    emit_error(to_string(e.code()), e.what(), e.index());
    return e.code() == ErrorCode::Config ? 2 : 1;
  } catch (const std::exception& e) {
    emit_error("internal", e.what());
    return 1;
  }

  Json report{{"schema", 1}, {"command", s.name}};
  for (auto it = out.report.begin(); it != out.report.end(); ++it) report[it.key()] = it.value();
  const std::string text = io::dump(report);
  try {
    namespace fs = std::filesystem;
    const fs::path dir(o.out);
    for (const auto& [name, body] : out.files) io::write_file_atomic(dir / name, body);
    io::write_file_atomic(dir / "report.json", text);
  } catch (const std::exception& e) {
    emit_error("config", e.what());
    return 2;
  }
  std::cout << text;
  return out.failed ? 1 : 0;
}
