#pragma once

// Minimal self-contained SVG charts. Coordinates are printed with fixed
// precision so identical input gives identical bytes.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "horo/types.hpp"

namespace horo::svg {

namespace detail {

constexpr double W = 640, H = 420, ML = 88, MR = 20, MT = 40, MB = 55;

inline std::string num(double x) {
  char b[32];
  std::snprintf(b, sizeof b, "%.3f", x);
  return b;
}

inline std::string label(double x) {
  char b[32];
  std::snprintf(b, sizeof b, "%.4g", x);
  return b;
}

inline std::string escape(const std::string& s) {
  std::string o;
  for (char c : s) {
    if (c == '<') o += "&lt;";
    else if (c == '>') o += "&gt;";
    else if (c == '&') o += "&amp;";
    else o += c;
  }
  return o;
}

struct Frame {
  double x0, x1, y0, y1;
  double px(double x) const { return ML + (x - x0) / (x1 - x0) * (W - ML - MR); }
  double py(double y) const { return H - MB - (y - y0) / (y1 - y0) * (H - MT - MB); }
};

inline std::string open(const std::string& title) {
  std::string s = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(W) + "\" height=\"" + num(H) +
       "\" viewBox=\"0 0 " + num(W) + " " + num(H) + "\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + num(W / 2) + "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">" +
       escape(title) + "</text>\n";
  return s;
}

inline std::string axes(const Frame& f, const std::string& xl, const std::string& yl, bool log_y = false) {
  std::string s;
  s += "<g stroke=\"black\" stroke-width=\"1\">\n";
  s += "<line x1=\"" + num(ML) + "\" y1=\"" + num(H - MB) + "\" x2=\"" + num(W - MR) + "\" y2=\"" + num(H - MB) + "\"/>\n";
  s += "<line x1=\"" + num(ML) + "\" y1=\"" + num(MT) + "\" x2=\"" + num(ML) + "\" y2=\"" + num(H - MB) + "\"/>\n";
  s += "</g>\n<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int i = 0; i <= 4; ++i) {
    const double x = f.x0 + (f.x1 - f.x0) * i / 4.0;
    const double y = f.y0 + (f.y1 - f.y0) * i / 4.0;
    s += "<text x=\"" + num(f.px(x)) + "\" y=\"" + num(H - MB + 16) + "\" text-anchor=\"middle\">" + label(x) + "</text>\n";
    s += "<text x=\"" + num(ML - 6) + "\" y=\"" + num(f.py(y) + 4) + "\" text-anchor=\"end\">" +
         label(log_y ? std::pow(10.0, y) : y) + "</text>\n";
  }
  s += "<text x=\"" + num((ML + W - MR) / 2) + "\" y=\"" + num(H - 12) + "\" text-anchor=\"middle\">" + escape(xl) +
       "</text>\n";
  s += "<text x=\"16\" y=\"" + num((MT + H - MB) / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
       num((MT + H - MB) / 2) + ")\">" + escape(yl) + "</text>\n</g>\n";
  return s;
}

inline std::string placeholder(const std::string& title, const std::string& warning) {
  return open(title) + "<text x=\"" + num(W / 2) + "\" y=\"" + num(H / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" fill=\"#a00\">" + escape(warning) +
         "</text>\n</svg>\n";
}

}  // namespace detail

/// Counts of values per bin across [lo, hi].
inline std::string gap_histogram(const std::vector<double>& values, double lo, double hi, int bins,
                                 const std::string& title) {
  using namespace detail;
  if (values.empty() || !(hi > lo) || bins < 1) return placeholder(title, "empty report: no values in window");
  std::vector<int> count(static_cast<std::size_t>(bins), 0);
  for (double v : values) {
    if (v < lo || v > hi) continue;
    int b = static_cast<int>((v - lo) / (hi - lo) * bins);
    count[static_cast<std::size_t>(std::clamp(b, 0, bins - 1))]++;
  }
  const int top = std::max(1, *std::max_element(count.begin(), count.end()));
  Frame f{lo, hi, 0.0, static_cast<double>(top)};
  std::string s = open(title) + axes(f, "value", "count");
  s += "<g fill=\"#3465a4\">\n";
  for (int b = 0; b < bins; ++b) {
    if (!count[b]) continue;
    const double xa = lo + (hi - lo) * b / bins, xb = lo + (hi - lo) * (b + 1) / bins;
    s += "<rect x=\"" + num(f.px(xa)) + "\" y=\"" + num(f.py(count[b])) + "\" width=\"" +
         num(std::max(0.5, f.px(xb) - f.px(xa))) + "\" height=\"" + num(f.py(0) - f.py(count[b])) + "\"/>\n";
  }
  return s + "</g>\n</svg>\n";
}

/// Point cloud with an optional circle |z - center| = radius.
inline std::string julia_scatter(const std::vector<Complex>& pts, Complex center, double radius,
                                 const std::string& title) {
  using namespace detail;
  if (pts.empty()) return placeholder(title, "empty report: no points");
  double r = radius > 0 ? radius * 1.15 : 0.0;
  for (const auto& z : pts) r = std::max({r, std::abs(z.real() - center.real()), std::abs(z.imag() - center.imag())});
  r *= 1.05;
  // Square data window inside the plot area.
  Frame f{center.real() - r, center.real() + r, center.imag() - r, center.imag() + r};
  const double side = std::min(W - ML - MR, H - MT - MB);
  auto px = [&](double x) { return ML + (x - f.x0) / (f.x1 - f.x0) * side; };
  auto py = [&](double y) { return H - MB - (y - f.y0) / (f.y1 - f.y0) * side; };
  std::string s = open(title) + axes(Frame{f.x0, f.x0 + (f.x1 - f.x0) * (W - ML - MR) / side,
                                           f.y0, f.y0 + (f.y1 - f.y0) * (H - MT - MB) / side},
                                     "Re z", "Im z");
  s += "<g fill=\"#204a87\">\n";
  for (const auto& z : pts)
    s += "<circle cx=\"" + num(px(z.real())) + "\" cy=\"" + num(py(z.imag())) + "\" r=\"0.8\"/>\n";
  s += "</g>\n";
  if (radius > 0)
    s += "<circle cx=\"" + num(px(center.real())) + "\" cy=\"" + num(py(center.imag())) + "\" r=\"" +
         num(radius / (f.x1 - f.x0) * side) + "\" fill=\"none\" stroke=\"#cc0000\" stroke-width=\"1.2\"/>\n";
  return s + "</svg>\n";
}

/// Log-scale polyline of (x, y > 0) pairs.
inline std::string defect_decay(const std::vector<double>& x, const std::vector<double>& y,
                                const std::string& title) {
  using namespace detail;
  std::vector<std::pair<double, double>> p;
  for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i)
    if (y[i] > 0 && std::isfinite(y[i])) p.push_back({x[i], std::log10(y[i])});
  if (p.empty()) return placeholder(title, "empty report: no positive defects");
  double x0 = p.front().first, x1 = x0, y0 = p.front().second, y1 = y0;
  for (const auto& [a, b] : p) x0 = std::min(x0, a), x1 = std::max(x1, a), y0 = std::min(y0, b), y1 = std::max(y1, b);
  if (x1 == x0) x1 = x0 + 1;
  y0 = std::floor(y0);
  y1 = std::ceil(y1);
  if (y1 == y0) y1 = y0 + 1;
  Frame f{x0, x1, y0, y1};
  std::string s = open(title) + axes(f, "junction depth", "defect", true);
  s += "<polyline fill=\"none\" stroke=\"#cc0000\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? " " : "") + num(f.px(p[i].first)) + "," + num(f.py(p[i].second));
  s += "\"/>\n<g fill=\"#cc0000\">\n";
  for (const auto& [a, b] : p) s += "<circle cx=\"" + num(f.px(a)) + "\" cy=\"" + num(f.py(b)) + "\" r=\"2.5\"/>\n";
  return s + "</g>\n</svg>\n";
}

}  // namespace horo::svg
