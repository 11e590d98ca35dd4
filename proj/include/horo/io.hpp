#pragma once

// JSON and CSV plumbing. Every double is written with 17 significant digits
// so that values round-trip exactly.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "horo/rational_map.hpp"

namespace horo::io {

using Json = nlohmann::ordered_json;

inline std::string fmt17(double x) {
  if (std::isnan(x)) return "NaN";
  if (std::isinf(x)) return x > 0 ? "Infinity" : "-Infinity";
  if (x == 0.0) x = 0.0;  // no negative zero in output
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw Error(ErrorCode::Config, "complex number must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline Json poly_json(const poly::Poly& p) {
  Json a = Json::array();
  for (const auto& c : p) a.push_back(complex_json(c));
  return a;
}

inline Json map_json(const RationalMap& f) {
  return Json{{"num", poly_json(f.numerator())}, {"den", poly_json(f.denominator())}};
}

inline RationalMap map_from_json(const Json& j) {
  if (j.contains("epsilon")) return RationalMap::quadratic(complex_from_json(j.at("epsilon")));
  if (!j.contains("num") || !j.contains("den")) throw Error(ErrorCode::Config, "map JSON needs num and den");
  auto read = [](const Json& a) {
    if (!a.is_array()) throw Error(ErrorCode::Config, "coefficients must be an array");
    poly::Poly p;
    for (const auto& c : a) p.push_back(complex_from_json(c));
    return p;
  };
  return RationalMap(read(j.at("num")), read(j.at("den")));
}

inline Json param_json(QuadraticParam p) { return Json{{"epsilon", complex_json(p.epsilon)}}; }

namespace detail {

inline void escape_string(std::string& out, const std::string& s) {
  out += '"';
  for (unsigned char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (c < 0x20) {
          char b[8];
          std::snprintf(b, sizeof b, "\\u%04x", c);
          out += b;
        } else {
          out += static_cast<char>(c);
        }
    }
  }
  out += '"';
}

inline void dump(std::string& out, const Json& j, int indent, int level) {
  const std::string pad(static_cast<std::size_t>(indent * (level + 1)), ' ');
  const std::string close(static_cast<std::size_t>(indent * level), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        escape_string(out, it.key());
        out += ": ";
        dump(out, it.value(), indent, level + 1);
      }
      out += "\n" + close + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Short numeric arrays (complex pairs) stay on one line.
      bool flat = j.size() <= 2;
      for (const auto& e : j) flat = flat && e.is_primitive();
      if (flat) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          dump(out, j[i], indent, level + 1);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        dump(out, j[i], indent, level + 1);
      }
      out += "\n" + close + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double x = j.get<double>();
      // JSON has no non-finite numbers; write them as strings.
      if (!std::isfinite(x)) escape_string(out, fmt17(x));
      else out += fmt17(x);
      return;
    }
    case Json::value_t::string: escape_string(out, j.get<std::string>()); return;
    default: out += j.dump(); return;
  }
}

}  // namespace detail

/// Pretty-printed JSON with %.17g doubles.
inline std::string dump(const Json& j, int indent = 2) {
  std::string out;
  detail::dump(out, j, indent, 0);
  out += '\n';
  return out;
}

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  CsvTable& row() {
    rows_.emplace_back();
    return *this;
  }
  CsvTable& add(double x) { return add_raw(fmt17(x)); }
  CsvTable& add(int x) { return add_raw(std::to_string(x)); }
  CsvTable& add(long long x) { return add_raw(std::to_string(x)); }
  CsvTable& add(const std::string& s) { return add_raw(s); }
  CsvTable& add(const char* s) { return add_raw(s); }

  std::string str() const {
    std::string out;
    auto line = [&out](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += cells[i];
      }
      out += '\n';
    };
    line(header_);
    for (const auto& r : rows_) line(r);
    return out;
  }

  std::size_t size() const { return rows_.size(); }

 private:
  CsvTable& add_raw(std::string s) {
    if (s.find_first_of(",\"\n") != std::string::npos) {
      std::string q = "\"";
      for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
      s = q + "\"";
    }
    rows_.back().push_back(std::move(s));
    return *this;
  }

  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Writes through a temporary file and a rename.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Config, "cannot write " + tmp);
    out << content;
    if (!out) throw Error(ErrorCode::Config, "short write to " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Config, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace horo::io
