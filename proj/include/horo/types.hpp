#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace horo {

using Complex = std::complex<double>;

/// Failure categories surfaced to callers and, through the CLI, as machine
/// readable diagnostic codes.
enum class ErrorCode {
  InvalidMap,
  Domain,
  Precondition,
  RootNotConverged,
  NonContraction,
  DivergentWord,
  DegenerateBranch,
  SingularTerm,
  DepthBudget,
  NotInPiAfterShift,
  Construction,
  Config,
};

inline const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidMap: return "invalid-map";
    case ErrorCode::Domain: return "domain";
    case ErrorCode::Precondition: return "precondition";
    case ErrorCode::RootNotConverged: return "root-not-converged";
    case ErrorCode::NonContraction: return "non-contraction";
    case ErrorCode::DivergentWord: return "divergent-word";
    case ErrorCode::DegenerateBranch: return "degenerate-branch";
    case ErrorCode::SingularTerm: return "singular-term";
    case ErrorCode::DepthBudget: return "depth-budget";
    case ErrorCode::NotInPiAfterShift: return "not-in-pi-a-after-shift";
    case ErrorCode::Construction: return "construction-failure";
    case ErrorCode::Config: return "config";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  Error(ErrorCode code, const std::string& what, int index)
      : std::runtime_error(what), code_(code), index_(index) {}

  ErrorCode code() const noexcept { return code_; }
  /// Orbit depth (or root index) the failure refers to; -1 when not applicable.
  int index() const noexcept { return index_; }

 private:
  ErrorCode code_;
  int index_ = -1;
};

/// A point of the extended plane. Infinity is a tag, never a huge double.
struct ExtPoint {
  Complex z{};
  bool infinite = false;

  static ExtPoint infinity() { return ExtPoint{Complex{}, true}; }
  static ExtPoint finite(Complex w) { return ExtPoint{w, false}; }

  bool operator==(const ExtPoint& o) const {
    return infinite == o.infinite && (infinite || z == o.z);
  }
};

/// Neumaier compensated summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline constexpr double kPi = 3.14159265358979323846;

/// Deterministic 64-bit mixer used to derive per-path seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace horo
