#pragma once

#include <string>
#include <string_view>

#include "fuzzyflow/truth.hpp"

namespace fuzzyflow {

/// A De Morgan system (T-norm, S-norm, C-norm) over [0,1].
///
/// The C-norm is always the standard complement 1 - x. The S-norm of every
/// family is derived from its T-norm through the complement, so
/// snorm(x, y) == cnorm(tnorm(cnorm(x), cnorm(y))) holds exactly.
///
/// MinMax, Product, Lukasiewicz and Frank(s) form the Frank family and are
/// 1-Lipschitz under the l1 metric. Nilpotent is a valid norm triple but is
/// discontinuous on x + y = 1 and carries no convergence guarantee.
class LogicFamily {
 public:
  enum class Kind { min_max, product, lukasiewicz, nilpotent, frank };

  /// Below this distance from 1 the Frank formula is numerically unstable and
  /// Frank(s) is evaluated as the product T-norm.
  static constexpr double kFrankProductBand = 1e-6;

  /// Defaults to MinMax.
  LogicFamily() noexcept = default;

  static LogicFamily min_max() noexcept { return LogicFamily(Kind::min_max, 0.0); }
  static LogicFamily product() noexcept { return LogicFamily(Kind::product, 0.0); }
  static LogicFamily lukasiewicz() noexcept { return LogicFamily(Kind::lukasiewicz, 0.0); }
  static LogicFamily nilpotent() noexcept { return LogicFamily(Kind::nilpotent, 0.0); }
  /// Throws ValueError unless s is finite, s > 0 and s != 1.
  static LogicFamily frank(double s);

  /// Parses "minmax" | "product" | "lukasiewicz" | "nilpotent" | "frank:<s>".
  static LogicFamily parse(std::string_view text);

  Kind kind() const noexcept { return kind_; }
  /// The Frank parameter s; only meaningful for Kind::frank.
  double parameter() const noexcept { return s_; }
  bool in_frank_family() const noexcept { return kind_ != Kind::nilpotent; }

  /// Inverse of parse().
  std::string name() const;

  TruthValue tnorm(TruthValue x, TruthValue y) const noexcept;
  TruthValue snorm(TruthValue x, TruthValue y) const noexcept;
  static TruthValue cnorm(TruthValue x) noexcept;

  TruthInterval tnorm(const TruthInterval& x, const TruthInterval& y) const noexcept;
  TruthInterval snorm(const TruthInterval& x, const TruthInterval& y) const noexcept;
  static TruthInterval cnorm(const TruthInterval& x) noexcept;

  friend bool operator==(const LogicFamily&, const LogicFamily&) noexcept = default;

 private:
  LogicFamily(Kind kind, double s) noexcept : kind_(kind), s_(s) {}

  Kind kind_ = Kind::min_max;
  double s_ = 0.0;
};

inline TruthValue tnorm(const LogicFamily& f, TruthValue x, TruthValue y) noexcept {
  return f.tnorm(x, y);
}
inline TruthValue snorm(const LogicFamily& f, TruthValue x, TruthValue y) noexcept {
  return f.snorm(x, y);
}
inline TruthValue cnorm(TruthValue x) noexcept { return LogicFamily::cnorm(x); }

// Point-wise lifting to intervals: [lx op ly, ux op uy], and negation swaps
// and complements the endpoints.
inline TruthInterval interval_tnorm(const LogicFamily& f, const TruthInterval& x,
                                    const TruthInterval& y) noexcept {
  return f.tnorm(x, y);
}
inline TruthInterval interval_snorm(const LogicFamily& f, const TruthInterval& x,
                                    const TruthInterval& y) noexcept {
  return f.snorm(x, y);
}
inline TruthInterval interval_cnorm(const TruthInterval& x) noexcept {
  return LogicFamily::cnorm(x);
}

}  // namespace fuzzyflow
