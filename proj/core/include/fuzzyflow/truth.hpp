#pragma once

#include <compare>
#include <iosfwd>

namespace fuzzyflow {

/// A degree of truth in [0,1].
///
/// Construction tolerates rounding noise of up to 1e-12 outside the unit
/// interval (the value is clamped) and throws ValueError for anything
/// further out or NaN.
class TruthValue {
 public:
  static constexpr double kTolerance = 1e-12;

  constexpr TruthValue() noexcept = default;
  explicit TruthValue(double value);

  static constexpr TruthValue zero() noexcept { return TruthValue{}; }
  static TruthValue one() noexcept;

  constexpr double value() const noexcept { return value_; }

  friend constexpr auto operator<=>(TruthValue, TruthValue) noexcept = default;

 private:
  double value_ = 0.0;
};

/// A sub-interval [lo, hi] of [0,1]; the value domain of interval type-2
/// analyses. Ordered componentwise; bottom is [0,0], top is [1,1].
class TruthInterval {
 public:
  constexpr TruthInterval() noexcept = default;
  /// Degenerate interval [v, v].
  explicit TruthInterval(TruthValue v) noexcept : lo_(v), hi_(v) {}
  TruthInterval(TruthValue lo, TruthValue hi);
  TruthInterval(double lo, double hi);

  static constexpr TruthInterval bottom() noexcept { return TruthInterval{}; }
  static TruthInterval top() noexcept;

  TruthValue lo() const noexcept { return lo_; }
  TruthValue hi() const noexcept { return hi_; }
  double width() const noexcept { return hi_.value() - lo_.value(); }
  bool degenerate() const noexcept { return lo_ == hi_; }
  bool contains(TruthValue v) const noexcept { return lo_ <= v && v <= hi_; }
  bool contains(const TruthInterval& other) const noexcept {
    return lo_ <= other.lo_ && other.hi_ <= hi_;
  }

  /// Componentwise order: [a,b] <= [c,d] iff a <= c and b <= d.
  bool precedes(const TruthInterval& other) const noexcept {
    return lo_ <= other.lo_ && hi_ <= other.hi_;
  }

  friend bool operator==(const TruthInterval&, const TruthInterval&) noexcept = default;

 private:
  TruthValue lo_;
  TruthValue hi_;
};

/// Nearest element of {i / 2^q : 0 <= i <= 2^q}; ties go to even i.
/// Throws ValueError unless 1 <= q <= 1023.
TruthValue quantize(TruthValue x, int q);
TruthInterval quantize(const TruthInterval& x, int q);

std::ostream& operator<<(std::ostream& os, TruthValue v);
std::ostream& operator<<(std::ostream& os, const TruthInterval& v);

}  // namespace fuzzyflow
