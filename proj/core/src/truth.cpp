#include "fuzzyflow/truth.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "fuzzyflow/error.hpp"

namespace fuzzyflow {

TruthValue::TruthValue(double value) {
  if (std::isnan(value) || value < -kTolerance || value > 1.0 + kTolerance) {
    throw ValueError("truth value " + std::to_string(value) + " outside [0,1]");
  }
  value_ = value < 0.0 ? 0.0 : (value > 1.0 ? 1.0 : value);
}

TruthValue TruthValue::one() noexcept {
  TruthValue t;
  t.value_ = 1.0;
  return t;
}

TruthInterval::TruthInterval(TruthValue lo, TruthValue hi) : lo_(lo), hi_(hi) {
  if (lo.value() > hi.value()) {
    if (lo.value() - hi.value() > TruthValue::kTolerance) {
      throw ValueError("empty truth interval [" + std::to_string(lo.value()) + ", " +
                       std::to_string(hi.value()) + "]");
    }
    hi_ = lo_;
  }
}

TruthInterval::TruthInterval(double lo, double hi) : TruthInterval(TruthValue(lo), TruthValue(hi)) {}

TruthInterval TruthInterval::top() noexcept { return TruthInterval(TruthValue::one()); }

TruthValue quantize(TruthValue x, int q) {
  if (q < 1 || q > 1023) throw ValueError("quantization exponent must be in [1, 1023]");
  // Scaling by a power of two is exact; nearbyint rounds ties to even under
  // the default floating-point environment.
  const double scaled = std::ldexp(x.value(), q);
  return TruthValue(std::ldexp(std::nearbyint(scaled), -q));
}

TruthInterval quantize(const TruthInterval& x, int q) {
  return TruthInterval(quantize(x.lo(), q), quantize(x.hi(), q));
}

std::ostream& operator<<(std::ostream& os, TruthValue v) { return os << v.value(); }

std::ostream& operator<<(std::ostream& os, const TruthInterval& v) {
  return os << '[' << v.lo().value() << ", " << v.hi().value() << ']';
}

}  // namespace fuzzyflow
