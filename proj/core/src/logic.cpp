#include "fuzzyflow/logic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <sstream>

#include "fuzzyflow/error.hpp"

namespace fuzzyflow {
namespace {

// Values produced by the norm formulas are already in [0,1] up to rounding;
// clamp instead of going through the checked constructor.
TruthValue unit(double v) noexcept {
  return TruthValue(std::clamp(v, 0.0, 1.0));
}

double log_or_minus_inf(double v) noexcept {
  return v > 0.0 ? std::log(v) : -std::numeric_limits<double>::infinity();
}

double log_sum_exp(double p, double q) noexcept {
  if (std::isinf(p)) return q;
  if (std::isinf(q)) return p;
  const double hi = std::max(p, q);
  return hi + std::log1p(std::exp(std::min(p, q) - hi));
}

// log_s(1 + (s^x - 1)(s^y - 1) / (s - 1)) for s < 1. With L = ln s, a = xL,
// b = yL the argument is (e^a (1 - e^(L-a)) + e^b (1 - e^a)) / (1 - e^L),
// a sum of nonnegative terms, so nothing cancels even for tiny s.
double frank_below_one(double s, double x, double y) noexcept {
  const double l = std::log(s);
  const double a = x * l;
  const double b = y * l;
  const double t1 = a + log_or_minus_inf(-std::expm1(l - a));
  const double t2 = b + log_or_minus_inf(-std::expm1(a));
  return (log_sum_exp(t1, t2) - std::log(-std::expm1(l))) / l;
}

// Arguments are ordered so the result is exactly symmetric. Above one the
// identity T_s(x, y) = x - T_(1/s)(x, 1 - y) maps back to s < 1.
double frank_tnorm(double s, double x, double y) noexcept {
  if (x > y) std::swap(x, y);
  const double t = s < 1.0 ? frank_below_one(s, x, y) : x - frank_below_one(1.0 / s, x, 1.0 - y);
  return std::clamp(t, 0.0, x);
}

}  // namespace

LogicFamily LogicFamily::frank(double s) {
  if (!std::isfinite(s) || s <= 0.0 || s == 1.0) {
    throw ValueError("Frank parameter must be finite, positive and != 1");
  }
  return LogicFamily(Kind::frank, s);
}

LogicFamily LogicFamily::parse(std::string_view text) {
  if (text == "minmax" || text == "min-max") return min_max();
  if (text == "product") return product();
  if (text == "lukasiewicz") return lukasiewicz();
  if (text == "nilpotent") return nilpotent();
  constexpr std::string_view prefix = "frank:";
  if (text.substr(0, prefix.size()) == prefix) {
    const std::string arg(text.substr(prefix.size()));
    std::size_t used = 0;
    double s = 0.0;
    try {
      s = std::stod(arg, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != arg.size()) {
      throw ValueError("malformed Frank parameter in '" + std::string(text) + "'");
    }
    return frank(s);
  }
  throw ValueError("unknown logic family '" + std::string(text) + "'");
}

std::string LogicFamily::name() const {
  switch (kind_) {
    case Kind::min_max: return "minmax";
    case Kind::product: return "product";
    case Kind::lukasiewicz: return "lukasiewicz";
    case Kind::nilpotent: return "nilpotent";
    case Kind::frank: {
      std::ostringstream os;
      os.precision(17);
      os << "frank:" << s_;
      return os.str();
    }
  }
  return {};
}

TruthValue LogicFamily::tnorm(TruthValue tx, TruthValue ty) const noexcept {
  const double x = tx.value();
  const double y = ty.value();
  switch (kind_) {
    case Kind::min_max: return unit(std::min(x, y));
    case Kind::product: return unit(x * y);
    case Kind::lukasiewicz: return unit(std::max(x + y - 1.0, 0.0));
    case Kind::nilpotent: return unit(x + y > 1.0 ? std::min(x, y) : 0.0);
    case Kind::frank:
      if (std::abs(s_ - 1.0) <= kFrankProductBand) return unit(x * y);
      return unit(frank_tnorm(s_, x, y));
  }
  return TruthValue::zero();
}

TruthValue LogicFamily::snorm(TruthValue x, TruthValue y) const noexcept {
  return cnorm(tnorm(cnorm(x), cnorm(y)));
}

TruthValue LogicFamily::cnorm(TruthValue x) noexcept { return unit(1.0 - x.value()); }

TruthInterval LogicFamily::tnorm(const TruthInterval& x, const TruthInterval& y) const noexcept {
  return TruthInterval(tnorm(x.lo(), y.lo()), tnorm(x.hi(), y.hi()));
}

TruthInterval LogicFamily::snorm(const TruthInterval& x, const TruthInterval& y) const noexcept {
  return TruthInterval(snorm(x.lo(), y.lo()), snorm(x.hi(), y.hi()));
}

TruthInterval LogicFamily::cnorm(const TruthInterval& x) noexcept {
  return TruthInterval(cnorm(x.hi()), cnorm(x.lo()));
}

}  // namespace fuzzyflow
