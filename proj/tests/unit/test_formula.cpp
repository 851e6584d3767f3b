#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>

#include "fuzzyflow/error.hpp"
#include "fuzzyflow/formula.hpp"
#include "support.hpp"

using namespace fuzzyflow;

namespace {

const LogicFamily kMinMax = LogicFamily::min_max();

Valuation<TruthValue> val(std::initializer_list<std::pair<const char*, double>> items) {
  Valuation<TruthValue> v;
  for (const auto& [k, x] : items) v.emplace(k, TruthValue(x));
  return v;
}

std::vector<std::string> vars_of(const Formula& f) {
  const auto s = free_vars(f);
  return {s.begin(), s.end()};
}

}  // namespace

TEST(Formula, FigureOneTransferAtZero) {
  const Formula f = parse_formula("0.8 & (!In | !0.7)");
  EXPECT_DOUBLE_EQ(eval(f, kMinMax, val({{"In", 0.0}})).value(), 0.8);
  EXPECT_NEAR(eval(f, kMinMax, val({{"In", 0.9}})).value(), 0.3, 1e-15);
}

TEST(Formula, Variable) {
  for (const auto& fam : fftest::frank_families()) {
    EXPECT_EQ(eval(Formula::var("x"), fam, val({{"x", 0.37}})).value(), 0.37);
  }
}

TEST(Formula, ExcludedMiddleFails) {
  const Formula x = Formula::var("x");
  EXPECT_DOUBLE_EQ(eval(x | !x, kMinMax, val({{"x", 0.4}})).value(), 0.6);
}

TEST(Formula, UnboundVariable) {
  const Formula f = Formula::var("a") & Formula::var("b");
  try {
    eval(f, kMinMax, val({{"a", 0.5}}));
    FAIL() << "expected UnboundVariable";
  } catch (const UnboundVariable& e) {
    EXPECT_NE(std::string(e.what()).find('b'), std::string::npos);
  }
}

TEST(Formula, IntervalEvaluation) {
  Valuation<TruthInterval> v{{"x", TruthInterval(0.2, 0.9)}, {"y", TruthInterval(1.0, 1.0)},
                             {"z", TruthInterval(0.0, 1.0)}};
  EXPECT_EQ(eval_interval(Formula::var("x"), kMinMax, v), TruthInterval(0.2, 0.9));
  const TruthInterval n = eval_interval(!Formula::var("x"), kMinMax, v);
  EXPECT_NEAR(n.lo().value(), 0.1, 1e-15);
  EXPECT_NEAR(n.hi().value(), 0.8, 1e-15);
  EXPECT_EQ(eval_interval(Formula::var("z") | Formula::var("y"), kMinMax, v), TruthInterval::top());
}

TEST(Formula, IntervalConstantRejectedInScalarMode) {
  const Formula f = Formula::constant(TruthInterval(0.0, 1.0)) & Formula::var("x");
  EXPECT_THROW(eval(f, kMinMax, val({{"x", 0.5}})), ValueError);
  Valuation<TruthInterval> v{{"x", TruthInterval(0.5, 0.5)}};
  EXPECT_EQ(eval_interval(f, kMinMax, v), TruthInterval(0.0, 0.5));
}

TEST(Formula, FreeVars) {
  EXPECT_TRUE(free_vars(Formula::constant(0.5)).empty());
  EXPECT_EQ(vars_of(Formula::var("a") & !Formula::var("b")), (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(vars_of(Formula::var("a") | Formula::var("a")), (std::vector<std::string>{"a"}));
}

TEST(Formula, NaryFoldsLeft) {
  const std::vector<Formula> terms{Formula::var("a"), Formula::var("b"), Formula::var("c")};
  EXPECT_EQ(Formula::conj_all(terms), (Formula::var("a") & Formula::var("b")) & Formula::var("c"));
  EXPECT_EQ(Formula::disj_all(terms), (Formula::var("a") | Formula::var("b")) | Formula::var("c"));
  EXPECT_EQ(eval(Formula::conj_all({}), kMinMax, {}).value(), 1.0);
  EXPECT_EQ(eval(Formula::disj_all({}), kMinMax, {}).value(), 0.0);
}

TEST(Formula, ParsePrecedenceAndAssociativity) {
  const Formula a = Formula::var("a"), b = Formula::var("b"), c = Formula::var("c");
  EXPECT_EQ(parse_formula("a | b & c"), a | (b & c));
  EXPECT_EQ(parse_formula("!a & b"), (!a) & b);
  EXPECT_EQ(parse_formula("a & b & c"), (a & b) & c);
  EXPECT_EQ(parse_formula("a | b | c"), (a | b) | c);
  EXPECT_EQ(parse_formula("(a | b) & c"), (a | b) & c);
  EXPECT_EQ(parse_formula("!!a"), !!a);
  EXPECT_EQ(parse_formula("  x.y_1  "), Formula::var("x.y_1"));
  EXPECT_EQ(parse_formula("[0.25, 0.75]"), Formula::constant(TruthInterval(0.25, 0.75)));
  EXPECT_EQ(parse_formula("1"), Formula::constant(1.0));
  EXPECT_EQ(parse_formula(".5"), Formula::constant(0.5));
}

TEST(Formula, ParseErrorsCarryPosition) {
  const auto position = [](std::string_view text) {
    try {
      parse_formula(text);
    } catch (const ParseError& e) {
      return std::pair<std::size_t, std::size_t>(e.line(), e.column());
    }
    return std::pair<std::size_t, std::size_t>(0, 0);
  };
  EXPECT_EQ(position("a & (b"), (std::pair<std::size_t, std::size_t>(1, 7)));
  EXPECT_EQ(position("a &\n  | b"), (std::pair<std::size_t, std::size_t>(2, 3)));
  EXPECT_EQ(position("a b"), (std::pair<std::size_t, std::size_t>(1, 3)));
  EXPECT_EQ(position("1.5"), (std::pair<std::size_t, std::size_t>(1, 1)));
  EXPECT_NE(position("[0.7, 0.2]").first, 0u);
  EXPECT_NE(position("").first, 0u);
  EXPECT_NE(position("a $ b").first, 0u);
}

TEST(Formula, PrintParseRoundTrip) {
  fftest::Rng rng(3);
  for (int i = 0; i < 500; ++i) {
    const Formula f = fftest::random_formula(rng, {"a", "b", "In"}, 4);
    EXPECT_EQ(parse_formula(to_string(f)), f) << to_string(f);
  }
  EXPECT_EQ(to_string(parse_formula("a | b & c")), "a | b & c");
  EXPECT_EQ(to_string(parse_formula("(a | b) & !c")), "(a | b) & !c");
}

TEST(Formula, CompiledMatchesTreeEvaluation) {
  fftest::Rng rng(5);
  const std::vector<std::string> names{"a", "b", "c"};
  for (int i = 0; i < 500; ++i) {
    const Formula f = fftest::random_formula(rng, names, 5);
    const CompiledFormula cf(f, [&](std::string_view n) {
      return static_cast<int>(std::find(names.begin(), names.end(), n) - names.begin());
    });
    const LogicFamily fam = fftest::random_frank_family(rng);
    std::vector<TruthValue> slots;
    Valuation<TruthValue> v;
    std::vector<TruthInterval> islots;
    Valuation<TruthInterval> iv;
    for (const auto& n : names) {
      slots.emplace_back(fftest::uniform(rng));
      v.emplace(n, slots.back());
      double lo = fftest::uniform(rng), hi = fftest::uniform(rng);
      if (lo > hi) std::swap(lo, hi);
      islots.emplace_back(lo, hi);
      iv.emplace(n, islots.back());
    }
    EXPECT_EQ(cf.run(fam, slots), eval(f, fam, v));
    EXPECT_EQ(cf.run(fam, islots), eval_interval(f, fam, iv));
  }
}

double perturbation(fftest::Rng& rng, const std::vector<std::string>& names, Valuation<TruthValue>& v,
                    Valuation<TruthValue>& w) {
  double h = 0.0;
  for (const auto& n : names) {
    const double x = fftest::uniform(rng), y = fftest::uniform(rng);
    v.insert_or_assign(n, TruthValue(x));
    w.insert_or_assign(n, TruthValue(y));
    h += std::abs(x - y);
  }
  return h;
}

TEST(Formula, NonExpansiveWithoutRepeatedVariables) {
  fftest::Rng rng(17);
  const std::vector<std::string> names{"a", "b", "c", "d"};
  for (int i = 0; i < 2000; ++i) {
    const Formula f = fftest::random_linear_formula(rng, names, 5);
    const LogicFamily fam = fftest::random_frank_family(rng);
    Valuation<TruthValue> v, w;
    const double h = perturbation(rng, names, v, w);
    ASSERT_LE(std::abs(eval(f, fam, v).value() - eval(f, fam, w).value()), h + 1e-12) << to_string(f);
  }
}

TEST(Formula, MinMaxIsNonExpansiveForAnyFormula) {
  fftest::Rng rng(18);
  const std::vector<std::string> names{"a", "b", "c"};
  for (int i = 0; i < 2000; ++i) {
    const Formula f = fftest::random_formula(rng, names, 5);
    Valuation<TruthValue> v, w;
    const double h = perturbation(rng, names, v, w);
    const auto m = LogicFamily::min_max();
    ASSERT_LE(std::abs(eval(f, m, v).value() - eval(f, m, w).value()), h + 1e-12) << to_string(f);
  }
}

// A variable that occurs k times can contribute k times its change.
TEST(Formula, RepeatedVariableCanExceedSlopeOne) {
  const Formula f = parse_formula("b & b");
  const Valuation<TruthValue> v{{"b", TruthValue(0.8)}}, w{{"b", TruthValue(0.9)}};
  for (const auto& fam : {LogicFamily::lukasiewicz(), LogicFamily::product(), LogicFamily::frank(50.0)}) {
    EXPECT_GT(std::abs(eval(f, fam, v).value() - eval(f, fam, w).value()), 0.1 + 1e-3) << fam.name();
    EXPECT_LE(std::abs(eval(f, fam, v).value() - eval(f, fam, w).value()), 0.2 + 1e-12) << fam.name();
  }
}

TEST(Formula, IntervalSoundness) {
  fftest::Rng rng(19);
  const std::vector<std::string> names{"a", "b"};
  for (int i = 0; i < 500; ++i) {
    const Formula f = fftest::random_formula(rng, names, 4);
    const LogicFamily fam = fftest::random_frank_family(rng);
    Valuation<TruthInterval> iv;
    for (const auto& n : names) {
      double lo = fftest::uniform(rng), hi = fftest::uniform(rng);
      if (lo > hi) std::swap(lo, hi);
      iv.emplace(n, TruthInterval(lo, hi));
    }
    const TruthInterval out = eval_interval(f, fam, iv);
    for (int k = 0; k < 10; ++k) {
      Valuation<TruthValue> v;
      for (const auto& [n, x] : iv) v.emplace(n, TruthValue(fftest::uniform(rng, x.lo().value(), x.hi().value())));
      const TruthValue y = eval(f, fam, v);
      EXPECT_TRUE(out.lo().value() <= y.value() + 1e-12 && y.value() <= out.hi().value() + 1e-12) << to_string(f);
    }
  }
}

TEST(Formula, MonotoneWithoutNegation) {
  fftest::Rng rng(23);
  const std::vector<std::string> names{"a", "b", "c"};
  const std::function<Formula(int)> positive = [&](int depth) -> Formula {
    const int k = std::uniform_int_distribution<int>(0, depth <= 0 ? 1 : 3)(rng);
    if (k == 0) return Formula::constant(fftest::uniform(rng));
    if (k == 1) return Formula::var(names[std::uniform_int_distribution<std::size_t>(0, 2)(rng)]);
    Formula l = positive(depth - 1);
    Formula r = positive(depth - 1);
    return k == 2 ? (l & r) : (l | r);
  };
  for (int i = 0; i < 500; ++i) {
    const Formula f = positive(4);
    const LogicFamily fam = fftest::random_frank_family(rng);
    Valuation<TruthValue> lo, hi;
    for (const auto& n : names) {
      const double x = fftest::uniform(rng);
      lo.emplace(n, TruthValue(x));
      hi.emplace(n, TruthValue(fftest::uniform(rng, x, 1.0)));
    }
    EXPECT_LE(eval(f, fam, lo).value(), eval(f, fam, hi).value() + 1e-12);
  }
}
