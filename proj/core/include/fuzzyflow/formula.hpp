#pragma once

#include <functional>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fuzzyflow/logic.hpp"
#include "fuzzyflow/truth.hpp"

namespace fuzzyflow {

/// Assignment of truth degrees (or intervals) to property names.
template <class T>
using Valuation = std::map<std::string, T, std::less<>>;

/// Immutable AST of a fuzzy transfer function.
///
/// Constants are stored as intervals so crisp, fuzzy and interval constants
/// share one representation; scalar evaluation requires them to be
/// degenerate. Copies share structure.
class Formula {
 public:
  enum class Op { var, constant, negate, conj, disj };

  /// The constant 0.
  Formula();

  static Formula var(std::string name);
  static Formula constant(TruthValue v);
  static Formula constant(TruthInterval v);
  static Formula constant(double v) { return constant(TruthValue(v)); }
  static Formula negate(Formula f);
  static Formula conj(Formula lhs, Formula rhs);
  static Formula disj(Formula lhs, Formula rhs);

  /// Left folds; the empty conjunction is 1 and the empty disjunction is 0.
  static Formula conj_all(std::span<const Formula> terms);
  static Formula disj_all(std::span<const Formula> terms);

  Op op() const noexcept;
  /// Variable name; empty unless op() == Op::var.
  const std::string& name() const noexcept;
  /// Constant value; bottom unless op() == Op::constant.
  const TruthInterval& value() const noexcept;
  /// Operand 0 for negation, 0 and 1 for binary connectives.
  const Formula& operand(std::size_t i) const;

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

inline Formula operator!(Formula f) { return Formula::negate(std::move(f)); }
inline Formula operator&(Formula a, Formula b) { return Formula::conj(std::move(a), std::move(b)); }
inline Formula operator|(Formula a, Formula b) { return Formula::disj(std::move(a), std::move(b)); }

/// Structural interpretation: Var looks up v, Const is itself, Not/And/Or map
/// to the family's C-, T- and S-norm. Throws UnboundVariable.
TruthValue eval(const Formula& f, const LogicFamily& family, const Valuation<TruthValue>& v);
TruthInterval eval_interval(const Formula& f, const LogicFamily& family,
                            const Valuation<TruthInterval>& v);

std::set<std::string> free_vars(const Formula& f);

/// Parses `0.8 & (!In | !0.7)`. Precedence is ! > & > |; both binary
/// operators associate to the left. `[lo,hi]` denotes an interval constant.
/// Throws ParseError with a 1-based line/column.
Formula parse_formula(std::string_view text);

/// Renders f in the syntax accepted by parse_formula(), with minimal
/// parentheses and 17 significant digits for constants.
std::string to_string(const Formula& f);

/// A formula flattened to a postfix program with variables resolved to slot
/// indices, for repeated evaluation in tight loops.
class CompiledFormula {
 public:
  /// `slot_of` maps a variable name to a slot index, or -1 if unbound, in
  /// which case compilation throws UnboundVariable.
  CompiledFormula(const Formula& f, const std::function<int(std::string_view)>& slot_of);

  TruthValue run(const LogicFamily& family, std::span<const TruthValue> slots) const;
  TruthInterval run(const LogicFamily& family, std::span<const TruthInterval> slots) const;

 private:
  struct Instr {
    Formula::Op op;
    int slot;
    TruthInterval value;
  };
  template <class T>
  T run_impl(const LogicFamily& family, std::span<const T> slots) const;

  std::vector<Instr> code_;
  std::size_t max_depth_ = 0;
  bool scalar_safe_ = true;
};

}  // namespace fuzzyflow
