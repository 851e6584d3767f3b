#include "fuzzyflow/formula.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <algorithm>
#include <tuple>
#include <type_traits>

#include "fuzzyflow/error.hpp"

namespace fuzzyflow {

struct Formula::Node {
  Op op = Op::constant;
  std::string name;
  TruthInterval value;
  std::vector<Formula> operands;
};

namespace {

TruthValue scalar_constant(const TruthInterval& c) {
  if (!c.degenerate()) {
    throw ValueError("interval constant cannot be evaluated in scalar mode");
  }
  return c.lo();
}

}  // namespace

Formula::Formula() : Formula(Formula::constant(TruthValue::zero())) {}

Formula Formula::var(std::string name) {
  if (name.empty()) throw ValueError("variable name must be nonempty");
  auto node = std::make_shared<Node>();
  node->op = Op::var;
  node->name = std::move(name);
  return Formula(std::move(node));
}

Formula Formula::constant(TruthValue v) { return constant(TruthInterval(v)); }

Formula Formula::constant(TruthInterval v) {
  auto node = std::make_shared<Node>();
  node->op = Op::constant;
  node->value = v;
  return Formula(std::move(node));
}

Formula Formula::negate(Formula f) {
  auto node = std::make_shared<Node>();
  node->op = Op::negate;
  node->operands = {std::move(f)};
  return Formula(std::move(node));
}

Formula Formula::conj(Formula lhs, Formula rhs) {
  auto node = std::make_shared<Node>();
  node->op = Op::conj;
  node->operands = {std::move(lhs), std::move(rhs)};
  return Formula(std::move(node));
}

Formula Formula::disj(Formula lhs, Formula rhs) {
  auto node = std::make_shared<Node>();
  node->op = Op::disj;
  node->operands = {std::move(lhs), std::move(rhs)};
  return Formula(std::move(node));
}

Formula Formula::conj_all(std::span<const Formula> terms) {
  if (terms.empty()) return constant(TruthValue::one());
  Formula acc = terms.front();
  for (const auto& t : terms.subspan(1)) acc = conj(std::move(acc), t);
  return acc;
}

Formula Formula::disj_all(std::span<const Formula> terms) {
  if (terms.empty()) return constant(TruthValue::zero());
  Formula acc = terms.front();
  for (const auto& t : terms.subspan(1)) acc = disj(std::move(acc), t);
  return acc;
}

Formula::Op Formula::op() const noexcept { return node_->op; }
const std::string& Formula::name() const noexcept { return node_->name; }
const TruthInterval& Formula::value() const noexcept { return node_->value; }

const Formula& Formula::operand(std::size_t i) const {
  if (i >= node_->operands.size()) throw ValueError("formula operand index out of range");
  return node_->operands[i];
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  return x.op == y.op && x.name == y.name && x.value == y.value && x.operands == y.operands;
}

namespace {

template <class T, class Lookup>
T interpret(const Formula& f, const LogicFamily& family, const Lookup& lookup) {
  switch (f.op()) {
    case Formula::Op::var: return lookup(f.name());
    case Formula::Op::constant:
      if constexpr (std::is_same_v<T, TruthValue>) {
        return scalar_constant(f.value());
      } else {
        return f.value();
      }
    case Formula::Op::negate: return LogicFamily::cnorm(interpret<T>(f.operand(0), family, lookup));
    case Formula::Op::conj:
      return family.tnorm(interpret<T>(f.operand(0), family, lookup),
                          interpret<T>(f.operand(1), family, lookup));
    case Formula::Op::disj:
      return family.snorm(interpret<T>(f.operand(0), family, lookup),
                          interpret<T>(f.operand(1), family, lookup));
  }
  return T{};
}

template <class T>
T eval_with(const Formula& f, const LogicFamily& family, const Valuation<T>& v) {
  return interpret<T>(f, family, [&v](const std::string& name) -> T {
    auto it = v.find(name);
    if (it == v.end()) throw UnboundVariable(name);
    return it->second;
  });
}

void collect_vars(const Formula& f, std::set<std::string>& out) {
  switch (f.op()) {
    case Formula::Op::var: out.insert(f.name()); break;
    case Formula::Op::constant: break;
    case Formula::Op::negate: collect_vars(f.operand(0), out); break;
    case Formula::Op::conj:
    case Formula::Op::disj:
      collect_vars(f.operand(0), out);
      collect_vars(f.operand(1), out);
      break;
  }
}

}  // namespace

TruthValue eval(const Formula& f, const LogicFamily& family, const Valuation<TruthValue>& v) {
  return eval_with<TruthValue>(f, family, v);
}

TruthInterval eval_interval(const Formula& f, const LogicFamily& family,
                            const Valuation<TruthInterval>& v) {
  return eval_with<TruthInterval>(f, family, v);
}

std::set<std::string> free_vars(const Formula& f) {
  std::set<std::string> out;
  collect_vars(f, out);
  return out;
}

// ---------------------------------------------------------------------------
// Text syntax

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Formula parse() {
    Formula f = parse_or();
    skip_space();
    if (pos_ < text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return f;
  }

 private:
  Formula parse_or() {
    Formula lhs = parse_and();
    while (accept('|')) lhs = Formula::disj(std::move(lhs), parse_and());
    return lhs;
  }

  Formula parse_and() {
    Formula lhs = parse_unary();
    while (accept('&')) lhs = Formula::conj(std::move(lhs), parse_unary());
    return lhs;
  }

  Formula parse_unary() {
    if (accept('!')) return Formula::negate(parse_unary());
    return parse_primary();
  }

  Formula parse_primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of formula");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Formula inner = parse_or();
      expect(')');
      return inner;
    }
    if (c == '[') {
      ++pos_;
      const std::size_t at = pos_;
      const double lo = parse_number();
      expect(',');
      const double hi = parse_number();
      expect(']');
      return Formula::constant(checked_interval(lo, hi, at));
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const std::size_t at = pos_;
      return Formula::constant(checked_value(parse_number(), at));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t begin = pos_;
      while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
      return Formula::var(std::string(text_.substr(begin, pos_ - begin)));
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  static bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
  }

  double parse_number() {
    skip_space();
    const std::size_t begin = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.' ||
            text_[pos_] == 'e' || text_[pos_] == 'E' ||
            ((text_[pos_] == '-' || text_[pos_] == '+') && pos_ > begin &&
             (text_[pos_ - 1] == 'e' || text_[pos_ - 1] == 'E')))) {
      ++pos_;
    }
    const std::string token(text_.substr(begin, pos_ - begin));
    char* end = nullptr;
    const double v = token.empty() ? 0.0 : std::strtod(token.c_str(), &end);
    if (token.empty() || end != token.c_str() + token.size()) {
      pos_ = begin;
      fail("expected a number");
    }
    return v;
  }

  TruthValue checked_value(double v, std::size_t at) {
    try {
      return TruthValue(v);
    } catch (const ValueError& e) {
      pos_ = at;
      fail(e.what());
    }
  }

  TruthInterval checked_interval(double lo, double hi, std::size_t at) {
    try {
      return TruthInterval(lo, hi);
    } catch (const ValueError& e) {
      pos_ = at;
      fail(e.what());
    }
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      fail(pos_ < text_.size() ? "expected '" + std::string(1, c) + "'"
                               : "expected '" + std::string(1, c) + "' before end of formula");
    }
  }

  [[noreturn]] void fail(const std::string& message) const {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError(message, line, column);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  // Keep literals recognisable as numbers to the parser.
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

int precedence(Formula::Op op) {
  switch (op) {
    case Formula::Op::disj: return 1;
    case Formula::Op::conj: return 2;
    case Formula::Op::negate: return 3;
    default: return 4;
  }
}

void render(const Formula& f, std::string& out) {
  auto child = [&out](const Formula& c, int min_prec) {
    const bool paren = precedence(c.op()) < min_prec;
    if (paren) out += '(';
    render(c, out);
    if (paren) out += ')';
  };
  switch (f.op()) {
    case Formula::Op::var: out += f.name(); break;
    case Formula::Op::constant:
      if (f.value().degenerate()) {
        out += number(f.value().lo().value());
      } else {
        out += '[' + number(f.value().lo().value()) + ", " + number(f.value().hi().value()) + ']';
      }
      break;
    case Formula::Op::negate:
      out += '!';
      child(f.operand(0), 3);
      break;
    case Formula::Op::conj:
    case Formula::Op::disj: {
      const int p = precedence(f.op());
      child(f.operand(0), p);
      out += f.op() == Formula::Op::conj ? " & " : " | ";
      // Left-associative: a right operand of equal precedence needs parentheses.
      child(f.operand(1), p + 1);
      break;
    }
  }
}

}  // namespace

Formula parse_formula(std::string_view text) { return Parser(text).parse(); }

std::string to_string(const Formula& f) {
  std::string out;
  render(f, out);
  return out;
}

// ---------------------------------------------------------------------------
// Compiled evaluation

namespace {

void emit(const Formula& f, const std::function<int(std::string_view)>& slot_of,
          std::vector<std::tuple<Formula::Op, int, TruthInterval>>& code) {
  switch (f.op()) {
    case Formula::Op::var: {
      const int slot = slot_of(f.name());
      if (slot < 0) throw UnboundVariable(f.name());
      code.emplace_back(Formula::Op::var, slot, TruthInterval{});
      break;
    }
    case Formula::Op::constant: code.emplace_back(Formula::Op::constant, -1, f.value()); break;
    case Formula::Op::negate:
      emit(f.operand(0), slot_of, code);
      code.emplace_back(Formula::Op::negate, -1, TruthInterval{});
      break;
    case Formula::Op::conj:
    case Formula::Op::disj:
      emit(f.operand(0), slot_of, code);
      emit(f.operand(1), slot_of, code);
      code.emplace_back(f.op(), -1, TruthInterval{});
      break;
  }
}

}  // namespace

CompiledFormula::CompiledFormula(const Formula& f,
                                 const std::function<int(std::string_view)>& slot_of) {
  std::vector<std::tuple<Formula::Op, int, TruthInterval>> code;
  emit(f, slot_of, code);
  std::size_t depth = 0;
  for (const auto& [op, slot, value] : code) {
    code_.push_back(Instr{op, slot, value});
    switch (op) {
      case Formula::Op::var:
      case Formula::Op::constant:
        ++depth;
        if (op == Formula::Op::constant && !value.degenerate()) scalar_safe_ = false;
        break;
      case Formula::Op::negate: break;
      case Formula::Op::conj:
      case Formula::Op::disj: --depth; break;
    }
    max_depth_ = std::max(max_depth_, depth);
  }
}

template <class T>
T CompiledFormula::run_impl(const LogicFamily& family, std::span<const T> slots) const {
  // Formulas in transfer functions are small; a fixed stack avoids allocation.
  constexpr std::size_t kInline = 32;
  T inline_stack[kInline];
  std::vector<T> heap_stack;
  T* stack = inline_stack;
  if (max_depth_ > kInline) {
    heap_stack.resize(max_depth_);
    stack = heap_stack.data();
  }
  std::size_t top = 0;
  for (const Instr& in : code_) {
    switch (in.op) {
      case Formula::Op::var: stack[top++] = slots[static_cast<std::size_t>(in.slot)]; break;
      case Formula::Op::constant:
        if constexpr (std::is_same_v<T, TruthValue>) {
          stack[top++] = in.value.lo();
        } else {
          stack[top++] = in.value;
        }
        break;
      case Formula::Op::negate: stack[top - 1] = LogicFamily::cnorm(stack[top - 1]); break;
      case Formula::Op::conj:
        --top;
        stack[top - 1] = family.tnorm(stack[top - 1], stack[top]);
        break;
      case Formula::Op::disj:
        --top;
        stack[top - 1] = family.snorm(stack[top - 1], stack[top]);
        break;
    }
  }
  return stack[0];
}

TruthValue CompiledFormula::run(const LogicFamily& family,
                                std::span<const TruthValue> slots) const {
  if (!scalar_safe_) throw ValueError("interval constant cannot be evaluated in scalar mode");
  return run_impl<TruthValue>(family, slots);
}

TruthInterval CompiledFormula::run(const LogicFamily& family,
                                   std::span<const TruthInterval> slots) const {
  return run_impl<TruthInterval>(family, slots);
}

}  // namespace fuzzyflow
