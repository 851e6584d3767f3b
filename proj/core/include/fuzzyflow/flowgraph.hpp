#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "fuzzyflow/formula.hpp"
#include "fuzzyflow/logic.hpp"

namespace fuzzyflow {

/// Value of every property at every node.
template <class T>
using GlobalState = std::map<std::string, Valuation<T>, std::less<>>;

/// Name that refers, inside the transfer formula of property p, to the
/// incoming value of p itself.
inline constexpr std::string_view kInputAlias = "In";

struct FlowNode {
  std::string id;
  /// Per-property transfer function; a property without an entry passes its
  /// incoming value through unchanged.
  std::map<std::string, Formula, std::less<>> transfer;
  /// Constant value for a non-start node without incoming edges.
  std::optional<Valuation<TruthInterval>> seed;

  friend bool operator==(const FlowNode&, const FlowNode&) = default;
};

struct FlowEdge {
  std::string from;
  std::string to;
  /// Normalized contribution of `from` to `to`.
  double alpha = 1.0;

  friend bool operator==(const FlowEdge&, const FlowEdge&) = default;
};

/// Weighted flow graph with a designated start node.
///
/// The graph is a plain value; nothing is checked at construction. Use
/// validate() before solving.
class FlowGraph {
 public:
  FlowGraph() = default;
  FlowGraph(std::vector<FlowNode> nodes, std::vector<FlowEdge> edges, std::string start,
            Valuation<TruthInterval> seed);

  const std::vector<FlowNode>& nodes() const noexcept { return nodes_; }
  const std::vector<FlowEdge>& edges() const noexcept { return edges_; }
  const std::string& start() const noexcept { return start_; }
  const Valuation<TruthInterval>& seed() const noexcept { return seed_; }

  /// Sorted union of the properties named by the start seed, node seeds and
  /// transfer maps.
  std::vector<std::string> properties() const;

  const FlowNode* find(std::string_view id) const;

  friend bool operator==(const FlowGraph&, const FlowGraph&) = default;

 private:
  std::vector<FlowNode> nodes_;
  std::vector<FlowEdge> edges_;
  std::string start_;
  Valuation<TruthInterval> seed_;
};

struct Violation {
  enum class Kind {
    duplicate_node,
    missing_start,
    dangling_edge,
    bad_weight,
    weight_sum,
    missing_seed,
    unbound_variable,
    start_incoming,
    unreachable,
  };

  Kind kind;
  std::string node;
  std::string detail;
  /// Offending number where one exists, e.g. the weight sum.
  double value = 0.0;

  /// start_incoming and unreachable are reported but do not make a graph
  /// invalid.
  bool is_warning() const noexcept {
    return kind == Kind::start_incoming || kind == Kind::unreachable;
  }
  std::string to_string() const;
};

std::string_view to_string(Violation::Kind kind);

/// Tolerance on the sum of incoming weights at each node.
inline constexpr double kWeightSumTolerance = 1e-9;

/// All violations of the graph invariants, in a deterministic order.
std::vector<Violation> validate(const FlowGraph& g);
/// True when validate() reports no errors (warnings are allowed).
bool is_valid(const std::vector<Violation>& violations);
/// Throws ValidationError listing every error.
void require_valid(const FlowGraph& g);

/// Flips every edge. Weights carry over unless `overrides` names the flipped
/// edge as {from, to} in the reversed orientation. The old start keeps no
/// seed; `new_start` is seeded with `new_seed`. Throws InvalidStart if
/// `new_start` is not a node and ValidationError if the result is invalid.
FlowGraph reverse(const FlowGraph& g, std::string_view new_start, Valuation<TruthInterval> new_seed,
                  const std::map<std::pair<std::string, std::string>, double>& overrides = {});

/// A flow graph together with the logic it is meant to be solved in.
struct FlowProblem {
  FlowGraph graph;
  LogicFamily logic;

  friend bool operator==(const FlowProblem&, const FlowProblem&) = default;
};

/// Reads the JSON problem format. Unknown keys are rejected; syntax errors
/// carry the line and column of the offending character.
FlowProblem parse_flow_problem(std::string_view json_text);
FlowProblem flow_problem_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const FlowProblem& problem);

}  // namespace fuzzyflow
