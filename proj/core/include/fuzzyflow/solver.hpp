#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "fuzzyflow/flowgraph.hpp"
#include "fuzzyflow/logic.hpp"

namespace fuzzyflow {

enum class SolveMode { scalar, interval };

struct SolverConfig {
  /// Iteration stops once the l1 distance between consecutive states drops
  /// below epsilon.
  double epsilon = 1e-6;
  std::size_t max_iters = 100000;
  SolveMode mode = SolveMode::scalar;
  LogicFamily family;
  /// When set, every iterate is snapped to the dyadic grid {i / 2^q}.
  std::optional<int> snap_bits;
  /// Also record SolveReport::error_trace (costs a second pass).
  bool record_error_trace = false;

  /// Throws ValueError on epsilon <= 0, max_iters == 0 or a bad snap_bits.
  void check() const;
};

template <class T>
struct SolveReport {
  GlobalState<T> final;
  std::size_t iterations = 0;
  /// l1 distance between iterate k and k-1, one entry per iteration.
  std::vector<double> residual_trace;
  /// l1 distance between iterate k and the final state; filled only when
  /// SolverConfig::record_error_trace is set.
  std::vector<double> error_trace;
  bool converged = false;
};

/// One application of the analysis functional, as a simultaneous (Jacobi)
/// update: seeded nodes keep their seed and every other node becomes the
/// alpha-weighted sum, over incoming edges <w, v>, of v's transfer applied
/// to s(w). Throws ValidationError for an invalid graph and UnboundVariable
/// if `s` is not total.
GlobalState<TruthValue> step(const FlowGraph& g, const GlobalState<TruthValue>& s,
                             const LogicFamily& family);
GlobalState<TruthInterval> step(const FlowGraph& g, const GlobalState<TruthInterval>& s,
                                const LogicFamily& family);

/// The state iteration starts from: seeds at seeded nodes, 0 elsewhere.
GlobalState<TruthValue> initial_state(const FlowGraph& g);
GlobalState<TruthInterval> initial_interval_state(const FlowGraph& g);

/// Kleene iteration from `initial` (default: initial_state(g)) until the
/// residual drops below cfg.epsilon or cfg.max_iters steps were taken.
/// Failing to converge is reported through `converged`, not thrown.
SolveReport<TruthValue> solve(const FlowGraph& g, const SolverConfig& cfg,
                              const std::optional<GlobalState<TruthValue>>& initial = std::nullopt);
SolveReport<TruthInterval> solve_interval(
    const FlowGraph& g, const SolverConfig& cfg,
    const std::optional<GlobalState<TruthInterval>>& initial = std::nullopt);

/// l1 distance over every (node, property) pair; intervals count both
/// endpoints. Throws ValueError if the states do not cover the same pairs.
double l1_distance(const GlobalState<TruthValue>& a, const GlobalState<TruthValue>& b);
double l1_distance(const GlobalState<TruthInterval>& a, const GlobalState<TruthInterval>& b);

nlohmann::json to_json(const SolveReport<TruthValue>& report);
nlohmann::json to_json(const SolveReport<TruthInterval>& report);

}  // namespace fuzzyflow
