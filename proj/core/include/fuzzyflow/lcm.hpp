#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "fuzzyflow/logic.hpp"
#include "fuzzyflow/solver.hpp"
#include "fuzzyflow/truth.hpp"

namespace fuzzyflow {

/// How the lazy-code-motion analyses are interpreted.
///
/// crisp:    classical bit-vector KRS; predicates in {0,1}, meet is
///           conjunction, greatest fixed point.
/// fuzzy:    type-1 degrees; meet is the alpha-weighted average, solved by
///           Kleene iteration from 0.
/// interval: as fuzzy, over interval type-2 degrees.
enum class LcmMode { crisp, fuzzy, interval };

LcmMode parse_lcm_mode(std::string_view text);
std::string_view to_string(LcmMode mode);

/// Rows are indexed by block (or edge), columns by expression. Scalar modes
/// use degenerate intervals.
using PredicateMatrix = std::vector<std::vector<TruthInterval>>;

struct LcmEdge {
  std::string from;
  std::string to;
  /// Forward contribution of `from` to `to` (sums to 1 over the
  /// predecessors of `to`).
  double alpha = 1.0;
  /// Backward contribution of `to` to `from` (sums to 1 over the successors
  /// of `from`).
  double beta = 1.0;

  friend bool operator==(const LcmEdge&, const LcmEdge&) = default;
};

struct LcmProblem {
  std::vector<std::string> blocks;
  std::vector<LcmEdge> edges;
  /// Expression names, in index order.
  std::vector<std::string> exprs;
  PredicateMatrix dee;
  PredicateMatrix uee;
  PredicateMatrix kill;
  std::string entry;
  std::string exit;
  /// Defaults recorded in the problem file.
  LogicFamily logic;
  LcmMode mode = LcmMode::fuzzy;

  /// Throws ValueError if there is no such block.
  std::size_t block_index(std::string_view id) const;
  std::vector<std::size_t> predecessors(std::size_t block) const;
  std::vector<std::size_t> successors(std::size_t block) const;
};

/// Messages describing every structural problem; empty when valid for `mode`.
std::vector<std::string> validate(const LcmProblem& p, LcmMode mode);
void require_valid(const LcmProblem& p, LcmMode mode);

/// Per-block solution of a block-level analysis.
struct BlockAnalysis {
  /// Value at block entry.
  PredicateMatrix in;
  /// Value at block exit.
  PredicateMatrix out;
  bool converged = true;
  std::size_t iterations = 0;
};

/// Available expressions: AvOut(b) = DEE(b) | (AvIn(b) & !KILL(b)) with
/// AvIn(entry) = 0. AvIn is the alpha-weighted average of the predecessors'
/// AvOut (crisp: their conjunction).
BlockAnalysis availability(const LcmProblem& p, LcmMode mode, const SolverConfig& cfg);

/// Anticipable (very busy) expressions, backwards:
/// in(b) = UEE(b) | (out(b) & !KILL(b)) with out(exit) = 0. out(b) is the
/// beta-weighted average of the successors' in (crisp: their conjunction).
BlockAnalysis anticipability(const LcmProblem& p, LcmMode mode, const SolverConfig& cfg);

/// Edge-indexed earliest placement:
///   entry edges:  AntIn(j) & !AvOut(entry)
///   other edges:  AntIn(j) & !AvOut(i) & (KILL(i) | !AntOut(i))
PredicateMatrix earliest(const LcmProblem& p, const BlockAnalysis& avail, const BlockAnalysis& antic,
                         LcmMode mode, const LogicFamily& family);

struct LaterAnalysis {
  /// Block-indexed.
  PredicateMatrix later_in;
  /// Edge-indexed.
  PredicateMatrix later_out;
  bool converged = true;
  std::size_t iterations = 0;
};

/// LaterOut(i,j) = Earliest(i,j) | (LaterIn(i) & !UEE(i)); LaterIn(j) merges
/// LaterOut over the incoming edges of j, and LaterIn(entry) = 0.
LaterAnalysis later(const LcmProblem& p, const PredicateMatrix& earliest, LcmMode mode,
                    const SolverConfig& cfg);

struct Placement {
  /// Edge-indexed: Insert(i,j) = LaterOut(i,j) & !LaterIn(j).
  PredicateMatrix insert;
  /// Block-indexed: Delete(k) = UEE(k) & !LaterIn(k), and 0 at the entry.
  PredicateMatrix del;
};

Placement insert_delete(const LcmProblem& p, const LaterAnalysis& later, LcmMode mode,
                        const LogicFamily& family);

struct LcmResult {
  LcmMode mode = LcmMode::fuzzy;
  PredicateMatrix av_in, av_out;
  PredicateMatrix an_in, an_out;
  PredicateMatrix earliest;
  PredicateMatrix later_in, later_out;
  PredicateMatrix insert;
  PredicateMatrix del;
  /// False if any fixed-point stage hit the iteration limit.
  bool converged = true;
  /// Iterations summed over all stages and expressions.
  std::size_t iterations = 0;
};

/// Runs the four stages in order. With jobs > 1 the per-expression analyses
/// run concurrently; the result is identical to a sequential run.
LcmResult lcm_pipeline(const LcmProblem& p, LcmMode mode, const SolverConfig& cfg,
                       unsigned jobs = 1);

/// Combines the predicate rows of alternative inlined call targets: entries
/// on which all targets agree stay as they are, disagreeing entries become
/// their interval hull. Throws WidthMismatch or ValueError on no rows.
std::vector<TruthInterval> join_targets(const std::vector<std::vector<TruthInterval>>& rows);

/// Reads the LCM problem format (see README). Rows may be arrays of numbers
/// or [lo, hi] pairs in expression order, bit strings written highest index
/// first ("0101000"), or {"join": [row, ...]}.
LcmProblem parse_lcm_problem(std::string_view json_text);
LcmProblem lcm_problem_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const LcmProblem& p);

nlohmann::json to_json(const LcmProblem& p, const LcmResult& r);
/// Fixed-width tables rounded to three decimals, followed by the insertions
/// and deletions whose degree reaches `threshold`.
std::string format_report(const LcmProblem& p, const LcmResult& r, double threshold = 0.95);

}  // namespace fuzzyflow
