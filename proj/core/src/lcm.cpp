#include "fuzzyflow/lcm.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>

#include "fuzzyflow/error.hpp"
#include "fuzzyflow/flowgraph.hpp"
#include "fuzzyflow/formula.hpp"

namespace fuzzyflow {

LcmMode parse_lcm_mode(std::string_view text) {
  if (text == "crisp") return LcmMode::crisp;
  if (text == "fuzzy") return LcmMode::fuzzy;
  if (text == "interval") return LcmMode::interval;
  throw ValueError("unknown LCM mode '" + std::string(text) + "' (expected crisp, fuzzy or interval)");
}

std::string_view to_string(LcmMode mode) {
  switch (mode) {
    case LcmMode::crisp: return "crisp";
    case LcmMode::fuzzy: return "fuzzy";
    case LcmMode::interval: return "interval";
  }
  return "unknown";
}

std::size_t LcmProblem::block_index(std::string_view id) const {
  auto it = std::find(blocks.begin(), blocks.end(), id);
  if (it == blocks.end()) throw ValueError("no block named '" + std::string(id) + "'");
  return static_cast<std::size_t>(it - blocks.begin());
}

std::vector<std::size_t> LcmProblem::predecessors(std::size_t block) const {
  std::vector<std::size_t> out;
  for (const auto& e : edges) {
    if (e.to == blocks[block]) out.push_back(block_index(e.from));
  }
  return out;
}

std::vector<std::size_t> LcmProblem::successors(std::size_t block) const {
  std::vector<std::size_t> out;
  for (const auto& e : edges) {
    if (e.from == blocks[block]) out.push_back(block_index(e.to));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Validation

namespace {

bool is_crisp(const TruthInterval& v) {
  return v.degenerate() && (v.lo().value() == 0.0 || v.lo().value() == 1.0);
}

void check_matrix(const LcmProblem& p, const PredicateMatrix& m, std::string_view name, LcmMode mode,
                  std::vector<std::string>& out) {
  if (m.size() != p.blocks.size()) {
    out.push_back(std::string(name) + ": expected " + std::to_string(p.blocks.size()) + " rows, got " +
                  std::to_string(m.size()));
    return;
  }
  for (std::size_t b = 0; b < m.size(); ++b) {
    if (m[b].size() != p.exprs.size()) {
      out.push_back(std::string(name) + "(" + p.blocks[b] + "): expected " + std::to_string(p.exprs.size()) +
                    " entries, got " + std::to_string(m[b].size()));
      continue;
    }
    for (std::size_t e = 0; e < m[b].size(); ++e) {
      const TruthInterval& v = m[b][e];
      if (mode == LcmMode::crisp && !is_crisp(v)) {
        out.push_back(std::string(name) + "(" + p.blocks[b] + ", " + p.exprs[e] +
                      ") must be 0 or 1 in crisp mode");
      } else if (mode == LcmMode::fuzzy && !v.degenerate()) {
        out.push_back(std::string(name) + "(" + p.blocks[b] + ", " + p.exprs[e] +
                      ") is an interval; use interval mode");
      }
    }
  }
}

}  // namespace

std::vector<std::string> validate(const LcmProblem& p, LcmMode mode) {
  std::vector<std::string> out;
  std::vector<std::string> sorted = p.blocks;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) out.push_back("block ids must be unique");
  if (std::any_of(sorted.begin(), sorted.end(), [](const std::string& s) { return s.empty(); })) {
    out.push_back("block ids must be nonempty");
  }
  const auto exists = [&](const std::string& id) { return std::binary_search(sorted.begin(), sorted.end(), id); };
  if (!exists(p.entry)) out.push_back("entry block '" + p.entry + "' does not exist");
  if (!exists(p.exit)) out.push_back("exit block '" + p.exit + "' does not exist");
  if (!out.empty()) return out;

  std::vector<double> alpha_sum(p.blocks.size(), 0.0);
  std::vector<double> beta_sum(p.blocks.size(), 0.0);
  std::vector<int> indeg(p.blocks.size(), 0);
  std::vector<int> outdeg(p.blocks.size(), 0);
  bool edges_ok = true;
  for (const auto& e : p.edges) {
    if (!exists(e.from) || !exists(e.to)) {
      out.push_back("edge " + e.from + " -> " + e.to + " names a missing block");
      edges_ok = false;
      continue;
    }
    if (e.to == p.entry) out.push_back("edge " + e.from + " -> " + e.to + " enters the entry block");
    if (e.from == p.exit) out.push_back("edge " + e.from + " -> " + e.to + " leaves the exit block");
    for (double w : {e.alpha, e.beta}) {
      if (!std::isfinite(w) || w < 0.0 || w > 1.0) {
        out.push_back("edge " + e.from + " -> " + e.to + " has a weight outside [0,1]");
      }
    }
    const std::size_t from = p.block_index(e.from);
    const std::size_t to = p.block_index(e.to);
    alpha_sum[to] += e.alpha;
    beta_sum[from] += e.beta;
    ++indeg[to];
    ++outdeg[from];
  }
  if (edges_ok) {
    for (std::size_t b = 0; b < p.blocks.size(); ++b) {
      const std::string& id = p.blocks[b];
      if (id != p.entry && indeg[b] == 0) out.push_back("block " + id + " has no predecessors");
      if (id != p.exit && outdeg[b] == 0) out.push_back("block " + id + " has no successors");
      if (mode == LcmMode::crisp) continue;
      if (id != p.entry && indeg[b] > 0 && std::abs(alpha_sum[b] - 1.0) > kWeightSumTolerance) {
        out.push_back("forward weights into " + id + " sum to " + std::to_string(alpha_sum[b]));
      }
      if (id != p.exit && outdeg[b] > 0 && std::abs(beta_sum[b] - 1.0) > kWeightSumTolerance) {
        out.push_back("backward weights out of " + id + " sum to " + std::to_string(beta_sum[b]));
      }
    }
  }
  check_matrix(p, p.dee, "DEE", mode, out);
  check_matrix(p, p.uee, "UEE", mode, out);
  check_matrix(p, p.kill, "KILL", mode, out);
  return out;
}

void require_valid(const LcmProblem& p, LcmMode mode) {
  const auto problems = validate(p, mode);
  if (problems.empty()) return;
  std::string message = "invalid LCM problem";
  for (const auto& m : problems) message += "\n  " + m;
  throw ValidationError(message);
}

// ---------------------------------------------------------------------------
// Per-expression columns

namespace {

using Column = std::vector<TruthInterval>;

struct ColumnPair {
  Column in;
  Column out;
  bool converged = true;
  std::size_t iterations = 0;
};

constexpr const char* kProp = "v";

TruthInterval crisp(bool b) { return b ? TruthInterval::top() : TruthInterval::bottom(); }
bool crisp_of(const TruthInterval& v) { return v.lo().value() == 1.0; }

std::string in_node(const std::string& block) { return "in:" + block; }
std::string out_node(const std::string& block) { return "out:" + block; }
std::string edge_node(std::size_t k) { return "edge:" + std::to_string(k); }

Formula constant(const TruthInterval& v) { return Formula::constant(v); }
Formula input() { return Formula::var(std::string(kInputAlias)); }

// gen | (In & !kill)
Formula gen_kill(const TruthInterval& gen, const TruthInterval& kill) {
  return constant(gen) | (input() & !constant(kill));
}

FlowNode node(std::string id, std::optional<Formula> transfer = std::nullopt) {
  FlowNode n;
  n.id = std::move(id);
  if (transfer) n.transfer.emplace(kProp, std::move(*transfer));
  return n;
}

struct Solved {
  GlobalState<TruthInterval> state;
  bool converged;
  std::size_t iterations;
};

Solved run(const FlowGraph& g, LcmMode mode, const SolverConfig& cfg) {
  if (mode == LcmMode::interval) {
    auto r = solve_interval(g, cfg);
    return {std::move(r.final), r.converged, r.iterations};
  }
  auto r = solve(g, cfg);
  GlobalState<TruthInterval> lifted;
  for (const auto& [id, valuation] : r.final) {
    for (const auto& [prop, v] : valuation) lifted[id].emplace(prop, TruthInterval(v));
  }
  return {std::move(lifted), r.converged, r.iterations};
}

TruthInterval value_at(const Solved& s, const std::string& node_id) {
  return s.state.at(node_id).at(kProp);
}

Valuation<TruthInterval> zero_seed() { return {{kProp, TruthInterval::bottom()}}; }

ColumnPair avail_fuzzy(const LcmProblem& p, std::size_t e, LcmMode mode, const SolverConfig& cfg) {
  std::vector<FlowNode> nodes;
  std::vector<FlowEdge> edges;
  for (std::size_t b = 0; b < p.blocks.size(); ++b) {
    nodes.push_back(node(in_node(p.blocks[b])));
    nodes.push_back(node(out_node(p.blocks[b]), gen_kill(p.dee[b][e], p.kill[b][e])));
    edges.push_back({in_node(p.blocks[b]), out_node(p.blocks[b]), 1.0});
  }
  for (const auto& edge : p.edges) edges.push_back({out_node(edge.from), in_node(edge.to), edge.alpha});
  const FlowGraph g(std::move(nodes), std::move(edges), in_node(p.entry), zero_seed());
  const Solved s = run(g, mode, cfg);
  ColumnPair col{{}, {}, s.converged, s.iterations};
  for (const auto& b : p.blocks) {
    col.in.push_back(value_at(s, in_node(b)));
    col.out.push_back(value_at(s, out_node(b)));
  }
  return col;
}

ColumnPair antic_fuzzy(const LcmProblem& p, std::size_t e, LcmMode mode, const SolverConfig& cfg) {
  std::vector<FlowNode> nodes;
  std::vector<FlowEdge> edges;
  for (std::size_t b = 0; b < p.blocks.size(); ++b) {
    nodes.push_back(node(out_node(p.blocks[b])));
    nodes.push_back(node(in_node(p.blocks[b]), gen_kill(p.uee[b][e], p.kill[b][e])));
    edges.push_back({out_node(p.blocks[b]), in_node(p.blocks[b]), 1.0});
  }
  for (const auto& edge : p.edges) edges.push_back({in_node(edge.to), out_node(edge.from), edge.beta});
  const FlowGraph g(std::move(nodes), std::move(edges), out_node(p.exit), zero_seed());
  const Solved s = run(g, mode, cfg);
  ColumnPair col{{}, {}, s.converged, s.iterations};
  for (const auto& b : p.blocks) {
    col.in.push_back(value_at(s, in_node(b)));
    col.out.push_back(value_at(s, out_node(b)));
  }
  return col;
}

// `in` is block-indexed LaterIn, `out` is edge-indexed LaterOut.
ColumnPair later_fuzzy(const LcmProblem& p, std::size_t e, const Column& early, LcmMode mode,
                       const SolverConfig& cfg) {
  std::vector<FlowNode> nodes;
  std::vector<FlowEdge> edges;
  for (const auto& b : p.blocks) nodes.push_back(node(in_node(b)));
  for (std::size_t k = 0; k < p.edges.size(); ++k) {
    const auto& edge = p.edges[k];
    const std::size_t from = p.block_index(edge.from);
    nodes.push_back(node(edge_node(k), gen_kill(early[k], p.uee[from][e])));
    edges.push_back({in_node(edge.from), edge_node(k), 1.0});
    edges.push_back({edge_node(k), in_node(edge.to), edge.alpha});
  }
  const FlowGraph g(std::move(nodes), std::move(edges), in_node(p.entry), zero_seed());
  const Solved s = run(g, mode, cfg);
  ColumnPair col{{}, {}, s.converged, s.iterations};
  for (const auto& b : p.blocks) col.in.push_back(value_at(s, in_node(b)));
  for (std::size_t k = 0; k < p.edges.size(); ++k) col.out.push_back(value_at(s, edge_node(k)));
  return col;
}

// Classical round-robin iteration to the greatest fixed point.
ColumnPair avail_crisp(const LcmProblem& p, std::size_t e) {
  const std::size_t n = p.blocks.size();
  const std::size_t entry = p.block_index(p.entry);
  std::vector<std::vector<std::size_t>> preds(n);
  for (std::size_t b = 0; b < n; ++b) preds[b] = p.predecessors(b);
  std::vector<bool> in(n, true), out(n, true);
  in[entry] = false;
  ColumnPair col;
  for (bool changed = true; changed;) {
    changed = false;
    ++col.iterations;
    for (std::size_t b = 0; b < n; ++b) {
      bool meet = b != entry;
      if (b != entry) {
        for (std::size_t q : preds[b]) meet = meet && out[q];
      }
      const bool next = crisp_of(p.dee[b][e]) || (meet && !crisp_of(p.kill[b][e]));
      if (meet != in[b] || next != out[b]) changed = true;
      in[b] = meet;
      out[b] = next;
    }
  }
  for (std::size_t b = 0; b < n; ++b) {
    col.in.push_back(crisp(in[b]));
    col.out.push_back(crisp(out[b]));
  }
  return col;
}

ColumnPair antic_crisp(const LcmProblem& p, std::size_t e) {
  const std::size_t n = p.blocks.size();
  const std::size_t exit = p.block_index(p.exit);
  std::vector<std::vector<std::size_t>> succs(n);
  for (std::size_t b = 0; b < n; ++b) succs[b] = p.successors(b);
  std::vector<bool> in(n, true), out(n, true);
  out[exit] = false;
  ColumnPair col;
  for (bool changed = true; changed;) {
    changed = false;
    ++col.iterations;
    for (std::size_t i = n; i-- > 0;) {
      bool meet = i != exit;
      if (i != exit) {
        for (std::size_t s : succs[i]) meet = meet && in[s];
      }
      const bool next = crisp_of(p.uee[i][e]) || (meet && !crisp_of(p.kill[i][e]));
      if (meet != out[i] || next != in[i]) changed = true;
      out[i] = meet;
      in[i] = next;
    }
  }
  for (std::size_t b = 0; b < n; ++b) {
    col.in.push_back(crisp(in[b]));
    col.out.push_back(crisp(out[b]));
  }
  return col;
}

ColumnPair later_crisp(const LcmProblem& p, std::size_t e, const Column& early) {
  const std::size_t n = p.blocks.size();
  const std::size_t entry = p.block_index(p.entry);
  std::vector<std::size_t> from(p.edges.size()), to(p.edges.size());
  for (std::size_t k = 0; k < p.edges.size(); ++k) {
    from[k] = p.block_index(p.edges[k].from);
    to[k] = p.block_index(p.edges[k].to);
  }
  std::vector<bool> in(n, true), out(p.edges.size(), true);
  in[entry] = false;
  ColumnPair col;
  for (bool changed = true; changed;) {
    changed = false;
    ++col.iterations;
    for (std::size_t k = 0; k < p.edges.size(); ++k) {
      const bool next = crisp_of(early[k]) || (in[from[k]] && !crisp_of(p.uee[from[k]][e]));
      if (next != out[k]) changed = true;
      out[k] = next;
    }
    for (std::size_t b = 0; b < n; ++b) {
      if (b == entry) continue;
      bool meet = true;
      for (std::size_t k = 0; k < p.edges.size(); ++k) {
        if (to[k] == b) meet = meet && out[k];
      }
      if (meet != in[b]) changed = true;
      in[b] = meet;
    }
  }
  for (std::size_t b = 0; b < n; ++b) col.in.push_back(crisp(in[b]));
  for (std::size_t k = 0; k < p.edges.size(); ++k) col.out.push_back(crisp(out[k]));
  return col;
}

// Norm operations shared by the pointwise stages. Crisp values are
// degenerate {0,1} intervals, on which every family agrees with Boolean
// logic; MinMax is used for them regardless of the configured family.
struct Ops {
  LogicFamily family;
  TruthInterval conj(const TruthInterval& a, const TruthInterval& b) const { return family.tnorm(a, b); }
  TruthInterval disj(const TruthInterval& a, const TruthInterval& b) const { return family.snorm(a, b); }
  static TruthInterval neg(const TruthInterval& a) { return LogicFamily::cnorm(a); }
};

Ops ops_for(LcmMode mode, const LogicFamily& family) {
  return Ops{mode == LcmMode::crisp ? LogicFamily::min_max() : family};
}

Column earliest_column(const LcmProblem& p, std::size_t e, const Column& av_out, const Column& an_in,
                       const Column& an_out, const Ops& ops) {
  Column col;
  const std::size_t entry = p.block_index(p.entry);
  for (const auto& edge : p.edges) {
    const std::size_t i = p.block_index(edge.from);
    const std::size_t j = p.block_index(edge.to);
    TruthInterval v = ops.conj(an_in[j], Ops::neg(av_out[i]));
    if (i != entry) v = ops.conj(v, ops.disj(p.kill[i][e], Ops::neg(an_out[i])));
    col.push_back(v);
  }
  return col;
}

void placement_column(const LcmProblem& p, std::size_t e, const Column& later_in, const Column& later_out,
                      const Ops& ops, Column& insert, Column& del) {
  const std::size_t entry = p.block_index(p.entry);
  for (std::size_t k = 0; k < p.edges.size(); ++k) {
    const std::size_t j = p.block_index(p.edges[k].to);
    insert.push_back(ops.conj(later_out[k], Ops::neg(later_in[j])));
  }
  for (std::size_t b = 0; b < p.blocks.size(); ++b) {
    del.push_back(b == entry ? TruthInterval::bottom() : ops.conj(p.uee[b][e], Ops::neg(later_in[b])));
  }
}

ColumnPair avail_column(const LcmProblem& p, std::size_t e, LcmMode mode, const SolverConfig& cfg) {
  return mode == LcmMode::crisp ? avail_crisp(p, e) : avail_fuzzy(p, e, mode, cfg);
}

ColumnPair antic_column(const LcmProblem& p, std::size_t e, LcmMode mode, const SolverConfig& cfg) {
  return mode == LcmMode::crisp ? antic_crisp(p, e) : antic_fuzzy(p, e, mode, cfg);
}

ColumnPair later_column(const LcmProblem& p, std::size_t e, const Column& early, LcmMode mode,
                        const SolverConfig& cfg) {
  return mode == LcmMode::crisp ? later_crisp(p, e, early) : later_fuzzy(p, e, early, mode, cfg);
}

PredicateMatrix empty_matrix(std::size_t rows) { return PredicateMatrix(rows); }

void put_column(PredicateMatrix& m, const Column& col) {
  for (std::size_t r = 0; r < m.size(); ++r) m[r].push_back(col[r]);
}

Column get_column(const PredicateMatrix& m, std::size_t e) {
  Column col;
  col.reserve(m.size());
  for (const auto& row : m) col.push_back(row.at(e));
  return col;
}

}  // namespace

// ---------------------------------------------------------------------------
// Stages

BlockAnalysis availability(const LcmProblem& p, LcmMode mode, const SolverConfig& cfg) {
  require_valid(p, mode);
  cfg.check();
  BlockAnalysis r{empty_matrix(p.blocks.size()), empty_matrix(p.blocks.size())};
  for (std::size_t e = 0; e < p.exprs.size(); ++e) {
    const ColumnPair col = avail_column(p, e, mode, cfg);
    put_column(r.in, col.in);
    put_column(r.out, col.out);
    r.converged = r.converged && col.converged;
    r.iterations += col.iterations;
  }
  return r;
}

BlockAnalysis anticipability(const LcmProblem& p, LcmMode mode, const SolverConfig& cfg) {
  require_valid(p, mode);
  cfg.check();
  BlockAnalysis r{empty_matrix(p.blocks.size()), empty_matrix(p.blocks.size())};
  for (std::size_t e = 0; e < p.exprs.size(); ++e) {
    const ColumnPair col = antic_column(p, e, mode, cfg);
    put_column(r.in, col.in);
    put_column(r.out, col.out);
    r.converged = r.converged && col.converged;
    r.iterations += col.iterations;
  }
  return r;
}

PredicateMatrix earliest(const LcmProblem& p, const BlockAnalysis& avail, const BlockAnalysis& antic,
                         LcmMode mode, const LogicFamily& family) {
  require_valid(p, mode);
  const Ops ops = ops_for(mode, family);
  PredicateMatrix m = empty_matrix(p.edges.size());
  for (std::size_t e = 0; e < p.exprs.size(); ++e) {
    put_column(m, earliest_column(p, e, get_column(avail.out, e), get_column(antic.in, e),
                                  get_column(antic.out, e), ops));
  }
  return m;
}

LaterAnalysis later(const LcmProblem& p, const PredicateMatrix& early, LcmMode mode, const SolverConfig& cfg) {
  require_valid(p, mode);
  cfg.check();
  if (early.size() != p.edges.size()) throw DimensionMismatch("earliest matrix must have one row per edge");
  LaterAnalysis r{empty_matrix(p.blocks.size()), empty_matrix(p.edges.size())};
  for (std::size_t e = 0; e < p.exprs.size(); ++e) {
    const ColumnPair col = later_column(p, e, get_column(early, e), mode, cfg);
    put_column(r.later_in, col.in);
    put_column(r.later_out, col.out);
    r.converged = r.converged && col.converged;
    r.iterations += col.iterations;
  }
  return r;
}

Placement insert_delete(const LcmProblem& p, const LaterAnalysis& l, LcmMode mode, const LogicFamily& family) {
  require_valid(p, mode);
  const Ops ops = ops_for(mode, family);
  Placement r{empty_matrix(p.edges.size()), empty_matrix(p.blocks.size())};
  for (std::size_t e = 0; e < p.exprs.size(); ++e) {
    Column ins, del;
    placement_column(p, e, get_column(l.later_in, e), get_column(l.later_out, e), ops, ins, del);
    put_column(r.insert, ins);
    put_column(r.del, del);
  }
  return r;
}

namespace {

struct ExprResult {
  ColumnPair av, an, later;
  Column early, insert, del;
};

ExprResult run_expression(const LcmProblem& p, std::size_t e, LcmMode mode, const SolverConfig& cfg) {
  const Ops ops = ops_for(mode, cfg.family);
  ExprResult r;
  r.av = avail_column(p, e, mode, cfg);
  r.an = antic_column(p, e, mode, cfg);
  r.early = earliest_column(p, e, r.av.out, r.an.in, r.an.out, ops);
  r.later = later_column(p, e, r.early, mode, cfg);
  placement_column(p, e, r.later.in, r.later.out, ops, r.insert, r.del);
  return r;
}

}  // namespace

LcmResult lcm_pipeline(const LcmProblem& p, LcmMode mode, const SolverConfig& cfg, unsigned jobs) {
  require_valid(p, mode);
  cfg.check();
  const std::size_t n = p.exprs.size();
  std::vector<ExprResult> per_expr(n);

  const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(n)));
  if (workers <= 1) {
    for (std::size_t e = 0; e < n; ++e) per_expr[e] = run_expression(p, e, mode, cfg);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::future<void>> futures;
    for (unsigned w = 0; w < workers; ++w) {
      futures.push_back(std::async(std::launch::async, [&] {
        for (std::size_t e = next++; e < n; e = next++) per_expr[e] = run_expression(p, e, mode, cfg);
      }));
    }
    for (auto& f : futures) f.get();
  }

  LcmResult r;
  r.mode = mode;
  const std::size_t nb = p.blocks.size();
  const std::size_t ne = p.edges.size();
  r.av_in = r.av_out = r.an_in = r.an_out = r.later_in = r.del = empty_matrix(nb);
  r.earliest = r.later_out = r.insert = empty_matrix(ne);
  for (const auto& x : per_expr) {
    put_column(r.av_in, x.av.in);
    put_column(r.av_out, x.av.out);
    put_column(r.an_in, x.an.in);
    put_column(r.an_out, x.an.out);
    put_column(r.earliest, x.early);
    put_column(r.later_in, x.later.in);
    put_column(r.later_out, x.later.out);
    put_column(r.insert, x.insert);
    put_column(r.del, x.del);
    r.converged = r.converged && x.av.converged && x.an.converged && x.later.converged;
    r.iterations += x.av.iterations + x.an.iterations + x.later.iterations;
  }
  return r;
}

std::vector<TruthInterval> join_targets(const std::vector<std::vector<TruthInterval>>& rows) {
  if (rows.empty()) throw ValueError("join_targets needs at least one row");
  std::vector<TruthInterval> out = rows.front();
  for (const auto& row : rows) {
    if (row.size() != out.size()) throw WidthMismatch("join_targets: rows differ in width");
    for (std::size_t i = 0; i < row.size(); ++i) {
      out[i] = TruthInterval(std::min(out[i].lo(), row[i].lo()), std::max(out[i].hi(), row[i].hi()));
    }
  }
  return out;
}

}  // namespace fuzzyflow
