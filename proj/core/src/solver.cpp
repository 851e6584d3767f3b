#include "fuzzyflow/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fuzzyflow/error.hpp"
#include "json_util.hpp"

namespace fuzzyflow {

void SolverConfig::check() const {
  if (!(epsilon > 0.0)) throw ValueError("epsilon must be positive");
  if (max_iters == 0) throw ValueError("max_iters must be at least 1");
  if (snap_bits && (*snap_bits < 1 || *snap_bits > 1023)) {
    throw ValueError("snap bits must be in [1, 1023]");
  }
}

namespace {

template <class T>
struct Accumulator;

template <>
struct Accumulator<TruthValue> {
  double sum = 0.0;
  void add(double w, TruthValue v) { sum += w * v.value(); }
  // Weight sums may exceed 1 by the validation tolerance.
  TruthValue get() const { return TruthValue(std::clamp(sum, 0.0, 1.0)); }
};

template <>
struct Accumulator<TruthInterval> {
  double lo = 0.0;
  double hi = 0.0;
  void add(double w, const TruthInterval& v) {
    lo += w * v.lo().value();
    hi += w * v.hi().value();
  }
  TruthInterval get() const {
    return TruthInterval(std::clamp(lo, 0.0, 1.0), std::clamp(hi, 0.0, 1.0));
  }
};

double distance(TruthValue a, TruthValue b) { return std::abs(a.value() - b.value()); }
double distance(const TruthInterval& a, const TruthInterval& b) {
  return std::abs(a.lo().value() - b.lo().value()) + std::abs(a.hi().value() - b.hi().value());
}

TruthValue from_seed(const TruthInterval& v, const std::string& where) {
  if (!v.degenerate()) throw ValueError("interval seed at '" + where + "' in scalar mode");
  return v.lo();
}

template <class T>
T seed_value(const TruthInterval& v, const std::string& where) {
  if constexpr (std::is_same_v<T, TruthValue>) {
    return from_seed(v, where);
  } else {
    (void)where;
    return v;
  }
}

// The flow graph flattened into index form. State is a dense node-major
// array of nodes().size() * properties().size() values.
template <class T>
class Compiled {
 public:
  explicit Compiled(const FlowGraph& g) : props_(g.properties()) {
    require_valid(g);
    const auto& nodes = g.nodes();
    for (std::size_t i = 0; i < nodes.size(); ++i) index_.emplace(nodes[i].id, i);
    nodes_.resize(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const FlowNode& src = nodes[i];
      Node& n = nodes_[i];
      n.id = src.id;
      const Valuation<TruthInterval>* seed =
          src.id == g.start() ? &g.seed() : (src.seed ? &*src.seed : nullptr);
      if (seed != nullptr) {
        n.fixed = true;
        for (const auto& p : props_) n.seed.push_back(seed_value<T>(seed->at(p), src.id));
        continue;
      }
      for (std::size_t p = 0; p < props_.size(); ++p) {
        auto it = src.transfer.find(props_[p]);
        const Formula f = it == src.transfer.end() ? Formula::var(std::string(kInputAlias)) : it->second;
        n.transfer.emplace_back(f, [this, p](std::string_view name) -> int {
          if (name == kInputAlias) return static_cast<int>(p);
          auto pos = std::lower_bound(props_.begin(), props_.end(), name);
          if (pos == props_.end() || *pos != name) return -1;
          return static_cast<int>(pos - props_.begin());
        });
      }
    }
    for (const auto& e : g.edges()) {
      const std::size_t to = index_.at(e.to);
      if (nodes_[to].fixed) continue;
      nodes_[to].incoming.emplace_back(index_.at(e.from), e.alpha);
    }
  }

  std::size_t width() const { return props_.size(); }

  std::vector<T> initial() const {
    std::vector<T> s(nodes_.size() * width());
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (nodes_[i].fixed) std::copy(nodes_[i].seed.begin(), nodes_[i].seed.end(), s.begin() + i * width());
    }
    return s;
  }

  std::vector<T> flatten(const GlobalState<T>& state) const {
    std::vector<T> s(nodes_.size() * width());
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      auto node_it = state.find(nodes_[i].id);
      if (node_it == state.end()) throw UnboundVariable(nodes_[i].id);
      for (std::size_t p = 0; p < width(); ++p) {
        auto it = node_it->second.find(props_[p]);
        if (it == node_it->second.end()) throw UnboundVariable(props_[p]);
        s[i * width() + p] = it->second;
      }
    }
    return s;
  }

  GlobalState<T> expand(const std::vector<T>& s) const {
    GlobalState<T> out;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      Valuation<T>& v = out[nodes_[i].id];
      for (std::size_t p = 0; p < width(); ++p) v.emplace(props_[p], s[i * width() + p]);
    }
    return out;
  }

  void step(const LogicFamily& family, const std::vector<T>& in, std::vector<T>& out) const {
    const std::size_t w = width();
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const Node& n = nodes_[i];
      if (n.fixed) {
        std::copy(n.seed.begin(), n.seed.end(), out.begin() + i * w);
        continue;
      }
      for (std::size_t p = 0; p < w; ++p) {
        Accumulator<T> acc;
        for (const auto& [from, alpha] : n.incoming) {
          const std::span<const T> pred(in.data() + from * w, w);
          acc.add(alpha, n.transfer[p].run(family, pred));
        }
        out[i * w + p] = acc.get();
      }
    }
  }

 private:
  struct Node {
    std::string id;
    bool fixed = false;
    std::vector<T> seed;
    std::vector<CompiledFormula> transfer;
    std::vector<std::pair<std::size_t, double>> incoming;
  };

  std::vector<std::string> props_;
  std::map<std::string, std::size_t, std::less<>> index_;
  std::vector<Node> nodes_;
};

template <class T>
double flat_distance(const std::vector<T>& a, const std::vector<T>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += distance(a[i], b[i]);
  return d;
}

template <class T>
GlobalState<T> step_impl(const FlowGraph& g, const GlobalState<T>& s, const LogicFamily& family) {
  const Compiled<T> compiled(g);
  const std::vector<T> in = compiled.flatten(s);
  std::vector<T> out(in.size());
  compiled.step(family, in, out);
  return compiled.expand(out);
}

template <class T>
SolveReport<T> solve_impl(const FlowGraph& g, const SolverConfig& cfg,
                          const std::optional<GlobalState<T>>& initial) {
  cfg.check();
  const Compiled<T> compiled(g);
  std::vector<T> current = initial ? compiled.flatten(*initial) : compiled.initial();
  std::vector<T> next(current.size());

  SolveReport<T> report;
  while (report.iterations < cfg.max_iters) {
    compiled.step(cfg.family, current, next);
    if (cfg.snap_bits) {
      for (auto& v : next) v = quantize(v, *cfg.snap_bits);
    }
    const double residual = flat_distance(current, next);
    report.residual_trace.push_back(residual);
    ++report.iterations;
    current.swap(next);
    if (residual < cfg.epsilon) {
      report.converged = true;
      break;
    }
  }
  if (cfg.record_error_trace) {
    // Replay the same iteration and measure each iterate against the last.
    std::vector<T> replay = initial ? compiled.flatten(*initial) : compiled.initial();
    for (std::size_t k = 0; k < report.iterations; ++k) {
      compiled.step(cfg.family, replay, next);
      if (cfg.snap_bits) {
        for (auto& v : next) v = quantize(v, *cfg.snap_bits);
      }
      replay.swap(next);
      report.error_trace.push_back(flat_distance(replay, current));
    }
  }
  report.final = compiled.expand(current);
  return report;
}

template <class T>
double l1_impl(const GlobalState<T>& a, const GlobalState<T>& b) {
  if (a.size() != b.size()) throw ValueError("states cover different nodes");
  double d = 0.0;
  for (const auto& [node, va] : a) {
    auto it = b.find(node);
    if (it == b.end() || it->second.size() != va.size()) throw ValueError("states cover different nodes");
    for (const auto& [prop, x] : va) {
      auto jt = it->second.find(prop);
      if (jt == it->second.end()) throw ValueError("states cover different properties");
      d += distance(x, jt->second);
    }
  }
  return d;
}

template <class T>
nlohmann::json report_json(const SolveReport<T>& r) {
  nlohmann::json doc;
  doc["converged"] = r.converged;
  doc["iterations"] = r.iterations;
  doc["residual_trace"] = r.residual_trace;
  if (!r.error_trace.empty()) doc["error_trace"] = r.error_trace;
  nlohmann::json final = nlohmann::json::object();
  for (const auto& [node, valuation] : r.final) {
    nlohmann::json jv = nlohmann::json::object();
    for (const auto& [prop, value] : valuation) {
      if constexpr (std::is_same_v<T, TruthValue>) {
        jv[prop] = value.value();
      } else {
        jv[prop] = nlohmann::json::array({value.lo().value(), value.hi().value()});
      }
    }
    final[node] = std::move(jv);
  }
  doc["final"] = std::move(final);
  return doc;
}

template <class T>
GlobalState<T> initial_impl(const FlowGraph& g) {
  const Compiled<T> compiled(g);
  return compiled.expand(compiled.initial());
}

}  // namespace

GlobalState<TruthValue> step(const FlowGraph& g, const GlobalState<TruthValue>& s,
                             const LogicFamily& family) {
  return step_impl(g, s, family);
}

GlobalState<TruthInterval> step(const FlowGraph& g, const GlobalState<TruthInterval>& s,
                                const LogicFamily& family) {
  return step_impl(g, s, family);
}

GlobalState<TruthValue> initial_state(const FlowGraph& g) { return initial_impl<TruthValue>(g); }
GlobalState<TruthInterval> initial_interval_state(const FlowGraph& g) {
  return initial_impl<TruthInterval>(g);
}

SolveReport<TruthValue> solve(const FlowGraph& g, const SolverConfig& cfg,
                              const std::optional<GlobalState<TruthValue>>& initial) {
  return solve_impl(g, cfg, initial);
}

SolveReport<TruthInterval> solve_interval(const FlowGraph& g, const SolverConfig& cfg,
                                          const std::optional<GlobalState<TruthInterval>>& initial) {
  return solve_impl(g, cfg, initial);
}

double l1_distance(const GlobalState<TruthValue>& a, const GlobalState<TruthValue>& b) {
  return l1_impl(a, b);
}

double l1_distance(const GlobalState<TruthInterval>& a, const GlobalState<TruthInterval>& b) {
  return l1_impl(a, b);
}

nlohmann::json to_json(const SolveReport<TruthValue>& report) { return report_json(report); }
nlohmann::json to_json(const SolveReport<TruthInterval>& report) { return report_json(report); }

}  // namespace fuzzyflow
