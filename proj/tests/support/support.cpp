#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

namespace fftest {

using namespace fuzzyflow;

std::string data_path(const std::string& name) { return std::string(FUZZYFLOW_DATA_DIR) + "/" + name; }

std::string read_data(const std::string& name) {
  std::ifstream in(data_path(name));
  if (!in) throw std::runtime_error("missing data file " + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

std::vector<LogicFamily> frank_families() {
  return {LogicFamily::min_max(), LogicFamily::product(), LogicFamily::lukasiewicz(), LogicFamily::frank(0.01),
          LogicFamily::frank(0.5),  LogicFamily::frank(2.0),  LogicFamily::frank(50.0),      LogicFamily::frank(1e6)};
}

LogicFamily random_frank_family(Rng& rng) {
  switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
    case 0: return LogicFamily::min_max();
    case 1: return LogicFamily::product();
    case 2: return LogicFamily::lukasiewicz();
    default: {
      // log-uniform over (1e-4, 1e4), away from 1
      double s = std::exp(uniform(rng, std::log(1e-4), std::log(1e4)));
      if (std::abs(s - 1.0) < 1e-3) s = 2.0;
      return LogicFamily::frank(s);
    }
  }
}

Formula random_formula(Rng& rng, const std::vector<std::string>& vars, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 4);
  const int k = pick(rng);
  if (k == 0 || vars.empty()) {
    if (vars.empty() || std::bernoulli_distribution(0.3)(rng)) return Formula::constant(uniform(rng));
  }
  if (k <= 1) {
    return Formula::var(vars[std::uniform_int_distribution<std::size_t>(0, vars.size() - 1)(rng)]);
  }
  if (k == 2) return !random_formula(rng, vars, depth - 1);
  Formula a = random_formula(rng, vars, depth - 1);
  Formula b = random_formula(rng, vars, depth - 1);
  return k == 3 ? (a & b) : (a | b);
}

namespace {

Formula linear_formula(Rng& rng, std::vector<std::string>& pool, int depth) {
  const int k = std::uniform_int_distribution<int>(0, depth <= 0 ? 1 : 4)(rng);
  if (k <= 1) {
    if (pool.empty() || (k == 0 && std::bernoulli_distribution(0.3)(rng))) return Formula::constant(uniform(rng));
    const std::string name = pool.back();
    pool.pop_back();
    return Formula::var(name);
  }
  if (k == 2) return !linear_formula(rng, pool, depth - 1);
  Formula a = linear_formula(rng, pool, depth - 1);
  Formula b = linear_formula(rng, pool, depth - 1);
  return k == 3 ? (a & b) : (a | b);
}

}  // namespace

Formula random_linear_formula(Rng& rng, const std::vector<std::string>& vars, int depth) {
  std::vector<std::string> pool = vars;
  std::shuffle(pool.begin(), pool.end(), rng);
  return linear_formula(rng, pool, depth);
}

FlowGraph random_flow_graph(Rng& rng, int n, const std::vector<std::string>& props, bool linear) {
  // "In" aliases the property being computed, so a linear transfer must not
  // see both names.
  std::vector<std::string> vars = props;
  if (!linear) vars.emplace_back(kInputAlias);
  std::vector<FlowNode> nodes;
  std::vector<FlowEdge> edges;
  for (int i = 0; i < n; ++i) {
    FlowNode node;
    node.id = "n" + std::to_string(i);
    if (i > 0) {
      for (const auto& prop : props) {
        node.transfer.emplace(prop, linear ? random_linear_formula(rng, vars, 3) : random_formula(rng, vars, 3));
      }
      // The first incoming edge comes from an earlier node so everything is
      // reachable from the start.
      const int count = std::uniform_int_distribution<int>(1, 3)(rng);
      std::vector<double> w;
      std::vector<int> from;
      for (int k = 0; k < count; ++k) {
        from.push_back(k == 0 ? std::uniform_int_distribution<int>(0, i - 1)(rng)
                              : std::uniform_int_distribution<int>(0, n - 1)(rng));
        w.push_back(uniform(rng, 0.05, 1.0));
      }
      double total = 0.0;
      for (double x : w) total += x;
      for (int k = 0; k < count; ++k) {
        edges.push_back({"n" + std::to_string(from[static_cast<std::size_t>(k)]), node.id,
                         w[static_cast<std::size_t>(k)] / total});
      }
    }
    nodes.push_back(std::move(node));
  }
  Valuation<TruthInterval> seed;
  for (const auto& prop : props) seed.emplace(prop, TruthInterval(TruthValue(uniform(rng))));
  return FlowGraph(std::move(nodes), std::move(edges), "n0", std::move(seed));
}

LcmProblem random_crisp_cfg(Rng& rng, int nb, int ne) {
  LcmProblem p;
  for (int b = 0; b < nb; ++b) p.blocks.push_back("B" + std::to_string(b));
  for (int e = 0; e < ne; ++e) p.exprs.push_back("e" + std::to_string(e));
  p.entry = p.blocks.front();
  p.exit = p.blocks.back();
  std::set<std::pair<int, int>> edges;
  for (int b = 0; b + 1 < nb; ++b) edges.insert({b, b + 1});
  const int extra = std::uniform_int_distribution<int>(0, nb)(rng);
  for (int k = 0; k < extra && nb > 2; ++k) {
    const int from = std::uniform_int_distribution<int>(0, nb - 2)(rng);
    const int to = std::uniform_int_distribution<int>(1, nb - 1)(rng);
    edges.insert({from, to});
  }
  for (const auto& [from, to] : edges) {
    p.edges.push_back({p.blocks[static_cast<std::size_t>(from)], p.blocks[static_cast<std::size_t>(to)], 1.0, 1.0});
  }
  std::bernoulli_distribution bit(0.4);
  for (auto* m : {&p.dee, &p.uee, &p.kill}) {
    m->assign(static_cast<std::size_t>(nb), {});
    for (auto& row : *m) {
      for (int e = 0; e < ne; ++e) row.push_back(bit(rng) ? TruthInterval::top() : TruthInterval::bottom());
    }
  }
  p.mode = LcmMode::crisp;
  return p;
}

LcmProblem diffpcm(double prob, double n) {
  LcmProblem p = parse_lcm_problem(read_data("diffpcm_t1.json"));
  for (auto& e : p.edges) {
    const std::string key = e.from + "->" + e.to;
    if (key == "B0->B1") e.alpha = 1.0 / n;
    if (key == "B4->B1") e.alpha = (n - 1.0) / n;
    if (key == "B2->B4") e.alpha = prob, e.beta = prob;
    if (key == "B3->B4") e.alpha = 1.0 - prob;
    if (key == "B2->B3") e.beta = 1.0 - prob;
    if (key == "B1->B2") e.beta = (n - 1.0) / n;
    if (key == "B1->B5") e.beta = 1.0 / n;
  }
  return p;
}

namespace {

bool bit(const TruthInterval& v) { return v.lo().value() == 1.0; }

// Reachable (node, bit) states from `start` under `next`, which lists the
// successor states of a state.
std::set<std::pair<std::size_t, bool>> reach(
    std::pair<std::size_t, bool> start,
    const std::function<std::vector<std::pair<std::size_t, bool>>(std::size_t, bool)>& next) {
  std::set<std::pair<std::size_t, bool>> seen{start};
  std::queue<std::pair<std::size_t, bool>> work;
  work.push(start);
  while (!work.empty()) {
    const auto [node, b] = work.front();
    work.pop();
    for (const auto& s : next(node, b)) {
      if (seen.insert(s).second) work.push(s);
    }
  }
  return seen;
}

}  // namespace

CrispOracle crisp_oracle(const LcmProblem& p) {
  const std::size_t nb = p.blocks.size();
  const std::size_t ne = p.exprs.size();
  const std::size_t nk = p.edges.size();
  std::map<std::string, std::size_t> idx;
  for (std::size_t b = 0; b < nb; ++b) idx[p.blocks[b]] = b;
  std::vector<std::size_t> from(nk), to(nk);
  for (std::size_t k = 0; k < nk; ++k) {
    from[k] = idx.at(p.edges[k].from);
    to[k] = idx.at(p.edges[k].to);
  }
  const std::size_t entry = idx.at(p.entry);
  const std::size_t exit = idx.at(p.exit);

  CrispOracle o;
  for (auto* m : {&o.av_in, &o.av_out, &o.an_in, &o.an_out, &o.later_in, &o.del}) m->assign(nb, std::vector<bool>(ne));
  for (auto* m : {&o.earliest, &o.later_out, &o.insert}) m->assign(nk, std::vector<bool>(ne));

  for (std::size_t e = 0; e < ne; ++e) {
    // Availability: state = (block, available at block entry).
    const auto av_through = [&](std::size_t b, bool in) { return bit(p.dee[b][e]) || (in && !bit(p.kill[b][e])); };
    const auto av = reach({entry, false}, [&](std::size_t b, bool in) {
      std::vector<std::pair<std::size_t, bool>> out;
      for (std::size_t k = 0; k < nk; ++k) {
        if (from[k] == b) out.push_back({to[k], av_through(b, in)});
      }
      return out;
    });
    // Anticipability: state = (block, anticipated at block exit), backwards.
    const auto an_through = [&](std::size_t b, bool out) { return bit(p.uee[b][e]) || (out && !bit(p.kill[b][e])); };
    const auto an = reach({exit, false}, [&](std::size_t b, bool out) {
      std::vector<std::pair<std::size_t, bool>> res;
      for (std::size_t k = 0; k < nk; ++k) {
        if (to[k] == b) res.push_back({from[k], an_through(b, out)});
      }
      return res;
    });
    for (std::size_t b = 0; b < nb; ++b) {
      o.av_in[b][e] = !av.count({b, false});
      o.av_out[b][e] = true;
      for (bool in : {false, true}) {
        if (av.count({b, in})) o.av_out[b][e] = o.av_out[b][e] && av_through(b, in);
      }
      o.an_out[b][e] = !an.count({b, false});
      o.an_in[b][e] = true;
      for (bool out : {false, true}) {
        if (an.count({b, out})) o.an_in[b][e] = o.an_in[b][e] && an_through(b, out);
      }
    }
    for (std::size_t k = 0; k < nk; ++k) {
      const std::size_t i = from[k], j = to[k];
      bool v = o.an_in[j][e] && !o.av_out[i][e];
      if (i != entry) v = v && (bit(p.kill[i][e]) || !o.an_out[i][e]);
      o.earliest[k][e] = v;
    }
    // Later: state = (block, later at block entry).
    const auto later_edge = [&](std::size_t k, bool in) {
      return o.earliest[k][e] || (in && !bit(p.uee[from[k]][e]));
    };
    const auto lt = reach({entry, false}, [&](std::size_t b, bool in) {
      std::vector<std::pair<std::size_t, bool>> out;
      for (std::size_t k = 0; k < nk; ++k) {
        if (from[k] == b) out.push_back({to[k], later_edge(k, in)});
      }
      return out;
    });
    for (std::size_t b = 0; b < nb; ++b) o.later_in[b][e] = !lt.count({b, false});
    for (std::size_t k = 0; k < nk; ++k) {
      bool v = true;
      for (bool in : {false, true}) {
        if (lt.count({from[k], in})) v = v && later_edge(k, in);
      }
      o.later_out[k][e] = v;
      o.insert[k][e] = v && !o.later_in[to[k]][e];
    }
    for (std::size_t b = 0; b < nb; ++b) o.del[b][e] = b != entry && bit(p.uee[b][e]) && !o.later_in[b][e];
  }
  return o;
}

std::vector<double> normal_equations(const std::vector<std::vector<double>>& a, const std::vector<double>& y) {
  const std::size_t n = a.front().size();
  std::vector<std::vector<double>> m(n, std::vector<double>(n + 1, 0.0));
  for (std::size_t r = 0; r < a.size(); ++r) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) m[i][j] += a[r][i] * a[r][j];
      m[i][n] += a[r][i] * y[r];
    }
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
    }
    std::swap(m[c], m[piv]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = m[r][c] / m[c][c];
      for (std::size_t k = c; k <= n; ++k) m[r][k] -= f * m[c][k];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = m[i][n] / m[i][i];
  return x;
}

std::vector<std::vector<double>> design_matrix(const AnfisModel& m, const std::vector<std::vector<double>>& xs) {
  std::vector<std::vector<double>> a;
  for (const auto& x : xs) {
    // Recomputed from the membership functions, not taken from predict().
    std::vector<double> w;
    double total = 0.0;
    for (const auto& r : m.rules) {
      double f = 1.0;
      for (std::size_t k = 0; k < m.dim; ++k) {
        const auto& mf = r.antecedents[k];
        double mu = 0.0;
        if (x[k] == mf.b) {
          mu = 1.0;
        } else if (x[k] > mf.a && x[k] < mf.b) {
          mu = (x[k] - mf.a) / (mf.b - mf.a);
        } else if (x[k] > mf.b && x[k] < mf.c) {
          mu = (mf.c - x[k]) / (mf.c - mf.b);
        }
        f = m.and_op == AndOp::min ? std::min(f, mu) : f * mu;
      }
      w.push_back(f);
      total += f;
    }
    std::vector<double> row;
    for (double wi : w) {
      row.push_back(wi / total);
      for (double xk : x) row.push_back(wi / total * xk);
    }
    a.push_back(std::move(row));
  }
  return a;
}

AnfisModel paper_model(AndOp op) {
  AnfisModel m;
  m.dim = 2;
  m.and_op = op;
  m.rules.push_back({{{0.35, 0.5, 0.75}, {0.05, 0.15, 0.25}}, {0.0, 0.2, -0.43}});
  m.rules.push_back({{{0.5, 0.85, 0.9}, {0.15, 0.65, 0.8}}, {0.5, 0.0, 0.1}});
  return m;
}

}  // namespace fftest
