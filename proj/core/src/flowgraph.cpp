#include "fuzzyflow/flowgraph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <sstream>

#include "fuzzyflow/error.hpp"
#include "json_util.hpp"

namespace fuzzyflow {

FlowGraph::FlowGraph(std::vector<FlowNode> nodes, std::vector<FlowEdge> edges, std::string start,
                     Valuation<TruthInterval> seed)
    : nodes_(std::move(nodes)), edges_(std::move(edges)), start_(std::move(start)), seed_(std::move(seed)) {}

std::vector<std::string> FlowGraph::properties() const {
  std::set<std::string> props;
  for (const auto& [name, _] : seed_) props.insert(name);
  for (const auto& node : nodes_) {
    for (const auto& [name, _] : node.transfer) props.insert(name);
    if (node.seed) {
      for (const auto& [name, _] : *node.seed) props.insert(name);
    }
  }
  return {props.begin(), props.end()};
}

const FlowNode* FlowGraph::find(std::string_view id) const {
  auto it = std::find_if(nodes_.begin(), nodes_.end(), [id](const FlowNode& n) { return n.id == id; });
  return it == nodes_.end() ? nullptr : &*it;
}

std::string_view to_string(Violation::Kind kind) {
  switch (kind) {
    case Violation::Kind::duplicate_node: return "duplicate-node";
    case Violation::Kind::missing_start: return "missing-start";
    case Violation::Kind::dangling_edge: return "dangling-edge";
    case Violation::Kind::bad_weight: return "bad-weight";
    case Violation::Kind::weight_sum: return "weight-sum";
    case Violation::Kind::missing_seed: return "missing-seed";
    case Violation::Kind::unbound_variable: return "unbound-variable";
    case Violation::Kind::start_incoming: return "start-incoming";
    case Violation::Kind::unreachable: return "unreachable";
  }
  return "unknown";
}

std::string Violation::to_string() const {
  std::ostringstream os;
  os << (is_warning() ? "warning" : "error") << ": " << fuzzyflow::to_string(kind);
  if (!node.empty()) os << " at '" << node << "'";
  if (!detail.empty()) os << ": " << detail;
  return os.str();
}

namespace {

void check_seed_total(const std::string& node, const Valuation<TruthInterval>& seed,
                      const std::vector<std::string>& props, std::vector<Violation>& out) {
  for (const auto& p : props) {
    if (!seed.contains(p)) {
      out.push_back({Violation::Kind::missing_seed, node, "no seed value for property '" + p + "'"});
    }
  }
}

}  // namespace

std::vector<Violation> validate(const FlowGraph& g) {
  std::vector<Violation> out;
  const auto props = g.properties();

  std::set<std::string, std::less<>> ids;
  for (const auto& node : g.nodes()) {
    if (node.id.empty() || !ids.insert(node.id).second) {
      out.push_back({Violation::Kind::duplicate_node, node.id, "node ids must be unique and nonempty"});
    }
  }
  const bool has_start = ids.contains(g.start());
  if (!has_start) {
    out.push_back({Violation::Kind::missing_start, g.start(), "start node does not exist"});
  }

  std::map<std::string, double, std::less<>> weight_sum;
  std::map<std::string, std::vector<std::string>, std::less<>> successors;
  for (const auto& e : g.edges()) {
    const bool ok_from = ids.contains(e.from);
    const bool ok_to = ids.contains(e.to);
    if (!ok_from || !ok_to) {
      out.push_back({Violation::Kind::dangling_edge, ok_from ? e.to : e.from,
                     "edge " + e.from + " -> " + e.to + " names a missing node"});
      continue;
    }
    if (!std::isfinite(e.alpha) || e.alpha < 0.0 || e.alpha > 1.0) {
      out.push_back({Violation::Kind::bad_weight, e.to,
                     "edge " + e.from + " -> " + e.to + " has weight outside [0,1]", e.alpha});
    }
    successors[e.from].push_back(e.to);
    if (e.to == g.start()) {
      out.push_back({Violation::Kind::start_incoming, e.to,
                     "edge from " + e.from + " into the start node is ignored"});
      continue;
    }
    weight_sum[e.to] += e.alpha;
  }

  if (has_start) check_seed_total(g.start(), g.seed(), props, out);

  for (const auto& node : g.nodes()) {
    if (node.id == g.start()) continue;
    if (node.seed) {
      check_seed_total(node.id, *node.seed, props, out);
      continue;
    }
    auto it = weight_sum.find(node.id);
    if (it == weight_sum.end()) {
      out.push_back({Violation::Kind::missing_seed, node.id,
                     "node has no incoming edges and no seed"});
      continue;
    }
    if (std::abs(it->second - 1.0) > kWeightSumTolerance) {
      std::ostringstream os;
      os.precision(17);
      os << "incoming weights sum to " << it->second;
      out.push_back({Violation::Kind::weight_sum, node.id, os.str(), it->second});
    }
    for (const auto& [prop, formula] : node.transfer) {
      for (const auto& v : free_vars(formula)) {
        if (v != kInputAlias && !std::binary_search(props.begin(), props.end(), v)) {
          out.push_back({Violation::Kind::unbound_variable, node.id,
                         "transfer of '" + prop + "' reads unknown property '" + v + "'"});
        }
      }
    }
  }

  if (has_start) {
    std::set<std::string, std::less<>> seen{g.start()};
    std::deque<std::string> queue{g.start()};
    while (!queue.empty()) {
      const std::string id = queue.front();
      queue.pop_front();
      for (const auto& next : successors[id]) {
        if (seen.insert(next).second) queue.push_back(next);
      }
    }
    for (const auto& node : g.nodes()) {
      if (!seen.contains(node.id) && !node.seed) {
        out.push_back({Violation::Kind::unreachable, node.id, "not reachable from the start node"});
      }
    }
  }
  return out;
}

bool is_valid(const std::vector<Violation>& violations) {
  return std::all_of(violations.begin(), violations.end(), [](const Violation& v) { return v.is_warning(); });
}

void require_valid(const FlowGraph& g) {
  const auto violations = validate(g);
  if (is_valid(violations)) return;
  std::string message = "invalid flow graph";
  for (const auto& v : violations) {
    if (!v.is_warning()) message += "\n  " + v.to_string();
  }
  throw ValidationError(message);
}

FlowGraph reverse(const FlowGraph& g, std::string_view new_start, Valuation<TruthInterval> new_seed,
                  const std::map<std::pair<std::string, std::string>, double>& overrides) {
  if (g.find(new_start) == nullptr) {
    throw InvalidStart("reverse: no node named '" + std::string(new_start) + "'");
  }
  std::vector<FlowEdge> edges;
  edges.reserve(g.edges().size());
  for (const auto& e : g.edges()) {
    FlowEdge flipped{e.to, e.from, e.alpha};
    if (auto it = overrides.find({flipped.from, flipped.to}); it != overrides.end()) {
      flipped.alpha = it->second;
    }
    edges.push_back(std::move(flipped));
  }
  std::vector<FlowNode> nodes = g.nodes();
  for (auto& node : nodes) {
    if (node.id == new_start) node.seed.reset();
  }
  FlowGraph out(std::move(nodes), std::move(edges), std::string(new_start), std::move(new_seed));
  require_valid(out);
  return out;
}

// ---------------------------------------------------------------------------
// JSON

FlowProblem flow_problem_from_json(const nlohmann::json& doc) {
  using namespace detail;
  check_keys(doc, {"logic", "start", "seed", "nodes", "edges"}, "problem");

  FlowProblem problem;
  if (auto it = doc.find("logic"); it != doc.end()) {
    try {
      problem.logic = LogicFamily::parse(read_string(*it, "logic"));
    } catch (const ValueError& e) {
      schema_error("logic", e.what());
    }
  }
  const std::string start = read_string(require(doc, "start", "problem"), "start");
  Valuation<TruthInterval> seed;
  if (auto it = doc.find("seed"); it != doc.end()) seed = read_valuation(*it, "seed");

  std::vector<FlowNode> nodes;
  const auto& jnodes = require(doc, "nodes", "problem");
  if (!jnodes.is_array()) schema_error("nodes", "expected an array");
  for (std::size_t i = 0; i < jnodes.size(); ++i) {
    const std::string ctx = "nodes[" + std::to_string(i) + "]";
    const auto& jn = jnodes[i];
    check_keys(jn, {"id", "transfer", "seed"}, ctx);
    FlowNode node;
    node.id = read_string(require(jn, "id", ctx), ctx + ".id");
    if (auto it = jn.find("transfer"); it != jn.end()) {
      if (!it->is_object()) schema_error(ctx + ".transfer", "expected an object");
      for (auto t = it->begin(); t != it->end(); ++t) {
        node.transfer.emplace(t.key(), read_formula(t.value(), ctx + ".transfer." + t.key()));
      }
    }
    if (auto it = jn.find("seed"); it != jn.end()) node.seed = read_valuation(*it, ctx + ".seed");
    nodes.push_back(std::move(node));
  }

  std::vector<FlowEdge> edges;
  const auto& jedges = require(doc, "edges", "problem");
  if (!jedges.is_array()) schema_error("edges", "expected an array");
  for (std::size_t i = 0; i < jedges.size(); ++i) {
    const std::string ctx = "edges[" + std::to_string(i) + "]";
    const auto& je = jedges[i];
    check_keys(je, {"from", "to", "alpha"}, ctx);
    FlowEdge e;
    e.from = read_string(require(je, "from", ctx), ctx + ".from");
    e.to = read_string(require(je, "to", ctx), ctx + ".to");
    if (auto it = je.find("alpha"); it != je.end()) e.alpha = read_number(*it, ctx + ".alpha");
    edges.push_back(std::move(e));
  }

  problem.graph = FlowGraph(std::move(nodes), std::move(edges), start, std::move(seed));
  return problem;
}

FlowProblem parse_flow_problem(std::string_view json_text) {
  return flow_problem_from_json(detail::parse_document(json_text));
}

nlohmann::json to_json(const FlowProblem& problem) {
  const FlowGraph& g = problem.graph;
  nlohmann::json doc;
  doc["logic"] = problem.logic.name();
  doc["start"] = g.start();
  doc["seed"] = detail::valuation_to_json(g.seed());
  doc["nodes"] = nlohmann::json::array();
  for (const auto& node : g.nodes()) {
    nlohmann::json jn;
    jn["id"] = node.id;
    nlohmann::json transfer = nlohmann::json::object();
    for (const auto& [prop, f] : node.transfer) transfer[prop] = to_string(f);
    jn["transfer"] = std::move(transfer);
    if (node.seed) jn["seed"] = detail::valuation_to_json(*node.seed);
    doc["nodes"].push_back(std::move(jn));
  }
  doc["edges"] = nlohmann::json::array();
  for (const auto& e : g.edges()) {
    doc["edges"].push_back({{"from", e.from}, {"to", e.to}, {"alpha", e.alpha}});
  }
  return doc;
}

}  // namespace fuzzyflow
