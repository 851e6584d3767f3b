#include <algorithm>
#include <cstdio>
#include <sstream>

#include "fuzzyflow/error.hpp"
#include "fuzzyflow/lcm.hpp"
#include "json_util.hpp"

namespace fuzzyflow {

namespace {

using nlohmann::json;

std::vector<TruthInterval> read_row(const json& j, std::size_t width, const std::string& ctx) {
  using namespace detail;
  if (j.is_string()) {
    const std::string bits = j.get<std::string>();
    if (bits.size() != width) {
      schema_error(ctx, "bit string has " + std::to_string(bits.size()) + " digits, expected " +
                            std::to_string(width));
    }
    std::vector<TruthInterval> row(width);
    for (std::size_t e = 0; e < width; ++e) {
      const char c = bits[width - 1 - e];
      if (c != '0' && c != '1') schema_error(ctx, "bit strings may only contain 0 and 1");
      row[e] = c == '1' ? TruthInterval::top() : TruthInterval::bottom();
    }
    return row;
  }
  if (j.is_object()) {
    check_keys(j, {"join"}, ctx);
    const json& alts = require(j, "join", ctx);
    if (!alts.is_array() || alts.empty()) schema_error(ctx + ".join", "expected a nonempty array of rows");
    std::vector<std::vector<TruthInterval>> rows;
    for (std::size_t i = 0; i < alts.size(); ++i) {
      rows.push_back(read_row(alts[i], width, ctx + ".join[" + std::to_string(i) + "]"));
    }
    return join_targets(rows);
  }
  if (!j.is_array()) schema_error(ctx, "expected an array, a bit string or {\"join\": [...]}");
  if (j.size() != width) {
    schema_error(ctx, "row has " + std::to_string(j.size()) + " entries, expected " + std::to_string(width));
  }
  std::vector<TruthInterval> row;
  for (std::size_t e = 0; e < width; ++e) row.push_back(read_truth(j[e], ctx + "[" + std::to_string(e) + "]"));
  return row;
}

PredicateMatrix read_matrix(const json& doc, std::string_view key, const std::vector<std::string>& blocks,
                            std::size_t width) {
  using namespace detail;
  PredicateMatrix m(blocks.size(), std::vector<TruthInterval>(width));
  const auto it = doc.find(key);
  if (it == doc.end()) return m;
  const std::string ctx(key);
  if (!it->is_object()) schema_error(ctx, "expected an object mapping block ids to rows");
  for (auto row = it->begin(); row != it->end(); ++row) {
    const auto pos = std::find(blocks.begin(), blocks.end(), row.key());
    if (pos == blocks.end()) schema_error(ctx + "." + row.key(), "no such block");
    m[static_cast<std::size_t>(pos - blocks.begin())] = read_row(row.value(), width, ctx + "." + row.key());
  }
  return m;
}

json row_to_json(const std::vector<TruthInterval>& row) {
  json out = json::array();
  for (const auto& v : row) out.push_back(detail::truth_to_json(v));
  return out;
}

std::string edge_key(const LcmEdge& e) { return e.from + "->" + e.to; }

}  // namespace

LcmProblem lcm_problem_from_json(const json& doc) {
  using namespace detail;
  check_keys(doc, {"logic", "mode", "entry", "exit", "blocks", "exprs", "edges", "dee", "uee", "kill"}, "problem");
  LcmProblem p;
  if (auto it = doc.find("logic"); it != doc.end()) {
    try {
      p.logic = LogicFamily::parse(read_string(*it, "logic"));
    } catch (const ValueError& e) {
      schema_error("logic", e.what());
    }
  }
  if (auto it = doc.find("mode"); it != doc.end()) {
    try {
      p.mode = parse_lcm_mode(read_string(*it, "mode"));
    } catch (const ValueError& e) {
      schema_error("mode", e.what());
    }
  }
  p.entry = read_string(require(doc, "entry", "problem"), "entry");
  p.exit = read_string(require(doc, "exit", "problem"), "exit");

  for (const char* key : {"blocks", "exprs"}) {
    const json& arr = require(doc, key, "problem");
    if (!arr.is_array()) schema_error(key, "expected an array of strings");
    auto& target = std::string_view(key) == "blocks" ? p.blocks : p.exprs;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      target.push_back(read_string(arr[i], std::string(key) + "[" + std::to_string(i) + "]"));
    }
  }

  const json& jedges = require(doc, "edges", "problem");
  if (!jedges.is_array()) schema_error("edges", "expected an array");
  std::vector<bool> has_alpha, has_beta;
  for (std::size_t i = 0; i < jedges.size(); ++i) {
    const std::string ctx = "edges[" + std::to_string(i) + "]";
    const json& je = jedges[i];
    check_keys(je, {"from", "to", "alpha", "beta"}, ctx);
    LcmEdge e;
    e.from = read_string(require(je, "from", ctx), ctx + ".from");
    e.to = read_string(require(je, "to", ctx), ctx + ".to");
    const auto a = je.find("alpha");
    const auto b = je.find("beta");
    if (a != je.end()) e.alpha = read_number(*a, ctx + ".alpha");
    if (b != je.end()) e.beta = read_number(*b, ctx + ".beta");
    has_alpha.push_back(a != je.end());
    has_beta.push_back(b != je.end());
    p.edges.push_back(std::move(e));
  }
  // Missing weights split evenly among the edges they compete with.
  for (std::size_t i = 0; i < p.edges.size(); ++i) {
    const auto& e = p.edges[i];
    if (!has_alpha[i]) {
      const auto n = std::count_if(p.edges.begin(), p.edges.end(), [&](const LcmEdge& o) { return o.to == e.to; });
      p.edges[i].alpha = 1.0 / static_cast<double>(n);
    }
    if (!has_beta[i]) {
      const auto n =
          std::count_if(p.edges.begin(), p.edges.end(), [&](const LcmEdge& o) { return o.from == e.from; });
      p.edges[i].beta = 1.0 / static_cast<double>(n);
    }
  }

  p.dee = read_matrix(doc, "dee", p.blocks, p.exprs.size());
  p.uee = read_matrix(doc, "uee", p.blocks, p.exprs.size());
  p.kill = read_matrix(doc, "kill", p.blocks, p.exprs.size());
  return p;
}

LcmProblem parse_lcm_problem(std::string_view json_text) {
  return lcm_problem_from_json(detail::parse_document(json_text));
}

json to_json(const LcmProblem& p) {
  json doc;
  doc["logic"] = p.logic.name();
  doc["mode"] = std::string(to_string(p.mode));
  doc["entry"] = p.entry;
  doc["exit"] = p.exit;
  doc["blocks"] = p.blocks;
  doc["exprs"] = p.exprs;
  doc["edges"] = json::array();
  for (const auto& e : p.edges) {
    doc["edges"].push_back({{"from", e.from}, {"to", e.to}, {"alpha", e.alpha}, {"beta", e.beta}});
  }
  const std::pair<const char*, const PredicateMatrix*> mats[] = {{"dee", &p.dee}, {"uee", &p.uee}, {"kill", &p.kill}};
  for (const auto& [key, m] : mats) {
    json obj = json::object();
    for (std::size_t b = 0; b < p.blocks.size() && b < m->size(); ++b) obj[p.blocks[b]] = row_to_json((*m)[b]);
    doc[key] = std::move(obj);
  }
  return doc;
}

json to_json(const LcmProblem& p, const LcmResult& r) {
  json doc;
  doc["mode"] = std::string(to_string(r.mode));
  doc["converged"] = r.converged;
  doc["iterations"] = r.iterations;
  doc["exprs"] = p.exprs;
  json blocks = json::object();
  for (std::size_t b = 0; b < p.blocks.size(); ++b) {
    blocks[p.blocks[b]] = {
        {"av_in", row_to_json(r.av_in[b])},       {"av_out", row_to_json(r.av_out[b])},
        {"an_in", row_to_json(r.an_in[b])},       {"an_out", row_to_json(r.an_out[b])},
        {"later_in", row_to_json(r.later_in[b])}, {"delete", row_to_json(r.del[b])},
    };
  }
  doc["blocks"] = std::move(blocks);
  json edges = json::object();
  for (std::size_t k = 0; k < p.edges.size(); ++k) {
    edges[edge_key(p.edges[k])] = {
        {"earliest", row_to_json(r.earliest[k])},
        {"later_out", row_to_json(r.later_out[k])},
        {"insert", row_to_json(r.insert[k])},
    };
  }
  doc["edges"] = std::move(edges);
  return doc;
}

namespace {

std::string fmt3(const TruthInterval& v) {
  char buf[40];
  if (v.degenerate()) {
    std::snprintf(buf, sizeof buf, "%.3f", v.lo().value());
  } else {
    std::snprintf(buf, sizeof buf, "[%.3f,%.3f]", v.lo().value(), v.hi().value());
  }
  return buf;
}

void table(std::ostringstream& os, std::string_view title, const std::vector<std::string>& rows,
           const PredicateMatrix& m, const std::vector<std::string>& exprs) {
  std::vector<std::vector<std::string>> cells(rows.size());
  std::size_t label_width = 0;
  std::vector<std::size_t> widths(exprs.size(), 0);
  for (std::size_t e = 0; e < exprs.size(); ++e) widths[e] = std::to_string(e).size();
  for (std::size_t r = 0; r < rows.size(); ++r) {
    label_width = std::max(label_width, rows[r].size());
    for (std::size_t e = 0; e < exprs.size(); ++e) {
      cells[r].push_back(fmt3(m[r][e]));
      widths[e] = std::max(widths[e], cells[r].back().size());
    }
  }
  os << title << '\n';
  os << std::string(label_width, ' ');
  for (std::size_t e = 0; e < exprs.size(); ++e) {
    const std::string h = std::to_string(e);
    os << "  " << std::string(widths[e] - h.size(), ' ') << h;
  }
  os << '\n';
  for (std::size_t r = 0; r < rows.size(); ++r) {
    os << rows[r] << std::string(label_width - rows[r].size(), ' ');
    for (std::size_t e = 0; e < exprs.size(); ++e) {
      os << "  " << std::string(widths[e] - cells[r][e].size(), ' ') << cells[r][e];
    }
    os << '\n';
  }
  os << '\n';
}

}  // namespace

std::string format_report(const LcmProblem& p, const LcmResult& r, double threshold) {
  std::vector<std::string> edge_names;
  for (const auto& e : p.edges) edge_names.push_back(edge_key(e));

  std::ostringstream os;
  os << "mode: " << to_string(r.mode) << (r.converged ? "" : "  (NOT CONVERGED)") << '\n';
  os << "expressions:\n";
  for (std::size_t e = 0; e < p.exprs.size(); ++e) os << "  " << e << ": " << p.exprs[e] << '\n';
  os << '\n';
  table(os, "AvIn", p.blocks, r.av_in, p.exprs);
  table(os, "AvOut", p.blocks, r.av_out, p.exprs);
  table(os, "AnIn", p.blocks, r.an_in, p.exprs);
  table(os, "AnOut", p.blocks, r.an_out, p.exprs);
  table(os, "Earliest", edge_names, r.earliest, p.exprs);
  table(os, "LaterIn", p.blocks, r.later_in, p.exprs);
  table(os, "LaterOut", edge_names, r.later_out, p.exprs);
  table(os, "Insert", edge_names, r.insert, p.exprs);
  table(os, "Delete", p.blocks, r.del, p.exprs);

  // An interval qualifies only when its lower end reaches the threshold.
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", threshold);
  os << "motions with degree >= " << buf << ":\n";
  bool any = false;
  for (std::size_t k = 0; k < p.edges.size(); ++k) {
    for (std::size_t e = 0; e < p.exprs.size(); ++e) {
      if (r.insert[k][e].lo().value() >= threshold) {
        os << "  insert " << p.exprs[e] << " on " << edge_names[k] << "  " << fmt3(r.insert[k][e]) << '\n';
        any = true;
      }
    }
  }
  for (std::size_t b = 0; b < p.blocks.size(); ++b) {
    for (std::size_t e = 0; e < p.exprs.size(); ++e) {
      if (r.del[b][e].lo().value() >= threshold) {
        os << "  delete " << p.exprs[e] << " in " << p.blocks[b] << "  " << fmt3(r.del[b][e]) << '\n';
        any = true;
      }
    }
  }
  if (!any) os << "  none\n";
  return os.str();
}

}  // namespace fuzzyflow
