#include <algorithm>
#include <charconv>

#include "fuzzyflow/anfis.hpp"
#include "fuzzyflow/error.hpp"
#include "json_util.hpp"

namespace fuzzyflow {

using nlohmann::json;

json to_json(const AnfisModel& m) {
  json doc;
  doc["and_op"] = std::string(to_string(m.and_op));
  doc["dim"] = m.dim;
  doc["rules"] = json::array();
  for (const Rule& r : m.rules) {
    json jr;
    jr["antecedents"] = json::array();
    for (const auto& mf : r.antecedents) {
      jr["antecedents"].push_back({{"type", "triangular"}, {"a", mf.a}, {"b", mf.b}, {"c", mf.c}});
    }
    jr["consequent"] = r.consequent;
    doc["rules"].push_back(std::move(jr));
  }
  return doc;
}

AnfisModel anfis_model_from_json(const json& doc) {
  using namespace detail;
  check_keys(doc, {"and_op", "dim", "rules"}, "model");
  AnfisModel m;
  if (auto it = doc.find("and_op"); it != doc.end()) {
    try {
      m.and_op = parse_and_op(read_string(*it, "and_op"));
    } catch (const ValueError& e) {
      schema_error("and_op", e.what());
    }
  }
  const double dim = read_number(require(doc, "dim", "model"), "dim");
  if (dim < 1 || dim != static_cast<double>(static_cast<std::size_t>(dim))) {
    schema_error("dim", "expected a positive integer");
  }
  m.dim = static_cast<std::size_t>(dim);
  const json& rules = require(doc, "rules", "model");
  if (!rules.is_array()) schema_error("rules", "expected an array");
  for (std::size_t i = 0; i < rules.size(); ++i) {
    const std::string ctx = "rules[" + std::to_string(i) + "]";
    check_keys(rules[i], {"antecedents", "consequent"}, ctx);
    Rule r;
    const json& ants = require(rules[i], "antecedents", ctx);
    if (!ants.is_array()) schema_error(ctx + ".antecedents", "expected an array");
    for (std::size_t k = 0; k < ants.size(); ++k) {
      const std::string actx = ctx + ".antecedents[" + std::to_string(k) + "]";
      check_keys(ants[k], {"type", "a", "b", "c"}, actx);
      if (auto t = ants[k].find("type"); t != ants[k].end() && read_string(*t, actx + ".type") != "triangular") {
        schema_error(actx + ".type", "only triangular membership functions are supported");
      }
      r.antecedents.push_back({read_number(require(ants[k], "a", actx), actx + ".a"),
                               read_number(require(ants[k], "b", actx), actx + ".b"),
                               read_number(require(ants[k], "c", actx), actx + ".c")});
    }
    if (auto c = rules[i].find("consequent"); c != rules[i].end()) {
      if (!c->is_array()) schema_error(ctx + ".consequent", "expected an array");
      for (std::size_t k = 0; k < c->size(); ++k) {
        r.consequent.push_back(read_number((*c)[k], ctx + ".consequent[" + std::to_string(k) + "]"));
      }
    } else {
      r.consequent.assign(m.dim + 1, 0.0);
    }
    m.rules.push_back(std::move(r));
  }
  try {
    m.check();
  } catch (const Error& e) {
    schema_error("model", e.what());
  }
  return m;
}

AnfisModel parse_anfis_model(std::string_view json_text) {
  return anfis_model_from_json(detail::parse_document(json_text));
}

ModelPair parse_model_pair(std::string_view json_text) {
  using namespace detail;
  const json doc = parse_document(json_text);
  check_keys(doc, {"update", "leave"}, "models");
  return {anfis_model_from_json(require(doc, "update", "models")),
          anfis_model_from_json(require(doc, "leave", "models"))};
}

json to_json(const ModelPair& pair) { return {{"update", to_json(pair.update)}, {"leave", to_json(pair.leave)}}; }

namespace {

std::vector<std::string> split_fields(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    std::string_view field = line.substr(start, comma == std::string_view::npos ? line.npos : comma - start);
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r')) {
      field.remove_suffix(1);
    }
    out.emplace_back(field);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_double(const std::string& s, std::size_t line, std::size_t column) {
  double v = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size() || s.empty()) {
    throw ParseError("'" + s + "' is not a number", line, column);
  }
  return v;
}

}  // namespace

std::vector<Sample> parse_samples_csv(std::string_view text) {
  std::vector<Sample> samples;
  std::size_t width = 0;
  std::size_t line_no = 0;
  bool header = true;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    const auto fields = split_fields(line);
    if (header) {
      if (fields.size() < 2 || fields.back() != "label") {
        throw ParseError("header must list the input columns followed by 'label'", line_no, 1);
      }
      width = fields.size();
      header = false;
      continue;
    }
    if (fields.size() != width) {
      throw ParseError("expected " + std::to_string(width) + " fields, got " + std::to_string(fields.size()),
                       line_no, 1);
    }
    Sample s;
    for (std::size_t k = 0; k + 1 < width; ++k) s.x.push_back(parse_double(fields[k], line_no, k + 1));
    const std::string& label = fields.back();
    if (label != "0" && label != "1") {
      throw ParseError("label must be 0 or 1", line_no, width);
    }
    s.update = label == "1";
    samples.push_back(std::move(s));
  }
  if (header) throw ParseError("missing header row", 1, 1);
  return samples;
}

std::vector<Period> split_periods(const std::vector<Sample>& samples, std::size_t period) {
  if (period == 0) throw ValueError("period length must be positive");
  std::vector<Period> out;
  for (std::size_t i = 0; i < samples.size(); i += period) {
    out.emplace_back(samples.begin() + static_cast<std::ptrdiff_t>(i),
                     samples.begin() + static_cast<std::ptrdiff_t>(std::min(samples.size(), i + period)));
  }
  return out;
}

}  // namespace fuzzyflow
