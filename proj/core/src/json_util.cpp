#include "json_util.hpp"

#include <algorithm>

namespace fuzzyflow::detail {

nlohmann::json parse_document(std::string_view text) {
  try {
    return nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    // e.byte is 1-based and points one past the offending character.
    const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string message = e.what();
    // Drop nlohmann's "[json.exception.parse_error.101] parse error at line .., column ..: ".
    if (auto pos = message.find(": "); pos != std::string::npos) {
      if (auto pos2 = message.find(": ", pos + 2); pos2 != std::string::npos) {
        message = message.substr(pos2 + 2);
      }
    }
    throw ParseError(message, line, column);
  }
}

void schema_error(const std::string& context, const std::string& message) {
  throw ParseError(context + ": " + message, 0, 0);
}

void check_keys(const nlohmann::json& obj, std::initializer_list<std::string_view> allowed,
                const std::string& context) {
  if (!obj.is_object()) schema_error(context, "expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end()) {
      schema_error(context, "unknown key '" + it.key() + "'");
    }
  }
}

const nlohmann::json& require(const nlohmann::json& obj, std::string_view key,
                              const std::string& context) {
  auto it = obj.find(key);
  if (it == obj.end()) schema_error(context, "missing key '" + std::string(key) + "'");
  return *it;
}

double read_number(const nlohmann::json& j, const std::string& context) {
  if (!j.is_number()) schema_error(context, "expected a number");
  return j.get<double>();
}

std::string read_string(const nlohmann::json& j, const std::string& context) {
  if (!j.is_string()) schema_error(context, "expected a string");
  return j.get<std::string>();
}

TruthInterval read_truth(const nlohmann::json& j, const std::string& context) {
  try {
    if (j.is_number()) return TruthInterval(TruthValue(j.get<double>()));
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
      return TruthInterval(j[0].get<double>(), j[1].get<double>());
    }
  } catch (const ValueError& e) {
    schema_error(context, e.what());
  }
  schema_error(context, "expected a truth value or a [lo, hi] pair");
}

nlohmann::json truth_to_json(const TruthInterval& v) {
  if (v.degenerate()) return v.lo().value();
  return nlohmann::json::array({v.lo().value(), v.hi().value()});
}

Valuation<TruthInterval> read_valuation(const nlohmann::json& j, const std::string& context) {
  if (!j.is_object()) schema_error(context, "expected an object of property values");
  Valuation<TruthInterval> out;
  for (auto it = j.begin(); it != j.end(); ++it) {
    out.emplace(it.key(), read_truth(it.value(), context + "." + it.key()));
  }
  return out;
}

nlohmann::json valuation_to_json(const Valuation<TruthInterval>& v) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [name, value] : v) out[name] = truth_to_json(value);
  return out;
}

Formula read_formula(const nlohmann::json& j, const std::string& context) {
  const std::string text = read_string(j, context);
  try {
    return parse_formula(text);
  } catch (const ParseError& e) {
    schema_error(context, std::string("formula '") + text + "': " + e.what());
  }
}

}  // namespace fuzzyflow::detail
