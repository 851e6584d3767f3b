#pragma once

// Helpers shared by the JSON readers. Not installed.

#include <initializer_list>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "fuzzyflow/error.hpp"
#include "fuzzyflow/formula.hpp"
#include "fuzzyflow/truth.hpp"

namespace fuzzyflow::detail {

/// Parses JSON text, translating syntax errors into ParseError with a
/// 1-based line and column.
nlohmann::json parse_document(std::string_view text);

/// Throws ParseError if `obj` is not an object or has a key outside `allowed`.
void check_keys(const nlohmann::json& obj, std::initializer_list<std::string_view> allowed,
                const std::string& context);

const nlohmann::json& require(const nlohmann::json& obj, std::string_view key,
                              const std::string& context);

double read_number(const nlohmann::json& j, const std::string& context);
std::string read_string(const nlohmann::json& j, const std::string& context);

/// A number, or a two-element array [lo, hi].
TruthInterval read_truth(const nlohmann::json& j, const std::string& context);
nlohmann::json truth_to_json(const TruthInterval& v);

Valuation<TruthInterval> read_valuation(const nlohmann::json& j, const std::string& context);
nlohmann::json valuation_to_json(const Valuation<TruthInterval>& v);

Formula read_formula(const nlohmann::json& j, const std::string& context);

[[noreturn]] void schema_error(const std::string& context, const std::string& message);

}  // namespace fuzzyflow::detail
