#pragma once

#include <string>

#include <nlohmann/json.hpp>

namespace fuzzyflow {

/// Serializes `doc` with every floating-point number printed to 17
/// significant digits, so output round-trips bit-exactly. Object keys keep
/// nlohmann's (sorted) order, which makes output deterministic.
/// `indent` < 0 produces compact single-line output.
std::string dump_json(const nlohmann::json& doc, int indent = 2);

}  // namespace fuzzyflow
