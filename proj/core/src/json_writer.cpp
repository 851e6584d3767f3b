#include "fuzzyflow/json_writer.hpp"

#include <cmath>
#include <cstdio>

namespace fuzzyflow {
namespace {

void write_number(double v, std::string& out) {
  if (!std::isfinite(v)) {
    out += "null";
    return;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

void newline(int indent, int depth, std::string& out) {
  if (indent < 0) return;
  out += '\n';
  out.append(static_cast<std::size_t>(indent * depth), ' ');
}

void write(const nlohmann::json& j, int indent, int depth, std::string& out) {
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(indent, depth + 1, out);
        out += nlohmann::json(it.key()).dump();
        out += indent < 0 ? ":" : ": ";
        write(it.value(), indent, depth + 1, out);
      }
      newline(indent, depth, out);
      out += '}';
      return;
    }
    case nlohmann::json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line; they are mostly matrix rows.
      bool flat = true;
      for (const auto& e : j) flat = flat && !e.is_structured();
      out += '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += flat || indent < 0 ? (indent < 0 ? "," : ", ") : ",";
        first = false;
        if (!flat) newline(indent, depth + 1, out);
        write(e, indent, depth + 1, out);
      }
      if (!flat) newline(indent, depth, out);
      out += ']';
      return;
    }
    case nlohmann::json::value_t::number_float: write_number(j.get<double>(), out); return;
    default: out += j.dump(); return;
  }
}

}  // namespace

std::string dump_json(const nlohmann::json& doc, int indent) {
  std::string out;
  write(doc, indent, 0, out);
  return out;
}

}  // namespace fuzzyflow
