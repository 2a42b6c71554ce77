#pragma once

#include <string>

#include <json.hpp>

namespace rftrack {

/// Parse a TOML subset into a JSON object tree.
///
/// Supported: [table] / [a.b] headers, `key = value` pairs with string,
/// integer, float, boolean and flat array values, and `#` comments. This
/// covers the whole configuration schema; full TOML (inline tables, dates,
/// multi-line strings) is out of scope.
///
/// Throws std::runtime_error with a line number on malformed input.
nlohmann::json parse_toml(const std::string& text);

/// Serialize a JSON object tree (one level of tables holding scalar/array
/// leaves) back to TOML text. Inverse of parse_toml for the schema above.
std::string to_toml(const nlohmann::json& doc);

}  // namespace rftrack
