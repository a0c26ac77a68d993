#pragma once

// Minimal JSON reader that records the line/column of every value and key.
// Model files need positioned diagnostics for semantic errors (unknown
// variables, bad rows), which DOM libraries do not expose.

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bayesl::detail {

struct JsonPos {
  int line = 1;
  int column = 1;
};

struct JsonValue {
  enum class Type { Null, Bool, Number, String, Array, Object };

  Type type = Type::Null;
  JsonPos pos;
  bool boolean = false;
  double number = 0.0;
  std::string text;  // string payload, or the raw number literal
  std::vector<JsonValue> items;
  std::vector<std::pair<std::string, JsonValue>> members;
  std::vector<JsonPos> key_pos;  // parallel to members

  bool is(Type t) const { return type == t; }
  /// First member with the given key, or nullptr.
  const JsonValue* find(std::string_view key) const;
};

const char* type_name(JsonValue::Type t);

struct JsonSyntaxError {
  JsonPos pos;
  std::string message;
};

/// Parses a complete UTF-8 JSON document. Throws JsonSyntaxError.
JsonValue parse_json(std::string_view text);

}  // namespace bayesl::detail
