#pragma once

#include <string_view>

namespace bayesl::detail {

inline bool is_identifier_start(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
}

inline bool is_identifier_char(char c) {
  return is_identifier_start(c) || (c >= '0' && c <= '9');
}

/// [A-Za-z_][A-Za-z0-9_]*
inline bool is_identifier(std::string_view s) {
  if (s.empty() || !is_identifier_start(s.front())) return false;
  for (char c : s)
    if (!is_identifier_char(c)) return false;
  return true;
}

}  // namespace bayesl::detail
