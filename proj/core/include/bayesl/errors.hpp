#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace bayesl {

/// Location of a construct inside a query text. Offsets are bytes; line and
/// column are 1-based.
struct SourceSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
  int line = 1;
  int column = 1;

  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

std::string to_string(const SourceSpan& span);

/// Base of every error raised while handling query text. Carries the span of
/// the offending construct.
class QueryError : public std::runtime_error {
 public:
  QueryError(const std::string& message, SourceSpan span)
      : std::runtime_error(message), span_(span) {}

  const SourceSpan& span() const noexcept { return span_; }

 private:
  SourceSpan span_;
};

class SyntaxError : public QueryError {
 public:
  SyntaxError(const std::string& message, SourceSpan span,
              std::vector<std::string> expected = {})
      : QueryError(message, span), expected_(std::move(expected)) {}

  /// Token spellings that would have been accepted at the error position.
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  std::vector<std::string> expected_;
};

/// Name resolution or kind error found by the layer checker.
class CheckError : public QueryError {
 public:
  using QueryError::QueryError;
};

/// Failure during evaluation, e.g. conditioning on zero-probability evidence.
class EvalError : public QueryError {
 public:
  using QueryError::QueryError;
};

}  // namespace bayesl
