#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bayesl/ast.hpp"
#include "bayesl/inference.hpp"
#include "bayesl/network.hpp"
#include "bayesl/syntax.hpp"

namespace bayesl {

using Value = std::variant<double, AssignmentSet, bool>;

QueryKind kind_of(const Value& value);

/// One evaluated AST node. The trace tree mirrors the query tree exactly.
struct TraceNode {
  std::string label;  // pretty-printed subformula
  QueryKind kind = QueryKind::Unchecked;
  Value value;
  SourceSpan span;
  std::vector<std::string> warnings;
  /// Update nodes: the CPT row that was rewritten, e.g. "Gra | Int=i1, Dif=d1".
  std::string rewritten_row;
  std::vector<TraceNode> children;
};

struct EvalResult {
  QueryKind kind = QueryKind::Unchecked;
  Value value;
  TraceNode trace;

  /// Warnings from every trace node, outermost first.
  std::vector<std::string> all_warnings() const;
};

struct EvalOptions {
  /// Threshold comparisons treat |value - p| <= epsilon as equality.
  /// Zero means exact floating-point comparison.
  double threshold_epsilon = 0.0;
};

bool threshold_holds(CmpOp op, double value, double threshold, double epsilon);

/// Evaluates a layer-checked query. Updates are applied to private copies of
/// the network; `net` is never modified. Throws EvalError positioned at the
/// failing node (e.g. zero-probability conditioning).
EvalResult evaluate(const BayesNet& net, const Query& query, const EvalOptions& options = {});

/// Per-query outcome of evaluate_all: either a result or the error raised.
struct QueryOutcome {
  std::string text;
  QueryPtr checked;  // null when parsing or checking failed
  std::optional<EvalResult> result;
  std::optional<std::string> error;
  SourceSpan error_span;
};

/// Parses, checks and evaluates each query independently. A failing query
/// does not stop the others.
std::vector<QueryOutcome> evaluate_all(const BayesNet& net, const std::vector<std::string>& queries,
                                       const CheckOptions& check = {},
                                       const EvalOptions& eval = {});

}  // namespace bayesl
