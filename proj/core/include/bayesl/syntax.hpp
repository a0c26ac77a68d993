#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "bayesl/ast.hpp"
#include "bayesl/network.hpp"

namespace bayesl {

/// Parses one query. Keywords (P, MAP, MPE, INFL, IDP) are recognised by
/// position, so they remain usable as variable names inside events.
/// Throws SyntaxError with the position and the set of expected tokens.
QueryPtr parse_query(std::string_view text);

/// Parses a standalone event formula such as `Dif = d1 && !(Gra < g2)`.
AtomPtr parse_atom(std::string_view text);

/// Canonical text with the fewest parentheses that preserve the tree.
/// parse_query(pretty_print(q)) is structurally equal to q.
std::string pretty_print(const Query& query);
std::string pretty_print(const Atom& atom);

/// Shortest decimal (no exponent) that reads back as exactly `value`.
std::string format_probability_literal(double value);

struct CheckOptions {
  /// Reject grammar extensions: chained updates on probability queries,
  /// updates on MAP/MPE, and updates around purely structural formulae.
  bool strict = false;
};

/// Resolves names against `net`, validates every construct and annotates
/// each node with its kind. Returns a new tree; the input is unchanged.
/// Throws CheckError positioned at the offending node.
QueryPtr layer_check(const QueryPtr& query, const BayesNet& net, const CheckOptions& options = {});

/// Resolves variable/value names of an event to declaration indices.
AtomPtr resolve_atom(const AtomPtr& atom, const BayesNet& net);

}  // namespace bayesl
