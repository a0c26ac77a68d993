#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bayesl/errors.hpp"

namespace bayesl {

enum class CmpOp { Lt, Le, Eq, Ge, Gt };

std::string_view to_string(CmpOp op);

template <class T>
bool compare(CmpOp op, const T& lhs, const T& rhs) {
  switch (op) {
    case CmpOp::Lt: return lhs < rhs;
    case CmpOp::Le: return lhs <= rhs;
    case CmpOp::Eq: return lhs == rhs;
    case CmpOp::Ge: return lhs >= rhs;
    case CmpOp::Gt: return lhs > rhs;
  }
  return false;
}

struct Atom;
using AtomPtr = std::shared_ptr<const Atom>;

/// Boolean event over single-variable comparisons. `!=` is parsed as
/// Not(Compare(=)).
struct Atom {
  enum class Kind { Compare, Not, And, Or };

  Kind kind = Kind::Compare;
  // Compare
  std::string variable;
  CmpOp op = CmpOp::Eq;
  std::string value;
  // Not uses lhs only.
  AtomPtr lhs;
  AtomPtr rhs;
  SourceSpan span;
  // Declaration indices, filled in by resolve_atom(); -1 when unresolved.
  int var_index = -1;
  int value_index = -1;

  static AtomPtr compare(std::string variable, CmpOp op, std::string value, SourceSpan span = {});
  static AtomPtr negate(AtomPtr a, SourceSpan span = {});
  static AtomPtr conj(AtomPtr a, AtomPtr b, SourceSpan span = {});
  static AtomPtr disj(AtomPtr a, AtomPtr b, SourceSpan span = {});
};

/// Structural equality: kinds, names, operators. Spans and resolution are ignored.
bool same_atom(const Atom& a, const Atom& b);

/// Evaluates a resolved atom on a full assignment given as value indices in
/// declaration order. Comparisons use domain declaration order.
bool evaluate_atom(const Atom& atom, std::span<const int> assignment);

/// Distinct variable indices occurring in a resolved atom, ascending.
std::vector<std::size_t> atom_variables(const Atom& atom);

/// Result category of a query node.
enum class QueryKind { Unchecked, Prob, AssignSet, Bool };

std::string_view to_string(QueryKind kind);

/// `[variable = value | given... -> probability]`
struct CptUpdateSpec {
  std::string variable;
  std::string value;
  std::vector<std::pair<std::string, std::string>> given;
  double probability = 0.0;
  SourceSpan span;
};

struct Query;
using QueryPtr = std::shared_ptr<const Query>;

struct Query {
  enum class Op { Prob, CondProb, Map, Mpe, Update, Threshold, Infl, Idp, Not, And, Or };

  Op op = Op::Prob;
  // Prob: event. CondProb: event | evidence. Map: targets | evidence
  // (evidence may be null). Mpe: evidence.
  AtomPtr event;
  AtomPtr evidence;
  std::vector<std::string> targets;
  // Update, Threshold, Not: child. And, Or: child and rhs.
  QueryPtr child;
  QueryPtr rhs;
  CptUpdateSpec update;
  CmpOp cmp = CmpOp::Ge;
  double threshold = 0.0;
  // Infl, Idp
  std::string source;
  std::string target;
  std::vector<std::string> observed;

  SourceSpan span;
  QueryKind kind = QueryKind::Unchecked;
  // Checker remarks (grammar extensions, no-op updates) surfaced in traces.
  std::vector<std::string> notes;
};

bool same_query(const Query& a, const Query& b);

}  // namespace bayesl
