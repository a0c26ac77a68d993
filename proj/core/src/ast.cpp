#include "bayesl/ast.hpp"

#include <algorithm>

namespace bayesl {

std::string to_string(const SourceSpan& span) {
  return std::to_string(span.line) + ":" + std::to_string(span.column);
}

std::string_view to_string(CmpOp op) {
  switch (op) {
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Eq: return "=";
    case CmpOp::Ge: return ">=";
    case CmpOp::Gt: return ">";
  }
  return "?";
}

std::string_view to_string(QueryKind kind) {
  switch (kind) {
    case QueryKind::Unchecked: return "unchecked";
    case QueryKind::Prob: return "prob";
    case QueryKind::AssignSet: return "assignments";
    case QueryKind::Bool: return "bool";
  }
  return "?";
}

AtomPtr Atom::compare(std::string variable, CmpOp op, std::string value, SourceSpan span) {
  auto a = std::make_shared<Atom>();
  a->kind = Kind::Compare;
  a->variable = std::move(variable);
  a->op = op;
  a->value = std::move(value);
  a->span = span;
  return a;
}

AtomPtr Atom::negate(AtomPtr inner, SourceSpan span) {
  auto a = std::make_shared<Atom>();
  a->kind = Kind::Not;
  a->lhs = std::move(inner);
  a->span = span;
  return a;
}

AtomPtr Atom::conj(AtomPtr l, AtomPtr r, SourceSpan span) {
  auto a = std::make_shared<Atom>();
  a->kind = Kind::And;
  a->lhs = std::move(l);
  a->rhs = std::move(r);
  a->span = span;
  return a;
}

AtomPtr Atom::disj(AtomPtr l, AtomPtr r, SourceSpan span) {
  auto a = std::make_shared<Atom>();
  a->kind = Kind::Or;
  a->lhs = std::move(l);
  a->rhs = std::move(r);
  a->span = span;
  return a;
}

bool same_atom(const Atom& a, const Atom& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Atom::Kind::Compare:
      return a.variable == b.variable && a.op == b.op && a.value == b.value;
    case Atom::Kind::Not:
      return same_atom(*a.lhs, *b.lhs);
    case Atom::Kind::And:
    case Atom::Kind::Or:
      return same_atom(*a.lhs, *b.lhs) && same_atom(*a.rhs, *b.rhs);
  }
  return false;
}

bool evaluate_atom(const Atom& atom, std::span<const int> assignment) {
  switch (atom.kind) {
    case Atom::Kind::Compare:
      return compare(atom.op, assignment[static_cast<std::size_t>(atom.var_index)],
                     atom.value_index);
    case Atom::Kind::Not:
      return !evaluate_atom(*atom.lhs, assignment);
    case Atom::Kind::And:
      return evaluate_atom(*atom.lhs, assignment) && evaluate_atom(*atom.rhs, assignment);
    case Atom::Kind::Or:
      return evaluate_atom(*atom.lhs, assignment) || evaluate_atom(*atom.rhs, assignment);
  }
  return false;
}

namespace {

void collect_vars(const Atom& a, std::vector<std::size_t>& out) {
  if (a.kind == Atom::Kind::Compare) {
    out.push_back(static_cast<std::size_t>(a.var_index));
    return;
  }
  collect_vars(*a.lhs, out);
  if (a.rhs) collect_vars(*a.rhs, out);
}

bool same_optional_atom(const AtomPtr& a, const AtomPtr& b) {
  if (!a || !b) return !a && !b;
  return same_atom(*a, *b);
}

}  // namespace

std::vector<std::size_t> atom_variables(const Atom& atom) {
  std::vector<std::size_t> out;
  collect_vars(atom, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool same_query(const Query& a, const Query& b) {
  if (a.op != b.op) return false;
  switch (a.op) {
    case Query::Op::Prob:
      return same_atom(*a.event, *b.event);
    case Query::Op::CondProb:
      return same_atom(*a.event, *b.event) && same_atom(*a.evidence, *b.evidence);
    case Query::Op::Map:
      return a.targets == b.targets && same_optional_atom(a.evidence, b.evidence);
    case Query::Op::Mpe:
      return same_atom(*a.evidence, *b.evidence);
    case Query::Op::Update:
      return a.update.variable == b.update.variable && a.update.value == b.update.value &&
             a.update.given == b.update.given && a.update.probability == b.update.probability &&
             same_query(*a.child, *b.child);
    case Query::Op::Threshold:
      return a.cmp == b.cmp && a.threshold == b.threshold && same_query(*a.child, *b.child);
    case Query::Op::Infl:
    case Query::Op::Idp:
      return a.source == b.source && a.target == b.target && a.observed == b.observed;
    case Query::Op::Not:
      return same_query(*a.child, *b.child);
    case Query::Op::And:
    case Query::Op::Or:
      return same_query(*a.child, *b.child) && same_query(*a.rhs, *b.rhs);
  }
  return false;
}

}  // namespace bayesl
