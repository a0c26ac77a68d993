#include <array>
#include <charconv>
#include <stdexcept>

#include "bayesl/syntax.hpp"

namespace bayesl {

std::string format_probability_literal(double value) {
  std::array<char, 512> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                 std::chars_format::fixed);
  if (ec != std::errc()) throw std::runtime_error("cannot format probability literal");
  return std::string(buf.data(), ptr);
}

namespace {

// Binding strength, loosest first.
enum Prec { kOr = 1, kAnd = 2, kUnary = 3, kThreshold = 4, kPostfix = 5, kPrimary = 6 };

int atom_prec(const Atom& a) {
  switch (a.kind) {
    case Atom::Kind::Or: return kOr;
    case Atom::Kind::And: return kAnd;
    default: return kUnary;
  }
}

void print_atom(const Atom& a, int context, std::string& out) {
  const bool parens = atom_prec(a) < context;
  if (parens) out += '(';
  switch (a.kind) {
    case Atom::Kind::Compare:
      out += a.variable;
      out += ' ';
      out += to_string(a.op);
      out += ' ';
      out += a.value;
      break;
    case Atom::Kind::Not:
      if (a.lhs->kind == Atom::Kind::Compare && a.lhs->op == CmpOp::Eq) {
        out += a.lhs->variable + " != " + a.lhs->value;
      } else if (a.lhs->kind == Atom::Kind::Compare) {
        out += "!(";
        print_atom(*a.lhs, kOr, out);
        out += ')';
      } else {
        out += '!';
        print_atom(*a.lhs, kUnary, out);
      }
      break;
    case Atom::Kind::And:
      print_atom(*a.lhs, kAnd, out);
      out += " && ";
      print_atom(*a.rhs, kUnary, out);
      break;
    case Atom::Kind::Or:
      print_atom(*a.lhs, kOr, out);
      out += " || ";
      print_atom(*a.rhs, kAnd, out);
      break;
  }
  if (parens) out += ')';
}

int query_prec(const Query& q) {
  switch (q.op) {
    case Query::Op::Or: return kOr;
    case Query::Op::And: return kAnd;
    case Query::Op::Not: return kUnary;
    case Query::Op::Threshold: return kThreshold;
    case Query::Op::Update: return kPostfix;
    default: return kPrimary;
  }
}

void print_list(const std::vector<std::string>& names, std::string& out) {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += ", ";
    out += names[i];
  }
}

void print_update(const CptUpdateSpec& u, std::string& out) {
  out += '[';
  out += u.variable + " = " + u.value;
  if (!u.given.empty()) {
    out += " | ";
    for (std::size_t i = 0; i < u.given.size(); ++i) {
      if (i) out += ", ";
      out += u.given[i].first + " = " + u.given[i].second;
    }
  }
  out += " -> ";
  out += format_probability_literal(u.probability);
  out += ']';
}

void print_query(const Query& q, int context, std::string& out) {
  const bool parens = query_prec(q) < context;
  if (parens) out += '(';
  switch (q.op) {
    case Query::Op::Prob:
      out += "P(";
      print_atom(*q.event, kOr, out);
      out += ')';
      break;
    case Query::Op::CondProb:
      out += "P(";
      print_atom(*q.event, kOr, out);
      out += " | ";
      print_atom(*q.evidence, kOr, out);
      out += ')';
      break;
    case Query::Op::Map:
      out += "MAP(";
      print_list(q.targets, out);
      if (q.evidence) {
        out += " | ";
        print_atom(*q.evidence, kOr, out);
      }
      out += ')';
      break;
    case Query::Op::Mpe:
      out += "MPE(";
      print_atom(*q.evidence, kOr, out);
      out += ')';
      break;
    case Query::Op::Infl:
    case Query::Op::Idp:
      out += q.op == Query::Op::Infl ? "INFL(" : "IDP(";
      out += q.source + ", " + q.target;
      if (!q.observed.empty()) {
        out += " | ";
        print_list(q.observed, out);
      }
      out += ')';
      break;
    case Query::Op::Update:
      // A threshold child is always parenthesised so the update visibly
      // covers the comparison.
      print_query(*q.child, kPostfix, out);
      print_update(q.update, out);
      break;
    case Query::Op::Threshold:
      print_query(*q.child, kPostfix, out);
      out += ' ';
      out += to_string(q.cmp);
      out += ' ';
      out += format_probability_literal(q.threshold);
      break;
    case Query::Op::Not:
      out += '!';
      print_query(*q.child, kUnary, out);
      break;
    case Query::Op::And:
      print_query(*q.child, kAnd, out);
      out += " && ";
      print_query(*q.rhs, kUnary, out);
      break;
    case Query::Op::Or:
      print_query(*q.child, kOr, out);
      out += " || ";
      print_query(*q.rhs, kAnd, out);
      break;
  }
  if (parens) out += ')';
}

}  // namespace

std::string pretty_print(const Atom& atom) {
  std::string out;
  print_atom(atom, kOr, out);
  return out;
}

std::string pretty_print(const Query& query) {
  std::string out;
  print_query(query, kOr, out);
  return out;
}

}  // namespace bayesl
