#include <algorithm>
#include <map>
#include <set>

#include "bayesl/syntax.hpp"

namespace bayesl {

AtomPtr resolve_atom(const AtomPtr& atom, const BayesNet& net) {
  auto out = std::make_shared<Atom>(*atom);
  if (atom->kind == Atom::Kind::Compare) {
    auto var = net.variable_index(atom->variable);
    if (!var) throw CheckError("unknown variable '" + atom->variable + "'", atom->span);
    const VariableDecl& decl = net.variables[*var];
    auto value = decl.value_index(atom->value);
    if (!value)
      throw CheckError("'" + atom->value + "' is not a value of '" + decl.name + "'", atom->span);
    if (!decl.ordered && atom->op != CmpOp::Eq)
      throw CheckError("'" + std::string(to_string(atom->op)) + "' used on unordered variable '" +
                           decl.name + "'",
                       atom->span);
    out->var_index = static_cast<int>(*var);
    out->value_index = static_cast<int>(*value);
    return out;
  }
  out->lhs = resolve_atom(atom->lhs, net);
  if (atom->rhs) out->rhs = resolve_atom(atom->rhs, net);
  return out;
}

namespace {

// True when the formula contains any node whose value depends on the CPTs.
bool depends_on_parameters(const Query& q) {
  switch (q.op) {
    case Query::Op::Infl:
    case Query::Op::Idp:
      return false;
    case Query::Op::Not:
      return depends_on_parameters(*q.child);
    case Query::Op::And:
    case Query::Op::Or:
      return depends_on_parameters(*q.child) || depends_on_parameters(*q.rhs);
    case Query::Op::Update:
      return depends_on_parameters(*q.child);
    default:
      return true;
  }
}

class Checker {
 public:
  Checker(const BayesNet& net, const CheckOptions& options) : net_(net), options_(options) {}

  QueryPtr check(const Query& q) {
    auto out = std::make_shared<Query>(q);
    out->notes.clear();
    switch (q.op) {
      case Query::Op::Prob:
        out->event = resolve_atom(q.event, net_);
        out->kind = QueryKind::Prob;
        break;
      case Query::Op::CondProb:
        out->event = resolve_atom(q.event, net_);
        out->evidence = resolve_atom(q.evidence, net_);
        out->kind = QueryKind::Prob;
        break;
      case Query::Op::Map:
        check_map(q, *out);
        break;
      case Query::Op::Mpe:
        out->evidence = resolve_atom(q.evidence, net_);
        out->kind = QueryKind::AssignSet;
        break;
      case Query::Op::Update:
        check_update(q, *out);
        break;
      case Query::Op::Threshold:
        out->child = check(*q.child);
        if (out->child->kind == QueryKind::AssignSet)
          throw CheckError("assignment-set result cannot be compared to a threshold", q.span);
        if (out->child->kind == QueryKind::Bool)
          throw CheckError("boolean result cannot be compared to a threshold", q.span);
        if (!(q.threshold >= 0.0 && q.threshold <= 1.0))
          throw CheckError("threshold " + format_probability_literal(q.threshold) +
                               " outside [0,1]",
                           q.span);
        out->kind = QueryKind::Bool;
        break;
      case Query::Op::Infl:
      case Query::Op::Idp:
        check_trail(q, *out);
        break;
      case Query::Op::Not:
        out->child = check_bool(*q.child);
        out->kind = QueryKind::Bool;
        break;
      case Query::Op::And:
      case Query::Op::Or:
        out->child = check_bool(*q.child);
        out->rhs = check_bool(*q.rhs);
        out->kind = QueryKind::Bool;
        break;
    }
    return out;
  }

 private:
  const BayesNet& net_;
  const CheckOptions& options_;

  QueryPtr check_bool(const Query& q) {
    QueryPtr out = check(q);
    if (out->kind != QueryKind::Bool)
      throw CheckError(std::string(out->kind == QueryKind::Prob ? "probability" : "assignment-set") +
                           " result used where a boolean formula is expected",
                       q.span);
    return out;
  }

  std::size_t variable(const std::string& name, const SourceSpan& span) {
    auto idx = net_.variable_index(name);
    if (!idx) throw CheckError("unknown variable '" + name + "'", span);
    return *idx;
  }

  void check_map(const Query& q, Query& out) {
    std::set<std::size_t> targets;
    for (const auto& t : q.targets) {
      if (!targets.insert(variable(t, q.span)).second)
        throw CheckError("MAP target '" + t + "' listed twice", q.span);
    }
    if (q.evidence) {
      out.evidence = resolve_atom(q.evidence, net_);
      for (std::size_t v : atom_variables(*out.evidence))
        if (targets.count(v))
          throw CheckError("MAP target '" + net_.variables[v].name +
                               "' also occurs in the evidence",
                           q.span);
    }
    out.kind = QueryKind::AssignSet;
  }

  void check_update(const Query& q, Query& out) {
    out.child = check(*q.child);
    const CptUpdateSpec& u = q.update;
    const std::size_t var = variable(u.variable, u.span);
    const VariableDecl& decl = net_.variables[var];
    if (!decl.value_index(u.value))
      throw CheckError("'" + u.value + "' is not a value of '" + decl.name + "'", u.span);
    if (!(u.probability >= 0.0 && u.probability <= 1.0))
      throw CheckError("update probability " + format_probability_literal(u.probability) +
                           " outside [0,1]",
                       u.span);

    std::map<std::string, std::string> given;
    for (const auto& [gv, gval] : u.given) {
      const VariableDecl& gd = net_.variables[variable(gv, u.span)];
      if (!gd.value_index(gval))
        throw CheckError("'" + gval + "' is not a value of '" + gd.name + "'", u.span);
      if (!given.emplace(gv, gval).second)
        throw CheckError("'" + gv + "' assigned twice in update evidence", u.span);
    }
    auto parents = net_.parents_of(decl.name);
    std::set<std::string> expected(parents.begin(), parents.end());
    std::set<std::string> actual;
    for (const auto& [k, v] : given) actual.insert(k);
    if (expected != actual)
      throw CheckError("evidence must cover all parents of '" + decl.name + "'", u.span);

    const Query& child = *out.child;
    if (child.op == Query::Op::Update && child.kind == QueryKind::Prob)
      extension(out, "extension: chained updates on a probability query");
    if (child.kind == QueryKind::AssignSet)
      extension(out, "extension: update applied to a MAP/MPE query");
    if (child.kind == QueryKind::Bool && !depends_on_parameters(child))
      extension(out, "update has no effect on a purely structural formula");
    out.kind = child.kind;
  }

  void extension(Query& out, const std::string& note) {
    if (options_.strict) throw CheckError(note + " (rejected in strict mode)", out.update.span);
    out.notes.push_back(note);
  }

  void check_trail(const Query& q, Query& out) {
    const std::size_t source = variable(q.source, q.span);
    const std::size_t target = variable(q.target, q.span);
    if (source == target)
      throw CheckError("INFL/IDP needs two distinct variables", q.span);
    std::vector<std::string> observed;
    for (const auto& name : q.observed) {
      const std::size_t v = variable(name, q.span);
      if (v == source || v == target)
        throw CheckError("'" + name + "' cannot be both an endpoint and observed", q.span);
      if (std::find(observed.begin(), observed.end(), name) == observed.end())
        observed.push_back(name);
    }
    out.observed = std::move(observed);
    out.kind = QueryKind::Bool;
  }
};

}  // namespace

QueryPtr layer_check(const QueryPtr& query, const BayesNet& net, const CheckOptions& options) {
  return Checker(net, options).check(*query);
}

}  // namespace bayesl
