#include "bayesl/evaluator.hpp"

#include <cmath>

#include "bayesl/structure.hpp"

namespace bayesl {

QueryKind kind_of(const Value& value) {
  switch (value.index()) {
    case 0: return QueryKind::Prob;
    case 1: return QueryKind::AssignSet;
    default: return QueryKind::Bool;
  }
}

std::vector<std::string> EvalResult::all_warnings() const {
  std::vector<std::string> out;
  std::vector<const TraceNode*> stack{&trace};
  while (!stack.empty()) {
    const TraceNode* n = stack.back();
    stack.pop_back();
    out.insert(out.end(), n->warnings.begin(), n->warnings.end());
    for (auto it = n->children.rbegin(); it != n->children.rend(); ++it) stack.push_back(&*it);
  }
  return out;
}

bool threshold_holds(CmpOp op, double value, double threshold, double epsilon) {
  if (epsilon <= 0.0) return compare(op, value, threshold);
  const bool near = std::abs(value - threshold) <= epsilon;
  switch (op) {
    case CmpOp::Lt: return !near && value < threshold;
    case CmpOp::Le: return near || value < threshold;
    case CmpOp::Eq: return near;
    case CmpOp::Ge: return near || value > threshold;
    case CmpOp::Gt: return !near && value > threshold;
  }
  return false;
}

namespace {

class Evaluator {
 public:
  explicit Evaluator(const EvalOptions& options) : options_(options) {}

  TraceNode eval(const BayesNet& net, const Query& q) {
    TraceNode node;
    node.label = pretty_print(q);
    node.kind = q.kind;
    node.span = q.span;
    node.warnings = q.notes;
    try {
      node.value = compute(net, q, node);
    } catch (const ZeroEvidenceError& e) {
      throw EvalError(e.what(), q.span);
    } catch (const std::invalid_argument& e) {
      throw EvalError(e.what(), q.span);
    }
    return node;
  }

 private:
  const EvalOptions& options_;

  bool as_bool(const TraceNode& n) { return std::get<bool>(n.value); }

  Value compute(const BayesNet& net, const Query& q, TraceNode& node) {
    switch (q.op) {
      case Query::Op::Prob:
        return marginal(net, *q.event);
      case Query::Op::CondProb:
        return conditional(net, *q.event, *q.evidence);
      case Query::Op::Map: {
        std::vector<std::size_t> targets;
        for (const auto& t : q.targets) targets.push_back(*net.variable_index(t));
        return map_query(net, targets, q.evidence.get());
      }
      case Query::Op::Mpe:
        return mpe_query(net, *q.evidence);
      case Query::Op::Update: {
        const auto& u = q.update;
        CptUpdateResult updated = apply_cpt_update(net, u.variable, u.value, u.given, u.probability);
        const Cpt& cpt = updated.net.cpt(u.variable);
        node.rewritten_row = describe_row(updated.net, cpt, updated.row);
        if (updated.degenerate)
          node.warnings.push_back("degenerate renormalization: row " + node.rewritten_row +
                                  " had P(" + u.variable + "=" + u.value +
                                  ")=1; residual mass spread uniformly");
        node.children.push_back(eval(updated.net, *q.child));
        return node.children.back().value;
      }
      case Query::Op::Threshold: {
        node.children.push_back(eval(net, *q.child));
        const double p = std::get<double>(node.children.back().value);
        return threshold_holds(q.cmp, p, q.threshold, options_.threshold_epsilon);
      }
      case Query::Op::Infl:
      case Query::Op::Idp: {
        const bool active = active_trail_exists(net, {q.source, q.target, q.observed});
        return q.op == Query::Op::Infl ? active : !active;
      }
      case Query::Op::Not:
        node.children.push_back(eval(net, *q.child));
        return !as_bool(node.children.back());
      case Query::Op::And:
      case Query::Op::Or: {
        // Both sides are always evaluated: the trace is complete and errors
        // on either side abort the query.
        node.children.push_back(eval(net, *q.child));
        node.children.push_back(eval(net, *q.rhs));
        const bool l = as_bool(node.children[0]);
        const bool r = as_bool(node.children[1]);
        return q.op == Query::Op::And ? (l && r) : (l || r);
      }
    }
    throw EvalError("unsupported query node", q.span);
  }
};

}  // namespace

EvalResult evaluate(const BayesNet& net, const Query& query, const EvalOptions& options) {
  if (query.kind == QueryKind::Unchecked)
    throw EvalError("query must be layer-checked before evaluation", query.span);
  EvalResult result;
  result.trace = Evaluator(options).eval(net, query);
  result.value = result.trace.value;
  result.kind = kind_of(result.value);
  return result;
}

std::vector<QueryOutcome> evaluate_all(const BayesNet& net, const std::vector<std::string>& queries,
                                       const CheckOptions& check, const EvalOptions& eval) {
  std::vector<QueryOutcome> out;
  out.reserve(queries.size());
  for (const auto& text : queries) {
    QueryOutcome o;
    o.text = text;
    try {
      o.checked = layer_check(parse_query(text), net, check);
      o.result = evaluate(net, *o.checked, eval);
    } catch (const QueryError& e) {
      o.error = e.what();
      o.error_span = e.span();
    }
    out.push_back(std::move(o));
  }
  return out;
}

}  // namespace bayesl
