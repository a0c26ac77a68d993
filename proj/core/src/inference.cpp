#include "bayesl/inference.hpp"

#include <algorithm>
#include <functional>

namespace bayesl {

namespace {

void conjuncts(const Atom& a, std::vector<const Atom*>& out) {
  if (a.kind == Atom::Kind::And) {
    conjuncts(*a.lhs, out);
    conjuncts(*a.rhs, out);
  } else {
    out.push_back(&a);
  }
}

Factor indicator(const Atom& a, std::span<const std::size_t> vars, std::span<const int> cards,
                 std::vector<int>& scratch) {
  Factor f = Factor::constant(vars, cards, 0.0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    f.decode(i, scratch);
    f.values()[i] = evaluate_atom(a, scratch) ? 1.0 : 0.0;
  }
  return f;
}

std::vector<Factor> evidence_factors(const CompiledNet& net, const Atom& event) {
  std::vector<int> scratch(net.size(), 0);
  std::vector<const Atom*> parts;
  conjuncts(event, parts);
  const bool separable = std::all_of(parts.begin(), parts.end(), [](const Atom* p) {
    return atom_variables(*p).size() == 1;
  });
  std::vector<Factor> out;
  if (separable) {
    for (const Atom* p : parts)
      out.push_back(indicator(*p, atom_variables(*p), net.cardinalities(), scratch));
  } else {
    out.push_back(indicator(event, atom_variables(event), net.cardinalities(), scratch));
  }
  return out;
}

double sum_all(std::vector<Factor> factors) {
  return eliminate(std::move(factors), {}, EliminationMode::Sum).factor.values().front();
}

double clamp01(double p) { return std::clamp(p, 0.0, 1.0); }

void sort_rows(AssignmentSet& set) { std::sort(set.rows.begin(), set.rows.end()); }

// Maximizes the product of `factors` over `targets` after summing out every
// other variable. `normalizer` is P(evidence).
AssignmentSet max_assignments(const CompiledNet& net, std::vector<Factor> factors,
                              std::span<const std::size_t> targets, double normalizer) {
  AssignmentSet out;
  out.variables.assign(targets.begin(), targets.end());
  if (targets.empty()) {
    out.rows.push_back({});
    out.score = 1.0;
    return out;
  }

  std::vector<std::size_t> others;
  for (std::size_t v = 0; v < net.size(); ++v)
    if (std::find(targets.begin(), targets.end(), v) == targets.end()) others.push_back(v);
  const std::vector<Factor> reduced =
      eliminate_variables(std::move(factors), others, EliminationMode::Sum);

  std::vector<EliminationStep> steps;
  const auto scalars = eliminate_variables(reduced, targets, EliminationMode::Max, &steps);
  const double best_total = multiply_all(scalars).values().front();

  // Walk the max-eliminations backwards. A full assignment is a maximizer iff
  // it attains the max at every step, so branching on every (near-)tight value
  // enumerates the whole tie set. Candidates are re-scored exactly below.
  std::vector<int> full(net.size(), 0);
  std::vector<std::vector<int>> candidates;
  std::function<void(std::size_t)> descend = [&](std::size_t k) {
    if (k == 0) {
      std::vector<int> row;
      row.reserve(targets.size());
      for (std::size_t v : targets) row.push_back(full[v]);
      candidates.push_back(std::move(row));
      return;
    }
    const EliminationStep& step = steps[k - 1];
    const int card = net.cardinality(step.variable);
    std::vector<double> vals(static_cast<std::size_t>(card));
    double local_max = 0.0;
    for (int x = 0; x < card; ++x) {
      full[step.variable] = x;
      vals[static_cast<std::size_t>(x)] = step.product.at(full);
      local_max = std::max(local_max, vals[static_cast<std::size_t>(x)]);
    }
    for (int x = 0; x < card; ++x) {
      const double v = vals[static_cast<std::size_t>(x)];
      if (v <= 0.0 || v < local_max * (1.0 - 1e-9)) continue;
      full[step.variable] = x;
      descend(k - 1);
    }
  };
  if (best_total > 0.0) descend(steps.size());

  std::vector<double> totals;
  double best = 0.0;
  for (const auto& row : candidates) {
    for (std::size_t i = 0; i < targets.size(); ++i) full[targets[i]] = row[i];
    double t = 1.0;
    for (const auto& f : reduced) t *= f.at(full);
    totals.push_back(t);
    best = std::max(best, t);
  }
  for (std::size_t i = 0; i < candidates.size(); ++i)
    if (totals[i] >= best * (1.0 - kTieTolerance)) out.rows.push_back(std::move(candidates[i]));
  sort_rows(out);
  out.rows.erase(std::unique(out.rows.begin(), out.rows.end()), out.rows.end());
  out.score = clamp01(best / normalizer);
  return out;
}

// Calls `visit` with every full assignment of `net`.
template <class Visit>
void enumerate(const CompiledNet& net, Visit visit) {
  std::vector<int> a(net.size(), 0);
  for (;;) {
    visit(std::span<const int>(a));
    std::size_t k = net.size();
    while (k-- > 0) {
      if (++a[k] < net.cardinality(k)) break;
      a[k] = 0;
    }
    if (k == static_cast<std::size_t>(-1)) return;
  }
}

}  // namespace

std::vector<Factor> compile_evidence(const BayesNet& net, const Atom& event) {
  return evidence_factors(CompiledNet(net), event);
}

std::vector<std::size_t> unobserved_variables(const BayesNet& net, const Atom& evidence) {
  const auto observed = atom_variables(evidence);
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < net.variables.size(); ++v)
    if (!std::binary_search(observed.begin(), observed.end(), v)) out.push_back(v);
  return out;
}

double marginal(const BayesNet& net, const Atom& event) {
  CompiledNet c(net);
  auto factors = cpt_factors(c);
  for (auto& f : evidence_factors(c, event)) factors.push_back(std::move(f));
  return clamp01(sum_all(std::move(factors)));
}

double conditional(const BayesNet& net, const Atom& event, const Atom& evidence) {
  CompiledNet c(net);
  auto factors = cpt_factors(c);
  for (auto& f : evidence_factors(c, evidence)) factors.push_back(std::move(f));
  const double pe = sum_all(factors);
  if (pe <= kZeroEvidence) throw ZeroEvidenceError();
  for (auto& f : evidence_factors(c, event)) factors.push_back(std::move(f));
  return clamp01(sum_all(std::move(factors)) / pe);
}

AssignmentSet map_query(const BayesNet& net, std::span<const std::size_t> targets,
                        const Atom* evidence) {
  CompiledNet c(net);
  auto factors = cpt_factors(c);
  double pe = 1.0;
  if (evidence) {
    for (auto& f : evidence_factors(c, *evidence)) factors.push_back(std::move(f));
    pe = sum_all(factors);
    if (pe <= kZeroEvidence) throw ZeroEvidenceError();
  }
  return max_assignments(c, std::move(factors), targets, pe);
}

AssignmentSet mpe_query(const BayesNet& net, const Atom& evidence) {
  const auto targets = unobserved_variables(net, evidence);
  return map_query(net, targets, &evidence);
}

double marginal_oracle(const BayesNet& net, const Atom& event) {
  CompiledNet c(net);
  double total = 0.0;
  enumerate(c, [&](std::span<const int> a) {
    if (evaluate_atom(event, a)) total += c.joint(a);
  });
  return clamp01(total);
}

double conditional_oracle(const BayesNet& net, const Atom& event, const Atom& evidence) {
  CompiledNet c(net);
  double both = 0.0;
  double given = 0.0;
  enumerate(c, [&](std::span<const int> a) {
    if (!evaluate_atom(evidence, a)) return;
    const double p = c.joint(a);
    given += p;
    if (evaluate_atom(event, a)) both += p;
  });
  if (given <= kZeroEvidence) throw ZeroEvidenceError();
  return clamp01(both / given);
}

AssignmentSet map_oracle(const BayesNet& net, std::span<const std::size_t> targets,
                         const Atom* evidence) {
  CompiledNet c(net);
  std::size_t table_size = 1;
  for (std::size_t v : targets) table_size *= static_cast<std::size_t>(c.cardinality(v));
  std::vector<double> mass(table_size, 0.0);
  double given = 0.0;
  enumerate(c, [&](std::span<const int> a) {
    if (evidence && !evaluate_atom(*evidence, a)) return;
    const double p = c.joint(a);
    given += p;
    std::size_t idx = 0;
    for (std::size_t v : targets)
      idx = idx * static_cast<std::size_t>(c.cardinality(v)) + static_cast<std::size_t>(a[v]);
    mass[idx] += p;
  });
  if (given <= kZeroEvidence) throw ZeroEvidenceError();

  AssignmentSet out;
  out.variables.assign(targets.begin(), targets.end());
  const double best = *std::max_element(mass.begin(), mass.end());
  for (std::size_t idx = 0; idx < table_size; ++idx) {
    if (mass[idx] < best * (1.0 - kTieTolerance)) continue;
    std::vector<int> row(targets.size());
    std::size_t rem = idx;
    for (std::size_t k = targets.size(); k-- > 0;) {
      const auto card = static_cast<std::size_t>(c.cardinality(targets[k]));
      row[k] = static_cast<int>(rem % card);
      rem /= card;
    }
    out.rows.push_back(std::move(row));
  }
  sort_rows(out);
  out.score = clamp01(best / given);
  return out;
}

AssignmentSet mpe_oracle(const BayesNet& net, const Atom& evidence) {
  const auto targets = unobserved_variables(net, evidence);
  return map_oracle(net, targets, &evidence);
}

}  // namespace bayesl
