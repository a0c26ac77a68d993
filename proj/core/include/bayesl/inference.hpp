#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bayesl/ast.hpp"
#include "bayesl/factor.hpp"
#include "bayesl/network.hpp"

namespace bayesl {

/// Evidence at or below this probability counts as impossible.
inline constexpr double kZeroEvidence = 1e-12;
/// Relative tolerance under which two MAP/MPE scores count as tied.
inline constexpr double kTieTolerance = 1e-12;

class ZeroEvidenceError : public std::domain_error {
 public:
  ZeroEvidenceError() : std::domain_error("conditioning on zero-probability evidence") {}
};

/// Maximizing assignments of a MAP or MPE query. Every row shares `score`,
/// the maximal conditional probability. Rows are sorted lexicographically.
struct AssignmentSet {
  std::vector<std::size_t> variables;  // declaration indices
  std::vector<std::vector<int>> rows;  // value indices, parallel to `variables`
  double score = 0.0;

  friend bool operator==(const AssignmentSet&, const AssignmentSet&) = default;
};

// All event arguments must be resolved against the network (see resolve_atom).

/// Probability of `event` by variable elimination.
double marginal(const BayesNet& net, const Atom& event);
/// P(event | evidence); throws ZeroEvidenceError when P(evidence) <= kZeroEvidence.
double conditional(const BayesNet& net, const Atom& event, const Atom& evidence);
/// argmax over the targets of P(targets | evidence); `evidence` may be null.
AssignmentSet map_query(const BayesNet& net, std::span<const std::size_t> targets,
                        const Atom* evidence);
/// MAP over every variable that does not occur in `evidence`.
AssignmentSet mpe_query(const BayesNet& net, const Atom& evidence);

/// Indicator factors encoding `event`: one single-variable factor per conjunct
/// when the event is a conjunction of single-variable formulae, otherwise one
/// 0/1 factor over all variables of the event.
std::vector<Factor> compile_evidence(const BayesNet& net, const Atom& event);

// Brute-force counterparts that enumerate every full assignment. Used as
// test oracles; exponential in the number of variables.

double marginal_oracle(const BayesNet& net, const Atom& event);
double conditional_oracle(const BayesNet& net, const Atom& event, const Atom& evidence);
AssignmentSet map_oracle(const BayesNet& net, std::span<const std::size_t> targets,
                         const Atom* evidence);
AssignmentSet mpe_oracle(const BayesNet& net, const Atom& evidence);

/// Variables not occurring in `evidence`, in declaration order.
std::vector<std::size_t> unobserved_variables(const BayesNet& net, const Atom& evidence);

}  // namespace bayesl
