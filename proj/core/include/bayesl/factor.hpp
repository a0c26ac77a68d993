#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bayesl/network.hpp"

namespace bayesl {

/// Nonnegative table over a set of variables.
///
/// The scope is kept sorted by variable index; the table is laid out in
/// mixed radix over the scope with the last variable varying fastest.
class Factor {
 public:
  /// Scalar factor with value 1.
  Factor() : values_{1.0} {}
  Factor(std::vector<std::size_t> scope, std::vector<int> cards, std::vector<double> values);

  static Factor scalar(double value);
  /// Factor over `scope` (any order) with every entry equal to `fill`.
  static Factor constant(std::span<const std::size_t> scope, std::span<const int> net_cards,
                         double fill);

  const std::vector<std::size_t>& scope() const { return scope_; }
  const std::vector<int>& cards() const { return cards_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }
  std::size_t size() const { return values_.size(); }
  bool contains(std::size_t var) const;

  /// Entry selected by a full-network assignment (value per variable index).
  double at(std::span<const int> full_assignment) const;
  /// Table offset selected by a full-network assignment.
  std::size_t offset(std::span<const int> full_assignment) const;
  /// Writes the scope values of table offset `index` into a full assignment.
  void decode(std::size_t index, std::span<int> full_assignment) const;

 private:
  std::vector<std::size_t> scope_;
  std::vector<int> cards_;
  std::vector<double> values_;
};

Factor multiply(const Factor& a, const Factor& b);
Factor multiply_all(std::span<const Factor> factors);
Factor sum_out(const Factor& f, std::size_t var);

struct MaxOut {
  Factor result;
  /// For each entry of `result`, the first maximizing value of the removed variable.
  std::vector<int> argmax;
};
MaxOut max_out(const Factor& f, std::size_t var);

/// One factor per variable: its CPT as a table over {variable} ∪ parents.
std::vector<Factor> cpt_factors(const CompiledNet& net);

enum class EliminationMode { Sum, Max };

/// Record of one max-elimination, enough to decode maximizers afterwards.
struct EliminationStep {
  std::size_t variable = 0;
  Factor product;           // product of all factors mentioning `variable`
  std::vector<int> argmax;  // back-pointer per entry of the max-marginal
  Factor max_marginal;
};

struct EliminationResult {
  /// Product of what remains: scope is the kept variables that occur in the input.
  Factor factor;
  /// Max mode only: steps in elimination order.
  std::vector<EliminationStep> steps;
};

/// Greedy min-fill order over `to_eliminate`; ties go to the lower
/// declaration index.
std::vector<std::size_t> min_fill_order(std::span<const Factor> factors,
                                        std::span<const std::size_t> to_eliminate);

/// Eliminates exactly `vars` (min-fill order among them) and returns the
/// factors that remain, unmultiplied. Max mode appends to `steps`.
std::vector<Factor> eliminate_variables(std::vector<Factor> factors,
                                        std::span<const std::size_t> vars, EliminationMode mode,
                                        std::vector<EliminationStep>* steps = nullptr);

/// Sums (or maximizes) out every variable not in `keep`, in min-fill order.
EliminationResult eliminate(std::vector<Factor> factors, std::span<const std::size_t> keep,
                            EliminationMode mode);

}  // namespace bayesl
