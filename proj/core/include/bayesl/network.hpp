#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace bayesl {

inline constexpr double kProbabilityTolerance = 1e-9;

/// A finite-domain random variable. `values` is the declared domain order,
/// which is also the order used by <, <=, >, >= comparisons.
struct VariableDecl {
  std::string name;
  std::vector<std::string> values;
  bool ordered = true;

  std::optional<std::size_t> value_index(const std::string& value) const;
  std::size_t cardinality() const { return values.size(); }

  friend bool operator==(const VariableDecl&, const VariableDecl&) = default;
};

/// Conditional probability table of `child` given `parents`.
///
/// `rows` holds one distribution per joint parent assignment, in mixed-radix
/// order over `parents` with the last parent varying fastest. A root variable
/// has exactly one row.
struct Cpt {
  std::string child;
  std::vector<std::string> parents;
  std::vector<std::vector<double>> rows;

  friend bool operator==(const Cpt&, const Cpt&) = default;
};

struct Edge {
  std::string parent;
  std::string child;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// A discrete Bayesian network. Plain data: a value can be built in an
/// invalid state and checked with validate_network(). All other operations
/// require a valid network.
struct BayesNet {
  std::vector<VariableDecl> variables;
  std::vector<Edge> edges;
  std::vector<Cpt> cpts;

  std::optional<std::size_t> variable_index(const std::string& name) const;
  const VariableDecl& variable(const std::string& name) const;
  const Cpt& cpt(const std::string& child) const;
  /// Parents of `name` as listed by the edge relation, in edge order.
  std::vector<std::string> parents_of(const std::string& name) const;
  std::vector<std::string> children_of(const std::string& name) const;

  friend bool operator==(const BayesNet&, const BayesNet&) = default;
};

/// Variable name to value name, covering every variable of a network.
using FullAssignment = std::map<std::string, std::string>;

/// Partial assignment given as (variable, value) pairs in any order.
using ParentAssignment = std::vector<std::pair<std::string, std::string>>;

struct Diagnostic {
  std::string subject;  // offending variable, or empty for network-wide issues
  std::string message;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

std::vector<Diagnostic> validate_network(const BayesNet& net);

/// Throws std::invalid_argument carrying the first diagnostic when invalid.
void require_valid(const BayesNet& net);

/// Kahn's algorithm with ties broken by declaration order.
/// Throws std::invalid_argument if the edge relation has a cycle.
std::vector<std::string> topological_order(const BayesNet& net);

/// Index-based view of a valid network, laid out for fast CPT lookups.
/// Variables keep their declaration index.
class CompiledNet {
 public:
  explicit CompiledNet(const BayesNet& net);

  std::size_t size() const { return cards_.size(); }
  int cardinality(std::size_t var) const { return cards_[var]; }
  const std::vector<int>& cardinalities() const { return cards_; }
  /// Parent indices of `var` in CPT column order.
  const std::vector<std::size_t>& parents(std::size_t var) const { return parents_[var]; }
  /// Flattened CPT: entry (row * cardinality + value).
  const std::vector<double>& table(std::size_t var) const { return tables_[var]; }
  const std::vector<std::size_t>& topological() const { return topo_; }

  /// Probability of `var` taking its value in `assignment` given the parent
  /// values in `assignment`.
  double conditional(std::size_t var, std::span<const int> assignment) const;
  double joint(std::span<const int> assignment) const;

 private:
  std::vector<int> cards_;
  std::vector<std::vector<std::size_t>> parents_;
  std::vector<std::vector<double>> tables_;
  std::vector<std::size_t> topo_;
};

/// Converts a name-based assignment to value indices in declaration order.
/// Throws std::invalid_argument on a missing variable or unknown value.
std::vector<int> to_indices(const BayesNet& net, const FullAssignment& a);
FullAssignment to_names(const BayesNet& net, std::span<const int> a);

/// Product of the CPT entries selected by `a`.
double joint_probability(const BayesNet& net, const FullAssignment& a);

/// Row position inside `cpt.rows` for the given parent assignment, which must
/// assign exactly the CPT's parents.
std::size_t cpt_row_index(const BayesNet& net, const Cpt& cpt, const ParentAssignment& given);

struct CptUpdateResult {
  BayesNet net;
  std::size_t row = 0;
  /// Set when the old entry was 1, so the residual mass 1 - q was spread
  /// uniformly over the other values.
  bool degenerate = false;
};

/// Sets entry x of row `given` in X's CPT to q and rescales the rest of the
/// row so it still sums to one. Returns a new network; `net` is untouched.
/// Throws std::invalid_argument when `given` does not assign exactly the
/// parents of X, when q is outside [0, 1], or on unknown names.
CptUpdateResult apply_cpt_update(const BayesNet& net, const std::string& variable,
                                 const std::string& value, const ParentAssignment& given,
                                 double q);

/// Human-readable label for a CPT row, e.g. "Gra | Int=i1, Dif=d1".
std::string describe_row(const BayesNet& net, const Cpt& cpt, std::size_t row);

}  // namespace bayesl
