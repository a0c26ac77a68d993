#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <vector>

#include "bayesl/bayesl.hpp"

namespace bayesl::testing {

using Rng = std::mt19937_64;

struct NetShape {
  std::size_t min_vars = 2;
  std::size_t max_vars = 8;
  int min_card = 2;
  int max_card = 3;
  double edge_prob = 0.4;
  std::size_t max_parents = 3;
  /// Probability that a single CPT entry is forced to zero.
  double zero_prob = 0.05;
  /// Draw names from a pool that includes query keywords (P, MAP, ...).
  bool tricky_names = false;
};

/// Random valid network. Edges only go from lower to higher declaration
/// index, then declaration order is shuffled so topological order differs.
BayesNet random_net(Rng& rng, const NetShape& shape = {});

/// Random DAG on exactly `nodes` binary variables with uniform CPTs.
BayesNet random_dag(Rng& rng, std::size_t nodes, double edge_prob);

/// Same structure and domains, fresh random CPT entries.
BayesNet reparameterize(const BayesNet& net, Rng& rng, double zero_prob = 0.0);

/// Random event over the variables in `allowed` (all variables when empty).
/// Unordered variables only get `=` / `!=`.
AtomPtr random_atom(Rng& rng, const BayesNet& net, int depth,
                    const std::vector<std::size_t>& allowed = {});

/// Random update row for `net`.
CptUpdateSpec random_update(Rng& rng, const BayesNet& net);

/// Random query that passes layer_check in non-strict mode.
QueryPtr random_query(Rng& rng, const BayesNet& net, int depth);

/// Random Bool-kinded query.
QueryPtr random_bool_query(Rng& rng, const BayesNet& net, int depth);

/// Random Prob-kinded query (P, conditional P, or an update around one).
QueryPtr random_prob_query(Rng& rng, const BayesNet& net, int depth);

QueryPtr checked(const std::string& text, const BayesNet& net, bool strict = false);
AtomPtr resolved(const std::string& text, const BayesNet& net);

std::filesystem::path models_dir();
std::filesystem::path fixtures_dir();
BayesNet student();

}  // namespace bayesl::testing
