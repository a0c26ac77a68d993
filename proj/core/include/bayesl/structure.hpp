#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "bayesl/network.hpp"

namespace bayesl {

/// Is there an active trail from `source` to `target` given `observed`?
/// Source and target must differ and must not be observed. Duplicates in
/// `observed` are ignored.
struct TrailQuery {
  std::string source;
  std::string target;
  std::vector<std::string> observed;
};

inline constexpr std::size_t kTrailOracleMaxNodes = 10;

/// Two-phase reachability: ancestors of the observed set, then a search over
/// (node, direction of arrival) states. Linear in the size of the graph.
/// Only the edge relation is consulted; CPTs are ignored.
bool active_trail_exists(const BayesNet& net, const TrailQuery& query);

/// Negation of active_trail_exists.
bool d_separated(const BayesNet& net, const TrailQuery& query);

/// Checks every simple undirected path against the chain/fork/v-structure
/// rules. Exponential; refuses graphs above kTrailOracleMaxNodes.
bool enumerate_trails_oracle(const BayesNet& net, const TrailQuery& query);

}  // namespace bayesl
