#include "bayesl/structure.hpp"

#include <array>
#include <deque>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <unordered_map>

namespace bayesl {

namespace {

struct Graph {
  std::vector<std::vector<std::size_t>> parents;
  std::vector<std::vector<std::size_t>> children;
  std::size_t source = 0;
  std::size_t target = 0;
  std::vector<bool> observed;
};

Graph build(const BayesNet& net, const TrailQuery& q) {
  const std::size_t n = net.variables.size();
  Graph g;
  g.parents.resize(n);
  g.children.resize(n);
  std::unordered_map<std::string_view, std::size_t> ids;
  ids.reserve(n);
  for (std::size_t i = 0; i < n; ++i) ids.emplace(net.variables[i].name, i);
  auto find = [&](const std::string& name) -> std::optional<std::size_t> {
    auto it = ids.find(name);
    if (it == ids.end()) return std::nullopt;
    return it->second;
  };
  for (const auto& e : net.edges) {
    auto p = find(e.parent);
    auto c = find(e.child);
    if (!p || !c) throw std::invalid_argument("edge references an unknown variable");
    g.parents[*c].push_back(*p);
    g.children[*p].push_back(*c);
  }
  auto index = [&](const std::string& name) {
    auto idx = find(name);
    if (!idx) throw std::invalid_argument("unknown variable '" + name + "'");
    return *idx;
  };
  g.source = index(q.source);
  g.target = index(q.target);
  if (g.source == g.target) throw std::invalid_argument("trail endpoints must differ");
  g.observed.assign(n, false);
  for (const auto& name : q.observed) g.observed[index(name)] = true;
  if (g.observed[g.source] || g.observed[g.target])
    throw std::invalid_argument("trail endpoints must not be observed");
  return g;
}

}  // namespace

bool active_trail_exists(const BayesNet& net, const TrailQuery& query) {
  const Graph g = build(net, query);
  const std::size_t n = g.parents.size();

  // Phase 1: observed nodes and all their ancestors.
  std::vector<bool> ancestor(n, false);
  std::deque<std::size_t> pending;
  for (std::size_t v = 0; v < n; ++v)
    if (g.observed[v]) pending.push_back(v);
  while (!pending.empty()) {
    std::size_t v = pending.front();
    pending.pop_front();
    if (ancestor[v]) continue;
    ancestor[v] = true;
    for (std::size_t p : g.parents[v]) pending.push_back(p);
  }

  // Phase 2: `up` means the trail arrived from a child, `down` from a parent.
  enum Dir { kUp = 0, kDown = 1 };
  std::vector<std::array<bool, 2>> visited(n, {false, false});
  std::deque<std::pair<std::size_t, Dir>> frontier{{g.source, kUp}};
  while (!frontier.empty()) {
    auto [v, dir] = frontier.front();
    frontier.pop_front();
    if (visited[v][dir]) continue;
    visited[v][dir] = true;
    if (!g.observed[v] && v == g.target) return true;

    if (dir == kUp && !g.observed[v]) {
      for (std::size_t p : g.parents[v]) frontier.emplace_back(p, kUp);
      for (std::size_t c : g.children[v]) frontier.emplace_back(c, kDown);
    } else if (dir == kDown) {
      if (!g.observed[v])
        for (std::size_t c : g.children[v]) frontier.emplace_back(c, kDown);
      if (ancestor[v])
        for (std::size_t p : g.parents[v]) frontier.emplace_back(p, kUp);
    }
  }
  return false;
}

bool d_separated(const BayesNet& net, const TrailQuery& query) {
  return !active_trail_exists(net, query);
}

bool enumerate_trails_oracle(const BayesNet& net, const TrailQuery& query) {
  if (net.variables.size() > kTrailOracleMaxNodes)
    throw std::length_error("trail enumeration is limited to " +
                            std::to_string(kTrailOracleMaxNodes) + " nodes");
  const Graph g = build(net, query);
  const std::size_t n = g.parents.size();

  auto has_edge = [&](std::size_t from, std::size_t to) {
    for (std::size_t c : g.children[from])
      if (c == to) return true;
    return false;
  };
  // Observed, or has an observed descendant.
  std::vector<bool> opens_collider(n, false);
  for (std::size_t v = 0; v < n; ++v) {
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> stack{v};
    while (!stack.empty() && !opens_collider[v]) {
      std::size_t u = stack.back();
      stack.pop_back();
      if (seen[u]) continue;
      seen[u] = true;
      if (g.observed[u]) opens_collider[v] = true;
      for (std::size_t c : g.children[u]) stack.push_back(c);
    }
  }

  auto path_active = [&](const std::vector<std::size_t>& path) {
    for (std::size_t i = 1; i + 1 < path.size(); ++i) {
      const std::size_t a = path[i - 1], b = path[i], c = path[i + 1];
      const bool collider = has_edge(a, b) && has_edge(c, b);
      if (collider ? !opens_collider[b] : g.observed[b]) return false;
    }
    return true;
  };

  std::vector<bool> on_path(n, false);
  std::vector<std::size_t> path{g.source};
  on_path[g.source] = true;
  std::function<bool(std::size_t)> extend = [&](std::size_t v) {
    if (v == g.target) return path_active(path);
    std::vector<std::size_t> next = g.parents[v];
    next.insert(next.end(), g.children[v].begin(), g.children[v].end());
    for (std::size_t u : next) {
      if (on_path[u]) continue;
      on_path[u] = true;
      path.push_back(u);
      const bool found = extend(u);
      path.pop_back();
      on_path[u] = false;
      if (found) return true;
    }
    return false;
  };
  return extend(g.source);
}

}  // namespace bayesl
