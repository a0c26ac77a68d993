#include "bayesl/network.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

#include "identifiers.hpp"

namespace bayesl {

std::optional<std::size_t> VariableDecl::value_index(const std::string& value) const {
  auto it = std::find(values.begin(), values.end(), value);
  if (it == values.end()) return std::nullopt;
  return static_cast<std::size_t>(it - values.begin());
}

std::optional<std::size_t> BayesNet::variable_index(const std::string& name) const {
  for (std::size_t i = 0; i < variables.size(); ++i)
    if (variables[i].name == name) return i;
  return std::nullopt;
}

const VariableDecl& BayesNet::variable(const std::string& name) const {
  auto idx = variable_index(name);
  if (!idx) throw std::invalid_argument("unknown variable '" + name + "'");
  return variables[*idx];
}

const Cpt& BayesNet::cpt(const std::string& child) const {
  for (const auto& c : cpts)
    if (c.child == child) return c;
  throw std::invalid_argument("no CPT for variable '" + child + "'");
}

std::vector<std::string> BayesNet::parents_of(const std::string& name) const {
  std::vector<std::string> out;
  for (const auto& e : edges)
    if (e.child == name) out.push_back(e.parent);
  return out;
}

std::vector<std::string> BayesNet::children_of(const std::string& name) const {
  std::vector<std::string> out;
  for (const auto& e : edges)
    if (e.parent == name) out.push_back(e.child);
  return out;
}

namespace {

// Kahn's algorithm over declaration indices. Returns nullopt on a cycle.
std::optional<std::vector<std::size_t>> kahn_order(const BayesNet& net) {
  const std::size_t n = net.variables.size();
  std::vector<std::vector<std::size_t>> children(n);
  std::vector<int> indegree(n, 0);
  for (const auto& e : net.edges) {
    auto p = net.variable_index(e.parent);
    auto c = net.variable_index(e.child);
    if (!p || !c) continue;
    children[*p].push_back(*c);
    ++indegree[*c];
  }
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t i = 0; i < n; ++i)
    if (indegree[i] == 0) ready.push(i);
  std::vector<std::size_t> order;
  order.reserve(n);
  while (!ready.empty()) {
    std::size_t v = ready.top();
    ready.pop();
    order.push_back(v);
    for (std::size_t c : children[v])
      if (--indegree[c] == 0) ready.push(c);
  }
  if (order.size() != n) return std::nullopt;
  return order;
}

std::size_t row_count(const BayesNet& net, const Cpt& cpt) {
  std::size_t rows = 1;
  for (const auto& p : cpt.parents) {
    auto idx = net.variable_index(p);
    if (!idx) return 0;
    rows *= net.variables[*idx].cardinality();
  }
  return rows;
}

}  // namespace

std::vector<Diagnostic> validate_network(const BayesNet& net) {
  std::vector<Diagnostic> out;
  auto report = [&](const std::string& subject, const std::string& message) {
    out.push_back({subject, message});
  };

  if (net.variables.empty()) report("", "network declares no variables");

  std::set<std::string> names;
  for (const auto& v : net.variables) {
    if (!detail::is_identifier(v.name)) report(v.name, "variable name is not an identifier");
    if (!names.insert(v.name).second) report(v.name, "duplicate variable");
    if (v.values.size() < 2) report(v.name, "domain must have at least 2 values");
    std::set<std::string> seen;
    for (const auto& val : v.values) {
      if (!detail::is_identifier(val))
        report(v.name, "value '" + val + "' is not an identifier");
      if (!seen.insert(val).second) report(v.name, "duplicate value '" + val + "'");
    }
  }

  std::set<std::pair<std::string, std::string>> edge_set;
  for (const auto& e : net.edges) {
    if (!names.count(e.parent)) report(e.parent, "edge endpoint is not a declared variable");
    if (!names.count(e.child)) report(e.child, "edge endpoint is not a declared variable");
    if (!edge_set.insert({e.parent, e.child}).second)
      report(e.child, "duplicate edge " + e.parent + " -> " + e.child);
  }
  if (!kahn_order(net)) report("", "cycle detected");

  std::map<std::string, int> cpt_count;
  for (const auto& cpt : net.cpts) {
    ++cpt_count[cpt.child];
    auto child_idx = net.variable_index(cpt.child);
    if (!child_idx) {
      report(cpt.child, "CPT for undeclared variable");
      continue;
    }
    const auto& child = net.variables[*child_idx];

    std::set<std::string> cpt_parents(cpt.parents.begin(), cpt.parents.end());
    if (cpt_parents.size() != cpt.parents.size()) report(cpt.child, "CPT lists a parent twice");
    auto edge_parents = net.parents_of(cpt.child);
    std::set<std::string> graph_parents(edge_parents.begin(), edge_parents.end());
    if (cpt_parents != graph_parents) {
      report(cpt.child, "CPT parents do not match the incoming edges");
      continue;
    }
    bool unknown_parent = false;
    for (const auto& p : cpt.parents)
      if (!names.count(p)) unknown_parent = true;
    if (unknown_parent) continue;

    const std::size_t expected_rows = row_count(net, cpt);
    if (cpt.rows.size() != expected_rows) {
      report(cpt.child, "CPT has " + std::to_string(cpt.rows.size()) + " rows, expected " +
                            std::to_string(expected_rows));
      continue;
    }
    for (std::size_t r = 0; r < cpt.rows.size(); ++r) {
      const auto& row = cpt.rows[r];
      const std::string where = describe_row(net, cpt, r);
      if (row.size() != child.cardinality()) {
        report(cpt.child, "row " + where + " has wrong arity");
        continue;
      }
      double sum = 0.0;
      bool in_range = true;
      for (double p : row) {
        if (!std::isfinite(p) || p < 0.0 || p > 1.0) in_range = false;
        sum += p;
      }
      if (!in_range) report(cpt.child, "row " + where + " has an entry outside [0,1]");
      if (std::abs(sum - 1.0) > kProbabilityTolerance)
        report(cpt.child, "row " + where + " does not sum to 1");
    }
  }
  for (const auto& v : net.variables) {
    int count = cpt_count.count(v.name) ? cpt_count[v.name] : 0;
    if (count == 0) report(v.name, "missing CPT");
    if (count > 1) report(v.name, "more than one CPT");
  }
  return out;
}

void require_valid(const BayesNet& net) {
  auto diags = validate_network(net);
  if (diags.empty()) return;
  const auto& d = diags.front();
  throw std::invalid_argument("invalid network: " +
                              (d.subject.empty() ? d.message : d.subject + ": " + d.message));
}

std::vector<std::string> topological_order(const BayesNet& net) {
  auto order = kahn_order(net);
  if (!order) throw std::invalid_argument("cycle detected");
  std::vector<std::string> out;
  out.reserve(order->size());
  for (std::size_t i : *order) out.push_back(net.variables[i].name);
  return out;
}

CompiledNet::CompiledNet(const BayesNet& net) {
  const std::size_t n = net.variables.size();
  cards_.resize(n);
  parents_.resize(n);
  tables_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& var = net.variables[i];
    cards_[i] = static_cast<int>(var.cardinality());
    const Cpt& cpt = net.cpt(var.name);
    for (const auto& p : cpt.parents) parents_[i].push_back(*net.variable_index(p));
    auto& table = tables_[i];
    table.reserve(cpt.rows.size() * var.cardinality());
    for (const auto& row : cpt.rows) table.insert(table.end(), row.begin(), row.end());
  }
  auto order = kahn_order(net);
  if (!order) throw std::invalid_argument("cycle detected");
  topo_ = std::move(*order);
}

double CompiledNet::conditional(std::size_t var, std::span<const int> assignment) const {
  std::size_t row = 0;
  for (std::size_t p : parents_[var])
    row = row * static_cast<std::size_t>(cards_[p]) + static_cast<std::size_t>(assignment[p]);
  return tables_[var][row * static_cast<std::size_t>(cards_[var]) +
                      static_cast<std::size_t>(assignment[var])];
}

double CompiledNet::joint(std::span<const int> assignment) const {
  double p = 1.0;
  for (std::size_t v = 0; v < cards_.size(); ++v) p *= conditional(v, assignment);
  return p;
}

std::vector<int> to_indices(const BayesNet& net, const FullAssignment& a) {
  std::vector<int> out(net.variables.size());
  for (std::size_t i = 0; i < net.variables.size(); ++i) {
    const auto& var = net.variables[i];
    auto it = a.find(var.name);
    if (it == a.end())
      throw std::invalid_argument("assignment is missing variable '" + var.name + "'");
    auto idx = var.value_index(it->second);
    if (!idx)
      throw std::invalid_argument("'" + it->second + "' is not a value of '" + var.name + "'");
    out[i] = static_cast<int>(*idx);
  }
  for (const auto& [name, value] : a)
    if (!net.variable_index(name))
      throw std::invalid_argument("assignment names unknown variable '" + name + "'");
  return out;
}

FullAssignment to_names(const BayesNet& net, std::span<const int> a) {
  FullAssignment out;
  for (std::size_t i = 0; i < net.variables.size(); ++i)
    out[net.variables[i].name] = net.variables[i].values[static_cast<std::size_t>(a[i])];
  return out;
}

double joint_probability(const BayesNet& net, const FullAssignment& a) {
  auto indices = to_indices(net, a);
  return CompiledNet(net).joint(indices);
}

std::size_t cpt_row_index(const BayesNet& net, const Cpt& cpt, const ParentAssignment& given) {
  std::map<std::string, std::string> by_name;
  for (const auto& [var, value] : given) {
    if (!by_name.emplace(var, value).second)
      throw std::invalid_argument("variable '" + var + "' assigned twice in evidence");
  }
  if (by_name.size() != cpt.parents.size())
    throw std::invalid_argument("evidence must cover all parents of '" + cpt.child + "'");
  std::size_t row = 0;
  for (const auto& parent : cpt.parents) {
    auto it = by_name.find(parent);
    if (it == by_name.end())
      throw std::invalid_argument("evidence must cover all parents of '" + cpt.child + "'");
    const auto& decl = net.variable(parent);
    auto idx = decl.value_index(it->second);
    if (!idx)
      throw std::invalid_argument("'" + it->second + "' is not a value of '" + parent + "'");
    row = row * decl.cardinality() + *idx;
  }
  return row;
}

CptUpdateResult apply_cpt_update(const BayesNet& net, const std::string& variable,
                                 const std::string& value, const ParentAssignment& given,
                                 double q) {
  if (!(q >= 0.0 && q <= 1.0))
    throw std::invalid_argument("update probability must lie in [0,1]");
  const auto& decl = net.variable(variable);
  auto target = decl.value_index(value);
  if (!target) throw std::invalid_argument("'" + value + "' is not a value of '" + variable + "'");

  CptUpdateResult result{net, 0, false};
  Cpt* cpt = nullptr;
  for (auto& c : result.net.cpts)
    if (c.child == variable) cpt = &c;
  if (!cpt) throw std::invalid_argument("no CPT for variable '" + variable + "'");
  result.row = cpt_row_index(net, *cpt, given);

  auto& row = cpt->rows[result.row];
  // Rescale by the mass of the other entries; for a valid row this equals
  // 1 - row[target] but avoids the cancellation in that subtraction.
  double rest = 0.0;
  for (std::size_t i = 0; i < row.size(); ++i)
    if (i != *target) rest += row[i];

  if (rest > 0.0) {
    const double scale = (1.0 - q) / rest;
    for (std::size_t i = 0; i < row.size(); ++i)
      if (i != *target) row[i] *= scale;
  } else if (q < 1.0) {
    result.degenerate = true;
    const double share = (1.0 - q) / static_cast<double>(row.size() - 1);
    for (std::size_t i = 0; i < row.size(); ++i)
      if (i != *target) row[i] = share;
  }
  row[*target] = q;
  return result;
}

std::string describe_row(const BayesNet& net, const Cpt& cpt, std::size_t row) {
  std::ostringstream os;
  os << cpt.child;
  if (cpt.parents.empty()) return os.str();
  std::vector<std::string> parts(cpt.parents.size());
  std::size_t rem = row;
  for (std::size_t k = cpt.parents.size(); k-- > 0;) {
    auto idx = net.variable_index(cpt.parents[k]);
    if (!idx) return os.str();
    const auto& decl = net.variables[*idx];
    parts[k] = cpt.parents[k] + "=" + decl.values[rem % decl.cardinality()];
    rem /= decl.cardinality();
  }
  os << " | ";
  for (std::size_t k = 0; k < parts.size(); ++k) os << (k ? ", " : "") << parts[k];
  return os.str();
}

}  // namespace bayesl
