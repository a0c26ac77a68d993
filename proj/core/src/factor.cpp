#include "bayesl/factor.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <stdexcept>

namespace bayesl {

Factor::Factor(std::vector<std::size_t> scope, std::vector<int> cards, std::vector<double> values)
    : scope_(std::move(scope)), cards_(std::move(cards)), values_(std::move(values)) {
  if (scope_.size() != cards_.size()) throw std::invalid_argument("factor scope/cards mismatch");
  if (!std::is_sorted(scope_.begin(), scope_.end()) ||
      std::adjacent_find(scope_.begin(), scope_.end()) != scope_.end())
    throw std::invalid_argument("factor scope must be strictly increasing");
  std::size_t n = 1;
  for (int c : cards_) n *= static_cast<std::size_t>(c);
  if (values_.size() != n) throw std::invalid_argument("factor table has wrong size");
}

Factor Factor::scalar(double value) { return Factor({}, {}, {value}); }

Factor Factor::constant(std::span<const std::size_t> scope, std::span<const int> net_cards,
                        double fill) {
  std::vector<std::size_t> sorted(scope.begin(), scope.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<int> cards;
  std::size_t n = 1;
  for (std::size_t v : sorted) {
    cards.push_back(net_cards[v]);
    n *= static_cast<std::size_t>(net_cards[v]);
  }
  return Factor(std::move(sorted), std::move(cards), std::vector<double>(n, fill));
}

bool Factor::contains(std::size_t var) const {
  return std::binary_search(scope_.begin(), scope_.end(), var);
}

std::size_t Factor::offset(std::span<const int> full) const {
  std::size_t idx = 0;
  for (std::size_t k = 0; k < scope_.size(); ++k)
    idx = idx * static_cast<std::size_t>(cards_[k]) + static_cast<std::size_t>(full[scope_[k]]);
  return idx;
}

double Factor::at(std::span<const int> full) const { return values_[offset(full)]; }

void Factor::decode(std::size_t index, std::span<int> full) const {
  for (std::size_t k = scope_.size(); k-- > 0;) {
    const auto card = static_cast<std::size_t>(cards_[k]);
    full[scope_[k]] = static_cast<int>(index % card);
    index /= card;
  }
}

namespace {

// Strides of `f`'s variables inside a table laid out over `scope`/`cards`;
// zero for variables `f` does not mention.
std::vector<std::size_t> strides_in(const Factor& f, const std::vector<std::size_t>& scope) {
  std::vector<std::size_t> out(scope.size(), 0);
  std::size_t stride = 1;
  for (std::size_t k = f.scope().size(); k-- > 0;) {
    auto pos = std::lower_bound(scope.begin(), scope.end(), f.scope()[k]) - scope.begin();
    out[static_cast<std::size_t>(pos)] = stride;
    stride *= static_cast<std::size_t>(f.cards()[k]);
  }
  return out;
}

}  // namespace

Factor multiply(const Factor& a, const Factor& b) {
  std::vector<std::size_t> scope;
  std::vector<int> cards;
  std::size_t i = 0, j = 0;
  while (i < a.scope().size() || j < b.scope().size()) {
    if (j == b.scope().size() || (i < a.scope().size() && a.scope()[i] < b.scope()[j])) {
      scope.push_back(a.scope()[i]);
      cards.push_back(a.cards()[i++]);
    } else if (i == a.scope().size() || b.scope()[j] < a.scope()[i]) {
      scope.push_back(b.scope()[j]);
      cards.push_back(b.cards()[j++]);
    } else {
      if (a.cards()[i] != b.cards()[j]) throw std::invalid_argument("factor cardinality mismatch");
      scope.push_back(a.scope()[i]);
      cards.push_back(a.cards()[i]);
      ++i;
      ++j;
    }
  }
  std::size_t n = 1;
  for (int c : cards) n *= static_cast<std::size_t>(c);

  const auto sa = strides_in(a, scope);
  const auto sb = strides_in(b, scope);
  std::vector<double> values(n);
  std::vector<int> digit(scope.size(), 0);
  std::size_t ia = 0, ib = 0;
  for (std::size_t out = 0; out < n; ++out) {
    values[out] = a.values()[ia] * b.values()[ib];
    // Odometer increment, last variable fastest.
    for (std::size_t k = scope.size(); k-- > 0;) {
      if (++digit[k] < cards[k]) {
        ia += sa[k];
        ib += sb[k];
        break;
      }
      digit[k] = 0;
      ia -= sa[k] * static_cast<std::size_t>(cards[k] - 1);
      ib -= sb[k] * static_cast<std::size_t>(cards[k] - 1);
    }
  }
  return Factor(std::move(scope), std::move(cards), std::move(values));
}

Factor multiply_all(std::span<const Factor> factors) {
  Factor acc;
  for (const auto& f : factors) acc = multiply(acc, f);
  return acc;
}

namespace {

template <class Combine>
Factor reduce_var(const Factor& f, std::size_t var, double init, Combine combine,
                  std::vector<int>* argmax) {
  auto it = std::lower_bound(f.scope().begin(), f.scope().end(), var);
  if (it == f.scope().end() || *it != var) throw std::invalid_argument("variable not in factor");
  const auto pos = static_cast<std::size_t>(it - f.scope().begin());

  std::vector<std::size_t> scope = f.scope();
  std::vector<int> cards = f.cards();
  const auto card = static_cast<std::size_t>(cards[pos]);
  scope.erase(scope.begin() + static_cast<std::ptrdiff_t>(pos));
  cards.erase(cards.begin() + static_cast<std::ptrdiff_t>(pos));

  std::size_t inner = 1;  // stride of `var` in f
  for (std::size_t k = pos + 1; k < f.cards().size(); ++k)
    inner *= static_cast<std::size_t>(f.cards()[k]);
  const std::size_t outer = f.size() / (inner * card);

  std::vector<double> values(outer * inner, init);
  if (argmax) argmax->assign(values.size(), 0);
  for (std::size_t o = 0; o < outer; ++o)
    for (std::size_t x = 0; x < card; ++x)
      for (std::size_t in = 0; in < inner; ++in) {
        const double v = f.values()[(o * card + x) * inner + in];
        double& acc = values[o * inner + in];
        if (combine(acc, v) && argmax) (*argmax)[o * inner + in] = static_cast<int>(x);
      }
  return Factor(std::move(scope), std::move(cards), std::move(values));
}

}  // namespace

Factor sum_out(const Factor& f, std::size_t var) {
  return reduce_var(
      f, var, 0.0,
      [](double& acc, double v) {
        acc += v;
        return false;
      },
      nullptr);
}

MaxOut max_out(const Factor& f, std::size_t var) {
  MaxOut out;
  out.result = reduce_var(
      f, var, -std::numeric_limits<double>::infinity(),
      [](double& acc, double v) {
        if (v > acc) {
          acc = v;
          return true;
        }
        return false;
      },
      &out.argmax);
  return out;
}

std::vector<Factor> cpt_factors(const CompiledNet& net) {
  std::vector<Factor> out;
  out.reserve(net.size());
  std::vector<int> full(net.size(), 0);
  for (std::size_t v = 0; v < net.size(); ++v) {
    std::vector<std::size_t> scope = net.parents(v);
    scope.push_back(v);
    Factor f = Factor::constant(scope, net.cardinalities(), 0.0);
    for (std::size_t i = 0; i < f.size(); ++i) {
      f.decode(i, full);
      f.values()[i] = net.conditional(v, full);
    }
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<std::size_t> min_fill_order(std::span<const Factor> factors,
                                        std::span<const std::size_t> to_eliminate) {
  std::set<std::size_t> remaining(to_eliminate.begin(), to_eliminate.end());
  // Interaction graph over every variable mentioned by the factors.
  std::vector<std::set<std::size_t>> adj;
  auto ensure = [&](std::size_t v) {
    if (adj.size() <= v) adj.resize(v + 1);
  };
  for (std::size_t v : remaining) ensure(v);
  for (const auto& f : factors)
    for (std::size_t a : f.scope()) {
      ensure(a);
      for (std::size_t b : f.scope())
        if (a != b) adj[a].insert(b);
    }

  std::vector<std::size_t> order;
  order.reserve(remaining.size());
  while (!remaining.empty()) {
    std::size_t best = *remaining.begin();
    std::size_t best_fill = std::numeric_limits<std::size_t>::max();
    for (std::size_t v : remaining) {  // ascending, so ties keep the lowest index
      std::size_t fill = 0;
      for (auto i = adj[v].begin(); i != adj[v].end(); ++i)
        for (auto j = std::next(i); j != adj[v].end(); ++j)
          if (!adj[*i].count(*j)) ++fill;
      if (fill < best_fill) {
        best = v;
        best_fill = fill;
      }
    }
    for (std::size_t a : adj[best])
      for (std::size_t b : adj[best])
        if (a != b) adj[a].insert(b);
    for (std::size_t a : adj[best]) adj[a].erase(best);
    adj[best].clear();
    remaining.erase(best);
    order.push_back(best);
  }
  return order;
}

std::vector<Factor> eliminate_variables(std::vector<Factor> factors,
                                        std::span<const std::size_t> vars, EliminationMode mode,
                                        std::vector<EliminationStep>* steps) {
  for (std::size_t var : min_fill_order(factors, vars)) {
    std::vector<Factor> involved;
    std::vector<Factor> rest;
    for (auto& f : factors) (f.contains(var) ? involved : rest).push_back(std::move(f));
    if (involved.empty()) {
      factors = std::move(rest);
      continue;
    }
    Factor product = multiply_all(involved);
    if (mode == EliminationMode::Sum) {
      rest.push_back(sum_out(product, var));
    } else {
      MaxOut m = max_out(product, var);
      rest.push_back(m.result);
      if (steps)
        steps->push_back({var, std::move(product), std::move(m.argmax), std::move(m.result)});
    }
    factors = std::move(rest);
  }
  return factors;
}

EliminationResult eliminate(std::vector<Factor> factors, std::span<const std::size_t> keep,
                            EliminationMode mode) {
  std::set<std::size_t> kept(keep.begin(), keep.end());
  std::set<std::size_t> mentioned;
  for (const auto& f : factors) mentioned.insert(f.scope().begin(), f.scope().end());
  std::vector<std::size_t> targets;
  for (std::size_t v : mentioned)
    if (!kept.count(v)) targets.push_back(v);

  EliminationResult result;
  auto rest = eliminate_variables(std::move(factors), targets, mode, &result.steps);
  result.factor = multiply_all(rest);
  return result;
}

}  // namespace bayesl
