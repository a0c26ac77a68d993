#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "bayesl/bayesl.hpp"

namespace {

using namespace bayesl;

const std::vector<std::string> kQueries = {
    "P(Dif = d1 | Let = l0)",
    "P(Let = l1 | SAT = s1 || Gra = g1)",
    "P(Gra < g1 || Dif = d0)",
    "P(Let = l1 | Gra = g1) >= 0.8 && IDP(Int, Let | Gra)",
    "P(Let = l1 | Gra = g1) >= 0.7 [Gra = g1 | Int = i1, Dif = d1 -> 0.9]",
    "MAP(Int, SAT | Let = l1)",
    "MPE(Let = l1)",
};

const BayesNet& student() {
  static const BayesNet net = load_network(std::string(BAYESL_MODELS_DIR) + "/student.bn.json").net;
  return net;
}

// X0 -> X1 -> ... -> X(n-1), binary.
BayesNet chain(int n) {
  BayesNet net;
  for (int i = 0; i < n; ++i) {
    const std::string name = "X" + std::to_string(i);
    net.variables.push_back({name, {"f", "t"}});
    if (i == 0) {
      net.cpts.push_back({name, {}, {{0.4, 0.6}}});
    } else {
      const std::string parent = "X" + std::to_string(i - 1);
      net.edges.push_back({parent, name});
      net.cpts.push_back({name, {parent}, {{0.7, 0.3}, {0.2, 0.8}}});
    }
  }
  return net;
}

void BM_ParsePrint(benchmark::State& state) {
  for (auto _ : state) {
    for (const auto& q : kQueries) benchmark::DoNotOptimize(pretty_print(*parse_query(q)));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(kQueries.size()));
}
BENCHMARK(BM_ParsePrint);

void BM_ReferenceSuite(benchmark::State& state) {
  const BayesNet& net = student();
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_all(net, kQueries));
}
BENCHMARK(BM_ReferenceSuite)->Unit(benchmark::kMicrosecond);

void BM_MarginalElimination(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const BayesNet net = chain(n);
  const AtomPtr event = resolve_atom(parse_atom("X" + std::to_string(n - 1) + " = t"), net);
  for (auto _ : state) benchmark::DoNotOptimize(marginal(net, *event));
}
BENCHMARK(BM_MarginalElimination)->RangeMultiplier(2)->Range(4, 64)->Unit(benchmark::kMicrosecond);

void BM_MarginalEnumeration(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const BayesNet net = chain(n);
  const AtomPtr event = resolve_atom(parse_atom("X" + std::to_string(n - 1) + " = t"), net);
  for (auto _ : state) benchmark::DoNotOptimize(marginal_oracle(net, *event));
}
BENCHMARK(BM_MarginalEnumeration)->DenseRange(4, 16, 4)->Unit(benchmark::kMicrosecond);

void BM_MpeElimination(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const BayesNet net = chain(n);
  const AtomPtr evidence = resolve_atom(parse_atom("X0 = t"), net);
  for (auto _ : state) benchmark::DoNotOptimize(mpe_query(net, *evidence));
}
BENCHMARK(BM_MpeElimination)->RangeMultiplier(2)->Range(4, 32)->Unit(benchmark::kMicrosecond);

void BM_DSeparation(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const BayesNet net = chain(n);
  const TrailQuery q{"X0", "X" + std::to_string(n - 1), {"X" + std::to_string(n / 2)}};
  for (auto _ : state) benchmark::DoNotOptimize(d_separated(net, q));
}
BENCHMARK(BM_DSeparation)->RangeMultiplier(4)->Range(8, 512);

}  // namespace

BENCHMARK_MAIN();
