#include <gtest/gtest.h>

#include <numeric>

#include "generators.hpp"

namespace bayesl {
namespace {

using testing::student;

BayesNet chain_declared_backwards() {
  BayesNet net;
  net.variables = {{"C", {"c0", "c1"}}, {"B", {"b0", "b1"}}, {"A", {"a0", "a1"}}};
  net.edges = {{"A", "B"}, {"B", "C"}};
  net.cpts = {{"C", {"B"}, {{0.9, 0.1}, {0.2, 0.8}}},
              {"B", {"A"}, {{0.7, 0.3}, {0.4, 0.6}}},
              {"A", {}, {{0.25, 0.75}}}};
  return net;
}

bool has_message(const std::vector<Diagnostic>& diags, const std::string& needle) {
  return std::any_of(diags.begin(), diags.end(), [&](const Diagnostic& d) {
    return d.message.find(needle) != std::string::npos;
  });
}

TEST(Network, StudentNetIsValid) { EXPECT_TRUE(validate_network(student()).empty()); }

TEST(Network, CycleIsDiagnosed) {
  BayesNet net = student();
  net.edges.push_back({"Let", "Int"});
  auto& cpt = const_cast<Cpt&>(net.cpt("Int"));
  cpt.parents = {"Let"};
  cpt.rows = {{0.7, 0.3}, {0.7, 0.3}};
  EXPECT_TRUE(has_message(validate_network(net), "cycle detected"));
  EXPECT_THROW(topological_order(net), std::invalid_argument);
}

TEST(Network, RowSumIsDiagnosed) {
  BayesNet net = student();
  const_cast<Cpt&>(net.cpt("Gra")).rows[0] = {0.3, 0.4, 0.2};
  const auto diags = validate_network(net);
  ASSERT_FALSE(diags.empty());
  EXPECT_TRUE(has_message(diags, "does not sum to 1"));
  EXPECT_EQ(diags.front().subject, "Gra");
}

TEST(Network, OtherStructuralProblemsAreDiagnosed) {
  BayesNet net = student();
  net.variables[0].values = {"d0"};
  EXPECT_FALSE(validate_network(net).empty());

  net = student();
  net.variables[1].values = {"i0", "i0"};
  EXPECT_FALSE(validate_network(net).empty());

  net = student();
  net.variables[0].name = "bad name";
  EXPECT_FALSE(validate_network(net).empty());

  net = student();
  net.edges.push_back({"Nope", "Gra"});
  EXPECT_FALSE(validate_network(net).empty());

  net = student();
  const_cast<Cpt&>(net.cpt("Gra")).parents = {"Int"};
  EXPECT_FALSE(validate_network(net).empty());

  net = student();
  const_cast<Cpt&>(net.cpt("SAT")).rows.pop_back();
  EXPECT_FALSE(validate_network(net).empty());

  net = student();
  const_cast<Cpt&>(net.cpt("SAT")).rows[0] = {1.2, -0.2};
  EXPECT_FALSE(validate_network(net).empty());

  net = student();
  net.cpts.pop_back();
  EXPECT_FALSE(validate_network(net).empty());
}

TEST(Network, TopologicalOrder) {
  EXPECT_EQ(topological_order(student()),
            (std::vector<std::string>{"Dif", "Int", "Gra", "SAT", "Let"}));

  BayesNet single;
  single.variables = {{"X", {"x0", "x1"}}};
  single.cpts = {{"X", {}, {{0.5, 0.5}}}};
  EXPECT_EQ(topological_order(single), std::vector<std::string>{"X"});

  EXPECT_EQ(topological_order(chain_declared_backwards()),
            (std::vector<std::string>{"A", "B", "C"}));
}

TEST(Network, TopologicalOrderPutsParentsFirstOnRandomNets) {
  testing::Rng rng(11);
  for (int i = 0; i < 100; ++i) {
    const BayesNet net = testing::random_net(rng);
    const auto order = topological_order(net);
    ASSERT_EQ(order.size(), net.variables.size());
    auto pos = [&](const std::string& n) {
      return std::find(order.begin(), order.end(), n) - order.begin();
    };
    for (const auto& e : net.edges) EXPECT_LT(pos(e.parent), pos(e.child));
  }
}

TEST(Network, JointProbabilityUsesCptEntries) {
  const BayesNet net = student();
  const FullAssignment a = {{"Dif", "d1"}, {"Int", "i1"}, {"Gra", "g2"}, {"SAT", "s1"},
                            {"Let", "l1"}};
  EXPECT_DOUBLE_EQ(joint_probability(net, a), 0.4 * 0.3 * 0.3 * 0.8 * 0.6);
}

TEST(Network, JointSumsToOne) {
  const BayesNet net = student();
  CompiledNet c(net);
  double total = 0.0;
  int count = 0;
  std::vector<int> a(5, 0);
  for (a[0] = 0; a[0] < 2; ++a[0])
    for (a[1] = 0; a[1] < 2; ++a[1])
      for (a[2] = 0; a[2] < 3; ++a[2])
        for (a[3] = 0; a[3] < 2; ++a[3])
          for (a[4] = 0; a[4] < 2; ++a[4]) {
            const double p = joint_probability(net, to_names(net, a));
            EXPECT_GE(p, 0.0);
            EXPECT_LE(p, 1.0);
            EXPECT_DOUBLE_EQ(p, c.joint(a));
            total += p;
            ++count;
          }
  EXPECT_EQ(count, 48);
  EXPECT_NEAR(total, 1.0, 1e-9);
}

TEST(Network, JointSumsToOneOnRandomNets) {
  testing::Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    const BayesNet net = testing::random_net(rng);
    CompiledNet c(net);
    std::vector<int> a(c.size(), 0);
    double total = 0.0;
    for (;;) {
      const double p = c.joint(a);
      ASSERT_GE(p, 0.0);
      ASSERT_LE(p, 1.0);
      total += p;
      std::size_t k = a.size();
      while (k-- > 0 && ++a[k] == c.cardinality(k)) a[k] = 0;
      if (k == static_cast<std::size_t>(-1)) break;
    }
    EXPECT_NEAR(total, 1.0, 1e-9);
  }
}

TEST(Network, DeterministicJoint) {
  BayesNet net = chain_declared_backwards();
  const_cast<Cpt&>(net.cpt("A")).rows = {{0.0, 1.0}};
  const_cast<Cpt&>(net.cpt("B")).rows = {{1.0, 0.0}, {0.0, 1.0}};
  const_cast<Cpt&>(net.cpt("C")).rows = {{0.0, 1.0}, {1.0, 0.0}};
  CompiledNet c(net);
  // Declaration order is C, B, A.
  for (int cv = 0; cv < 2; ++cv)
    for (int bv = 0; bv < 2; ++bv)
      for (int av = 0; av < 2; ++av) {
        const std::vector<int> a = {cv, bv, av};
        EXPECT_EQ(c.joint(a), (cv == 0 && bv == 1 && av == 1) ? 1.0 : 0.0);
      }
}

TEST(Network, ToIndicesRejectsBadAssignments) {
  const BayesNet net = student();
  EXPECT_THROW(to_indices(net, {{"Dif", "d0"}}), std::invalid_argument);
  FullAssignment a = {{"Dif", "d0"}, {"Int", "i0"}, {"Gra", "g9"}, {"SAT", "s0"}, {"Let", "l0"}};
  EXPECT_THROW(to_indices(net, a), std::invalid_argument);
}

TEST(CptUpdate, WorkedExample) {
  const BayesNet net = student();
  const auto r = apply_cpt_update(net, "Let", "l1", {{"Gra", "g1"}}, 0.7);
  const auto& row = r.net.cpt("Let").rows[r.row];
  EXPECT_NEAR(row[0], 0.3, 1e-15);
  EXPECT_EQ(row[1], 0.7);
  EXPECT_FALSE(r.degenerate);
}

TEST(CptUpdate, CurrentValueIsFixedPoint) {
  const BayesNet net = student();
  const auto r = apply_cpt_update(net, "Gra", "g2", {{"Int", "i0"}, {"Dif", "d0"}}, 0.4);
  const auto& before = net.cpt("Gra").rows[r.row];
  const auto& after = r.net.cpt("Gra").rows[r.row];
  for (std::size_t k = 0; k < before.size(); ++k) EXPECT_NEAR(after[k], before[k], 1e-15);
}

TEST(CptUpdate, ProbabilityOneZeroesTheRest) {
  const auto r = apply_cpt_update(student(), "Gra", "g3", {{"Int", "i1"}, {"Dif", "d0"}}, 1.0);
  EXPECT_EQ(r.net.cpt("Gra").rows[r.row], (std::vector<double>{0.0, 0.0, 1.0}));
}

TEST(CptUpdate, DegenerateRowSpreadsResidualUniformly) {
  BayesNet net = student();
  const_cast<Cpt&>(net.cpt("Gra")).rows[0] = {1.0, 0.0, 0.0};
  const auto r = apply_cpt_update(net, "Gra", "g1", {{"Int", "i0"}, {"Dif", "d0"}}, 0.4);
  EXPECT_TRUE(r.degenerate);
  const auto& row = r.net.cpt("Gra").rows[r.row];
  EXPECT_DOUBLE_EQ(row[0], 0.4);
  EXPECT_DOUBLE_EQ(row[1], 0.3);
  EXPECT_DOUBLE_EQ(row[2], 0.3);

  BayesNet binary = student();
  const_cast<Cpt&>(binary.cpt("SAT")).rows[1] = {0.0, 1.0};
  const auto b = apply_cpt_update(binary, "SAT", "s1", {{"Int", "i1"}}, 0.4);
  EXPECT_TRUE(b.degenerate);
  EXPECT_DOUBLE_EQ(b.net.cpt("SAT").rows[1][0], 0.6);
}

TEST(CptUpdate, GivenOrderDoesNotMatter) {
  const BayesNet net = student();
  const auto a = apply_cpt_update(net, "Gra", "g1", {{"Int", "i1"}, {"Dif", "d1"}}, 0.9);
  const auto b = apply_cpt_update(net, "Gra", "g1", {{"Dif", "d1"}, {"Int", "i1"}}, 0.9);
  EXPECT_EQ(a.row, b.row);
  EXPECT_EQ(a.net, b.net);
  EXPECT_EQ(describe_row(a.net, a.net.cpt("Gra"), a.row), "Gra | Int=i1, Dif=d1");
}

TEST(CptUpdate, RejectsBadArguments) {
  const BayesNet net = student();
  EXPECT_THROW(apply_cpt_update(net, "Gra", "g1", {{"Int", "i1"}}, 0.5), std::invalid_argument);
  EXPECT_THROW(apply_cpt_update(net, "Gra", "g1", {{"Int", "i1"}, {"Dif", "d1"}, {"SAT", "s0"}}, 0.5),
               std::invalid_argument);
  EXPECT_THROW(apply_cpt_update(net, "Gra", "g7", {{"Int", "i1"}, {"Dif", "d1"}}, 0.5),
               std::invalid_argument);
  EXPECT_THROW(apply_cpt_update(net, "Gra", "g1", {{"Int", "i1"}, {"Dif", "d1"}}, 1.5),
               std::invalid_argument);
  EXPECT_THROW(apply_cpt_update(net, "Dif", "d1", {}, -0.1), std::invalid_argument);
  EXPECT_THROW(apply_cpt_update(net, "Nope", "d1", {}, 0.1), std::invalid_argument);
  EXPECT_THROW(apply_cpt_update(net, "Dif", "d1", {{"Int", "i1"}}, 0.1), std::invalid_argument);
}

TEST(CptUpdate, RandomizedUpdatesStayValidAndLocal) {
  testing::Rng rng(3);
  for (int i = 0; i < 300; ++i) {
    testing::NetShape shape;
    shape.max_card = 4;
    shape.zero_prob = 0.15;
    const BayesNet net = testing::random_net(rng, shape);
    const CptUpdateSpec u = testing::random_update(rng, net);
    const auto r = apply_cpt_update(net, u.variable, u.value, u.given, u.probability);
    EXPECT_TRUE(validate_network(r.net).empty());
    for (std::size_t c = 0; c < net.cpts.size(); ++c) {
      if (net.cpts[c].child != u.variable) {
        EXPECT_EQ(net.cpts[c], r.net.cpts[c]);
        continue;
      }
      for (std::size_t row = 0; row < net.cpts[c].rows.size(); ++row)
        if (row != r.row) {
          EXPECT_EQ(net.cpts[c].rows[row], r.net.cpts[c].rows[row]);
        }
      const auto x = *net.variable(u.variable).value_index(u.value);
      EXPECT_EQ(r.net.cpts[c].rows[r.row][x], u.probability);
    }
  }
}

TEST(CptUpdate, SameCellChainKeepsTheLastWrite) {
  testing::Rng rng(9);
  int checked = 0;
  for (int i = 0; i < 300; ++i) {
    const BayesNet net = testing::random_net(rng);
    const CptUpdateSpec u1 = testing::random_update(rng, net);
    const double q2 = std::uniform_real_distribution<double>(0.0, 0.99)(rng);
    const auto first = apply_cpt_update(net, u1.variable, u1.value, u1.given, q2);
    if (first.degenerate) continue;
    const auto both = apply_cpt_update(first.net, u1.variable, u1.value, u1.given, u1.probability);
    const auto direct = apply_cpt_update(net, u1.variable, u1.value, u1.given, u1.probability);
    if (both.degenerate) continue;
    const auto& a = both.net.cpt(u1.variable).rows[both.row];
    const auto& b = direct.net.cpt(u1.variable).rows[direct.row];
    for (std::size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(a[k], b[k], 1e-12);
    ++checked;
  }
  EXPECT_GT(checked, 200);
}

TEST(CptUpdate, InputNetIsUntouched) {
  const BayesNet net = student();
  const BayesNet snapshot = net;
  (void)apply_cpt_update(net, "Let", "l1", {{"Gra", "g1"}}, 0.7);
  EXPECT_EQ(net, snapshot);
}

}  // namespace
}  // namespace bayesl
