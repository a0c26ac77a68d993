#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "generators.hpp"

namespace bayesl {
namespace {

const char* kTwoVars = R"({
  "version": 1,
  "variables": [
    {"name": "A", "values": ["a0", "a1"]},
    {"name": "B", "values": ["b0", "b1", "b2"], "ordered": false}
  ],
  "edges": [["A", "B"]],
  "cpts": [
    {"child": "A", "parents": [], "rows": [{"given": {}, "dist": {"a0": 0.25, "a1": 0.75}}]},
    {"child": "B", "parents": ["A"], "rows": [
      {"given": {"A": "a1"}, "dist": {"b0": 0.5, "b1": 0.5, "b2": 0}},
      {"given": {"A": "a0"}, "dist": {"b2": 0.2, "b1": 0.3, "b0": 0.5}}
    ]}
  ]
})";

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<FormatDiagnostic> diagnostics_of(const std::string& text) {
  try {
    parse_network(text);
  } catch (const ModelFormatError& e) {
    return e.diagnostics();
  }
  return {};
}

bool mentions(const std::vector<FormatDiagnostic>& diags, const std::string& needle) {
  return std::any_of(diags.begin(), diags.end(), [&](const FormatDiagnostic& d) {
    return d.message.find(needle) != std::string::npos;
  });
}

std::string replace(std::string text, const std::string& from, const std::string& to) {
  const auto pos = text.find(from);
  EXPECT_NE(pos, std::string::npos) << from;
  return text.replace(pos, from.size(), to);
}

TEST(ModelFormat, BundledStudentModel) {
  const ParsedModel m = load_network(testing::models_dir() / "student.bn.json");
  EXPECT_TRUE(m.warnings.empty());
  const BayesNet& net = m.net;
  ASSERT_EQ(net.variables.size(), 5u);
  ASSERT_EQ(net.edges.size(), 4u);
  for (const auto& e : net.edges)
    EXPECT_TRUE(e.child == "Gra" || e.child == "SAT" || e.child == "Let");
  EXPECT_EQ(net.cpt("Gra").parents, (std::vector<std::string>{"Int", "Dif"}));
  EXPECT_EQ(net.cpt("Gra").rows[3], (std::vector<double>{0.5, 0.3, 0.2}));
  EXPECT_EQ(net.cpt("Let").rows[0], (std::vector<double>{0.1, 0.9}));
}

TEST(ModelFormat, RowsAreReorderedIntoCptOrder) {
  const BayesNet net = parse_network(kTwoVars).net;
  EXPECT_FALSE(net.variable("B").ordered);
  EXPECT_TRUE(net.variable("A").ordered);
  EXPECT_EQ(net.cpt("B").rows[0], (std::vector<double>{0.5, 0.3, 0.2}));
  EXPECT_EQ(net.cpt("B").rows[1], (std::vector<double>{0.5, 0.5, 0.0}));
}

TEST(ModelFormat, WrongArityIsPositioned) {
  const auto diags = diagnostics_of(
      replace(kTwoVars, R"("b2": 0.2, "b1": 0.3, "b0": 0.5)", R"("b1": 0.5, "b0": 0.5)"));
  ASSERT_FALSE(diags.empty());
  EXPECT_TRUE(mentions(diags, "wrong arity"));
  EXPECT_EQ(diags.front().line, 12);
  EXPECT_GT(diags.front().column, 1);
}

TEST(ModelFormat, ErrorsCarryPositions) {
  const std::vector<std::pair<std::string, std::string>> cases = {
      {replace(kTwoVars, R"("version": 1)", R"("version": 2)"), "unsupported format version"},
      {replace(kTwoVars, R"(["A", "B"])", R"(["A", "C"])"), "unknown variable 'C'"},
      {replace(kTwoVars, R"("a1": 0.75)", R"("a1": 0.5)"), "does not sum to 1"},
      {replace(kTwoVars, R"("b2": 0.2)", R"("b2": 1.2)"), "outside [0,1]"},
      {replace(kTwoVars, R"("given": {"A": "a1"})", R"("given": {"A": "a0"})"), "duplicate row"},
      {replace(kTwoVars, R"("given": {"A": "a1"})", R"("given": {"A": "a9"})"), "unknown value"},
      {replace(kTwoVars, R"("b0", "b1", "b2")", R"("b0", "b1", "b1")"), "duplicate value"},
      {replace(kTwoVars, R"("edges")", R"("edgez")"), "unknown key"},
      {replace(kTwoVars, R"(["A", "B"])", R"(["A", "B"], ["B", "A"])"), "do not match"},
      {replace(kTwoVars, R"("name": "A")", R"("name": "9A")"), "not an identifier"},
      {replace(kTwoVars, R"("parents": ["A"])", R"("parents": [])"), "do not match"},
      {replace(kTwoVars, "]\n}", "],\n}"), ""},
      {"", ""},
      {"[1, 2]", ""},
  };
  for (const auto& [text, needle] : cases) {
    const auto diags = diagnostics_of(text);
    ASSERT_FALSE(diags.empty()) << text;
    EXPECT_TRUE(needle.empty() || mentions(diags, needle)) << needle << "\n" << text;
    for (const auto& d : diags) {
      EXPECT_GE(d.line, 1) << d.message;
      EXPECT_GE(d.column, 1) << d.message;
    }
  }
}

TEST(ModelFormat, SlightlyOffRowsAreRenormalizedWithWarning) {
  const auto m = parse_network(replace(kTwoVars, R"("a1": 0.75)", R"("a1": 0.7500001)"));
  ASSERT_EQ(m.warnings.size(), 1u);
  EXPECT_NEAR(m.net.cpt("A").rows[0][0] + m.net.cpt("A").rows[0][1], 1.0, 1e-15);
}

TEST(ModelFormat, MissingFileIsAnIoError) {
  EXPECT_THROW(load_network("/nonexistent/model.bn.json"), ModelIoError);
}

TEST(ModelFormat, SerializationIsDeterministicAndRoundTrips) {
  const BayesNet net = testing::student();
  const std::string a = serialize_network(net);
  EXPECT_EQ(a, serialize_network(testing::student()));
  EXPECT_EQ(parse_network(a).net, net);
}

TEST(ModelFormat, UpdateChangesExactlyOneRowOfTheDocument) {
  const BayesNet net = testing::student();
  const auto updated = apply_cpt_update(net, "Let", "l1", {{"Gra", "g1"}}, 0.7);
  std::istringstream a(serialize_network(net));
  std::istringstream b(serialize_network(updated.net));
  std::string la;
  std::string lb;
  int differing = 0;
  while (std::getline(a, la) && std::getline(b, lb)) differing += la != lb;
  EXPECT_GE(differing, 1);
  EXPECT_LE(differing, 2);  // one line per changed probability
  const BayesNet back = parse_network(serialize_network(updated.net)).net;
  EXPECT_EQ(back, updated.net);
}

TEST(ModelFormat, IndependentVariablesHaveEmptyEdgeList) {
  BayesNet net;
  net.variables = {{"X", {"x0", "x1"}}, {"Y", {"y0", "y1"}}};
  net.cpts = {{"X", {}, {{0.5, 0.5}}}, {"Y", {}, {{0.1, 0.9}}}};
  const std::string doc = serialize_network(net);
  EXPECT_NE(doc.find("\"edges\": []"), std::string::npos) << doc;
  EXPECT_EQ(parse_network(doc).net, net);
}

TEST(ModelFormat, RandomNetsRoundTrip) {
  testing::Rng rng(20240611);
  testing::NetShape shape;
  shape.max_card = 4;
  shape.zero_prob = 0.1;
  for (int i = 0; i < 200; ++i) {
    const BayesNet net = testing::random_net(rng, shape);
    const std::string doc = serialize_network(net);
    const ParsedModel back = parse_network(doc);
    EXPECT_TRUE(back.warnings.empty());
    EXPECT_EQ(back.net.variables, net.variables);
    EXPECT_EQ(back.net.cpts, net.cpts);
    EXPECT_EQ(serialize_network(back.net), doc);
  }
}

TEST(ModelFormat, FixtureModelsMatchTheirDescription) {
  const auto dir = testing::fixtures_dir();
  EXPECT_NO_THROW(load_network(dir / "chain.bn.json"));
  EXPECT_THROW(load_network(dir / "corrupt_row.bn.json"), ModelFormatError);
  try {
    load_network(dir / "cyclic.bn.json");
    ADD_FAILURE() << "cyclic model accepted";
  } catch (const ModelFormatError& e) {
    EXPECT_TRUE(mentions(e.diagnostics(), "cycle detected")) << e.what();
  }
  EXPECT_THROW(load_network(dir / "malformed.bn.json"), ModelFormatError);
  EXPECT_FALSE(read_file(dir / "corrupt_row.bn.json").empty());
}

}  // namespace
}  // namespace bayesl
