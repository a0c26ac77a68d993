#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "generators.hpp"
#include "matrix.hpp"

namespace bayesl {
namespace {

namespace fs = std::filesystem;
using cli::Format;
using cli::RunOptions;

fs::path fixture(const std::string& name) { return testing::fixtures_dir() / name; }

struct Captured {
  int code;
  std::string out;
  std::string err;
};

Captured eval_file(const std::string& model, const std::string& queries, RunOptions opts = {}) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::cmd_eval(fixture(model), fixture(queries), opts, out, err);
  return {code, out.str(), err.str()};
}

std::vector<nlohmann::json> json_lines(const std::string& text) {
  std::vector<nlohmann::json> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (line.starts_with('{')) out.push_back(nlohmann::json::parse(line));
  return out;
}

TEST(Cli, SplitQueries) {
  std::istringstream in(
      "# header\n"
      "P(A = a)   # trailing comment\n"
      "\n"
      "P(A = a) >= 0.5 \\\n"
      "  [A = a -> 0.2]\n"
      "   \n"
      "MPE(A = a) \\\n");
  const auto qs = cli::split_queries(in);
  ASSERT_EQ(qs.size(), 3u);
  EXPECT_EQ(qs[0].text, "P(A = a)");
  EXPECT_EQ(qs[0].line, 2);
  EXPECT_EQ(qs[1].text, "P(A = a) >= 0.5 [A = a -> 0.2]");
  EXPECT_EQ(qs[1].line, 4);
  EXPECT_EQ(qs[2].text, "MPE(A = a)");
}

TEST(Cli, ValidateExitCodes) {
  std::ostringstream out;
  std::ostringstream err;
  EXPECT_EQ(cli::cmd_validate(testing::models_dir() / "student.bn.json", out, err), 0);
  EXPECT_EQ(cli::cmd_validate(fixture("corrupt_row.bn.json"), out, err), 2);
  EXPECT_NE(err.str().find("does not sum to 1"), std::string::npos);
  EXPECT_EQ(cli::cmd_validate(fixture("missing.bn.json"), out, err), 3);
}

TEST(Cli, ReferenceFileGivesSevenRecords) {
  RunOptions opts;
  opts.format = Format::Json;
  const Captured c = eval_file("student.bn.json", "student_all.bsl", opts);
  EXPECT_EQ(c.code, 0);
  const auto recs = json_lines(c.out);
  ASSERT_EQ(recs.size(), 7u);
  const std::vector<std::string> kinds = {"prob", "prob", "prob", "bool",
                                          "bool", "assignments", "assignments"};
  for (std::size_t i = 0; i < recs.size(); ++i) {
    EXPECT_EQ(recs[i]["kind"], kinds[i]);
    EXPECT_TRUE(recs[i]["warnings"].is_array());
    EXPECT_FALSE(recs[i].contains("trace"));
  }
  EXPECT_EQ(recs[5]["value"]["variables"], (nlohmann::json{"Int", "SAT"}));
  EXPECT_EQ(recs[5]["value"]["rows"], nlohmann::json::array({nlohmann::json::array({"i0", "s0"})}));
}

TEST(Cli, JsonRecordsMatchTheReport) {
  const BayesNet net = testing::student();
  std::ifstream in(fixture("student_all.bsl"));
  RunOptions opts;
  opts.format = Format::Json;
  opts.trace = true;
  const cli::RunReport report = cli::run_queries(net, cli::split_queries(in), opts);
  std::ostringstream out;
  cli::write_report(out, net, report, opts);
  const auto recs = json_lines(out.str());
  ASSERT_EQ(recs.size(), report.records.size());
  for (std::size_t i = 0; i < recs.size(); ++i) {
    const auto& rec = report.records[i];
    EXPECT_EQ(recs[i]["query"], rec.query);
    EXPECT_EQ(recs[i]["line"], rec.line);
    EXPECT_EQ(recs[i]["kind"], rec.kind_name());
    EXPECT_EQ(recs[i]["time_ms"].get<double>(), rec.time_ms);
    EXPECT_EQ(recs[i]["warnings"].get<std::vector<std::string>>(), rec.warnings);
    const Value& v = rec.result->value;
    if (const double* p = std::get_if<double>(&v)) {
      EXPECT_EQ(recs[i]["value"].get<double>(), *p);
    } else if (const bool* b = std::get_if<bool>(&v)) {
      EXPECT_EQ(recs[i]["value"].get<bool>(), *b);
    } else {
      const auto& set = std::get<AssignmentSet>(v);
      EXPECT_EQ(recs[i]["value"]["score"].get<double>(), set.score);
      ASSERT_EQ(recs[i]["value"]["rows"].size(), set.rows.size());
    }
    EXPECT_EQ(recs[i]["trace"]["node"], rec.result->trace.label);
  }
}

TEST(Cli, ErrorsAreReportedPerQuery) {
  RunOptions opts;
  opts.format = Format::Json;
  const Captured c = eval_file("student.bn.json", "mixed.bsl", opts);
  EXPECT_EQ(c.code, 2);
  const auto recs = json_lines(c.out);
  ASSERT_EQ(recs.size(), 3u);
  EXPECT_EQ(recs[0]["kind"], "prob");
  EXPECT_EQ(recs[1]["kind"], "error");
  EXPECT_EQ(recs[1]["error"]["column"], 9);
  EXPECT_TRUE(recs[1]["value"].is_null());
  EXPECT_EQ(recs[2]["value"], true);
}

TEST(Cli, ThresholdOutOfRange) {
  const Captured c = eval_file("student.bn.json", "threshold_range.bsl");
  EXPECT_EQ(c.code, 2);
  EXPECT_NE(c.out.find("outside [0,1]"), std::string::npos) << c.out;
}

TEST(Cli, StrictRejectsChainedUpdates) {
  RunOptions opts;
  EXPECT_EQ(eval_file("student.bn.json", "chained_update.bsl", opts).code, 0);
  opts.strict = true;
  const Captured c = eval_file("student.bn.json", "chained_update.bsl", opts);
  EXPECT_EQ(c.code, 2);
  EXPECT_NE(c.out.find("strict"), std::string::npos) << c.out;
}

TEST(Cli, JobsPreserveOrder) {
  const BayesNet net = testing::student();
  std::vector<cli::SourceQuery> qs;
  for (int i = 0; i < 40; ++i)
    qs.push_back({"P(Gra = g" + std::to_string(1 + i % 3) + " | Int = i" + std::to_string(i % 2) +
                      ")",
                  i + 1});
  RunOptions serial;
  RunOptions parallel;
  parallel.jobs = 8;
  const auto a = cli::run_queries(net, qs, serial);
  const auto b = cli::run_queries(net, qs, parallel);
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    EXPECT_EQ(a.records[i].query, b.records[i].query);
    EXPECT_EQ(a.records[i].result->value, b.records[i].result->value);
  }
}

TEST(Cli, TextOutputUsesPrecision) {
  RunOptions opts;
  opts.precision = 4;
  const Captured c = eval_file("student.bn.json", "student_all.bsl", opts);
  EXPECT_NE(c.out.find("0.5377 "), std::string::npos) << c.out;
  opts.precision = 9;
  EXPECT_NE(eval_file("student.bn.json", "student_all.bsl", opts).out.find("0.537712191 "),
            std::string::npos);
}

TEST(Cli, ReplSessionLeavesModelUntouched) {
  const fs::path model = testing::models_dir() / "student.bn.json";
  std::ifstream before_in(model);
  const std::string before((std::istreambuf_iterator<char>(before_in)), {});

  std::istringstream in(
      "P(Dif = d1 | Let = l0)\n"
      "P(Let = l1 | Gra = g1) >= 0.7 [Gra = g1 | Int = i1, Dif = d1 -> 0.9]\n"
      "P(Let = l1 | Gra = g1)\n"
      ":cpt Gra\n"
      ":vars\n"
      "P(Dif = = d1)\n"
      ":cpt Nope\n"
      ":bogus\n"
      "P(Dif = d1)\n"
      ":quit\n"
      "P(Dif = d0)\n");
  std::ostringstream out;
  EXPECT_EQ(cli::cmd_repl(model, {}, in, out, false), 0);
  const std::string text = out.str();
  EXPECT_NE(text.find("prob 0.537712191"), std::string::npos) << text;
  EXPECT_NE(text.find("bool true"), std::string::npos) << text;
  EXPECT_NE(text.find("prob 0.9\n"), std::string::npos) << text;
  EXPECT_NE(text.find("Gra | Int=i1, Dif=d1: g1=0.5 g2=0.3 g3=0.2"), std::string::npos) << text;
  EXPECT_NE(text.find("Let: l0 l1"), std::string::npos) << text;
  EXPECT_NE(text.find("error at column 9"), std::string::npos) << text;
  EXPECT_NE(text.find("unknown variable 'Nope'"), std::string::npos) << text;
  EXPECT_NE(text.find("prob 0.4\n"), std::string::npos) << text;
  EXPECT_EQ(text.find("prob 0.6\n"), std::string::npos) << "input after :quit was evaluated";

  std::ifstream after_in(model);
  const std::string after((std::istreambuf_iterator<char>(after_in)), {});
  EXPECT_EQ(before, after);
}

TEST(Cli, ReplLoadAndNoModel) {
  std::istringstream in("P(A = a0)\n:load " + fixture("chain.bn.json").string() +
                        "\nP(C = c0)\n:load /nonexistent.bn.json\nP(C = c0)\n");
  std::ostringstream out;
  cli::cmd_repl({}, {}, in, out, false);
  const std::string text = out.str();
  EXPECT_NE(text.find("no model loaded"), std::string::npos) << text;
  const auto first = text.find("prob 0.6");
  ASSERT_NE(first, std::string::npos) << text;
  EXPECT_NE(text.find("prob 0.6", first + 1), std::string::npos) << "failed :load dropped model";
}

TEST(Cli, ReplMatchesEvalJson) {
  const fs::path model = testing::models_dir() / "student.bn.json";
  std::ifstream qf(fixture("student_all.bsl"));
  const auto queries = cli::split_queries(qf);
  RunOptions opts;
  opts.format = Format::Json;

  std::string script;
  for (const auto& q : queries) script += q.text + "\n";
  std::istringstream in(script);
  std::ostringstream repl_out;
  cli::cmd_repl(model, opts, in, repl_out, false);
  const auto repl_lines = json_lines(repl_out.str());

  const Captured c = eval_file("student.bn.json", "student_all.bsl", opts);
  const auto eval_lines = json_lines(c.out);
  ASSERT_EQ(repl_lines.size(), eval_lines.size());
  for (std::size_t i = 0; i < eval_lines.size(); ++i)
    EXPECT_EQ(repl_lines[i]["value"].dump(), eval_lines[i]["value"].dump());
}

TEST(Cli, FixtureMatrixExitCodes) {
  const auto rows = testing::load_matrix(fixture("matrix.txt"));
  ASSERT_GE(rows.size(), 12u);
  for (const auto& row : rows) {
    const auto run = testing::run_matrix_row(BAYESL_CLI_PATH, testing::fixtures_dir(), row);
    EXPECT_EQ(run.exit_code, row.expected_exit) << run.command << "\n" << run.output;
  }
}

}  // namespace
}  // namespace bayesl
