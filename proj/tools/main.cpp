#include <unistd.h>

#include <iostream>

#include "CLI11.hpp"
#include "cli.hpp"

namespace {

void add_run_flags(CLI::App* cmd, bayesl::cli::RunOptions& opts) {
  cmd->add_option("--format", opts.format, "Output format")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, bayesl::cli::Format>{{"text", bayesl::cli::Format::Text},
                                                     {"json", bayesl::cli::Format::Json}},
          CLI::ignore_case).description(""))
      ->type_name("text|json");
  cmd->add_flag("--strict", opts.strict, "Reject non-standard query forms");
  cmd->add_flag("--trace", opts.trace, "Print the evaluation trace");
  cmd->add_option("--threshold-epsilon", opts.threshold_epsilon,
                  "Treat |P - p| <= epsilon as equal in thresholds")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--precision", opts.precision, "Significant digits in text output")
      ->check(CLI::Range(1, 17));
  cmd->add_option("--seed", opts.seed, "Accepted for compatibility; evaluation is deterministic");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace bayesl::cli;

  CLI::App app{"bayesl: evaluate BayesL queries against a discrete Bayesian network"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "bayesl 0.1.0");

  std::string model;
  std::string queries;
  RunOptions opts;

  auto* validate = app.add_subcommand("validate", "Check a model file");
  validate->add_option("model", model, "Model file (.bn.json)")->required();

  auto* eval = app.add_subcommand("eval", "Evaluate a query file against a model");
  eval->add_option("model", model, "Model file (.bn.json)")->required();
  eval->add_option("queries", queries, "Query file, one query per line")->required();
  add_run_flags(eval, opts);
  eval->add_option("--jobs,-j", opts.jobs, "Evaluate queries in parallel")
      ->check(CLI::PositiveNumber);

  auto* repl = app.add_subcommand("repl", "Interactive query loop");
  repl->add_option("model", model, "Model file to load at start");
  add_run_flags(repl, opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  if (*validate) return cmd_validate(model, std::cout, std::cerr);
  if (*eval) return cmd_eval(model, queries, opts, std::cout, std::cerr);
  return cmd_repl(model, opts, std::cin, std::cout, isatty(0) != 0);
}
