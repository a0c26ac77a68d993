#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bayesl/bayesl.hpp"
#include "json.hpp"

namespace bayesl::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConstraintFalse = 1,
  kExitError = 2,
  kExitIo = 3,
};

enum class Format { Text, Json };

struct RunOptions {
  Format format = Format::Text;
  bool strict = false;
  bool trace = false;
  double threshold_epsilon = 0.0;
  int precision = 9;
  int jobs = 1;
  std::uint64_t seed = 0;  // reserved; evaluation is deterministic
};

/// One query taken from a query file, after comment stripping and `\` joins.
struct SourceQuery {
  std::string text;
  int line = 0;
};

std::vector<SourceQuery> split_queries(std::istream& in);

struct QueryRecord {
  std::string query;
  int line = 0;
  std::optional<EvalResult> result;
  std::vector<std::string> warnings;
  double time_ms = 0.0;
  std::optional<std::string> error;
  SourceSpan error_span;

  std::string kind_name() const;
};

struct RunReport {
  std::vector<QueryRecord> records;
  int passed = 0;  // boolean queries that evaluated to true
  int failed = 0;  // boolean queries that evaluated to false
  int errors = 0;
};

QueryRecord run_query(const BayesNet& net, const SourceQuery& query, const RunOptions& options);

/// Evaluates every query, `options.jobs` at a time; record order always
/// matches input order.
RunReport run_queries(const BayesNet& net, const std::vector<SourceQuery>& queries,
                      const RunOptions& options);

int exit_code(const RunReport& report);

nlohmann::ordered_json value_to_json(const BayesNet& net, const Value& value);
nlohmann::ordered_json trace_to_json(const BayesNet& net, const TraceNode& node);
nlohmann::ordered_json record_to_json(const BayesNet& net, const QueryRecord& record,
                                      bool with_trace);

std::string format_value(const BayesNet& net, const Value& value, int precision);
std::string trace_summary(const BayesNet& net, const TraceNode& node, int precision);
void write_trace(std::ostream& out, const BayesNet& net, const TraceNode& node, int precision,
                 int depth = 0);
void write_report(std::ostream& out, const BayesNet& net, const RunReport& report,
                  const RunOptions& options);

int cmd_validate(const std::filesystem::path& model, std::ostream& out, std::ostream& err);
int cmd_eval(const std::filesystem::path& model, const std::filesystem::path& queries,
             const RunOptions& options, std::ostream& out, std::ostream& err);
int cmd_repl(const std::filesystem::path& model, const RunOptions& options, std::istream& in,
             std::ostream& out, bool interactive);

}  // namespace bayesl::cli
