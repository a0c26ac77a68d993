#include "cli.hpp"

#include <atomic>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

namespace bayesl::cli {

using nlohmann::ordered_json;

std::vector<SourceQuery> split_queries(std::istream& in) {
  std::vector<SourceQuery> out;
  std::string line;
  std::string pending;
  int pending_line = 0;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto last = line.find_last_not_of(" \t");
    line = last == std::string::npos ? "" : line.substr(0, last + 1);
    const bool continued = !line.empty() && line.back() == '\\';
    if (continued) {
      line.pop_back();
      while (!line.empty() && (line.back() == ' ' || line.back() == '\t')) line.pop_back();
    }
    if (pending.empty()) pending_line = line_no;
    const auto first = line.find_first_not_of(" \t");
    if (first != std::string::npos) {
      if (!pending.empty()) pending += ' ';
      pending += line.substr(first);
    }
    if (continued) continue;
    if (pending.find_first_not_of(" \t") != std::string::npos)
      out.push_back({pending.substr(pending.find_first_not_of(" \t")), pending_line});
    pending.clear();
  }
  if (pending.find_first_not_of(" \t") != std::string::npos)
    out.push_back({pending.substr(pending.find_first_not_of(" \t")), pending_line});
  return out;
}

std::string QueryRecord::kind_name() const {
  if (error) return "error";
  return std::string(to_string(result->kind));
}

QueryRecord run_query(const BayesNet& net, const SourceQuery& query, const RunOptions& options) {
  QueryRecord rec;
  rec.query = query.text;
  rec.line = query.line;
  const auto start = std::chrono::steady_clock::now();
  try {
    QueryPtr checked = layer_check(parse_query(query.text), net, CheckOptions{options.strict});
    rec.result = evaluate(net, *checked, EvalOptions{options.threshold_epsilon});
    rec.warnings = rec.result->all_warnings();
  } catch (const QueryError& e) {
    rec.error = e.what();
    rec.error_span = e.span();
  }
  rec.time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

RunReport run_queries(const BayesNet& net, const std::vector<SourceQuery>& queries,
                      const RunOptions& options) {
  RunReport report;
  report.records.resize(queries.size());
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(static_cast<std::size_t>(std::max(options.jobs, 1)),
                                                      queries.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < queries.size(); ++i)
      report.records[i] = run_query(net, queries[i], options);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < queries.size(); i = next++)
          report.records[i] = run_query(net, queries[i], options);
      });
    for (auto& t : pool) t.join();
  }
  for (const auto& rec : report.records) {
    if (rec.error) {
      ++report.errors;
    } else if (rec.result->kind == QueryKind::Bool) {
      (std::get<bool>(rec.result->value) ? report.passed : report.failed)++;
    }
  }
  return report;
}

int exit_code(const RunReport& report) {
  if (report.errors > 0) return kExitError;
  if (report.failed > 0) return kExitConstraintFalse;
  return kExitOk;
}

ordered_json value_to_json(const BayesNet& net, const Value& value) {
  if (const double* p = std::get_if<double>(&value)) return *p;
  if (const bool* b = std::get_if<bool>(&value)) return *b;
  const auto& set = std::get<AssignmentSet>(value);
  ordered_json out;
  ordered_json vars = ordered_json::array();
  for (std::size_t v : set.variables) vars.push_back(net.variables[v].name);
  ordered_json rows = ordered_json::array();
  for (const auto& row : set.rows) {
    ordered_json r = ordered_json::array();
    for (std::size_t k = 0; k < row.size(); ++k)
      r.push_back(net.variables[set.variables[k]].values[static_cast<std::size_t>(row[k])]);
    rows.push_back(std::move(r));
  }
  out["variables"] = std::move(vars);
  out["rows"] = std::move(rows);
  out["score"] = set.score;
  return out;
}

ordered_json trace_to_json(const BayesNet& net, const TraceNode& node) {
  ordered_json out;
  out["node"] = node.label;
  out["kind"] = std::string(to_string(node.kind));
  out["value"] = value_to_json(net, node.value);
  out["line"] = node.span.line;
  out["column"] = node.span.column;
  if (!node.warnings.empty()) out["warnings"] = node.warnings;
  if (!node.rewritten_row.empty()) out["row"] = node.rewritten_row;
  if (!node.children.empty()) {
    ordered_json kids = ordered_json::array();
    for (const auto& c : node.children) kids.push_back(trace_to_json(net, c));
    out["children"] = std::move(kids);
  }
  return out;
}

ordered_json record_to_json(const BayesNet& net, const QueryRecord& rec, bool with_trace) {
  ordered_json out;
  out["query"] = rec.query;
  out["line"] = rec.line;
  out["kind"] = rec.kind_name();
  out["value"] = rec.error ? ordered_json(nullptr) : value_to_json(net, rec.result->value);
  if (with_trace && rec.result) out["trace"] = trace_to_json(net, rec.result->trace);
  out["warnings"] = rec.warnings;
  out["time_ms"] = rec.time_ms;
  if (rec.error) {
    out["error"] = {{"message", *rec.error},
                    {"line", rec.error_span.line},
                    {"column", rec.error_span.column}};
  }
  return out;
}

std::string format_value(const BayesNet& net, const Value& value, int precision) {
  std::ostringstream os;
  os << std::setprecision(precision);
  if (const double* p = std::get_if<double>(&value)) {
    os << *p;
  } else if (const bool* b = std::get_if<bool>(&value)) {
    os << (*b ? "true" : "false");
  } else {
    const auto& set = std::get<AssignmentSet>(value);
    for (std::size_t r = 0; r < set.rows.size(); ++r) {
      os << (r ? " " : "") << '{';
      for (std::size_t k = 0; k < set.variables.size(); ++k) {
        const auto& decl = net.variables[set.variables[k]];
        os << (k ? ", " : "") << decl.name << '='
           << decl.values[static_cast<std::size_t>(set.rows[r][k])];
      }
      os << '}';
    }
    os << " (p=" << set.score << ')';
  }
  return os.str();
}

std::string trace_summary(const BayesNet& net, const TraceNode& node, int precision) {
  std::string out = node.label + " => " + format_value(net, node.value, precision);
  std::vector<std::string> extras;
  std::vector<const TraceNode*> stack{&node};
  while (!stack.empty()) {
    const TraceNode* n = stack.back();
    stack.pop_back();
    if (!n->rewritten_row.empty()) extras.push_back("rewrote " + n->rewritten_row);
    for (const auto& w : n->warnings) extras.push_back("warning: " + w);
    for (auto it = n->children.rbegin(); it != n->children.rend(); ++it) stack.push_back(&*it);
  }
  for (const auto& e : extras) out += "; " + e;
  return out;
}

void write_trace(std::ostream& out, const BayesNet& net, const TraceNode& node, int precision,
                 int depth) {
  out << std::string(static_cast<std::size_t>(depth) * 2 + 4, ' ') << node.label << " => "
      << format_value(net, node.value, precision);
  if (!node.rewritten_row.empty()) out << "   [rewrote " << node.rewritten_row << ']';
  out << '\n';
  for (const auto& w : node.warnings)
    out << std::string(static_cast<std::size_t>(depth) * 2 + 6, ' ') << "warning: " << w << '\n';
  for (const auto& c : node.children) write_trace(out, net, c, precision, depth + 1);
}

void write_report(std::ostream& out, const BayesNet& net, const RunReport& report,
                  const RunOptions& options) {
  if (options.format == Format::Json) {
    for (const auto& rec : report.records)
      out << record_to_json(net, rec, options.trace).dump() << '\n';
    return;
  }
  std::vector<std::string> values;
  std::size_t width = 5;
  for (const auto& rec : report.records) {
    values.push_back(rec.error ? "-" : format_value(net, rec.result->value, options.precision));
    width = std::max(width, values.back().size());
  }
  width = std::min<std::size_t>(width, 60);
  out << std::left << std::setw(6) << "line" << std::setw(13) << "kind" << std::setw(static_cast<int>(width) + 2)
      << "value" << "query\n";
  for (std::size_t i = 0; i < report.records.size(); ++i) {
    const auto& rec = report.records[i];
    out << std::left << std::setw(6) << rec.line << std::setw(13) << rec.kind_name()
        << std::setw(static_cast<int>(width) + 2) << values[i] << rec.query << '\n';
    if (rec.error)
      out << "      error at " << rec.line << ':' << rec.error_span.column << ": " << *rec.error
          << '\n';
    for (const auto& w : rec.warnings) out << "      warning: " << w << '\n';
    if (options.trace && rec.result) write_trace(out, net, rec.result->trace, options.precision);
  }
  out << '\n'
      << report.records.size() << " queries: " << report.passed << " true, " << report.failed
      << " false, " << report.errors << " errors\n";
}

namespace {

void print_format_error(std::ostream& err, const std::filesystem::path& path,
                        const ModelFormatError& e) {
  for (const auto& d : e.diagnostics()) err << path.string() << ':' << to_string(d) << '\n';
}

}  // namespace

int cmd_validate(const std::filesystem::path& model, std::ostream& out, std::ostream& err) {
  try {
    ParsedModel parsed = load_network(model);
    for (const auto& w : parsed.warnings)
      err << model.string() << ':' << to_string(w) << " (warning)\n";
    out << model.string() << ": ok (" << parsed.net.variables.size() << " variables, "
        << parsed.net.edges.size() << " edges)\n";
    return kExitOk;
  } catch (const ModelIoError& e) {
    err << e.what() << '\n';
    return kExitIo;
  } catch (const ModelFormatError& e) {
    print_format_error(err, model, e);
    return kExitError;
  }
}

int cmd_eval(const std::filesystem::path& model, const std::filesystem::path& queries,
             const RunOptions& options, std::ostream& out, std::ostream& err) {
  ParsedModel parsed;
  try {
    parsed = load_network(model);
  } catch (const ModelIoError& e) {
    err << e.what() << '\n';
    return kExitIo;
  } catch (const ModelFormatError& e) {
    print_format_error(err, model, e);
    return kExitError;
  }
  for (const auto& w : parsed.warnings)
    err << model.string() << ':' << to_string(w) << " (warning)\n";

  std::ifstream in(queries);
  if (!in) {
    err << "cannot read query file '" << queries.string() << "'\n";
    return kExitIo;
  }
  const auto sources = split_queries(in);
  const RunReport report = run_queries(parsed.net, sources, options);
  write_report(out, parsed.net, report, options);
  return exit_code(report);
}

}  // namespace bayesl::cli
