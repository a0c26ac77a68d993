#include <iomanip>
#include <iostream>
#include <sstream>

#include "cli.hpp"

namespace bayesl::cli {

namespace {

class Repl {
 public:
  Repl(const RunOptions& options, std::ostream& out) : options_(options), out_(out) {}

  bool load(const std::filesystem::path& path) {
    try {
      ParsedModel parsed = load_network(path);
      net_ = std::move(parsed.net);
      loaded_ = true;
      for (const auto& w : parsed.warnings) out_ << "warning: " << to_string(w) << '\n';
      out_ << "loaded " << path.string() << " (" << net_.variables.size() << " variables)\n";
      return true;
    } catch (const ModelIoError& e) {
      out_ << "error: " << e.what() << '\n';
    } catch (const ModelFormatError& e) {
      for (const auto& d : e.diagnostics()) out_ << "error: " << to_string(d) << '\n';
    }
    return false;
  }

  // Returns false when the session should end.
  bool handle(const std::string& line, int line_no) {
    std::istringstream words(line);
    std::string head;
    words >> head;
    if (head.empty()) return true;
    if (head[0] != ':') {
      query(line, line_no);
      return true;
    }
    std::string arg;
    std::getline(words >> std::ws, arg);
    if (head == ":quit" || head == ":q") return false;
    if (head == ":help") {
      out_ << ":load <file>   replace the current model\n"
              ":vars          list variables and their values\n"
              ":cpt <var>     print the CPT of a variable\n"
              ":quit          leave\n"
              "anything else is evaluated as a query\n";
    } else if (head == ":load") {
      if (arg.empty())
        out_ << "error: :load needs a file name\n";
      else
        load(arg);
    } else if (head == ":vars") {
      if (need_model()) vars();
    } else if (head == ":cpt") {
      if (need_model()) cpt(arg);
    } else {
      out_ << "error: unknown command " << head << " (try :help)\n";
    }
    return true;
  }

 private:
  const RunOptions& options_;
  std::ostream& out_;
  BayesNet net_;
  bool loaded_ = false;

  bool need_model() {
    if (!loaded_) out_ << "error: no model loaded (use :load <file>)\n";
    return loaded_;
  }

  void vars() {
    for (const auto& v : net_.variables) {
      out_ << v.name << (v.ordered ? "" : " (unordered)") << ':';
      for (const auto& val : v.values) out_ << ' ' << val;
      out_ << '\n';
    }
  }

  void cpt(const std::string& name) {
    if (!net_.variable_index(name)) {
      out_ << "error: unknown variable '" << name << "'\n";
      return;
    }
    const Cpt& c = net_.cpt(name);
    const auto& child = net_.variable(name);
    out_ << std::setprecision(options_.precision);
    for (std::size_t r = 0; r < c.rows.size(); ++r) {
      out_ << describe_row(net_, c, r) << ':';
      for (std::size_t k = 0; k < child.values.size(); ++k)
        out_ << ' ' << child.values[k] << '=' << c.rows[r][k];
      out_ << '\n';
    }
  }

  void query(const std::string& text, int line_no) {
    if (!need_model()) return;
    const QueryRecord rec = run_query(net_, {text, line_no}, options_);
    if (options_.format == Format::Json) {
      out_ << record_to_json(net_, rec, options_.trace).dump() << '\n';
      return;
    }
    if (rec.error) {
      out_ << "error at column " << rec.error_span.column << ": " << *rec.error << '\n';
      return;
    }
    out_ << rec.kind_name() << ' ' << format_value(net_, rec.result->value, options_.precision)
         << '\n';
    if (options_.trace)
      write_trace(out_, net_, rec.result->trace, options_.precision);
    else
      out_ << "  " << trace_summary(net_, rec.result->trace, options_.precision) << '\n';
  }
};

}  // namespace

int cmd_repl(const std::filesystem::path& model, const RunOptions& options, std::istream& in,
             std::ostream& out, bool interactive) {
  Repl repl(options, out);
  if (!model.empty()) repl.load(model);
  std::string line;
  std::string pending;
  int line_no = 0;
  for (;;) {
    if (interactive) out << (pending.empty() ? "bayesl> " : "   ...> ") << std::flush;
    if (!std::getline(in, line)) break;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty() && line.back() == '\\') {
      line.pop_back();
      pending += line + ' ';
      continue;
    }
    pending += line;
    const std::string full = std::move(pending);
    pending.clear();
    if (!repl.handle(full, line_no)) break;
  }
  if (interactive) out << '\n';
  return kExitOk;
}

}  // namespace bayesl::cli
