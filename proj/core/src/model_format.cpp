#include "bayesl/model_format.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "json.hpp"

#include "identifiers.hpp"
#include "json_reader.hpp"

namespace bayesl {

using detail::JsonPos;
using detail::JsonValue;
using Type = detail::JsonValue::Type;

std::string to_string(const FormatDiagnostic& d) {
  return std::to_string(d.line) + ":" + std::to_string(d.column) + ": " + d.message;
}

namespace {

std::string join_messages(const std::vector<FormatDiagnostic>& diags) {
  std::ostringstream os;
  for (std::size_t i = 0; i < diags.size(); ++i) os << (i ? "\n" : "") << to_string(diags[i]);
  return os.str();
}

class ModelReader {
 public:
  ParsedModel read(std::string_view text) {
    JsonValue root;
    try {
      root = detail::parse_json(text);
    } catch (const detail::JsonSyntaxError& e) {
      throw ModelFormatError({{e.pos.line, e.pos.column, e.message}});
    }
    read_root(root);
    if (!errors_.empty()) throw ModelFormatError(std::move(errors_));

    for (const auto& d : validate_network(out_.net)) {
      error(root.pos, (d.subject.empty() ? "" : d.subject + ": ") + d.message);
    }
    if (!errors_.empty()) throw ModelFormatError(std::move(errors_));
    return std::move(out_);
  }

 private:
  ParsedModel out_;
  std::vector<FormatDiagnostic> errors_;
  std::map<std::string, std::size_t> var_index_;

  void error(JsonPos p, std::string msg) { errors_.push_back({p.line, p.column, std::move(msg)}); }
  void warn(JsonPos p, std::string msg) {
    out_.warnings.push_back({p.line, p.column, std::move(msg)});
  }

  bool check_type(const JsonValue& v, Type t, const std::string& what) {
    if (v.is(t)) return true;
    error(v.pos, what + " must be a " + detail::type_name(t) + ", found " +
                     detail::type_name(v.type));
    return false;
  }

  void check_keys(const JsonValue& obj, std::initializer_list<std::string_view> allowed,
                  const std::string& what) {
    std::set<std::string> seen;
    for (std::size_t i = 0; i < obj.members.size(); ++i) {
      const auto& key = obj.members[i].first;
      bool ok = false;
      for (auto a : allowed) ok = ok || key == a;
      if (!ok) error(obj.key_pos[i], "unknown key '" + key + "' in " + what);
      if (!seen.insert(key).second) error(obj.key_pos[i], "duplicate key '" + key + "'");
    }
  }

  const JsonValue* required(const JsonValue& obj, std::string_view key, const std::string& what) {
    const JsonValue* v = obj.find(key);
    if (!v) error(obj.pos, what + " is missing \"" + std::string(key) + "\"");
    return v;
  }

  void read_root(const JsonValue& root) {
    if (!check_type(root, Type::Object, "model document")) return;
    check_keys(root, {"version", "variables", "edges", "cpts", "description"}, "model document");

    if (const JsonValue* version = required(root, "version", "model document")) {
      if (check_type(*version, Type::Number, "version") && version->number != kModelFormatVersion)
        error(version->pos, "unsupported format version " + version->text + " (expected 1)");
    }
    if (const JsonValue* desc = root.find("description")) check_type(*desc, Type::String, "description");

    const JsonValue* variables = required(root, "variables", "model document");
    if (variables && check_type(*variables, Type::Array, "variables"))
      for (const auto& v : variables->items) read_variable(v);

    const JsonValue* edges = required(root, "edges", "model document");
    if (edges && check_type(*edges, Type::Array, "edges")) {
      std::set<std::pair<std::string, std::string>> seen;
      for (const auto& e : edges->items) read_edge(e, seen);
    }

    std::vector<std::optional<Cpt>> cpts(out_.net.variables.size());
    const JsonValue* cpt_list = required(root, "cpts", "model document");
    if (cpt_list && check_type(*cpt_list, Type::Array, "cpts"))
      for (const auto& c : cpt_list->items) read_cpt(c, cpts);

    if (!errors_.empty()) return;
    for (std::size_t i = 0; i < cpts.size(); ++i) {
      if (!cpts[i]) {
        error(variables ? variables->items[i].pos : root.pos,
              "variable '" + out_.net.variables[i].name + "' has no CPT");
        continue;
      }
      out_.net.cpts.push_back(std::move(*cpts[i]));
    }
    if (errors_.empty()) {
      try {
        topological_order(out_.net);
      } catch (const std::invalid_argument&) {
        error(edges ? edges->pos : root.pos, "cycle detected");
      }
    }
  }

  std::optional<std::string> identifier(const JsonValue& v, const std::string& what) {
    if (!check_type(v, Type::String, what)) return std::nullopt;
    if (!detail::is_identifier(v.text)) {
      error(v.pos, what + " '" + v.text + "' is not an identifier");
      return std::nullopt;
    }
    return v.text;
  }

  void read_variable(const JsonValue& v) {
    if (!check_type(v, Type::Object, "variable")) return;
    check_keys(v, {"name", "values", "ordered"}, "variable");
    VariableDecl decl;
    const JsonValue* name = required(v, "name", "variable");
    if (!name) return;
    auto id = identifier(*name, "variable name");
    if (!id) return;
    decl.name = *id;

    if (const JsonValue* values = required(v, "values", "variable '" + decl.name + "'")) {
      if (check_type(*values, Type::Array, "values")) {
        std::set<std::string> seen;
        for (const auto& val : values->items) {
          auto vid = identifier(val, "value");
          if (!vid) continue;
          if (!seen.insert(*vid).second)
            error(val.pos, "duplicate value '" + *vid + "' in domain of '" + decl.name + "'");
          decl.values.push_back(*vid);
        }
        if (values->items.size() < 2)
          error(values->pos, "domain of '" + decl.name + "' must have at least 2 values");
      }
    }
    if (const JsonValue* ordered = v.find("ordered")) {
      if (check_type(*ordered, Type::Bool, "ordered")) decl.ordered = ordered->boolean;
    }
    if (var_index_.count(decl.name)) {
      error(name->pos, "duplicate variable '" + decl.name + "'");
      return;
    }
    var_index_[decl.name] = out_.net.variables.size();
    out_.net.variables.push_back(std::move(decl));
  }

  std::optional<std::size_t> known_variable(const JsonValue& v, const std::string& what) {
    auto id = identifier(v, what);
    if (!id) return std::nullopt;
    auto it = var_index_.find(*id);
    if (it == var_index_.end()) {
      error(v.pos, "unknown variable '" + *id + "'");
      return std::nullopt;
    }
    return it->second;
  }

  void read_edge(const JsonValue& e, std::set<std::pair<std::string, std::string>>& seen) {
    if (!check_type(e, Type::Array, "edge")) return;
    if (e.items.size() != 2) {
      error(e.pos, "edge must be a [parent, child] pair");
      return;
    }
    auto parent = known_variable(e.items[0], "edge parent");
    auto child = known_variable(e.items[1], "edge child");
    if (!parent || !child) return;
    Edge edge{out_.net.variables[*parent].name, out_.net.variables[*child].name};
    if (!seen.insert({edge.parent, edge.child}).second) {
      error(e.pos, "duplicate edge " + edge.parent + " -> " + edge.child);
      return;
    }
    out_.net.edges.push_back(std::move(edge));
  }

  void read_cpt(const JsonValue& c, std::vector<std::optional<Cpt>>& cpts) {
    if (!check_type(c, Type::Object, "cpt")) return;
    check_keys(c, {"child", "parents", "rows"}, "cpt");
    const JsonValue* child_v = required(c, "child", "cpt");
    if (!child_v) return;
    auto child = known_variable(*child_v, "cpt child");
    if (!child) return;
    const VariableDecl& decl = out_.net.variables[*child];
    if (cpts[*child]) {
      error(child_v->pos, "duplicate CPT for '" + decl.name + "'");
      return;
    }

    Cpt cpt;
    cpt.child = decl.name;
    const JsonValue* parents_v = required(c, "parents", "cpt of '" + decl.name + "'");
    if (!parents_v || !check_type(*parents_v, Type::Array, "parents")) return;
    std::vector<std::size_t> parent_idx;
    for (const auto& p : parents_v->items) {
      auto idx = known_variable(p, "parent");
      if (!idx) return;
      if (std::find(parent_idx.begin(), parent_idx.end(), *idx) != parent_idx.end()) {
        error(p.pos, "parent '" + p.text + "' listed twice");
        return;
      }
      parent_idx.push_back(*idx);
      cpt.parents.push_back(out_.net.variables[*idx].name);
    }
    auto graph_parents = out_.net.parents_of(decl.name);
    std::set<std::string> a(graph_parents.begin(), graph_parents.end());
    std::set<std::string> b(cpt.parents.begin(), cpt.parents.end());
    if (a != b) {
      error(parents_v->pos, "parents of '" + decl.name + "' do not match the incoming edges");
      return;
    }

    std::size_t row_count = 1;
    for (std::size_t p : parent_idx) row_count *= out_.net.variables[p].cardinality();
    cpt.rows.assign(row_count, {});
    std::vector<bool> filled(row_count, false);

    const JsonValue* rows_v = required(c, "rows", "cpt of '" + decl.name + "'");
    if (!rows_v || !check_type(*rows_v, Type::Array, "rows")) return;
    const std::size_t errors_before = errors_.size();
    for (const auto& r : rows_v->items) {
      auto row = read_row(r, decl, parent_idx);
      if (!row) continue;
      if (filled[row->first]) {
        error(r.pos, "duplicate row " + describe_row(out_.net, cpt, row->first));
        continue;
      }
      filled[row->first] = true;
      cpt.rows[row->first] = std::move(row->second);
    }
    if (errors_.size() != errors_before) return;
    for (std::size_t i = 0; i < row_count; ++i)
      if (!filled[i]) error(rows_v->pos, "missing row " + describe_row(out_.net, cpt, i));
    cpts[*child] = std::move(cpt);
  }

  std::optional<std::pair<std::size_t, std::vector<double>>> read_row(
      const JsonValue& r, const VariableDecl& child, const std::vector<std::size_t>& parent_idx) {
    if (!check_type(r, Type::Object, "row")) return std::nullopt;
    check_keys(r, {"given", "dist"}, "row");
    const JsonValue* given = required(r, "given", "row");
    const JsonValue* dist = required(r, "dist", "row");
    if (!given || !dist) return std::nullopt;
    if (!check_type(*given, Type::Object, "given") || !check_type(*dist, Type::Object, "dist"))
      return std::nullopt;

    std::size_t index = 0;
    if (given->members.size() != parent_idx.size()) {
      error(given->pos, "row must assign exactly the parents of '" + child.name + "'");
      return std::nullopt;
    }
    for (std::size_t p : parent_idx) {
      const VariableDecl& pd = out_.net.variables[p];
      const JsonValue* val = given->find(pd.name);
      if (!val) {
        error(given->pos, "row does not assign parent '" + pd.name + "'");
        return std::nullopt;
      }
      if (!check_type(*val, Type::String, "parent value")) return std::nullopt;
      auto vi = pd.value_index(val->text);
      if (!vi) {
        error(val->pos, "unknown value '" + val->text + "' for '" + pd.name + "'");
        return std::nullopt;
      }
      index = index * pd.cardinality() + *vi;
    }

    std::vector<double> probs(child.cardinality(), 0.0);
    std::vector<bool> seen(child.cardinality(), false);
    bool ok = true;
    for (std::size_t i = 0; i < dist->members.size(); ++i) {
      const auto& [value, p] = dist->members[i];
      auto vi = child.value_index(value);
      if (!vi) {
        error(dist->key_pos[i], "unknown value '" + value + "' for '" + child.name + "'");
        ok = false;
        continue;
      }
      if (seen[*vi]) {
        error(dist->key_pos[i], "value '" + value + "' listed twice");
        ok = false;
        continue;
      }
      seen[*vi] = true;
      if (!check_type(p, Type::Number, "probability")) {
        ok = false;
        continue;
      }
      if (p.number < 0.0 || p.number > 1.0) {
        error(p.pos, "probability " + p.text + " outside [0,1]");
        ok = false;
        continue;
      }
      probs[*vi] = p.number;
    }
    if (!ok) return std::nullopt;
    if (dist->members.size() != child.cardinality()) {
      error(dist->pos, "row has wrong arity: expected " + std::to_string(child.cardinality()) +
                           " entries, found " + std::to_string(dist->members.size()));
      return std::nullopt;
    }

    double sum = 0.0;
    for (double p : probs) sum += p;
    const double off = std::abs(sum - 1.0);
    if (off > kRenormalizeTolerance) {
      error(dist->pos, "row does not sum to 1 (sum " + std::to_string(sum) + ")");
      return std::nullopt;
    }
    if (off > kProbabilityTolerance) {
      for (double& p : probs) p /= sum;
      warn(dist->pos, "row of '" + child.name + "' summed to " + std::to_string(sum) +
                          "; renormalized");
    }
    return std::make_pair(index, std::move(probs));
  }
};

}  // namespace

ModelFormatError::ModelFormatError(std::vector<FormatDiagnostic> diagnostics)
    : std::runtime_error(join_messages(diagnostics)), diagnostics_(std::move(diagnostics)) {}

ParsedModel parse_network(std::string_view text) { return ModelReader().read(text); }

ParsedModel load_network(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelIoError("cannot read model file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw ModelIoError("error reading model file '" + path.string() + "'");
  return parse_network(buf.str());
}

std::string serialize_network(const BayesNet& net) {
  using ojson = nlohmann::ordered_json;
  ojson doc;
  doc["version"] = kModelFormatVersion;

  ojson vars = ojson::array();
  for (const auto& v : net.variables) {
    ojson entry;
    entry["name"] = v.name;
    entry["values"] = v.values;
    entry["ordered"] = v.ordered;
    vars.push_back(std::move(entry));
  }
  doc["variables"] = std::move(vars);

  ojson edges = ojson::array();
  for (const auto& e : net.edges) edges.push_back({e.parent, e.child});
  doc["edges"] = std::move(edges);

  ojson cpts = ojson::array();
  for (const auto& v : net.variables) {
    const Cpt& cpt = net.cpt(v.name);
    ojson entry;
    entry["child"] = cpt.child;
    entry["parents"] = cpt.parents;
    ojson rows = ojson::array();
    for (std::size_t r = 0; r < cpt.rows.size(); ++r) {
      ojson given = ojson::object();
      std::size_t rem = r;
      std::vector<std::string> values(cpt.parents.size());
      for (std::size_t k = cpt.parents.size(); k-- > 0;) {
        const auto& pd = net.variable(cpt.parents[k]);
        values[k] = pd.values[rem % pd.cardinality()];
        rem /= pd.cardinality();
      }
      for (std::size_t k = 0; k < cpt.parents.size(); ++k) given[cpt.parents[k]] = values[k];
      ojson dist = ojson::object();
      for (std::size_t i = 0; i < v.values.size(); ++i) dist[v.values[i]] = cpt.rows[r][i];
      rows.push_back({{"given", std::move(given)}, {"dist", std::move(dist)}});
    }
    entry["rows"] = std::move(rows);
    cpts.push_back(std::move(entry));
  }
  doc["cpts"] = std::move(cpts);
  return doc.dump(2) + "\n";
}

}  // namespace bayesl
