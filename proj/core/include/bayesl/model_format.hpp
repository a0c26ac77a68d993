#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bayesl/network.hpp"

namespace bayesl {

inline constexpr int kModelFormatVersion = 1;

/// Rows whose sum is off by more than kProbabilityTolerance but at most this
/// much are rescaled on load (with a warning); anything further is rejected.
inline constexpr double kRenormalizeTolerance = 1e-6;

struct FormatDiagnostic {
  int line = 0;
  int column = 0;
  std::string message;
};

std::string to_string(const FormatDiagnostic& d);

/// A model document failed to parse or validate.
class ModelFormatError : public std::runtime_error {
 public:
  explicit ModelFormatError(std::vector<FormatDiagnostic> diagnostics);
  const std::vector<FormatDiagnostic>& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::vector<FormatDiagnostic> diagnostics_;
};

/// The model file could not be read at all.
class ModelIoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ParsedModel {
  BayesNet net;
  std::vector<FormatDiagnostic> warnings;
};

/// Parses a `.bn.json` document:
///
///   {"version": 1,
///    "variables": [{"name": "X", "values": ["x0", "x1"], "ordered": true}, ...],
///    "edges": [["Parent", "Child"], ...],
///    "cpts": [{"child": "X", "parents": [...],
///              "rows": [{"given": {"Parent": "v"}, "dist": {"x0": 0.2, "x1": 0.8}}]}]}
///
/// The result always passes validate_network(). CPTs are returned in variable
/// declaration order. Throws ModelFormatError with every problem found.
ParsedModel parse_network(std::string_view text);

/// Reads and parses a model file. Throws ModelIoError if unreadable.
ParsedModel load_network(const std::filesystem::path& path);

/// Canonical document: declaration order throughout, rows in CPT index order,
/// shortest round-trip decimal for every probability.
std::string serialize_network(const BayesNet& net);

}  // namespace bayesl
