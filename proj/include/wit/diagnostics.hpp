#ifndef WIT_DIAGNOSTICS_HPP
#define WIT_DIAGNOSTICS_HPP

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace wit {

enum class Severity { error, warning };

/// One finding, tied to a position in either a witness or a program file.
/// line/column are 1-based; 0 means "no position".
struct Diagnostic {
  Severity severity = Severity::error;
  std::string rule;
  std::string message;
  std::string file;
  int line = 0;
  int column = 0;
};

using DiagnosticList = std::vector<Diagnostic>;

inline bool has_errors(const DiagnosticList &diags) {
  for (const auto &d : diags)
    if (d.severity == Severity::error)
      return true;
  return false;
}

std::string severity_name(Severity s);

/// "file:line:col: severity: [rule] message"; pieces with no value are dropped.
std::string format_diagnostic(const Diagnostic &d, bool color = false);

/// Sorts by (file, line, column, rule id); equal keys keep insertion order.
void sort_diagnostics(DiagnosticList &diags);

nlohmann::ordered_json diagnostics_to_json(const DiagnosticList &diags);

} // namespace wit

#endif
