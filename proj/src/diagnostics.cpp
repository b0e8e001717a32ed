#include "wit/diagnostics.hpp"

#include <algorithm>
#include <sstream>

namespace wit {

std::string severity_name(Severity s) {
  return s == Severity::error ? "error" : "warning";
}

std::string format_diagnostic(const Diagnostic &d, bool color) {
  std::ostringstream out;
  if (!d.file.empty()) {
    out << d.file << ':';
    if (d.line > 0) {
      out << d.line << ':';
      if (d.column > 0)
        out << d.column << ':';
    }
    out << ' ';
  }
  const char *sev = d.severity == Severity::error ? "error" : "warning";
  if (color) {
    const char *code = d.severity == Severity::error ? "\033[31m" : "\033[33m";
    out << code << sev << "\033[0m: ";
  } else {
    out << sev << ": ";
  }
  if (!d.rule.empty())
    out << '[' << d.rule << "] ";
  out << d.message;
  return out.str();
}

void sort_diagnostics(DiagnosticList &diags) {
  std::stable_sort(diags.begin(), diags.end(),
                   [](const Diagnostic &a, const Diagnostic &b) {
                     if (a.file != b.file)
                       return a.file < b.file;
                     if (a.line != b.line)
                       return a.line < b.line;
                     if (a.column != b.column)
                       return a.column < b.column;
                     return a.rule < b.rule;
                   });
}

nlohmann::ordered_json diagnostics_to_json(const DiagnosticList &diags) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto &d : diags) {
    nlohmann::ordered_json item;
    item["rule"] = d.rule;
    item["severity"] = severity_name(d.severity);
    item["message"] = d.message;
    item["file"] = d.file;
    item["line"] = d.line;
    item["column"] = d.column;
    arr.push_back(std::move(item));
  }
  return arr;
}

} // namespace wit
