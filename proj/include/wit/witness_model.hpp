#ifndef WIT_WITNESS_MODEL_HPP
#define WIT_WITNESS_MODEL_HPP

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wit/diagnostics.hpp"
#include "wit/expr.hpp"

namespace wit {

enum class EntryKind { function_contract, loop_invariant, location_invariant };

const char *entry_kind_name(EntryKind k);

/// Source position inside a YAML or C file; 1-based, 0 = unknown.
struct NodePos {
  int line = 0;
  int column = 0;
};

struct Location {
  std::string file_name;
  int line = 1;
  std::optional<int> column;     // 1-based
  std::optional<std::string> function;

  NodePos yaml_pos; // position of the location node in the witness document

  friend bool operator==(const Location &a, const Location &b) {
    return a.file_name == b.file_name && a.line == b.line &&
           a.column == b.column && a.function == b.function;
  }
};

/// One invariant entry. For contracts the clauses are optional; an absent
/// clause defaults to "1" and is kept absent so serialization round-trips.
struct Entry {
  EntryKind kind = EntryKind::loop_invariant;
  Location location;
  ExprFormat format = ExprFormat::c_expression;
  std::optional<std::string> value;          // loop/location invariants
  std::optional<std::string> requires_text;  // contracts
  std::optional<std::string> ensures_text;   // contracts

  NodePos pos;          // the invariant mapping node
  NodePos value_pos;
  NodePos requires_pos;
  NodePos ensures_pos;

  std::string value_or_default() const { return value.value_or("1"); }
  std::string requires_or_default() const {
    return requires_text.value_or("1");
  }
  std::string ensures_or_default() const { return ensures_text.value_or("1"); }

  friend bool operator==(const Entry &a, const Entry &b) {
    return a.kind == b.kind && a.location == b.location &&
           a.format == b.format && a.value == b.value &&
           a.requires_text == b.requires_text && a.ensures_text == b.ensures_text;
  }
};

struct Producer {
  std::string name;
  std::optional<std::string> version;
  std::optional<std::string> configuration;
  std::optional<std::string> command_line;
  std::optional<std::string> description;

  friend bool operator==(const Producer &, const Producer &) = default;
};

struct Task {
  std::vector<std::string> input_files;
  std::vector<std::pair<std::string, std::string>> input_file_hashes;
  std::optional<std::string> specification;
  std::optional<std::string> data_model;
  std::optional<std::string> language;

  friend bool operator==(const Task &, const Task &) = default;
};

struct Metadata {
  std::string format_version; // "2.0" or "2.1"
  std::optional<std::string> uuid;
  std::optional<std::string> creation_time;
  std::optional<Producer> producer;
  std::optional<Task> task;

  friend bool operator==(const Metadata &, const Metadata &) = default;
};

struct WitnessSet {
  Metadata metadata;
  std::vector<Entry> entries; // may be empty: the empty witness is legal
  std::string source_name;    // where the document came from; not compared

  friend bool operator==(const WitnessSet &a, const WitnessSet &b) {
    return a.metadata == b.metadata && a.entries == b.entries;
  }
};

struct WitnessParseOptions {
  bool strict = true;               // unknown keys/entry types are errors
  std::string source_name = "<witness>";
};

struct ParsedWitness {
  std::optional<WitnessSet> witness;
  DiagnosticList diagnostics;
  bool ok() const { return witness.has_value(); }
};

/// Parses a witness document. A WitnessSet is produced iff there are no
/// error-severity diagnostics; warnings may accompany a successful parse.
ParsedWitness parse_witness(std::string_view document_text,
                            const WitnessParseOptions &options = {});

/// Structural schema check only; every violation carries the line/column of
/// the offending YAML node. Empty list iff the document conforms.
DiagnosticList schema_validate(std::string_view document_text,
                               const WitnessParseOptions &options = {});

/// Emits a YAML document that parse_witness maps back to a structurally
/// equal WitnessSet. Absent optional fields are not emitted.
std::string serialize_witness(const WitnessSet &w);

} // namespace wit

#endif
