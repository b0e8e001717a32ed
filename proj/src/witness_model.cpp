#include "wit/witness_model.hpp"

#include <yaml-cpp/yaml.h>

#include <initializer_list>
#include <sstream>

namespace wit {

const char *entry_kind_name(EntryKind k) {
  switch (k) {
  case EntryKind::function_contract:
    return "function_contract";
  case EntryKind::loop_invariant:
    return "loop_invariant";
  case EntryKind::location_invariant:
    return "location_invariant";
  }
  return "?";
}

namespace {

NodePos mark_pos(const YAML::Node &n) {
  YAML::Mark m = n.Mark();
  if (m.line < 0)
    return {};
  return {m.line + 1, m.column + 1};
}

struct WitnessReader {
  explicit WitnessReader(const WitnessParseOptions &o) : opt(o) {}

  const WitnessParseOptions &opt;
  DiagnosticList diags;
  WitnessSet result;
  bool have_metadata = false;
  std::string set_version; // format_version of the set being read

  void report(Severity sev, const NodePos &pos, std::string message) {
    diags.push_back(Diagnostic{sev, "schema", std::move(message),
                               opt.source_name, pos.line, pos.column});
  }
  void error(const YAML::Node &n, std::string message) {
    report(Severity::error, mark_pos(n), std::move(message));
  }

  // Unknown keys are producer bugs in strict mode, noise in lenient mode.
  void check_keys(const YAML::Node &map,
                  std::initializer_list<const char *> allowed) {
    for (const auto &kv : map) {
      if (!kv.first.IsScalar())
        continue;
      std::string key = kv.first.Scalar();
      bool known = false;
      for (const char *a : allowed)
        if (key == a)
          known = true;
      if (!known)
        report(opt.strict ? Severity::error : Severity::warning,
               mark_pos(kv.first), "unknown key: " + key);
    }
  }

  std::optional<std::string> scalar(const YAML::Node &map,
                                    const YAML::Node &owner, const char *name,
                                    bool required, NodePos *pos_out = nullptr) {
    YAML::Node n = map[name];
    if (!n.IsDefined()) {
      if (required)
        error(owner, std::string("missing key: ") + name);
      return std::nullopt;
    }
    if (!n.IsScalar()) {
      error(n, std::string("expected scalar for key: ") + name);
      return std::nullopt;
    }
    if (pos_out)
      *pos_out = mark_pos(n);
    return n.Scalar();
  }

  std::optional<int> positive_int(const YAML::Node &map,
                                  const YAML::Node &owner, const char *name,
                                  bool required) {
    YAML::Node n = map[name];
    if (!n.IsDefined()) {
      if (required)
        error(owner, std::string("missing key: ") + name);
      return std::nullopt;
    }
    int v = 0;
    bool good = n.IsScalar();
    if (good) {
      try {
        v = n.as<int>();
      } catch (const YAML::Exception &) {
        good = false;
      }
    }
    if (!good || v < 1) {
      error(n.IsDefined() ? n : owner,
            std::string(name) + " must be a positive integer");
      return std::nullopt;
    }
    return v;
  }

  void read_producer(const YAML::Node &node, Metadata &meta) {
    if (!node.IsMap()) {
      error(node, "expected mapping for key: producer");
      return;
    }
    check_keys(node,
               {"name", "version", "configuration", "command_line",
                "description"});
    Producer p;
    if (auto v = scalar(node, node, "name", true))
      p.name = *v;
    p.version = scalar(node, node, "version", false);
    p.configuration = scalar(node, node, "configuration", false);
    p.command_line = scalar(node, node, "command_line", false);
    p.description = scalar(node, node, "description", false);
    meta.producer = std::move(p);
  }

  void read_task(const YAML::Node &node, Metadata &meta) {
    if (!node.IsMap()) {
      error(node, "expected mapping for key: task");
      return;
    }
    check_keys(node, {"input_files", "input_file_hashes", "specification",
                      "data_model", "language"});
    Task t;
    if (YAML::Node files = node["input_files"]; files.IsDefined()) {
      if (!files.IsSequence()) {
        error(files, "expected sequence for key: input_files");
      } else {
        for (const auto &f : files) {
          if (!f.IsScalar())
            error(f, "expected scalar in input_files");
          else
            t.input_files.push_back(f.Scalar());
        }
      }
    }
    if (YAML::Node hashes = node["input_file_hashes"]; hashes.IsDefined()) {
      if (!hashes.IsMap()) {
        error(hashes, "expected mapping for key: input_file_hashes");
      } else {
        for (const auto &kv : hashes) {
          if (!kv.first.IsScalar() || !kv.second.IsScalar())
            error(hashes, "expected scalar entries in input_file_hashes");
          else
            t.input_file_hashes.emplace_back(kv.first.Scalar(),
                                             kv.second.Scalar());
        }
      }
    }
    t.specification = scalar(node, node, "specification", false);
    t.data_model = scalar(node, node, "data_model", false);
    t.language = scalar(node, node, "language", false);
    meta.task = std::move(t);
  }

  void read_metadata(const YAML::Node &node, const YAML::Node &owner) {
    set_version.clear();
    if (!node.IsDefined()) {
      error(owner, "missing key: metadata");
      return;
    }
    if (!node.IsMap()) {
      error(node, "expected mapping for key: metadata");
      return;
    }
    check_keys(node,
               {"format_version", "uuid", "creation_time", "producer", "task"});
    Metadata meta;
    if (auto v = scalar(node, node, "format_version", true)) {
      if (*v != "2.0" && *v != "2.1")
        error(node["format_version"],
              "invalid value for format_version: " + *v +
                  " (allowed: 2.0, 2.1)");
      else
        set_version = *v;
      meta.format_version = *v;
    }
    meta.uuid = scalar(node, node, "uuid", false);
    meta.creation_time = scalar(node, node, "creation_time", false);
    if (YAML::Node p = node["producer"]; p.IsDefined())
      read_producer(p, meta);
    if (YAML::Node t = node["task"]; t.IsDefined())
      read_task(t, meta);
    // Entries of every invariant_set are kept; metadata comes from the first.
    if (!have_metadata) {
      have_metadata = true;
      result.metadata = std::move(meta);
    }
  }

  std::optional<Location> read_location(const YAML::Node &node,
                                        const YAML::Node &owner) {
    if (!node.IsDefined()) {
      error(owner, "missing key: location");
      return std::nullopt;
    }
    if (!node.IsMap()) {
      error(node, "expected mapping for key: location");
      return std::nullopt;
    }
    check_keys(node, {"file_name", "line", "column", "function"});
    Location loc;
    loc.yaml_pos = mark_pos(node);
    bool ok = true;
    if (auto v = scalar(node, node, "file_name", true))
      loc.file_name = *v;
    else
      ok = false;
    if (auto v = positive_int(node, node, "line", true))
      loc.line = *v;
    else
      ok = false;
    if (node["column"].IsDefined()) {
      if (auto v = positive_int(node, node, "column", false))
        loc.column = *v;
      else
        ok = false;
    }
    loc.function = scalar(node, node, "function", false);
    if (!ok)
      return std::nullopt;
    return loc;
  }

  void forbid_key(const YAML::Node &map, const char *name, EntryKind kind) {
    if (map[name].IsDefined())
      error(map[name], std::string("key ") + name +
                           " is not allowed for type " + entry_kind_name(kind));
  }

  void read_invariant(const YAML::Node &node) {
    if (!node.IsMap()) {
      error(node, "expected mapping for key: invariant");
      return;
    }
    check_keys(node,
               {"type", "location", "format", "value", "requires", "ensures"});
    Entry e;
    e.pos = mark_pos(node);
    bool ok = true;

    std::optional<EntryKind> kind;
    if (auto v = scalar(node, node, "type", true)) {
      if (*v == "function_contract")
        kind = EntryKind::function_contract;
      else if (*v == "loop_invariant")
        kind = EntryKind::loop_invariant;
      else if (*v == "location_invariant")
        kind = EntryKind::location_invariant;
      else
        error(node["type"],
              "invalid value for type: " + *v +
                  " (allowed: function_contract, loop_invariant, "
                  "location_invariant)");
    }
    if (!kind)
      ok = false;
    else
      e.kind = *kind;

    if (auto loc = read_location(node["location"], node))
      e.location = *loc;
    else
      ok = false;

    bool acsl = false;
    if (auto v = scalar(node, node, "format", true)) {
      if (*v == "c_expression") {
        e.format = ExprFormat::c_expression;
      } else if (*v == "acsl_expression") {
        e.format = ExprFormat::acsl_expression;
        acsl = true;
      } else {
        error(node["format"],
              "invalid value for format: " + *v +
                  " (allowed: c_expression, acsl_expression)");
        ok = false;
      }
    } else {
      ok = false;
    }

    if (kind) {
      if (*kind == EntryKind::function_contract) {
        forbid_key(node, "value", *kind);
        e.requires_text = scalar(node, node, "requires", false, &e.requires_pos);
        e.ensures_text = scalar(node, node, "ensures", false, &e.ensures_pos);
        if (set_version == "2.0")
          error(node["type"],
                "entry type function_contract requires format_version 2.1");
      } else {
        forbid_key(node, "requires", *kind);
        forbid_key(node, "ensures", *kind);
        if (auto v = scalar(node, node, "value", true, &e.value_pos))
          e.value = *v;
        else
          ok = false;
      }
    }
    if (acsl && set_version == "2.0")
      error(node["format"],
            "format acsl_expression requires format_version 2.1");

    if (ok)
      result.entries.push_back(std::move(e));
  }

  void read_entry(const YAML::Node &node) {
    if (!node.IsMap()) {
      error(node, "expected mapping for witness entry");
      return;
    }
    auto type = scalar(node, node, "entry_type", true);
    if (!type)
      return;
    if (*type != "invariant_set") {
      report(opt.strict ? Severity::error : Severity::warning,
             mark_pos(node["entry_type"]), "unknown entry type: " + *type);
      return;
    }
    check_keys(node, {"entry_type", "metadata", "content"});
    read_metadata(node["metadata"], node);
    YAML::Node content = node["content"];
    if (!content.IsDefined()) {
      error(node, "missing key: content");
      return;
    }
    if (content.IsNull())
      return; // empty content list
    if (!content.IsSequence()) {
      error(content, "expected sequence for key: content");
      return;
    }
    for (const auto &item : content) {
      if (!item.IsMap()) {
        error(item, "expected mapping with key: invariant");
        continue;
      }
      check_keys(item, {"invariant"});
      YAML::Node inv = item["invariant"];
      if (!inv.IsDefined()) {
        error(item, "missing key: invariant");
        continue;
      }
      read_invariant(inv);
    }
  }

  void read_document(std::string_view text) {
    YAML::Node doc;
    try {
      doc = YAML::Load(std::string(text));
    } catch (const YAML::ParserException &ex) {
      report(Severity::error,
             {ex.mark.line + 1, ex.mark.column + 1},
             "malformed YAML: " + std::string(ex.msg));
      return;
    } catch (const YAML::Exception &ex) {
      report(Severity::error, {}, "malformed YAML: " + std::string(ex.what()));
      return;
    }
    if (!doc.IsSequence()) {
      error(doc, "witness document must be a YAML sequence of entries");
      return;
    }
    for (const auto &entry : doc)
      read_entry(entry);
    if (!have_metadata)
      report(Severity::error, mark_pos(doc), "no invariant_set entry found");
  }
};

void emit_quoted(YAML::Emitter &out, const char *key, const std::string &val) {
  out << YAML::Key << key << YAML::Value << YAML::DoubleQuoted << val;
}

void emit_opt(YAML::Emitter &out, const char *key,
              const std::optional<std::string> &val) {
  if (val)
    emit_quoted(out, key, *val);
}

} // namespace

ParsedWitness parse_witness(std::string_view document_text,
                            const WitnessParseOptions &options) {
  WitnessReader reader{options};
  reader.read_document(document_text);
  sort_diagnostics(reader.diags);
  ParsedWitness parsed;
  parsed.diagnostics = std::move(reader.diags);
  if (!has_errors(parsed.diagnostics)) {
    reader.result.source_name = options.source_name;
    parsed.witness = std::move(reader.result);
  }
  return parsed;
}

DiagnosticList schema_validate(std::string_view document_text,
                               const WitnessParseOptions &options) {
  return parse_witness(document_text, options).diagnostics;
}

std::string serialize_witness(const WitnessSet &w) {
  YAML::Emitter out;
  out << YAML::BeginSeq << YAML::BeginMap;
  out << YAML::Key << "entry_type" << YAML::Value << "invariant_set";

  out << YAML::Key << "metadata" << YAML::Value << YAML::BeginMap;
  emit_quoted(out, "format_version", w.metadata.format_version);
  emit_opt(out, "uuid", w.metadata.uuid);
  emit_opt(out, "creation_time", w.metadata.creation_time);
  if (w.metadata.producer) {
    const Producer &p = *w.metadata.producer;
    out << YAML::Key << "producer" << YAML::Value << YAML::BeginMap;
    emit_quoted(out, "name", p.name);
    emit_opt(out, "version", p.version);
    emit_opt(out, "configuration", p.configuration);
    emit_opt(out, "command_line", p.command_line);
    emit_opt(out, "description", p.description);
    out << YAML::EndMap;
  }
  if (w.metadata.task) {
    const Task &t = *w.metadata.task;
    out << YAML::Key << "task" << YAML::Value << YAML::BeginMap;
    if (!t.input_files.empty()) {
      out << YAML::Key << "input_files" << YAML::Value << YAML::BeginSeq;
      for (const auto &f : t.input_files)
        out << YAML::DoubleQuoted << f;
      out << YAML::EndSeq;
    }
    if (!t.input_file_hashes.empty()) {
      out << YAML::Key << "input_file_hashes" << YAML::Value << YAML::BeginMap;
      for (const auto &[file, hash] : t.input_file_hashes)
        emit_quoted(out, file.c_str(), hash);
      out << YAML::EndMap;
    }
    emit_opt(out, "specification", t.specification);
    emit_opt(out, "data_model", t.data_model);
    emit_opt(out, "language", t.language);
    out << YAML::EndMap;
  }
  out << YAML::EndMap;

  out << YAML::Key << "content" << YAML::Value;
  if (w.entries.empty()) {
    out << YAML::Flow << YAML::BeginSeq << YAML::EndSeq;
  } else {
    out << YAML::BeginSeq;
    for (const Entry &e : w.entries) {
      out << YAML::BeginMap;
      out << YAML::Key << "invariant" << YAML::Value << YAML::BeginMap;
      out << YAML::Key << "type" << YAML::Value << entry_kind_name(e.kind);
      out << YAML::Key << "location" << YAML::Value << YAML::BeginMap;
      emit_quoted(out, "file_name", e.location.file_name);
      out << YAML::Key << "line" << YAML::Value << e.location.line;
      if (e.location.column)
        out << YAML::Key << "column" << YAML::Value << *e.location.column;
      emit_opt(out, "function", e.location.function);
      out << YAML::EndMap;
      out << YAML::Key << "format" << YAML::Value
          << (e.format == ExprFormat::acsl_expression ? "acsl_expression"
                                                      : "c_expression");
      if (e.kind == EntryKind::function_contract) {
        emit_opt(out, "requires", e.requires_text);
        emit_opt(out, "ensures", e.ensures_text);
      } else {
        emit_quoted(out, "value", e.value_or_default());
      }
      out << YAML::EndMap << YAML::EndMap;
    }
    out << YAML::EndSeq;
  }
  out << YAML::EndMap << YAML::EndSeq;
  return std::string(out.c_str()) + "\n";
}

} // namespace wit
