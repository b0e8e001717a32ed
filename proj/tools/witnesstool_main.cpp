#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "CLI11.hpp"

#include "wit/instrument.hpp"
#include "wit/lint.hpp"
#include "wit/lower.hpp"
#include "wit/validate.hpp"

namespace {

bool color_for(FILE *stream) {
  if (const char *env = std::getenv("WITNESS_CONTRACTS_COLOR"))
    return std::string(env) != "0";
  return isatty(fileno(stream)) != 0;
}

const char *paint(bool on, const char *code) { return on ? code : ""; }

std::optional<std::string> read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

bool write_file(const std::string &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    return false;
  out << text;
  return bool(out);
}

struct Opts {
  std::string witness_path;
  std::string program_path;
  std::string format = "text";
  bool lenient = false;
  int columns_base = 1;

  std::string out;
  std::string residue_out;
  bool reach_error = false;

  std::vector<std::int64_t> exhaustive;
  std::vector<std::int64_t> random_opts;
  long long step_limit = 200000;
};

wit::ResolveOptions resolve_options(const Opts &o) {
  wit::ResolveOptions r;
  r.zero_based_columns = o.columns_base == 0;
  return r;
}

struct Loaded {
  wit::WitnessSet witness;
  wit::ProgramAst program;
  wit::DiagnosticList diagnostics; // parse findings (may hold warnings)
  bool ok = false;
};

Loaded load_inputs(const Opts &o) {
  Loaded l;
  auto io_error = [&](const std::string &path) {
    l.diagnostics.push_back(wit::Diagnostic{wit::Severity::error, "io",
                                            "cannot read file", path, 0, 0});
  };
  std::optional<std::string> wtext = read_file(o.witness_path);
  if (!wtext)
    io_error(o.witness_path);
  std::optional<std::string> ptext = read_file(o.program_path);
  if (!ptext)
    io_error(o.program_path);
  if (!wtext || !ptext)
    return l;

  wit::WitnessParseOptions wopts;
  wopts.strict = !o.lenient;
  wopts.source_name = o.witness_path;
  wit::ParsedWitness pw = wit::parse_witness(*wtext, wopts);
  for (const wit::Diagnostic &d : pw.diagnostics)
    l.diagnostics.push_back(d);

  wit::ParsedProgram pp = wit::parse_program(*ptext, o.program_path);
  for (const wit::Diagnostic &d : pp.diagnostics)
    l.diagnostics.push_back(d);

  if (!pw.ok() || !pp.ok())
    return l;
  l.witness = std::move(*pw.witness);
  l.program = std::move(*pp.program);
  l.ok = true;
  return l;
}

void print_diagnostics(FILE *stream, const wit::DiagnosticList &diags) {
  bool color = color_for(stream);
  for (const wit::Diagnostic &d : diags)
    std::fprintf(stream, "%s\n", wit::format_diagnostic(d, color).c_str());
}

int count_of(const wit::DiagnosticList &diags, wit::Severity s) {
  int n = 0;
  for (const wit::Diagnostic &d : diags)
    if (d.severity == s)
      ++n;
  return n;
}

int run_lint(const Opts &o) {
  Loaded l = load_inputs(o);
  wit::DiagnosticList all = l.diagnostics;
  if (l.ok) {
    wit::LintOptions opts;
    opts.resolve = resolve_options(o);
    for (wit::Diagnostic &d : wit::lint_witness(l.witness, l.program, opts))
      all.push_back(std::move(d));
  }
  wit::sort_diagnostics(all);

  int errors = count_of(all, wit::Severity::error);
  int warnings = count_of(all, wit::Severity::warning);
  if (o.format == "json") {
    nlohmann::ordered_json out;
    out["findings"] = wit::diagnostics_to_json(all);
    out["errors"] = errors;
    out["warnings"] = warnings;
    std::printf("%s\n", out.dump(2).c_str());
  } else {
    print_diagnostics(stdout, all);
    bool color = color_for(stdout);
    if (all.empty())
      std::printf("%sno findings%s\n", paint(color, "\033[32m"),
                  paint(color, "\033[0m"));
    else
      std::printf("%d error(s), %d warning(s)\n", errors, warnings);
  }
  return all.empty() ? 0 : 3;
}

/// Parse + lint gate shared by instrument/validate/lower: errors stop the
/// run with exit 3, warnings only get echoed to stderr.
std::optional<Loaded> gated_inputs(const Opts &o) {
  Loaded l = load_inputs(o);
  wit::DiagnosticList all = l.diagnostics;
  if (l.ok) {
    wit::LintOptions opts;
    opts.resolve = resolve_options(o);
    for (wit::Diagnostic &d : wit::lint_witness(l.witness, l.program, opts))
      all.push_back(std::move(d));
  }
  wit::sort_diagnostics(all);
  print_diagnostics(stderr, all);
  if (!l.ok || wit::has_errors(all))
    return std::nullopt;
  return l;
}

int run_instrument(const Opts &o) {
  std::optional<Loaded> l = gated_inputs(o);
  if (!l)
    return 3;
  wit::ProgramAst instrumented =
      wit::instrument_program(l->program, l->witness, resolve_options(o));
  wit::EmitOptions emit;
  emit.reach_error_encoding = o.reach_error;
  std::string text = wit::emit_c(instrumented, emit);
  if (!write_file(o.out, text)) {
    std::fprintf(stderr, "cannot write file: %s\n", o.out.c_str());
    return 3;
  }
  if (o.format == "json") {
    nlohmann::ordered_json out;
    out["output"] = o.out;
    std::printf("%s\n", out.dump(2).c_str());
  } else {
    std::printf("instrumented program written to %s\n", o.out.c_str());
  }
  return 0;
}

int run_validate(const Opts &o) {
  std::optional<Loaded> l = gated_inputs(o);
  if (!l)
    return 3;

  wit::InputStrategy strategy;
  if (!o.random_opts.empty()) {
    long long samples = o.random_opts[1];
    if (samples < 0) {
      std::fprintf(stderr, "--random: sample count must be >= 0\n");
      return 64;
    }
    strategy = wit::InputStrategy::randomized(
        static_cast<std::uint64_t>(o.random_opts[0]),
        static_cast<int>(samples));
  } else if (!o.exhaustive.empty()) {
    long long lo = o.exhaustive[0], hi = o.exhaustive[1],
              max_calls = o.exhaustive[2];
    if (lo > hi || lo < INT32_MIN || hi > INT32_MAX) {
      std::fprintf(stderr, "--exhaustive: need int32 bounds with lo <= hi\n");
      return 64;
    }
    if (max_calls < 0) {
      std::fprintf(stderr, "--exhaustive: max calls must be >= 0\n");
      return 64;
    }
    strategy = wit::InputStrategy::exhaustive(static_cast<std::int32_t>(lo),
                                              static_cast<std::int32_t>(hi),
                                              static_cast<int>(max_calls));
  }

  wit::ValidateLimits limits;
  limits.step_limit = o.step_limit;
  wit::Verdict v = wit::validate(l->program, l->witness, strategy, limits,
                                 resolve_options(o));

  if (o.format == "json") {
    std::printf("%s\n", wit::verdict_to_json(v).dump(2).c_str());
    return wit::verdict_exit_code(v);
  }

  bool color = color_for(stdout);
  switch (v.kind) {
  case wit::VerdictKind::no_violation_found:
    std::printf("%sno_violation_found%s (%lld input vectors, %lld entry "
                "checks)\n",
                paint(color, "\033[32m"), paint(color, "\033[0m"),
                v.inputs_explored, v.entries_evaluated);
    break;
  case wit::VerdictKind::violated: {
    std::string inputs;
    for (std::size_t i = 0; i < v.input_vector.size(); ++i) {
      if (i)
        inputs += ", ";
      inputs += std::to_string(v.input_vector[i]);
    }
    if (v.entry_index < 0)
      std::printf("%sviolated%s: program assert at %s\n",
                  paint(color, "\033[31m"), paint(color, "\033[0m"),
                  v.violation_point.c_str());
    else
      std::printf("%sviolated%s: %s of %s, checked at %s\n",
                  paint(color, "\033[31m"), paint(color, "\033[0m"),
                  wit::verdict_clause_name(v), v.entry_description.c_str(),
                  v.violation_point.c_str());
    std::printf("inputs: [%s]\n", inputs.c_str());
    for (const wit::TraceEvent &t : v.trace)
      std::printf("  %s: %s\n", t.point.c_str(), t.event.c_str());
    break;
  }
  case wit::VerdictKind::unknown:
    std::printf("%sunknown%s: %s\n", paint(color, "\033[33m"),
                paint(color, "\033[0m"), v.reason.c_str());
    break;
  }
  return wit::verdict_exit_code(v);
}

int run_lower(const Opts &o) {
  std::optional<Loaded> l = gated_inputs(o);
  if (!l)
    return 3;
  wit::LowerResult r =
      wit::lower_to_v20(l->witness, l->program, resolve_options(o));
  if (!write_file(o.out, wit::serialize_witness(r.witness))) {
    std::fprintf(stderr, "cannot write file: %s\n", o.out.c_str());
    return 3;
  }
  if (!o.residue_out.empty() &&
      !write_file(o.residue_out, wit::residue_to_json(r.residue).dump(2) +
                                     "\n")) {
    std::fprintf(stderr, "cannot write file: %s\n", o.residue_out.c_str());
    return 3;
  }
  if (o.format == "json") {
    nlohmann::ordered_json out;
    out["output"] = o.out;
    out["lowered_entries"] = r.witness.entries.size();
    out["residue_count"] = r.residue.items.size();
    std::printf("%s\n", out.dump(2).c_str());
  } else {
    std::printf("lowered witness written to %s (%zu entries, %zu residue "
                "items)\n",
                o.out.c_str(), r.witness.entries.size(),
                r.residue.items.size());
  }
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"witness linter, instrumenter, validator and lowering tool "
               "for C programs"};
  app.require_subcommand(1);
  Opts o;

  auto add_common = [&](CLI::App *sub) {
    sub->add_option("witness", o.witness_path, "witness YAML file")
        ->required();
    sub->add_option("program", o.program_path, "C source file")->required();
    sub->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"text", "json"}));
    sub->add_flag("--lenient", o.lenient,
                  "treat unknown keys and entry types as warnings");
    sub->add_option("--columns-base", o.columns_base,
                    "base of column numbers in witness locations")
        ->check(CLI::IsMember({0, 1}));
  };

  CLI::App *lint_cmd =
      app.add_subcommand("lint", "check a witness against a program");
  add_common(lint_cmd);

  CLI::App *instr_cmd = app.add_subcommand(
      "instrument", "rewrite the program so asserts enforce the witness");
  add_common(instr_cmd);
  instr_cmd->add_option("-o,--output", o.out, "instrumented C output file")
      ->required();
  instr_cmd->add_flag("--reach-error", o.reach_error,
                      "encode checks as if (!(e)) reach_error();");

  CLI::App *val_cmd = app.add_subcommand(
      "validate", "execute the program and check every witness entry");
  add_common(val_cmd);
  CLI::Option *ex_opt =
      val_cmd->add_option("--exhaustive", o.exhaustive,
                          "lo hi max-calls: every nondet vector over [lo,hi]")
          ->expected(3);
  CLI::Option *rnd_opt =
      val_cmd
          ->add_option("--random", o.random_opts,
                       "seed samples: randomized full-range vectors")
          ->expected(2);
  ex_opt->excludes(rnd_opt);
  rnd_opt->excludes(ex_opt);
  val_cmd->add_option("--step-limit", o.step_limit,
                      "statements executed per input vector");

  CLI::App *low_cmd = app.add_subcommand(
      "lower", "rewrite contract entries as plain invariants where possible");
  add_common(low_cmd);
  low_cmd->add_option("-o,--output", o.out, "lowered witness output file")
      ->required();
  low_cmd->add_option("--residue", o.residue_out,
                      "JSON report of entries that cannot be lowered")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 64;
  }

  if (*lint_cmd)
    return run_lint(o);
  if (*instr_cmd)
    return run_instrument(o);
  if (*val_cmd)
    return run_validate(o);
  return run_lower(o);
}
