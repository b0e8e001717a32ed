#include "doctest.h"

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "wit/lint.hpp"

using namespace wit;

namespace {

std::string slurp(const std::string &path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string corpus(const std::string &name) {
  return std::string(CORPUS_DIR) + "/" + name;
}

ProgramAst parse_corpus_program(const std::string &name) {
  ParsedProgram p = parse_program(slurp(corpus(name)), name);
  REQUIRE(p.ok());
  return *p.program;
}

WitnessSet parse_corpus_witness(const std::string &name) {
  ParsedWitness w = parse_witness(slurp(corpus(name)));
  REQUIRE(w.ok());
  return *w.witness;
}

WitnessSet make_witness(std::vector<Entry> entries) {
  WitnessSet w;
  w.metadata.format_version = "2.1";
  Producer pr;
  pr.name = "lint-test";
  w.metadata.producer = pr;
  w.source_name = "<witness>";
  w.entries = std::move(entries);
  return w;
}

Entry invariant(EntryKind kind, std::string file, int line,
                std::optional<int> col, std::string value,
                ExprFormat fmt = ExprFormat::c_expression) {
  Entry e;
  e.kind = kind;
  e.location.file_name = std::move(file);
  e.location.line = line;
  e.location.column = col;
  e.format = fmt;
  e.value = std::move(value);
  return e;
}

Entry contract(std::string file, int line, std::string function,
               std::optional<std::string> req, std::optional<std::string> ens,
               ExprFormat fmt = ExprFormat::acsl_expression) {
  Entry e;
  e.kind = EntryKind::function_contract;
  e.location.file_name = std::move(file);
  e.location.line = line;
  e.location.column = 1;
  e.location.function = std::move(function);
  e.format = fmt;
  e.requires_text = std::move(req);
  e.ensures_text = std::move(ens);
  return e;
}

std::vector<std::string> rules_of(const DiagnosticList &diags) {
  std::vector<std::string> rules;
  for (const Diagnostic &d : diags)
    rules.push_back(d.rule);
  return rules;
}

DiagnosticList lint_program_text(const WitnessSet &w, const std::string &text,
                                 const std::string &name = "t.c") {
  ParsedProgram p = parse_program(text, name);
  REQUIRE(p.ok());
  return lint_witness(w, *p.program);
}

} // namespace

TEST_CASE("clean corpus pairs produce no findings") {
  struct Pair {
    const char *witness;
    const char *program;
  };
  const Pair pairs[] = {
      {"product.yml", "product.c"},   {"div.yml", "div.c"},
      {"div_deleted.yml", "div.c"},   {"fact.yml", "fact.c"},
      {"max.yml", "max.c"},           {"abs.yml", "abs.c"},
      {"swap.yml", "swap.c"},         {"param_reassign.yml", "param_reassign.c"},
      {"reset.yml", "reset.c"},       {"fallthrough.yml", "fallthrough.c"},
      {"call_return.yml", "call_return.c"},
      {"countdown_flip.yml", "countdown.c"},
      {"product20.yml", "product.c"}, {"div20.yml", "div.c"},
      {"fact20.yml", "fact.c"},       {"countdown20.yml", "countdown.c"},
      {"sum20.yml", "sum.c"},         {"max20.yml", "max.c"},
      {"abs20.yml", "abs.c"},         {"swap20.yml", "swap.c"},
      {"reset20.yml", "reset.c"},     {"fallthrough20.yml", "fallthrough.c"},
      {"call_return20.yml", "call_return.c"}, {"nop20.yml", "nop.c"},
  };
  for (const Pair &pair : pairs) {
    CAPTURE(pair.witness);
    WitnessSet w = parse_corpus_witness(pair.witness);
    ProgramAst p = parse_corpus_program(pair.program);
    DiagnosticList diags = lint_witness(w, p);
    for (const Diagnostic &d : diags)
      CAPTURE(d.message);
    CHECK(diags.empty());
  }
}

TEST_CASE("each negative corpus witness trips exactly its rule") {
  struct Case {
    const char *witness;
    const char *program;
    const char *rule;
  };
  const Case cases[] = {
      {"lint_r1.yml", "countdown.c", "R1"}, {"lint_r2.yml", "nop.c", "R2"},
      {"lint_r3.yml", "product.c", "R3"},   {"lint_r4.yml", "reset.c", "R4"},
      {"lint_r5.yml", "product.c", "R5"},   {"lint_r6.yml", "product.c", "R6"},
      {"lint_r7.yml", "div.c", "R7"},
  };
  for (const Case &c : cases) {
    CAPTURE(c.witness);
    WitnessSet w = parse_corpus_witness(c.witness);
    ProgramAst p = parse_corpus_program(c.program);
    DiagnosticList diags = lint_witness(w, p);
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].rule == c.rule);
    CHECK(diags[0].severity == Severity::error);
  }
}

TEST_CASE("R1 findings carry the resolver's explanation") {
  WitnessSet w = make_witness(
      {invariant(EntryKind::location_invariant, "t.c", 99, {}, "1")});
  DiagnosticList diags =
      lint_program_text(w, "int main() {\n  return 0;\n}\n");
  REQUIRE(diags.size() == 1);
  CHECK(diags[0].rule == "R1");
  CHECK(diags[0].message == "no statement on line 99 of t.c");
}

TEST_CASE("R2 covers syntax and context faults") {
  WitnessSet bad_syntax = make_witness(
      {invariant(EntryKind::location_invariant, "t.c", 2, {}, "x >")});
  DiagnosticList d1 = lint_program_text(
      bad_syntax, "int main() {\n  int x = 1;\n  return 0;\n}\n");
  REQUIRE(d1.size() == 1);
  CHECK(d1[0].rule == "R2");

  WitnessSet old_in_invariant = make_witness(
      {invariant(EntryKind::location_invariant, "t.c", 2, {}, "\\old(x) == 1",
                 ExprFormat::acsl_expression)});
  DiagnosticList d2 = lint_program_text(
      old_in_invariant, "int main() {\n  int x = 1;\n  return 0;\n}\n");
  REQUIRE(d2.size() == 1);
  CHECK(d2[0].rule == "R2");
}

TEST_CASE("R3 rejects contract variables that are not global or parameter") {
  const char *src = "int g = 0;\nint f(int a) {\n  int t = a;\n  return t;\n}\n"
                    "int main() {\n  int r = f(1);\n  return 0;\n}\n";
  WitnessSet locals_leak =
      make_witness({contract("t.c", 2, "f", {}, "\\result == t")});
  DiagnosticList d1 = lint_program_text(locals_leak, src);
  REQUIRE(d1.size() == 1);
  CHECK(d1[0].rule == "R3");
  CHECK(d1[0].message ==
        "'t' is neither a global variable nor a parameter of function 'f'");

  WitnessSet old_local =
      make_witness({contract("t.c", 2, "f", {}, "\\old(t) == 0")});
  DiagnosticList d2 = lint_program_text(old_local, src);
  REQUIRE(d2.size() == 1);
  CHECK(d2[0].rule == "R3");
  CHECK(d2[0].message == "\\old(t): 't' is neither a global variable nor a "
                         "parameter of function 'f'");

  WitnessSet fine = make_witness(
      {contract("t.c", 2, "f", "a >= 0", "\\result == \\old(a) && g == 0")});
  CHECK(lint_program_text(fine, src).empty());
}

TEST_CASE("R4 rejects \\result on void functions") {
  const char *src = "void f() {\n}\nint main() {\n  f();\n  return 0;\n}\n";
  WitnessSet w = make_witness({contract("t.c", 1, "f", {}, "\\result == 0")});
  DiagnosticList diags = lint_program_text(w, src);
  REQUIRE(diags.size() == 1);
  CHECK(diags[0].rule == "R4");
  CHECK(diags[0].message ==
        "\\result used in a contract for 'f', which returns void");
}

TEST_CASE("R5 flags ACSL keywords declared as c_expression") {
  WitnessSet w = make_witness({contract("t.c", 1, "f", {}, "\\result == 1",
                                        ExprFormat::c_expression)});
  DiagnosticList diags = lint_program_text(
      w, "int f() {\n  return 1;\n}\nint main() {\n  int x = f();\n"
         "  return 0;\n}\n");
  REQUIRE(diags.size() == 1);
  CHECK(diags[0].rule == "R5");
}

TEST_CASE("R6 checks scope at the attachment point") {
  const char *src = "int g = 0;\nint main() {\n  int x = 1;\n"
                    "  assert(x == 1);\n  int y = 2;\n  return 0;\n}\n";
  WitnessSet later_local = make_witness(
      {invariant(EntryKind::location_invariant, "t.c", 4, {}, "y == 2")});
  DiagnosticList d1 = lint_program_text(later_local, src);
  REQUIRE(d1.size() == 1);
  CHECK(d1[0].rule == "R6");
  CHECK(d1[0].message == "'y' is not in scope at t.c:4");

  WitnessSet own_decl = make_witness(
      {invariant(EntryKind::location_invariant, "t.c", 5, {}, "y == 2")});
  DiagnosticList d2 = lint_program_text(own_decl, src);
  REQUIRE(d2.size() == 1);
  CHECK(d2[0].rule == "R6");

  WitnessSet visible = make_witness(
      {invariant(EntryKind::location_invariant, "t.c", 4, {}, "x == 1 && g == 0")});
  CHECK(lint_program_text(visible, src).empty());

  WitnessSet at_local = make_witness(
      {invariant(EntryKind::location_invariant, "t.c", 4, {},
                 "\\at(x, Pre) == 1", ExprFormat::acsl_expression)});
  DiagnosticList d3 = lint_program_text(at_local, src);
  REQUIRE(d3.size() == 1);
  CHECK(d3[0].rule == "R6");
  CHECK(d3[0].message ==
        "\\at(x, Pre): 'x' is neither a global variable nor a parameter of "
        "function 'main'");
}

TEST_CASE("R6 sees for-loop init variables at the loop head") {
  const char *src = "int main() {\n  int i;\n  int s = 0;\n"
                    "  for (i = 0; i < 3; i = i + 1) {\n    s = s + i;\n  }\n"
                    "  return 0;\n}\n";
  WitnessSet w = make_witness(
      {invariant(EntryKind::loop_invariant, "t.c", 4, {}, "i >= 0 && s >= 0")});
  CHECK(lint_program_text(w, src).empty());
}

TEST_CASE("R7 flags \\at labels other than Pre") {
  WitnessSet w = make_witness(
      {invariant(EntryKind::loop_invariant, "t.c", 2, {}, "\\at(x, Post) == 1",
                 ExprFormat::acsl_expression)});
  DiagnosticList diags = lint_program_text(
      w, "int main() {\n  while (0) {\n  }\n  return 0;\n}\n");
  REQUIRE(diags.size() == 1);
  CHECK(diags[0].rule == "R7");
}

TEST_CASE("R8 reserves the ghost prefix only when a witness is present") {
  const char *src = "int __wit_count = 0;\nint main() {\n"
                    "  __wit_count = 1;\n  return 0;\n}\n";
  WitnessSet nonempty = make_witness(
      {invariant(EntryKind::location_invariant, "t.c", 3, {}, "1")});
  DiagnosticList diags = lint_program_text(nonempty, src);
  bool saw_r8 = false;
  for (const Diagnostic &d : diags)
    if (d.rule == "R8") {
      saw_r8 = true;
      CHECK(d.message ==
            "identifier '__wit_count' uses the reserved prefix '__wit_'");
      CHECK(d.file == "t.c");
      CHECK(d.line == 1);
    }
  CHECK(saw_r8);

  WitnessSet empty = make_witness({});
  CHECK(lint_program_text(empty, src).empty());
}

TEST_CASE("R9 demands int main() with no parameters") {
  WitnessSet w = make_witness(
      {invariant(EntryKind::location_invariant, "t.c", 2, {}, "1")});

  DiagnosticList no_main = lint_program_text(
      w, "int f() {\n  return 1;\n}\n");
  bool saw = false;
  for (const Diagnostic &d : no_main)
    if (d.rule == "R9" && d.message == "program defines no function 'main'")
      saw = true;
  CHECK(saw);

  DiagnosticList void_main = lint_program_text(
      w, "void main() {\n  int x = 1;\n}\n");
  saw = false;
  for (const Diagnostic &d : void_main)
    if (d.rule == "R9" && d.message == "'main' must return int")
      saw = true;
  CHECK(saw);

  DiagnosticList argful = lint_program_text(
      w, "int main(int argc) {\n  int x = 1;\n  return argc;\n}\n");
  saw = false;
  for (const Diagnostic &d : argful)
    if (d.rule == "R9" && d.message == "'main' must take no parameters")
      saw = true;
  CHECK(saw);
}

TEST_CASE("W1 warns on the second of two equal entries") {
  Entry a = invariant(EntryKind::location_invariant, "t.c", 3, {}, "x == 1");
  WitnessSet w = make_witness({a, a});
  DiagnosticList diags = lint_program_text(
      w, "int main() {\n  int x = 1;\n  return 0;\n}\n");
  REQUIRE(diags.size() == 1);
  CHECK(diags[0].rule == "W1");
  CHECK(diags[0].severity == Severity::warning);
  CHECK(diags[0].message == "duplicate of an earlier witness entry");
}

TEST_CASE("W2 warns on trivially true invariants") {
  WitnessSet w = make_witness(
      {invariant(EntryKind::loop_invariant, "countdown.c", 6, 3, "1")});
  ProgramAst p = parse_corpus_program("countdown.c");
  DiagnosticList diags = lint_witness(w, p);
  REQUIRE(diags.size() == 1);
  CHECK(diags[0].rule == "W2");
  CHECK(diags[0].severity == Severity::warning);
  CHECK(diags[0].message == "invariant is trivially true");

  WitnessSet zero = make_witness(
      {invariant(EntryKind::loop_invariant, "countdown.c", 6, 3, "0")});
  CHECK(lint_witness(zero, p).empty());
}

TEST_CASE("findings come out sorted by file, position, and rule") {
  const char *src = "int main() {\n  int x = 1;\n  assert(x == 1);\n"
                    "  return 0;\n}\n";
  WitnessSet w = make_witness({
      invariant(EntryKind::location_invariant, "t.c", 99, {}, "1"),
      invariant(EntryKind::location_invariant, "t.c", 3, {}, "zz == 1"),
      invariant(EntryKind::location_invariant, "t.c", 3, {}, "x >"),
  });
  w.entries[0].pos = {10, 3};
  w.entries[1].pos = {20, 3};
  w.entries[2].pos = {30, 3};
  DiagnosticList diags = lint_program_text(w, src);
  REQUIRE(diags.size() == 3);
  CHECK(diags[0].line == 10);
  CHECK(diags[1].line == 20);
  CHECK(diags[2].line == 30);
  CHECK(rules_of(diags) == std::vector<std::string>{"R1", "R6", "R2"});
}

TEST_CASE("bind_witness yields parsed clauses in declaration order") {
  ProgramAst p = parse_corpus_program("product.c");
  ProgramIndex index(p);
  WitnessSet w = parse_corpus_witness("product.yml");
  BindingResult bound = bind_witness(w, index);
  CHECK(bound.diagnostics.empty());
  REQUIRE(bound.entries.size() == 2);

  const BoundEntry &c = bound.entries[0];
  CHECK(c.entry->kind == EntryKind::function_contract);
  CHECK(c.point.kind == PointKind::function_entry);
  CHECK(c.point.function == "product");
  REQUIRE(c.clauses.size() == 2);
  CHECK(c.clauses[0].context == ClauseContext::requires_clause);
  CHECK(c.clauses[0].text == "b >= 0");
  CHECK(c.clauses[0].expr != nullptr);
  CHECK(c.clauses[1].context == ClauseContext::ensures_clause);

  const BoundEntry &l = bound.entries[1];
  CHECK(l.point.kind == PointKind::loop_head);
  REQUIRE(l.clauses.size() == 1);
  CHECK(l.clauses[0].context == ClauseContext::invariant_clause);
}

TEST_CASE("bind_witness defaults absent contract clauses to 1") {
  const char *src = "int f() {\n  return 1;\n}\nint main() {\n"
                    "  int x = f();\n  return 0;\n}\n";
  ParsedProgram p = parse_program(src, "t.c");
  REQUIRE(p.ok());
  ProgramIndex index(*p.program);
  WitnessSet w = make_witness({contract("t.c", 1, "f", {}, {})});
  BindingResult bound = bind_witness(w, index);
  CHECK(bound.diagnostics.empty());
  REQUIRE(bound.entries.size() == 1);
  REQUIRE(bound.entries[0].clauses.size() == 2);
  CHECK(bound.entries[0].clauses[0].text == "1");
  CHECK(bound.entries[0].clauses[1].text == "1");
}
