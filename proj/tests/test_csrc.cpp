#include "doctest.h"

#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "wit/csrc.hpp"
#include "wit/instrument.hpp"

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

ProgramAst parse_ok(const std::string &text,
                    const std::string &name = "t.c") {
  ParsedProgram p = parse_program(text, name);
  CAPTURE(text);
  for (const Diagnostic &d : p.diagnostics)
    CAPTURE(d.message);
  REQUIRE(p.ok());
  REQUIRE(p.diagnostics.empty());
  return *p.program;
}

bool parse_error(const std::string &text, const std::string &message) {
  ParsedProgram p = parse_program(text, "t.c");
  for (const Diagnostic &d : p.diagnostics)
    if (d.severity == Severity::error && d.message == message)
      return true;
  return false;
}

} // namespace

TEST_CASE("declarations, calls, and control flow parse structurally") {
  ProgramAst p = parse_ok(R"(int g = 3;
int h;

int twice(int v) {
  return v + v;
}

void touch() {
  g = g + 1;
}

int main() {
  int x = __VERIFIER_nondet_int();
  int y;
  y = twice(x);
  touch();
  if (y > x) {
    y = y - 1;
  } else {
    y = 0;
  }
  while (y > 0) {
    y = y - 1;
  }
  assert(y <= 0);
  return y;
}
)");
  REQUIRE(p.globals.size() == 2);
  CHECK(p.globals[0].name == "g");
  REQUIRE(p.globals[0].init != nullptr);
  CHECK(p.globals[0].init->kind == ExprKind::int_lit);
  CHECK(p.globals[1].name == "h");
  CHECK(p.globals[1].init == nullptr);

  REQUIRE(p.functions.size() == 3);
  const Function &twice = p.functions[0];
  CHECK(twice.name == "twice");
  CHECK(twice.returns_int);
  REQUIRE(twice.params.size() == 1);
  CHECK(twice.params[0].name == "v");
  CHECK(twice.pos.line == 4);
  CHECK(twice.pos.column == 1);

  const Function &touch = p.functions[1];
  CHECK(!touch.returns_int);
  CHECK(touch.params.empty());

  const Function &main_fn = p.functions[2];
  REQUIRE(main_fn.body.size() == 8);
  const Stmt &x_decl = main_fn.body[0];
  CHECK(x_decl.kind == StmtKind::decl);
  CHECK(x_decl.name == "x");
  REQUIRE(x_decl.call.has_value());
  CHECK(x_decl.call->callee == "__VERIFIER_nondet_int");
  CHECK(x_decl.call->args.empty());

  const Stmt &y_decl = main_fn.body[1];
  CHECK(y_decl.kind == StmtKind::decl);
  CHECK(y_decl.expr == nullptr);
  CHECK(!y_decl.call.has_value());

  const Stmt &y_assign = main_fn.body[2];
  CHECK(y_assign.kind == StmtKind::assign);
  REQUIRE(y_assign.call.has_value());
  CHECK(y_assign.call->callee == "twice");
  CHECK(y_assign.call->args.size() == 1);

  const Stmt &touch_call = main_fn.body[3];
  CHECK(touch_call.kind == StmtKind::expr_stmt);
  REQUIRE(touch_call.call.has_value());
  CHECK(touch_call.call->callee == "touch");

  const Stmt &branch = main_fn.body[4];
  CHECK(branch.kind == StmtKind::if_stmt);
  CHECK(branch.body.size() == 1);
  CHECK(branch.else_body.size() == 1);

  const Stmt &loop = main_fn.body[5];
  CHECK(loop.kind == StmtKind::while_stmt);
  CHECK(loop.loop_init.empty());
  CHECK(loop.loop_step.empty());
  CHECK(loop.pos.line == 22);
  CHECK(loop.pos.column == 3);

  const Stmt &check = main_fn.body[6];
  CHECK(check.kind == StmtKind::assert_stmt);
  CHECK(check.origin_entry == -1);

  const Stmt &ret = main_fn.body[7];
  CHECK(ret.kind == StmtKind::return_stmt);
  REQUIRE(ret.expr != nullptr);

  std::set<int> ids;
  for (const Stmt &s : main_fn.body)
    ids.insert(s.id);
  CHECK(ids.size() == main_fn.body.size());
}

TEST_CASE("for loops desugar to while with init and step") {
  ProgramAst with_for = parse_ok(R"(int main() {
  int s = 0;
  int i;
  for (i = 0; i < 4; i = i + 1) {
    s = s + i;
  }
  assert(s == 6);
  return 0;
}
)");
  const Stmt &loop = with_for.functions[0].body[2];
  CHECK(loop.kind == StmtKind::while_stmt);
  CHECK(loop.pos.line == 4);
  CHECK(loop.pos.column == 3);
  REQUIRE(loop.loop_init.size() == 1);
  CHECK(loop.loop_init[0].kind == StmtKind::assign);
  REQUIRE(loop.loop_step.size() == 1);
  CHECK(loop.loop_step[0].kind == StmtKind::assign);
  CHECK(loop.body.size() == 1);

  ProgramAst with_while = parse_ok(R"(int main() {
  int s = 0;
  int i;
  i = 0;
  while (i < 4) {
    s = s + i;
    i = i + 1;
  }
  assert(s == 6);
  return 0;
}
)");
  CHECK(program_equal(with_for, with_while));

  ProgramAst different = parse_ok(R"(int main() {
  int s = 0;
  int i;
  i = 0;
  while (i < 4) {
    s = s + i;
    i = i + 2;
  }
  assert(s == 6);
  return 0;
}
)");
  CHECK(!program_equal(with_for, different));
}

TEST_CASE("for loop with empty init keeps the step") {
  ProgramAst p = parse_ok(R"(int main() {
  int i = 0;
  for (; i < 3; i = i + 1) {
    i = i;
  }
  return 0;
}
)");
  const Stmt &loop = p.functions[0].body[1];
  CHECK(loop.loop_init.empty());
  CHECK(loop.loop_step.size() == 1);
}

TEST_CASE("preprocessor lines are ignored") {
  ProgramAst p = parse_ok("#include <assert.h>\n#define N 4\nint main() {\n"
                          "  return 0;\n}\n");
  CHECK(p.functions.size() == 1);
  CHECK(p.functions[0].pos.line == 3);
}

TEST_CASE("emitted C reparses to an equal program") {
  const char *programs[] = {
      "product.c", "div.c",  "fact.c",        "countdown.c",
      "sum.c",     "max.c",  "abs.c",         "swap.c",
      "reset.c",   "nop.c",  "assert_fail.c", "fallthrough.c",
      "call_return.c", "param_reassign.c",
      "mutants/product.c", "mutants/div.c",
  };
  for (const char *name : programs) {
    CAPTURE(name);
    ProgramAst p = parse_ok(slurp(corpus(name)), name);
    std::string emitted = emit_c(p);
    ParsedProgram back = parse_program(emitted, name);
    REQUIRE(back.ok());
    CHECK(back.diagnostics.empty());
    CHECK(program_equal(p, *back.program));
  }
}

TEST_CASE("name resolution errors") {
  CHECK(parse_error("int main() {\n  x = 1;\n  return 0;\n}\n",
                    "use of undeclared identifier 'x'"));
  CHECK(parse_error("int main() {\n  int y = x + 1;\n  return 0;\n}\n",
                    "use of undeclared identifier 'x'"));
  CHECK(parse_error("int main() {\n  int x;\n  int x;\n  return 0;\n}\n",
                    "redeclaration of 'x'"));
  CHECK(parse_error("int g;\nint main() {\n  int g;\n  return 0;\n}\n",
                    "declaration of 'g' shadows a global variable"));
  CHECK(parse_error("int g;\nint f(int g) {\n  return g;\n}\n"
                    "int main() {\n  return 0;\n}\n",
                    "parameter 'g' shadows a global variable"));
  CHECK(parse_error("int main() {\n  int x = 1;\n  return 0;\n}\n"
                    "int main() {\n  return 0;\n}\n",
                    "redefinition of function 'main'"));
  CHECK(parse_error("int g;\nint g;\nint main() {\n  return 0;\n}\n",
                    "redeclaration of 'g'"));
}

TEST_CASE("use before declaration is an error even when C would hoist") {
  CHECK(parse_error("int main() {\n  y = 1;\n  int y;\n  return 0;\n}\n",
                    "use of undeclared identifier 'y'"));
}

TEST_CASE("return statements must match the return type") {
  CHECK(parse_error("void f() {\n  return 1;\n}\nint main() {\n  return 0;\n}\n",
                    "return with a value in function 'f' returning void"));
  CHECK(parse_error("int f() {\n  return;\n}\nint main() {\n  return 0;\n}\n",
                    "return without a value in function 'f' returning int"));
}

TEST_CASE("call checking") {
  CHECK(parse_error("int main() {\n  int x = f();\n  return 0;\n}\n",
                    "call to undefined function 'f'"));
  CHECK(parse_error("int f(int a) {\n  return a;\n}\n"
                    "int main() {\n  int x = f(1, 2);\n  return 0;\n}\n",
                    "call to 'f' with 2 arguments, expected 1"));
  CHECK(parse_error("void f() {\n}\nint main() {\n  int x = f();\n"
                    "  return 0;\n}\n",
                    "void value of 'f' used"));
  CHECK(parse_error("int main() {\n  int x = __VERIFIER_nondet_int(1);\n"
                    "  return 0;\n}\n",
                    "__VERIFIER_nondet_int takes no arguments"));
}

TEST_CASE("global initializers must be constant") {
  CHECK(parse_error("int g = g + 1;\nint main() {\n  return 0;\n}\n",
                    "global initializer must be a constant expression"));
  ProgramAst p = parse_ok("int g = -(2 + 3);\nint main() {\n  return 0;\n}\n");
  CHECK(p.globals[0].init != nullptr);
}

TEST_CASE("parse diagnostics carry program positions") {
  ParsedProgram p = parse_program("int main() {\n  x = 1;\n  return 0;\n}\n",
                                  "pos.c");
  REQUIRE(!p.ok());
  REQUIRE(!p.diagnostics.empty());
  CHECK(p.diagnostics[0].rule == "parse");
  CHECK(p.diagnostics[0].file == "pos.c");
  CHECK(p.diagnostics[0].line == 2);
  CHECK(p.diagnostics[0].column == 3);
}

TEST_CASE("locations resolve to the declared construct kind") {
  ProgramAst p = parse_ok(slurp(corpus("product.c")), "product.c");
  ProgramIndex index(p);

  Location contract;
  contract.file_name = "product.c";
  contract.line = 1;
  contract.column = 1;
  ResolvedLocation r1 =
      resolve_location(contract, index, EntryKind::function_contract);
  REQUIRE(r1.ok());
  CHECK(r1.point->kind == PointKind::function_entry);
  CHECK(r1.point->function == "product");
  CHECK(r1.point->stmt_id == -1);

  Location loop;
  loop.file_name = "product.c";
  loop.line = 4;
  loop.column = 3;
  ResolvedLocation r2 = resolve_location(loop, index, EntryKind::loop_invariant);
  REQUIRE(r2.ok());
  CHECK(r2.point->kind == PointKind::loop_head);
  const ProgramIndex::StmtRef *ref = index.stmt(r2.point->stmt_id);
  REQUIRE(ref != nullptr);
  CHECK(ref->stmt->kind == StmtKind::while_stmt);
  CHECK(ref->function->name == "product");

  ResolvedLocation r3 =
      resolve_location(loop, index, EntryKind::location_invariant);
  REQUIRE(r3.ok());
  CHECK(r3.point->kind == PointKind::before_statement);
  CHECK(r3.point->stmt_id == r2.point->stmt_id);
}

TEST_CASE("a missing column picks the first matching construct on the line") {
  ProgramAst p = parse_ok("int main() {\n  int a = 1; int b = 2;\n"
                          "  assert(a < b);\n  return 0;\n}\n",
                          "two.c");
  ProgramIndex index(p);
  Location loc;
  loc.file_name = "two.c";
  loc.line = 2;
  ResolvedLocation r =
      resolve_location(loc, index, EntryKind::location_invariant);
  REQUIRE(r.ok());
  const ProgramIndex::StmtRef *ref = index.stmt(r.point->stmt_id);
  CHECK(ref->stmt->name == "a");

  loc.column = 14;
  ResolvedLocation r2 =
      resolve_location(loc, index, EntryKind::location_invariant);
  REQUIRE(r2.ok());
  CHECK(index.stmt(r2.point->stmt_id)->stmt->name == "b");
}

TEST_CASE("loop invariants skip non-loop statements on the line") {
  ProgramAst p = parse_ok("int main() {\n  int i = 9; while (i > 0) { i = i - 1; }\n"
                          "  return 0;\n}\n",
                          "inline.c");
  ProgramIndex index(p);
  Location loc;
  loc.file_name = "inline.c";
  loc.line = 2;
  ResolvedLocation r = resolve_location(loc, index, EntryKind::loop_invariant);
  REQUIRE(r.ok());
  CHECK(index.stmt(r.point->stmt_id)->stmt->kind == StmtKind::while_stmt);
}

TEST_CASE("zero-based producers shift columns by one") {
  ProgramAst p = parse_ok(slurp(corpus("product.c")), "product.c");
  ProgramIndex index(p);
  Location loop;
  loop.file_name = "product.c";
  loop.line = 4;
  loop.column = 2;
  CHECK(!resolve_location(loop, index, EntryKind::loop_invariant).ok());
  ResolveOptions zero;
  zero.zero_based_columns = true;
  CHECK(resolve_location(loop, index, EntryKind::loop_invariant, zero).ok());
}

TEST_CASE("witness paths match the program by basename") {
  ProgramAst p = parse_ok(slurp(corpus("product.c")),
                          "tests/corpus/product.c");
  ProgramIndex index(p);
  Location loc;
  loc.file_name = "/builds/job7/product.c";
  loc.line = 4;
  loc.column = 3;
  CHECK(resolve_location(loc, index, EntryKind::loop_invariant).ok());

  loc.file_name = "other.c";
  ResolvedLocation r = resolve_location(loc, index, EntryKind::loop_invariant);
  REQUIRE(!r.ok());
  CHECK(r.diagnostics[0].message ==
        "file_name 'other.c' does not match the program under analysis "
        "('tests/corpus/product.c')");
}

TEST_CASE("resolve failures name what was looked for") {
  ProgramAst p = parse_ok(slurp(corpus("product.c")), "product.c");
  ProgramIndex index(p);

  Location loc;
  loc.file_name = "product.c";
  loc.line = 2;
  loc.column = 3;
  ResolvedLocation r1 = resolve_location(loc, index, EntryKind::loop_invariant);
  REQUIRE(!r1.ok());
  CHECK(r1.diagnostics[0].message ==
        "no loop statement starts at product.c:2:3");

  loc.column.reset();
  loc.line = 2;
  ResolvedLocation r2 = resolve_location(loc, index, EntryKind::loop_invariant);
  REQUIRE(!r2.ok());
  CHECK(r2.diagnostics[0].message ==
        "no loop statement on line 2 of product.c");

  loc.line = 99;
  ResolvedLocation r3 =
      resolve_location(loc, index, EntryKind::location_invariant);
  REQUIRE(!r3.ok());
  CHECK(r3.diagnostics[0].message == "no statement on line 99 of product.c");

  Location fnloc;
  fnloc.file_name = "product.c";
  fnloc.line = 4;
  ResolvedLocation r4 =
      resolve_location(fnloc, index, EntryKind::function_contract);
  REQUIRE(!r4.ok());
  CHECK(r4.diagnostics[0].message ==
        "no function definition on line 4 of product.c");
}

TEST_CASE("a function key must agree with the resolved construct") {
  ProgramAst p = parse_ok(slurp(corpus("product.c")), "product.c");
  ProgramIndex index(p);
  Location loc;
  loc.file_name = "product.c";
  loc.line = 4;
  loc.column = 3;
  loc.function = "main";
  ResolvedLocation r = resolve_location(loc, index, EntryKind::loop_invariant);
  REQUIRE(!r.ok());
  CHECK(r.diagnostics[0].message ==
        "location resolves to function 'product' but the entry names "
        "function 'main'");

  loc.function = "product";
  CHECK(resolve_location(loc, index, EntryKind::loop_invariant).ok());
}

TEST_CASE("return points cover returns and reachable body ends") {
  ProgramAst max_p = parse_ok(slurp(corpus("max.c")), "max.c");
  const Function *max2 = max_p.find_function("max2");
  REQUIRE(max2 != nullptr);
  std::vector<ProgramPoint> pts = enumerate_return_points(*max2);
  REQUIRE(pts.size() == 2);
  CHECK(pts[0].kind == PointKind::return_point);
  CHECK(pts[0].stmt_id >= 0);
  CHECK(pts[1].stmt_id >= 0);
  CHECK(pts[0].stmt_id != pts[1].stmt_id);
  CHECK(always_returns(max2->body));

  ProgramAst fall_p = parse_ok(slurp(corpus("fallthrough.c")), "fallthrough.c");
  const Function *mark = fall_p.find_function("mark");
  REQUIRE(mark != nullptr);
  std::vector<ProgramPoint> fall_pts = enumerate_return_points(*mark);
  REQUIRE(fall_pts.size() == 1);
  CHECK(fall_pts[0].stmt_id == -1);
  CHECK(!always_returns(mark->body));

  ProgramAst mixed = parse_ok(R"(int f(int x) {
  if (x > 0) {
    return 1;
  }
  x = 0;
}
int main() {
  return 0;
}
)");
  std::vector<ProgramPoint> mixed_pts =
      enumerate_return_points(mixed.functions[0]);
  REQUIRE(mixed_pts.size() == 2);
  CHECK(mixed_pts[0].stmt_id >= 0);
  CHECK(mixed_pts[1].stmt_id == -1);
  CHECK(!always_returns(mixed.functions[0].body));
}

TEST_CASE("statement index maps positions back to statements") {
  ProgramAst p = parse_ok(slurp(corpus("countdown.c")), "countdown.c");
  ProgramIndex index(p);
  const ProgramIndex::StmtRef *loop = index.stmt_at({6, 3});
  REQUIRE(loop != nullptr);
  CHECK(loop->stmt->kind == StmtKind::while_stmt);
  CHECK(index.stmt_at({6, 4}) == nullptr);
  const Function *main_fn = index.function_at({1, 1});
  REQUIRE(main_fn != nullptr);
  CHECK(main_fn->name == "main");
}
