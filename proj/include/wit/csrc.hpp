#ifndef WIT_CSRC_HPP
#define WIT_CSRC_HPP

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wit/diagnostics.hpp"
#include "wit/expr.hpp"
#include "wit/witness_model.hpp"

namespace wit {

struct SourcePos {
  int line = 0;
  int column = 0;

  friend bool operator==(const SourcePos &, const SourcePos &) = default;
  friend auto operator<=>(const SourcePos &, const SourcePos &) = default;
};

/// A direct call; the subset allows calls only as the entire right-hand side
/// of a declaration/assignment, a return value, or an expression statement.
struct CallExpr {
  std::string callee;
  std::vector<ExprPtr> args;
  SourcePos pos;
};

enum class StmtKind {
  decl,        // int x; / int x = e; / int x = f(...);
  assign,      // x = e; / x = f(...);
  if_stmt,     // expr = condition, body / else_body
  while_stmt,  // expr = condition; loop_init/loop_step hold desugared for parts
  return_stmt, // expr/call optional
  expr_stmt,   // e; or f(...); evaluated for effect (calls) only
  assert_stmt, // assert(e);
};

/// Statement node. `for` loops are kept as while_stmt with loop_init run once
/// before the loop and loop_step run after the body on every iteration; the
/// node's pos is the loop keyword so witness locations written against the
/// `for` still resolve.
struct Stmt {
  StmtKind kind = StmtKind::expr_stmt;
  SourcePos pos;
  int id = 0; // unique per program, assigned by the parser

  std::string name;              // decl/assign target
  ExprPtr expr;                  // init / rhs / condition / return value / assert arg
  std::optional<CallExpr> call;  // call rhs (decl, assign, return, expr_stmt)

  std::vector<Stmt> body;      // if then-branch / while body
  std::vector<Stmt> else_body; // if else-branch
  std::vector<Stmt> loop_init; // desugared for: 0 or 1 statements
  std::vector<Stmt> loop_step; // desugared for: 0 or 1 statements

  // set on asserts inserted by the instrumenter; -1 = the program's own
  int origin_entry = -1;
  ClauseContext origin_clause = ClauseContext::invariant_clause;
};

struct Param {
  std::string name;
  SourcePos pos;
};

struct Function {
  std::string name;
  bool returns_int = true; // false: void
  std::vector<Param> params;
  std::vector<Stmt> body;
  SourcePos pos; // first character of the definition (the return type)
};

struct Global {
  std::string name;
  ExprPtr init; // constant expression; null means 0
  SourcePos pos;
};

struct Prototype {
  std::string name;
  bool returns_int = true;
};

struct ProgramAst {
  std::string file_name;
  std::vector<Global> globals;
  std::vector<Function> functions;
  std::vector<Prototype> prototypes; // declarations only; not compared

  const Function *find_function(std::string_view name) const;
};

struct ParsedProgram {
  std::optional<ProgramAst> program;
  DiagnosticList diagnostics;
  bool ok() const { return program.has_value(); }
};

/// Parses the C subset: int/void functions, int globals with constant
/// initializers, locals, assignment, if/else, while, for, return, assert(e),
/// expression statements, direct calls, __VERIFIER_nondet_int(). Lines
/// starting with # are ignored. Static name resolution is enforced:
/// no redeclaration within a function, no shadowing of globals or parameters,
/// and every use textually after a declaration, so function-wide flat scoping
/// coincides with C block scoping on programs that are also valid C.
ParsedProgram parse_program(std::string_view source_text,
                            std::string file_name);

enum class PointKind { function_entry, loop_head, before_statement, return_point };

struct ProgramPoint {
  PointKind kind = PointKind::before_statement;
  std::string function; // enclosing (or contracted) function
  int stmt_id = -1;     // -1: body-end return point / function entry

  friend bool operator==(const ProgramPoint &, const ProgramPoint &) = default;
};

/// Position index over a parsed program: function definitions, loops, and
/// statements by the source position of their first character.
struct ProgramIndex {
  struct StmtRef {
    const Stmt *stmt = nullptr;
    const Function *function = nullptr;
  };

  explicit ProgramIndex(const ProgramAst &p);

  const ProgramAst *program;
  std::map<SourcePos, const Function *> function_by_pos;
  std::map<SourcePos, StmtRef> stmt_by_pos;
  std::map<int, StmtRef> stmt_by_id;

  const Function *function_at(SourcePos pos) const;
  const StmtRef *stmt_at(SourcePos pos) const;
  const StmtRef *stmt(int id) const;
};

struct ResolveOptions {
  bool zero_based_columns = false; // producers counting columns from 0
};

struct ResolvedLocation {
  std::optional<ProgramPoint> point;
  DiagnosticList diagnostics; // rule "resolve", positions in the program file
  bool ok() const { return point.has_value(); }
};

/// Maps a witness location onto the program per the format's location rules:
/// function_contract locations name the first character of a function
/// definition, loop_invariant locations the first character of a loop
/// statement, location_invariant locations the first character of any
/// statement; a missing column selects the first matching construct on the
/// line; a `function` key must agree with the resolved function.
ResolvedLocation resolve_location(const Location &loc, const ProgramIndex &index,
                                  EntryKind kind,
                                  const ResolveOptions &options = {});

/// All return statements of f plus the body-end point when the body can fall
/// off the end (stmt_id -1).
std::vector<ProgramPoint> enumerate_return_points(const Function &f);

/// True when every path through the statement list ends in a return.
bool always_returns(const std::vector<Stmt> &body);

/// Structural equality ignoring positions, ids, and for/while sugar
/// (loop_init is compared as if hoisted before the loop, loop_step as if
/// appended to the loop body).
bool program_equal(const ProgramAst &a, const ProgramAst &b);

/// Renumbers statement ids to be unique and dense; used after instrumentation.
void renumber_statements(ProgramAst &p);

} // namespace wit

#endif
