#ifndef WIT_EXPR_HPP
#define WIT_EXPR_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wit/diagnostics.hpp"
#include "wit/lexer.hpp"

namespace wit {

enum class UnaryOp { neg, logical_not, bit_not };

enum class BinaryOp {
  mul,
  div,
  mod,
  add,
  sub,
  shl,
  shr,
  lt,
  le,
  gt,
  ge,
  eq,
  ne,
  bit_and,
  bit_xor,
  bit_or,
  logical_and,
  logical_or,
};

enum class ExprKind {
  int_lit,
  var_ref,
  unary,
  binary,
  conditional,
  old_of,      // \old(x), x a bare identifier
  at_pre,      // \at(x, Pre), x a bare identifier
  result_ref,  // \result
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Side-effect-free expression tree over C operators plus the ACSL nodes.
/// Nodes are immutable; subtrees may be shared.
struct Expr {
  ExprKind kind = ExprKind::int_lit;
  std::int64_t value = 0;   // int_lit (lexer yields non-negative values)
  std::string name;         // var_ref / old_of / at_pre
  UnaryOp unary_op = UnaryOp::neg;
  BinaryOp binary_op = BinaryOp::add;
  ExprPtr a, b, c;          // unary: a; binary: a,b; conditional: a ? b : c

  static ExprPtr lit(std::int64_t v);
  static ExprPtr var(std::string name);
  static ExprPtr unary(UnaryOp op, ExprPtr operand);
  static ExprPtr binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs);
  static ExprPtr conditional(ExprPtr cond, ExprPtr then_e, ExprPtr else_e);
  static ExprPtr old_of(std::string name);
  static ExprPtr at_pre(std::string name);
  static ExprPtr result_ref();
};

enum class ExprFormat { c_expression, acsl_expression };

/// Which clause an expression belongs to; decides which ACSL nodes are legal
/// and how plain variables are read during evaluation.
enum class ClauseContext { requires_clause, ensures_clause, invariant_clause };

const char *clause_context_name(ClauseContext c);

struct ParsedExpr {
  ExprPtr ast;
  DiagnosticList diagnostics;
  bool ok() const { return ast != nullptr; }
};

/// Parses one expression text. Diagnostics carry line 1 and the 1-based
/// column within the text. Rules: expr.syntax, expr.format (ACSL keyword with
/// c_expression), expr.context (keyword in a clause that does not allow it),
/// expr.at-label (label other than Pre).
ParsedExpr parse_expression(std::string_view text, ExprFormat format,
                            ClauseContext context);

/// Same grammar over an already-lexed token stream; consumes tokens starting
/// at pos and leaves pos on the first token after the expression. Used by the
/// program parser for conditions and right-hand sides.
ExprPtr parse_expression_tokens(const std::vector<Token> &tokens,
                                std::size_t &pos, ExprFormat format,
                                ClauseContext context,
                                DiagnosticList &diagnostics);

/// Emits text that reparses to a structurally equal tree; minimal parentheses.
std::string print_expression(const Expr &e);

bool expr_equal(const Expr &lhs, const Expr &rhs);
inline bool expr_equal(const ExprPtr &lhs, const ExprPtr &rhs) {
  if (!lhs || !rhs)
    return !lhs && !rhs;
  return expr_equal(*lhs, *rhs);
}

enum class VarKind { current, pre, result };

/// Free variables with their binding kind; \result appears as ("", result).
std::set<std::pair<std::string, VarKind>> free_variables(const Expr &e);

bool contains_result_ref(const Expr &e);
bool contains_old_of(const Expr &e);
bool contains_at_pre(const Expr &e);

/// Variable bindings for one evaluation. pre holds the function-entry
/// snapshot of globals and parameters; parameters lists the enclosing
/// activation's parameter names (in an ensures clause they read from pre).
struct EvalEnv {
  const std::map<std::string, std::int32_t> *current = nullptr;
  // consulted when a name is absent from current (locals over globals)
  const std::map<std::string, std::int32_t> *current_fallback = nullptr;
  const std::map<std::string, std::int32_t> *pre = nullptr;
  const std::set<std::string> *parameters = nullptr;
  std::optional<std::int32_t> result;
};

struct EvalResult {
  bool ok = true;
  std::int32_t value = 0;
  std::string fault;

  static EvalResult of(std::int32_t v) { return {true, v, {}}; }
  static EvalResult faulted(std::string why) {
    return {false, 0, std::move(why)};
  }
};

/// C-style evaluation over 32-bit two's-complement integers with wraparound.
/// Logical operators yield 0/1 and short-circuit; ?: evaluates one branch.
/// Division/modulo by zero and unbound variables are faults, never 0.
EvalResult evaluate(const Expr &e, const EvalEnv &env, ClauseContext context);

/// Substitutes nodes: \result -> result_subst, \old(x)/\at(x, Pre) ->
/// pre_subst[x], and (when substitute_parameters) a current-kind variable
/// that is in parameters -> pre_subst[x]. Missing map entries leave the node
/// unchanged. Used by the instrumenter.
struct ExprSubstitution {
  ExprPtr result_subst;
  std::map<std::string, ExprPtr> pre_subst;
  const std::set<std::string> *parameters = nullptr;
  bool substitute_parameters = false;
};

ExprPtr substitute(const ExprPtr &e, const ExprSubstitution &subst);

} // namespace wit

#endif
