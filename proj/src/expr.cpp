#include "wit/expr.hpp"

#include <array>
#include <cassert>
#include <sstream>

namespace wit {

ExprPtr Expr::lit(std::int64_t v) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::int_lit;
  e->value = v;
  return e;
}

ExprPtr Expr::var(std::string name) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::var_ref;
  e->name = std::move(name);
  return e;
}

ExprPtr Expr::unary(UnaryOp op, ExprPtr operand) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::unary;
  e->unary_op = op;
  e->a = std::move(operand);
  return e;
}

ExprPtr Expr::binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::binary;
  e->binary_op = op;
  e->a = std::move(lhs);
  e->b = std::move(rhs);
  return e;
}

ExprPtr Expr::conditional(ExprPtr cond, ExprPtr then_e, ExprPtr else_e) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::conditional;
  e->a = std::move(cond);
  e->b = std::move(then_e);
  e->c = std::move(else_e);
  return e;
}

ExprPtr Expr::old_of(std::string name) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::old_of;
  e->name = std::move(name);
  return e;
}

ExprPtr Expr::at_pre(std::string name) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::at_pre;
  e->name = std::move(name);
  return e;
}

ExprPtr Expr::result_ref() {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::result_ref;
  return e;
}

const char *clause_context_name(ClauseContext c) {
  switch (c) {
  case ClauseContext::requires_clause: return "requires";
  case ClauseContext::ensures_clause: return "ensures";
  case ClauseContext::invariant_clause: return "invariant";
  }
  return "?";
}

namespace {

// Binary operator precedence, C levels. Higher binds tighter.
int binop_prec(BinaryOp op) {
  switch (op) {
  case BinaryOp::mul:
  case BinaryOp::div:
  case BinaryOp::mod: return 10;
  case BinaryOp::add:
  case BinaryOp::sub: return 9;
  case BinaryOp::shl:
  case BinaryOp::shr: return 8;
  case BinaryOp::lt:
  case BinaryOp::le:
  case BinaryOp::gt:
  case BinaryOp::ge: return 7;
  case BinaryOp::eq:
  case BinaryOp::ne: return 6;
  case BinaryOp::bit_and: return 5;
  case BinaryOp::bit_xor: return 4;
  case BinaryOp::bit_or: return 3;
  case BinaryOp::logical_and: return 2;
  case BinaryOp::logical_or: return 1;
  }
  return 0;
}

const char *binop_text(BinaryOp op) {
  switch (op) {
  case BinaryOp::mul: return "*";
  case BinaryOp::div: return "/";
  case BinaryOp::mod: return "%";
  case BinaryOp::add: return "+";
  case BinaryOp::sub: return "-";
  case BinaryOp::shl: return "<<";
  case BinaryOp::shr: return ">>";
  case BinaryOp::lt: return "<";
  case BinaryOp::le: return "<=";
  case BinaryOp::gt: return ">";
  case BinaryOp::ge: return ">=";
  case BinaryOp::eq: return "==";
  case BinaryOp::ne: return "!=";
  case BinaryOp::bit_and: return "&";
  case BinaryOp::bit_xor: return "^";
  case BinaryOp::bit_or: return "|";
  case BinaryOp::logical_and: return "&&";
  case BinaryOp::logical_or: return "||";
  }
  return "?";
}

std::optional<BinaryOp> token_binop(Tok t) {
  switch (t) {
  case Tok::star: return BinaryOp::mul;
  case Tok::slash: return BinaryOp::div;
  case Tok::percent: return BinaryOp::mod;
  case Tok::plus: return BinaryOp::add;
  case Tok::minus: return BinaryOp::sub;
  case Tok::shl: return BinaryOp::shl;
  case Tok::shr: return BinaryOp::shr;
  case Tok::lt: return BinaryOp::lt;
  case Tok::le: return BinaryOp::le;
  case Tok::gt: return BinaryOp::gt;
  case Tok::ge: return BinaryOp::ge;
  case Tok::eq_eq: return BinaryOp::eq;
  case Tok::ne: return BinaryOp::ne;
  case Tok::amp: return BinaryOp::bit_and;
  case Tok::caret: return BinaryOp::bit_xor;
  case Tok::pipe: return BinaryOp::bit_or;
  case Tok::amp_amp: return BinaryOp::logical_and;
  case Tok::pipe_pipe: return BinaryOp::logical_or;
  default: return std::nullopt;
  }
}

class ExprParser {
public:
  ExprParser(const std::vector<Token> &tokens, std::size_t &pos,
             ExprFormat format, ClauseContext context, DiagnosticList &diags)
      : tokens_(tokens), pos_(pos), format_(format), context_(context),
        diags_(diags) {}

  ExprPtr parse() { return parse_conditional(); }

  bool failed() const { return failed_; }

private:
  const Token &peek() const { return tokens_[pos_]; }

  Token take() { return tokens_[pos_++]; }

  ExprPtr fail(const std::string &rule, const std::string &message) {
    if (!failed_) {
      Diagnostic d;
      d.severity = Severity::error;
      d.rule = rule;
      d.message = message;
      d.line = peek().line;
      d.column = peek().column;
      diags_.push_back(std::move(d));
      failed_ = true;
    }
    return nullptr;
  }

  ExprPtr syntax_error(const std::string &message) {
    return fail("expr.syntax", message);
  }

  ExprPtr parse_conditional() {
    ExprPtr cond = parse_binary(1);
    if (!cond)
      return nullptr;
    if (peek().kind != Tok::question)
      return cond;
    take();
    ExprPtr then_e = parse_conditional();
    if (!then_e)
      return nullptr;
    if (peek().kind != Tok::colon)
      return syntax_error("expected ':' in conditional expression");
    take();
    ExprPtr else_e = parse_conditional();
    if (!else_e)
      return nullptr;
    return Expr::conditional(std::move(cond), std::move(then_e),
                             std::move(else_e));
  }

  // Precedence climbing over the binary operator table.
  ExprPtr parse_binary(int min_prec) {
    ExprPtr lhs = parse_unary();
    if (!lhs)
      return nullptr;
    for (;;) {
      auto op = token_binop(peek().kind);
      if (!op || binop_prec(*op) < min_prec)
        return lhs;
      take();
      ExprPtr rhs = parse_binary(binop_prec(*op) + 1);
      if (!rhs)
        return nullptr;
      lhs = Expr::binary(*op, std::move(lhs), std::move(rhs));
    }
  }

  ExprPtr parse_unary() {
    switch (peek().kind) {
    case Tok::minus:
      take();
      if (auto e = parse_unary())
        return Expr::unary(UnaryOp::neg, std::move(e));
      return nullptr;
    case Tok::bang:
      take();
      if (auto e = parse_unary())
        return Expr::unary(UnaryOp::logical_not, std::move(e));
      return nullptr;
    case Tok::tilde:
      take();
      if (auto e = parse_unary())
        return Expr::unary(UnaryOp::bit_not, std::move(e));
      return nullptr;
    default:
      return parse_primary();
    }
  }

  ExprPtr require_acsl(const char *keyword) {
    if (format_ != ExprFormat::acsl_expression)
      return fail("expr.format", std::string(keyword) +
                                     " used with format c_expression");
    return Expr::lit(0); // non-null marker
  }

  ExprPtr parse_primary() {
    const Token &t = peek();
    switch (t.kind) {
    case Tok::int_lit: {
      Token lit = take();
      return Expr::lit(lit.value);
    }
    case Tok::ident: {
      Token id = take();
      return Expr::var(id.text);
    }
    case Tok::lparen: {
      take();
      ExprPtr inner = parse_conditional();
      if (!inner)
        return nullptr;
      if (peek().kind != Tok::rparen)
        return syntax_error("expected ')'");
      take();
      return inner;
    }
    case Tok::acsl_result: {
      if (!require_acsl("\\result"))
        return nullptr;
      if (context_ != ClauseContext::ensures_clause)
        return fail("expr.context",
                    "\\result not allowed in " +
                        std::string(clause_context_name(context_)));
      take();
      return Expr::result_ref();
    }
    case Tok::acsl_old: {
      if (!require_acsl("\\old"))
        return nullptr;
      if (context_ != ClauseContext::ensures_clause)
        return fail("expr.context",
                    "\\old not allowed in " +
                        std::string(clause_context_name(context_)));
      take();
      return parse_wrapped_identifier(false);
    }
    case Tok::acsl_at: {
      if (!require_acsl("\\at"))
        return nullptr;
      if (context_ != ClauseContext::invariant_clause)
        return fail("expr.context",
                    "\\at(_, Pre) not allowed in " +
                        std::string(clause_context_name(context_)));
      take();
      return parse_wrapped_identifier(true);
    }
    case Tok::bad:
      return syntax_error("unexpected character '" + t.text + "'");
    case Tok::unsupported:
      return syntax_error("token outside the expression subset: " + t.text);
    default:
      return syntax_error(std::string("expected an expression, found ") +
                          token_kind_name(t.kind));
    }
  }

  // \old(x) and \at(x, Pre) wrap a bare identifier only.
  ExprPtr parse_wrapped_identifier(bool with_label) {
    const char *kw = with_label ? "\\at" : "\\old";
    if (peek().kind != Tok::lparen)
      return syntax_error(std::string("expected '(' after ") + kw);
    take();
    if (peek().kind != Tok::ident)
      return syntax_error(std::string(kw) +
                          " takes a bare variable name, not an expression");
    Token id = take();
    if (with_label) {
      if (peek().kind != Tok::comma)
        return syntax_error("expected ',' after variable in \\at");
      take();
      if (peek().kind != Tok::ident || peek().text != "Pre") {
        std::string label =
            peek().kind == Tok::ident ? peek().text : peek().text;
        return fail("expr.at-label",
                    "only the label Pre is allowed in \\at, found '" + label +
                        "'");
      }
      take();
    }
    if (peek().kind != Tok::rparen)
      return syntax_error(with_label
                              ? "\\at takes a bare variable name, not an expression"
                              : "\\old takes a bare variable name, not an expression");
    take();
    return with_label ? Expr::at_pre(id.text) : Expr::old_of(id.text);
  }

  const std::vector<Token> &tokens_;
  std::size_t &pos_;
  ExprFormat format_;
  ClauseContext context_;
  DiagnosticList &diags_;
  bool failed_ = false;
};

} // namespace

ExprPtr parse_expression_tokens(const std::vector<Token> &tokens,
                                std::size_t &pos, ExprFormat format,
                                ClauseContext context,
                                DiagnosticList &diagnostics) {
  ExprParser parser(tokens, pos, format, context, diagnostics);
  return parser.parse();
}

ParsedExpr parse_expression(std::string_view text, ExprFormat format,
                            ClauseContext context) {
  ParsedExpr result;
  std::vector<Token> tokens = lex(text);
  std::size_t pos = 0;
  ExprPtr ast =
      parse_expression_tokens(tokens, pos, format, context, result.diagnostics);
  if (ast && tokens[pos].kind != Tok::eof) {
    Diagnostic d;
    d.severity = Severity::error;
    d.rule = "expr.syntax";
    d.message = std::string("unexpected ") + token_kind_name(tokens[pos].kind) +
                " after expression";
    d.line = tokens[pos].line;
    d.column = tokens[pos].column;
    result.diagnostics.push_back(std::move(d));
    ast = nullptr;
  }
  if (!ast && result.diagnostics.empty()) {
    Diagnostic d;
    d.severity = Severity::error;
    d.rule = "expr.syntax";
    d.message = "empty expression";
    d.line = 1;
    d.column = 1;
    result.diagnostics.push_back(std::move(d));
  }
  result.ast = std::move(ast);
  return result;
}

namespace {

// Node precedence for printing; literals and names are atoms.
int node_prec(const Expr &e) {
  switch (e.kind) {
  case ExprKind::conditional: return 0;
  case ExprKind::binary: return binop_prec(e.binary_op);
  case ExprKind::unary: return 11;
  default: return 12;
  }
}

void print_node(const Expr &e, std::ostream &out);

void print_child(const Expr &child, int parent_prec, bool parens_on_equal,
                 std::ostream &out) {
  int prec = node_prec(child);
  bool parens = prec < parent_prec || (parens_on_equal && prec == parent_prec);
  if (parens)
    out << '(';
  print_node(child, out);
  if (parens)
    out << ')';
}

void print_node(const Expr &e, std::ostream &out) {
  switch (e.kind) {
  case ExprKind::int_lit:
    out << e.value;
    return;
  case ExprKind::var_ref:
    out << e.name;
    return;
  case ExprKind::result_ref:
    out << "\\result";
    return;
  case ExprKind::old_of:
    out << "\\old(" << e.name << ")";
    return;
  case ExprKind::at_pre:
    out << "\\at(" << e.name << ", Pre)";
    return;
  case ExprKind::unary: {
    const char *op = e.unary_op == UnaryOp::neg            ? "-"
                     : e.unary_op == UnaryOp::logical_not  ? "!"
                                                           : "~";
    out << op;
    // "-(-x)" keeps the C text unambiguous (no "--" token sequence).
    bool force = e.unary_op == UnaryOp::neg &&
                 e.a->kind == ExprKind::unary &&
                 e.a->unary_op == UnaryOp::neg;
    if (force) {
      out << '(';
      print_node(*e.a, out);
      out << ')';
    } else {
      print_child(*e.a, node_prec(e), false, out);
    }
    return;
  }
  case ExprKind::binary: {
    int prec = node_prec(e);
    print_child(*e.a, prec, false, out);
    out << ' ' << binop_text(e.binary_op) << ' ';
    print_child(*e.b, prec, true, out);
    return;
  }
  case ExprKind::conditional:
    // cond must not itself be a bare conditional; branches associate right.
    print_child(*e.a, 1, false, out);
    out << " ? ";
    print_child(*e.b, 0, false, out);
    out << " : ";
    print_child(*e.c, 0, false, out);
    return;
  }
}

} // namespace

std::string print_expression(const Expr &e) {
  std::ostringstream out;
  print_node(e, out);
  return out.str();
}

bool expr_equal(const Expr &lhs, const Expr &rhs) {
  if (lhs.kind != rhs.kind)
    return false;
  switch (lhs.kind) {
  case ExprKind::int_lit: return lhs.value == rhs.value;
  case ExprKind::var_ref:
  case ExprKind::old_of:
  case ExprKind::at_pre: return lhs.name == rhs.name;
  case ExprKind::result_ref: return true;
  case ExprKind::unary:
    return lhs.unary_op == rhs.unary_op && expr_equal(*lhs.a, *rhs.a);
  case ExprKind::binary:
    return lhs.binary_op == rhs.binary_op && expr_equal(*lhs.a, *rhs.a) &&
           expr_equal(*lhs.b, *rhs.b);
  case ExprKind::conditional:
    return expr_equal(*lhs.a, *rhs.a) && expr_equal(*lhs.b, *rhs.b) &&
           expr_equal(*lhs.c, *rhs.c);
  }
  return false;
}

namespace {

void collect_free(const Expr &e,
                  std::set<std::pair<std::string, VarKind>> &out) {
  switch (e.kind) {
  case ExprKind::int_lit:
    return;
  case ExprKind::var_ref:
    out.emplace(e.name, VarKind::current);
    return;
  case ExprKind::old_of:
  case ExprKind::at_pre:
    out.emplace(e.name, VarKind::pre);
    return;
  case ExprKind::result_ref:
    out.emplace(std::string(), VarKind::result);
    return;
  case ExprKind::unary:
    collect_free(*e.a, out);
    return;
  case ExprKind::binary:
    collect_free(*e.a, out);
    collect_free(*e.b, out);
    return;
  case ExprKind::conditional:
    collect_free(*e.a, out);
    collect_free(*e.b, out);
    collect_free(*e.c, out);
    return;
  }
}

bool contains_kind(const Expr &e, ExprKind kind) {
  if (e.kind == kind)
    return true;
  if (e.a && contains_kind(*e.a, kind))
    return true;
  if (e.b && contains_kind(*e.b, kind))
    return true;
  if (e.c && contains_kind(*e.c, kind))
    return true;
  return false;
}

} // namespace

std::set<std::pair<std::string, VarKind>> free_variables(const Expr &e) {
  std::set<std::pair<std::string, VarKind>> out;
  collect_free(e, out);
  return out;
}

bool contains_result_ref(const Expr &e) {
  return contains_kind(e, ExprKind::result_ref);
}

bool contains_old_of(const Expr &e) { return contains_kind(e, ExprKind::old_of); }

bool contains_at_pre(const Expr &e) { return contains_kind(e, ExprKind::at_pre); }

namespace {

std::int32_t wrap32(std::int64_t v) {
  return static_cast<std::int32_t>(static_cast<std::uint64_t>(v));
}

EvalResult lookup(const std::map<std::string, std::int32_t> *table,
                  const std::string &name, const char *which) {
  if (table) {
    auto it = table->find(name);
    if (it != table->end())
      return EvalResult::of(it->second);
  }
  return EvalResult::faulted("variable '" + name + "' is not bound in the " +
                             which + " environment");
}

EvalResult apply_binary(BinaryOp op, std::int32_t a, std::int32_t b) {
  std::uint32_t ua = static_cast<std::uint32_t>(a);
  std::uint32_t ub = static_cast<std::uint32_t>(b);
  switch (op) {
  case BinaryOp::mul:
    return EvalResult::of(static_cast<std::int32_t>(ua * ub));
  case BinaryOp::div:
    if (b == 0)
      return EvalResult::faulted("division by zero");
    if (a == INT32_MIN && b == -1)
      return EvalResult::of(INT32_MIN); // wraparound quotient
    return EvalResult::of(a / b);
  case BinaryOp::mod:
    if (b == 0)
      return EvalResult::faulted("modulo by zero");
    if (a == INT32_MIN && b == -1)
      return EvalResult::of(0);
    return EvalResult::of(a % b);
  case BinaryOp::add:
    return EvalResult::of(static_cast<std::int32_t>(ua + ub));
  case BinaryOp::sub:
    return EvalResult::of(static_cast<std::int32_t>(ua - ub));
  case BinaryOp::shl:
    return EvalResult::of(static_cast<std::int32_t>(ua << (ub & 31u)));
  case BinaryOp::shr:
    return EvalResult::of(a >> (ub & 31u)); // arithmetic shift
  case BinaryOp::lt: return EvalResult::of(a < b ? 1 : 0);
  case BinaryOp::le: return EvalResult::of(a <= b ? 1 : 0);
  case BinaryOp::gt: return EvalResult::of(a > b ? 1 : 0);
  case BinaryOp::ge: return EvalResult::of(a >= b ? 1 : 0);
  case BinaryOp::eq: return EvalResult::of(a == b ? 1 : 0);
  case BinaryOp::ne: return EvalResult::of(a != b ? 1 : 0);
  case BinaryOp::bit_and: return EvalResult::of(a & b);
  case BinaryOp::bit_xor: return EvalResult::of(a ^ b);
  case BinaryOp::bit_or: return EvalResult::of(a | b);
  case BinaryOp::logical_and:
  case BinaryOp::logical_or:
    assert(false && "short-circuit ops handled by caller");
    return EvalResult::of(0);
  }
  return EvalResult::faulted("unknown operator");
}

} // namespace

EvalResult evaluate(const Expr &e, const EvalEnv &env, ClauseContext context) {
  switch (e.kind) {
  case ExprKind::int_lit:
    return EvalResult::of(wrap32(e.value));
  case ExprKind::var_ref:
    // In an ensures clause a parameter reads its pre-call value.
    if (context == ClauseContext::ensures_clause && env.parameters &&
        env.parameters->count(e.name))
      return lookup(env.pre, e.name, "pre-state");
    if (env.current) {
      auto it = env.current->find(e.name);
      if (it != env.current->end())
        return EvalResult::of(it->second);
    }
    return lookup(env.current_fallback, e.name, "current");
  case ExprKind::old_of:
  case ExprKind::at_pre:
    return lookup(env.pre, e.name, "pre-state");
  case ExprKind::result_ref:
    if (!env.result)
      return EvalResult::faulted("\\result is not bound at this point");
    return EvalResult::of(*env.result);
  case ExprKind::unary: {
    EvalResult v = evaluate(*e.a, env, context);
    if (!v.ok)
      return v;
    switch (e.unary_op) {
    case UnaryOp::neg:
      return EvalResult::of(
          static_cast<std::int32_t>(0u - static_cast<std::uint32_t>(v.value)));
    case UnaryOp::logical_not:
      return EvalResult::of(v.value == 0 ? 1 : 0);
    case UnaryOp::bit_not:
      return EvalResult::of(~v.value);
    }
    return EvalResult::faulted("unknown unary operator");
  }
  case ExprKind::binary: {
    if (e.binary_op == BinaryOp::logical_and ||
        e.binary_op == BinaryOp::logical_or) {
      EvalResult lhs = evaluate(*e.a, env, context);
      if (!lhs.ok)
        return lhs;
      bool lhs_true = lhs.value != 0;
      if (e.binary_op == BinaryOp::logical_and && !lhs_true)
        return EvalResult::of(0);
      if (e.binary_op == BinaryOp::logical_or && lhs_true)
        return EvalResult::of(1);
      EvalResult rhs = evaluate(*e.b, env, context);
      if (!rhs.ok)
        return rhs;
      return EvalResult::of(rhs.value != 0 ? 1 : 0);
    }
    EvalResult lhs = evaluate(*e.a, env, context);
    if (!lhs.ok)
      return lhs;
    EvalResult rhs = evaluate(*e.b, env, context);
    if (!rhs.ok)
      return rhs;
    return apply_binary(e.binary_op, lhs.value, rhs.value);
  }
  case ExprKind::conditional: {
    EvalResult cond = evaluate(*e.a, env, context);
    if (!cond.ok)
      return cond;
    return evaluate(cond.value != 0 ? *e.b : *e.c, env, context);
  }
  }
  return EvalResult::faulted("unknown expression node");
}

ExprPtr substitute(const ExprPtr &e, const ExprSubstitution &subst) {
  if (!e)
    return e;
  switch (e->kind) {
  case ExprKind::int_lit:
    return e;
  case ExprKind::var_ref:
    if (subst.substitute_parameters && subst.parameters &&
        subst.parameters->count(e->name)) {
      auto it = subst.pre_subst.find(e->name);
      if (it != subst.pre_subst.end())
        return it->second;
    }
    return e;
  case ExprKind::old_of:
  case ExprKind::at_pre: {
    auto it = subst.pre_subst.find(e->name);
    if (it != subst.pre_subst.end())
      return it->second;
    return e;
  }
  case ExprKind::result_ref:
    return subst.result_subst ? subst.result_subst : e;
  case ExprKind::unary: {
    ExprPtr a = substitute(e->a, subst);
    if (a == e->a)
      return e;
    return Expr::unary(e->unary_op, std::move(a));
  }
  case ExprKind::binary: {
    ExprPtr a = substitute(e->a, subst);
    ExprPtr b = substitute(e->b, subst);
    if (a == e->a && b == e->b)
      return e;
    return Expr::binary(e->binary_op, std::move(a), std::move(b));
  }
  case ExprKind::conditional: {
    ExprPtr a = substitute(e->a, subst);
    ExprPtr b = substitute(e->b, subst);
    ExprPtr c = substitute(e->c, subst);
    if (a == e->a && b == e->b && c == e->c)
      return e;
    return Expr::conditional(std::move(a), std::move(b), std::move(c));
  }
  }
  return e;
}

} // namespace wit
