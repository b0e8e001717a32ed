#include "wit/csrc.hpp"

#include <algorithm>
#include <set>

#include "wit/lexer.hpp"

namespace wit {

const Function *ProgramAst::find_function(std::string_view name) const {
  for (const Function &f : functions)
    if (f.name == name)
      return &f;
  return nullptr;
}

namespace {

std::string basename_of(std::string_view path) {
  auto slash = path.find_last_of('/');
  if (slash == std::string_view::npos)
    return std::string(path);
  return std::string(path.substr(slash + 1));
}

struct ProgramParser {
  std::vector<Token> toks;
  std::string file;
  DiagnosticList diags;
  ProgramAst ast;
  std::size_t pos = 0;
  int next_id = 1;
  bool failed = false;

  std::set<std::string> global_names;
  std::set<std::string> defined_functions;

  // per-function state
  const char *fn_name = "";
  bool fn_returns_int = true;
  std::set<std::string> declared; // params + locals seen so far, flat

  const Token &cur() const { return toks[pos]; }
  const Token &peek(std::size_t k) const {
    return toks[std::min(pos + k, toks.size() - 1)];
  }
  bool at(Tok t) const { return cur().kind == t; }

  void error_at(const Token &t, std::string msg) {
    if (!failed)
      diags.push_back(Diagnostic{Severity::error, "parse", std::move(msg),
                                 file, t.line, t.column});
    failed = true;
  }

  void error_here(std::string msg) { error_at(cur(), std::move(msg)); }

  std::string describe(const Token &t) {
    switch (t.kind) {
    case Tok::eof:
      return "end of file";
    case Tok::int_lit:
    case Tok::ident:
    case Tok::bad:
    case Tok::unsupported:
      return "'" + t.text + "'";
    default:
      return std::string("'") + token_kind_name(t.kind) + "'";
    }
  }

  // Reports out-of-subset tokens with their spelling before generic errors.
  bool reject_unsupported() {
    if (at(Tok::unsupported)) {
      error_here("unsupported construct: " + cur().text);
      return true;
    }
    if (at(Tok::bad)) {
      error_here("unexpected character " + describe(cur()));
      return true;
    }
    return false;
  }

  bool expect(Tok t, const char *what) {
    if (failed)
      return false;
    if (at(t)) {
      ++pos;
      return true;
    }
    if (t == Tok::semicolon && at(Tok::lparen)) {
      error_here("function calls are not allowed inside expressions");
      return false;
    }
    if (!reject_unsupported())
      error_here(std::string("expected ") + what + " but found " +
                 describe(cur()));
    return false;
  }

  bool accept(Tok t) {
    if (!failed && at(t)) {
      ++pos;
      return true;
    }
    return false;
  }

  SourcePos here() const { return {cur().line, cur().column}; }

  ExprPtr parse_expr() {
    if (failed)
      return nullptr;
    if (reject_unsupported())
      return nullptr;
    std::size_t before = diags.size();
    Token start = cur();
    ExprPtr e = parse_expression_tokens(toks, pos, ExprFormat::c_expression,
                                        ClauseContext::invariant_clause, diags);
    for (std::size_t i = before; i < diags.size(); ++i)
      diags[i].file = file;
    if (!e) {
      failed = true;
      return nullptr;
    }
    check_uses(*e, start);
    return e;
  }

  void check_uses(const Expr &e, const Token &where) {
    if (failed)
      return;
    for (const auto &[name, kind] : free_variables(e)) {
      if (kind != VarKind::current)
        continue; // ACSL nodes are rejected by the expression parser already
      if (!declared.count(name) && !global_names.count(name))
        error_at(where, "use of undeclared identifier '" + name + "'");
    }
  }

  CallExpr parse_call() {
    CallExpr call;
    call.pos = here();
    call.callee = cur().text;
    ++pos; // ident
    expect(Tok::lparen, "'('");
    if (!at(Tok::rparen)) {
      do {
        ExprPtr arg = parse_expr();
        if (!arg)
          return call;
        call.args.push_back(std::move(arg));
      } while (accept(Tok::comma));
    }
    expect(Tok::rparen, "')'");
    return call;
  }

  // rhs := call | expr; used by declarations, assignments, and returns
  void parse_rhs(Stmt &s) {
    if (at(Tok::ident) && peek(1).kind == Tok::lparen)
      s.call = parse_call();
    else
      s.expr = parse_expr();
  }

  Stmt make_stmt(StmtKind kind) {
    Stmt s;
    s.kind = kind;
    s.pos = here();
    s.id = next_id++;
    return s;
  }

  void declare_local(const Token &name_tok) {
    const std::string &name = name_tok.text;
    if (declared.count(name)) {
      error_at(name_tok, "redeclaration of '" + name + "'");
      return;
    }
    if (global_names.count(name)) {
      error_at(name_tok, "declaration of '" + name +
                             "' shadows a global variable");
      return;
    }
    declared.insert(name);
  }

  Stmt parse_decl(bool need_semicolon) {
    Stmt s = make_stmt(StmtKind::decl);
    expect(Tok::kw_int, "'int'");
    if (at(Tok::star)) {
      error_here("unsupported construct: pointer declarator");
      return s;
    }
    Token name_tok = cur();
    if (!expect(Tok::ident, "an identifier"))
      return s;
    s.name = name_tok.text;
    if (at(Tok::unsupported) && cur().text == "[") {
      error_here("unsupported construct: array declarator");
      return s;
    }
    if (accept(Tok::assign))
      parse_rhs(s);
    if (need_semicolon)
      expect(Tok::semicolon, "';'");
    declare_local(name_tok);
    return s;
  }

  Stmt parse_assign(bool need_semicolon) {
    Stmt s = make_stmt(StmtKind::assign);
    Token name_tok = cur();
    expect(Tok::ident, "an identifier");
    s.name = name_tok.text;
    if (!declared.count(s.name) && !global_names.count(s.name))
      error_at(name_tok, "use of undeclared identifier '" + s.name + "'");
    expect(Tok::assign, "'='");
    parse_rhs(s);
    if (need_semicolon)
      expect(Tok::semicolon, "';'");
    return s;
  }

  std::vector<Stmt> parse_body(const char *owner) {
    std::vector<Stmt> body;
    if (accept(Tok::lbrace)) {
      while (!failed && !at(Tok::rbrace) && !at(Tok::eof))
        body.push_back(parse_stmt());
      expect(Tok::rbrace, "'}'");
      return body;
    }
    // single-statement body; C forbids a declaration here
    if (at(Tok::kw_int)) {
      error_here(std::string("a declaration cannot be the body of ") + owner);
      return body;
    }
    body.push_back(parse_stmt());
    return body;
  }

  Stmt parse_if() {
    Stmt s = make_stmt(StmtKind::if_stmt);
    expect(Tok::kw_if, "'if'");
    expect(Tok::lparen, "'('");
    s.expr = parse_expr();
    expect(Tok::rparen, "')'");
    s.body = parse_body("an if statement");
    if (accept(Tok::kw_else)) {
      if (at(Tok::kw_if))
        s.else_body.push_back(parse_if());
      else
        s.else_body = parse_body("an else branch");
    }
    return s;
  }

  Stmt parse_while() {
    Stmt s = make_stmt(StmtKind::while_stmt);
    expect(Tok::kw_while, "'while'");
    expect(Tok::lparen, "'('");
    s.expr = parse_expr();
    expect(Tok::rparen, "')'");
    s.body = parse_body("a while loop");
    return s;
  }

  Stmt parse_for() {
    Stmt s = make_stmt(StmtKind::while_stmt);
    expect(Tok::kw_for, "'for'");
    expect(Tok::lparen, "'('");
    if (!at(Tok::semicolon)) {
      if (at(Tok::kw_int))
        s.loop_init.push_back(parse_decl(false));
      else if (at(Tok::ident) && peek(1).kind == Tok::assign)
        s.loop_init.push_back(parse_assign(false));
      else {
        error_here("expected a declaration or assignment in for-loop "
                   "initializer");
        return s;
      }
    }
    expect(Tok::semicolon, "';'");
    if (at(Tok::semicolon))
      s.expr = Expr::lit(1);
    else
      s.expr = parse_expr();
    expect(Tok::semicolon, "';'");
    if (!at(Tok::rparen)) {
      if (at(Tok::ident) && peek(1).kind == Tok::assign)
        s.loop_step.push_back(parse_assign(false));
      else {
        error_here("expected an assignment or ')' in for-loop step");
        return s;
      }
    }
    expect(Tok::rparen, "')'");
    s.body = parse_body("a for loop");
    return s;
  }

  Stmt parse_return() {
    Stmt s = make_stmt(StmtKind::return_stmt);
    Token kw = cur();
    expect(Tok::kw_return, "'return'");
    if (!at(Tok::semicolon)) {
      if (!fn_returns_int) {
        error_at(kw, std::string("return with a value in function '") +
                         fn_name + "' returning void");
        return s;
      }
      parse_rhs(s);
    } else if (fn_returns_int) {
      error_at(kw, std::string("return without a value in function '") +
                       fn_name + "' returning int");
      return s;
    }
    expect(Tok::semicolon, "';'");
    return s;
  }

  Stmt parse_assert() {
    Stmt s = make_stmt(StmtKind::assert_stmt);
    expect(Tok::kw_assert, "'assert'");
    expect(Tok::lparen, "'('");
    s.expr = parse_expr();
    expect(Tok::rparen, "')'");
    expect(Tok::semicolon, "';'");
    return s;
  }

  Stmt parse_stmt() {
    if (failed || reject_unsupported())
      return Stmt{};
    switch (cur().kind) {
    case Tok::kw_int:
      return parse_decl(true);
    case Tok::kw_if:
      return parse_if();
    case Tok::kw_while:
      return parse_while();
    case Tok::kw_for:
      return parse_for();
    case Tok::kw_return:
      return parse_return();
    case Tok::kw_assert:
      return parse_assert();
    case Tok::lbrace:
      error_here("unsupported construct: free-standing block");
      return Stmt{};
    case Tok::semicolon:
      error_here("unsupported construct: empty statement");
      return Stmt{};
    case Tok::ident:
      if (peek(1).kind == Tok::assign)
        return parse_assign(true);
      [[fallthrough]];
    default: {
      Stmt s = make_stmt(StmtKind::expr_stmt);
      parse_rhs(s);
      expect(Tok::semicolon, "';'");
      return s;
    }
    }
  }

  void parse_params(Function &fn) {
    if (accept(Tok::kw_void))
      return;
    if (at(Tok::rparen))
      return;
    do {
      if (!expect(Tok::kw_int, "'int'"))
        return;
      if (at(Tok::star)) {
        error_here("unsupported construct: pointer declarator");
        return;
      }
      Param p;
      p.pos = here();
      Token name_tok = cur();
      if (!expect(Tok::ident, "a parameter name"))
        return;
      p.name = name_tok.text;
      for (const Param &other : fn.params)
        if (other.name == p.name)
          error_at(name_tok, "redeclaration of '" + p.name + "'");
      if (global_names.count(p.name))
        error_at(name_tok,
                 "parameter '" + p.name + "' shadows a global variable");
      fn.params.push_back(std::move(p));
    } while (accept(Tok::comma));
  }

  void parse_function(bool returns_int, SourcePos def_pos,
                      const Token &name_tok) {
    Function fn;
    fn.name = name_tok.text;
    fn.returns_int = returns_int;
    fn.pos = def_pos;
    if (global_names.count(fn.name)) {
      error_at(name_tok,
               "'" + fn.name + "' is already declared as a global variable");
      return;
    }
    if (defined_functions.count(fn.name)) {
      error_at(name_tok, "redefinition of function '" + fn.name + "'");
      return;
    }
    for (const Prototype &proto : ast.prototypes)
      if (proto.name == fn.name && proto.returns_int != returns_int) {
        error_at(name_tok,
                 "conflicting return type for function '" + fn.name + "'");
        return;
      }
    expect(Tok::lparen, "'('");
    parse_params(fn);
    expect(Tok::rparen, "')'");
    if (failed)
      return;

    fn_name = fn.name.c_str();
    fn_returns_int = returns_int;
    declared.clear();
    for (const Param &p : fn.params)
      declared.insert(p.name);

    expect(Tok::lbrace, "'{'");
    while (!failed && !at(Tok::rbrace) && !at(Tok::eof))
      fn.body.push_back(parse_stmt());
    expect(Tok::rbrace, "'}'");
    if (failed)
      return;
    defined_functions.insert(fn.name);
    ast.functions.push_back(std::move(fn));
  }

  void parse_prototype_params() {
    if (accept(Tok::kw_void))
      return;
    if (at(Tok::rparen))
      return;
    do {
      if (!expect(Tok::kw_int, "'int'"))
        return;
      if (at(Tok::star)) {
        error_here("unsupported construct: pointer declarator");
        return;
      }
      accept(Tok::ident); // parameter names are optional in a prototype
    } while (accept(Tok::comma));
  }

  // called with pos rewound to the 'int' keyword
  void parse_global(const Token &name_tok) {
    Global g;
    g.pos = here();
    pos += 2; // 'int' ident
    g.name = name_tok.text;
    if (global_names.count(g.name) || defined_functions.count(g.name)) {
      error_at(name_tok, "redeclaration of '" + g.name + "'");
      return;
    }
    if (accept(Tok::assign)) {
      Token start = cur();
      std::size_t before = diags.size();
      g.init = parse_expression_tokens(toks, pos, ExprFormat::c_expression,
                                       ClauseContext::invariant_clause, diags);
      for (std::size_t i = before; i < diags.size(); ++i)
        diags[i].file = file;
      if (!g.init) {
        failed = true;
        return;
      }
      if (!free_variables(*g.init).empty())
        error_at(start, "global initializer must be a constant expression");
    }
    expect(Tok::semicolon, "';'");
    if (!failed) {
      global_names.insert(g.name);
      ast.globals.push_back(std::move(g));
    }
  }

  void parse_top_level() {
    bool is_extern = accept(Tok::kw_extern);
    if (reject_unsupported())
      return;
    bool returns_int;
    SourcePos def_pos = here();
    if (accept(Tok::kw_int))
      returns_int = true;
    else if (accept(Tok::kw_void))
      returns_int = false;
    else {
      error_here("expected a declaration but found " + describe(cur()));
      return;
    }
    if (at(Tok::star)) {
      error_here("unsupported construct: pointer declarator");
      return;
    }
    Token name_tok = cur();
    if (!expect(Tok::ident, "an identifier"))
      return;

    if (at(Tok::lparen)) {
      // function definition or prototype: scan past the parameter list
      std::size_t scan = pos + 1;
      while (scan < toks.size() && toks[scan].kind != Tok::rparen &&
             toks[scan].kind != Tok::eof)
        ++scan;
      bool is_def = scan + 1 < toks.size() &&
                    toks[scan + 1].kind == Tok::lbrace;
      if (is_def) {
        if (is_extern) {
          error_at(name_tok, "'extern' on a function definition");
          return;
        }
        parse_function(returns_int, def_pos, name_tok);
      } else {
        ++pos; // '('
        parse_prototype_params();
        expect(Tok::rparen, "')'");
        expect(Tok::semicolon, "';'");
        if (!failed)
          ast.prototypes.push_back(Prototype{name_tok.text, returns_int});
      }
      return;
    }
    if (is_extern) {
      error_at(name_tok, "unsupported construct: extern variable declaration");
      return;
    }
    if (!returns_int) {
      error_at(name_tok, "variable '" + name_tok.text + "' declared void");
      return;
    }
    pos -= 2; // rewind to 'int' for parse_global
    parse_global(name_tok);
  }

  bool callee_known(const std::string &name, bool *returns_int) const {
    if (name == "__VERIFIER_nondet_int") {
      *returns_int = true;
      return true;
    }
    for (const Function &f : ast.functions)
      if (f.name == name) {
        *returns_int = f.returns_int;
        return true;
      }
    for (const Prototype &p : ast.prototypes)
      if (p.name == name) {
        *returns_int = p.returns_int;
        return true;
      }
    return false;
  }

  void check_call(const Stmt &s, bool value_used) {
    if (!s.call)
      return;
    const CallExpr &c = *s.call;
    Token where;
    where.line = c.pos.line;
    where.column = c.pos.column;
    bool returns_int = true;
    if (!callee_known(c.callee, &returns_int)) {
      error_at(where, "call to undefined function '" + c.callee + "'");
      return;
    }
    if (c.callee == "__VERIFIER_nondet_int") {
      if (!c.args.empty())
        error_at(where, "__VERIFIER_nondet_int takes no arguments");
    } else if (const Function *f = ast.find_function(c.callee)) {
      if (f->params.size() != c.args.size())
        error_at(where, "call to '" + c.callee + "' with " +
                            std::to_string(c.args.size()) +
                            " arguments, expected " +
                            std::to_string(f->params.size()));
    }
    if (value_used && !returns_int)
      error_at(where, "void value of '" + c.callee + "' used");
  }

  void check_calls(const std::vector<Stmt> &body) {
    for (const Stmt &s : body) {
      switch (s.kind) {
      case StmtKind::decl:
      case StmtKind::assign:
      case StmtKind::return_stmt:
        check_call(s, true);
        break;
      case StmtKind::expr_stmt:
        check_call(s, false);
        break;
      default:
        break;
      }
      check_calls(s.body);
      check_calls(s.else_body);
      check_calls(s.loop_init);
      check_calls(s.loop_step);
      if (failed)
        return;
    }
  }

  ParsedProgram run(std::string_view source) {
    toks = lex(source);
    while (!failed && !at(Tok::eof))
      parse_top_level();
    if (!failed)
      for (const Function &f : ast.functions)
        check_calls(f.body);
    ParsedProgram out;
    out.diagnostics = std::move(diags);
    if (!failed) {
      ast.file_name = file;
      out.program = std::move(ast);
    }
    return out;
  }
};

} // namespace

ParsedProgram parse_program(std::string_view source_text,
                            std::string file_name) {
  ProgramParser parser;
  parser.file = std::move(file_name);
  return parser.run(source_text);
}

ProgramIndex::ProgramIndex(const ProgramAst &p) : program(&p) {
  struct Walker {
    ProgramIndex &index;
    void add(const std::vector<Stmt> &body, const Function &fn) {
      for (const Stmt &s : body) {
        SourcePos at{s.pos.line, s.pos.column};
        index.stmt_by_pos.emplace(at, StmtRef{&s, &fn});
        index.stmt_by_id.emplace(s.id, StmtRef{&s, &fn});
        add(s.loop_init, fn);
        add(s.body, fn);
        add(s.else_body, fn);
        add(s.loop_step, fn);
      }
    }
  } walker{*this};
  for (const Function &f : p.functions) {
    function_by_pos.emplace(f.pos, &f);
    walker.add(f.body, f);
  }
}

const Function *ProgramIndex::function_at(SourcePos pos) const {
  auto it = function_by_pos.find(pos);
  return it == function_by_pos.end() ? nullptr : it->second;
}

const ProgramIndex::StmtRef *ProgramIndex::stmt_at(SourcePos pos) const {
  auto it = stmt_by_pos.find(pos);
  return it == stmt_by_pos.end() ? nullptr : &it->second;
}

const ProgramIndex::StmtRef *ProgramIndex::stmt(int id) const {
  auto it = stmt_by_id.find(id);
  return it == stmt_by_id.end() ? nullptr : &it->second;
}

namespace {

std::string pos_text(const std::string &file, int line,
                     std::optional<int> column) {
  std::string s = file + ":" + std::to_string(line);
  if (column)
    s += ":" + std::to_string(*column);
  return s;
}

ResolvedLocation resolve_fail(const Location &loc, std::string msg) {
  ResolvedLocation r;
  r.diagnostics.push_back(Diagnostic{Severity::error, "resolve",
                                     std::move(msg), loc.file_name, loc.line,
                                     loc.column.value_or(0)});
  return r;
}

} // namespace

ResolvedLocation resolve_location(const Location &loc,
                                  const ProgramIndex &index, EntryKind kind,
                                  const ResolveOptions &options) {
  const ProgramAst &p = *index.program;
  if (loc.file_name != p.file_name &&
      basename_of(loc.file_name) != basename_of(p.file_name))
    return resolve_fail(loc, "file_name '" + loc.file_name +
                                 "' does not match the program under "
                                 "analysis ('" +
                                 p.file_name + "')");

  std::optional<int> column = loc.column;
  if (column && options.zero_based_columns)
    column = *column + 1;

  const Function *fn = nullptr;
  const Stmt *stmt = nullptr;

  if (kind == EntryKind::function_contract) {
    if (column) {
      fn = index.function_at({loc.line, *column});
      if (!fn)
        return resolve_fail(
            loc, "no function definition starts at " +
                     pos_text(loc.file_name, loc.line, *column));
    } else {
      for (auto it = index.function_by_pos.lower_bound({loc.line, 0});
           it != index.function_by_pos.end() && it->first.line == loc.line;
           ++it) {
        fn = it->second;
        break;
      }
      if (!fn)
        return resolve_fail(loc, "no function definition on line " +
                                     std::to_string(loc.line) + " of " +
                                     loc.file_name);
    }
  } else {
    bool want_loop = kind == EntryKind::loop_invariant;
    const char *wanted = want_loop ? "loop statement" : "statement";
    if (column) {
      const ProgramIndex::StmtRef *ref =
          index.stmt_at({loc.line, *column});
      if (ref && (!want_loop || ref->stmt->kind == StmtKind::while_stmt)) {
        stmt = ref->stmt;
        fn = ref->function;
      }
      if (!stmt)
        return resolve_fail(loc, std::string("no ") + wanted + " starts at " +
                                     pos_text(loc.file_name, loc.line,
                                              *column));
    } else {
      for (auto it = index.stmt_by_pos.lower_bound({loc.line, 0});
           it != index.stmt_by_pos.end() && it->first.line == loc.line;
           ++it) {
        if (want_loop && it->second.stmt->kind != StmtKind::while_stmt)
          continue;
        stmt = it->second.stmt;
        fn = it->second.function;
        break;
      }
      if (!stmt)
        return resolve_fail(loc, std::string("no ") + wanted + " on line " +
                                     std::to_string(loc.line) + " of " +
                                     loc.file_name);
    }
  }

  if (loc.function && *loc.function != fn->name)
    return resolve_fail(loc, "location resolves to function '" + fn->name +
                                 "' but the entry names function '" +
                                 *loc.function + "'");

  ResolvedLocation out;
  ProgramPoint point;
  point.function = fn->name;
  switch (kind) {
  case EntryKind::function_contract:
    point.kind = PointKind::function_entry;
    break;
  case EntryKind::loop_invariant:
    point.kind = PointKind::loop_head;
    point.stmt_id = stmt->id;
    break;
  case EntryKind::location_invariant:
    point.kind = PointKind::before_statement;
    point.stmt_id = stmt->id;
    break;
  }
  out.point = point;
  return out;
}

bool always_returns(const std::vector<Stmt> &body) {
  for (const Stmt &s : body) {
    switch (s.kind) {
    case StmtKind::return_stmt:
      return true;
    case StmtKind::if_stmt:
      if (!s.else_body.empty() && always_returns(s.body) &&
          always_returns(s.else_body))
        return true;
      break;
    default:
      break;
    }
  }
  return false;
}

namespace {

void collect_returns(const std::vector<Stmt> &body, const std::string &fname,
                     std::vector<ProgramPoint> &out) {
  for (const Stmt &s : body) {
    if (s.kind == StmtKind::return_stmt)
      out.push_back({PointKind::return_point, fname, s.id});
    collect_returns(s.body, fname, out);
    collect_returns(s.else_body, fname, out);
  }
}

} // namespace

std::vector<ProgramPoint> enumerate_return_points(const Function &f) {
  std::vector<ProgramPoint> out;
  collect_returns(f.body, f.name, out);
  if (!always_returns(f.body))
    out.push_back({PointKind::return_point, f.name, -1});
  return out;
}

namespace {

void flatten_view(const std::vector<Stmt> &list,
                  std::vector<const Stmt *> &out) {
  for (const Stmt &s : list) {
    if (s.kind == StmtKind::while_stmt)
      flatten_view(s.loop_init, out);
    out.push_back(&s);
  }
}

bool views_equal(const std::vector<const Stmt *> &a,
                 const std::vector<const Stmt *> &b);

bool stmts_equal(const std::vector<Stmt> &a, const std::vector<Stmt> &b) {
  std::vector<const Stmt *> va, vb;
  flatten_view(a, va);
  flatten_view(b, vb);
  return views_equal(va, vb);
}

bool call_equal(const std::optional<CallExpr> &a,
                const std::optional<CallExpr> &b) {
  if (a.has_value() != b.has_value())
    return false;
  if (!a)
    return true;
  if (a->callee != b->callee || a->args.size() != b->args.size())
    return false;
  for (std::size_t i = 0; i < a->args.size(); ++i)
    if (!expr_equal(a->args[i], b->args[i]))
      return false;
  return true;
}

bool node_equal(const Stmt &a, const Stmt &b) {
  if (a.kind != b.kind || a.name != b.name)
    return false;
  if (!expr_equal(a.expr, b.expr) || !call_equal(a.call, b.call))
    return false;
  if (a.kind == StmtKind::while_stmt) {
    std::vector<const Stmt *> va, vb;
    flatten_view(a.body, va);
    flatten_view(a.loop_step, va);
    flatten_view(b.body, vb);
    flatten_view(b.loop_step, vb);
    return views_equal(va, vb);
  }
  return stmts_equal(a.body, b.body) && stmts_equal(a.else_body, b.else_body);
}

bool views_equal(const std::vector<const Stmt *> &a,
                 const std::vector<const Stmt *> &b) {
  if (a.size() != b.size())
    return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!node_equal(*a[i], *b[i]))
      return false;
  return true;
}

} // namespace

bool program_equal(const ProgramAst &a, const ProgramAst &b) {
  if (a.globals.size() != b.globals.size() ||
      a.functions.size() != b.functions.size())
    return false;
  for (std::size_t i = 0; i < a.globals.size(); ++i) {
    if (a.globals[i].name != b.globals[i].name ||
        !expr_equal(a.globals[i].init, b.globals[i].init))
      return false;
  }
  for (std::size_t i = 0; i < a.functions.size(); ++i) {
    const Function &fa = a.functions[i];
    const Function &fb = b.functions[i];
    if (fa.name != fb.name || fa.returns_int != fb.returns_int ||
        fa.params.size() != fb.params.size())
      return false;
    for (std::size_t j = 0; j < fa.params.size(); ++j)
      if (fa.params[j].name != fb.params[j].name)
        return false;
    if (!stmts_equal(fa.body, fb.body))
      return false;
  }
  return true;
}

namespace {

void renumber(std::vector<Stmt> &body, int &next) {
  for (Stmt &s : body) {
    s.id = next++;
    renumber(s.loop_init, next);
    renumber(s.body, next);
    renumber(s.else_body, next);
    renumber(s.loop_step, next);
  }
}

} // namespace

void renumber_statements(ProgramAst &p) {
  int next = 1;
  for (Function &f : p.functions)
    renumber(f.body, next);
}

} // namespace wit
