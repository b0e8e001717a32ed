#include "wit/lint.hpp"

#include <set>

namespace wit {

namespace {

const char *clause_key(ClauseContext c) {
  switch (c) {
  case ClauseContext::requires_clause:
    return "requires";
  case ClauseContext::ensures_clause:
    return "ensures";
  case ClauseContext::invariant_clause:
    return "value";
  }
  return "?";
}

NodePos entry_anchor(const Entry &e, const NodePos &clause_pos) {
  if (clause_pos.line > 0)
    return clause_pos;
  return e.pos;
}

std::string map_expr_rule(const std::string &rule) {
  if (rule == "expr.format")
    return "R5";
  if (rule == "expr.at-label")
    return "R7";
  return "R2"; // expr.syntax, expr.context
}

// Params and locals whose declaration is executed before the statement;
// loop_init runs before the loop head, a declaration is not visible to
// checks attached to itself.
bool collect_visible(const std::vector<Stmt> &body, int target,
                     std::set<std::string> &vis) {
  for (const Stmt &s : body) {
    if (s.kind == StmtKind::while_stmt &&
        collect_visible(s.loop_init, target, vis))
      return true;
    if (s.id == target)
      return true;
    if (s.kind == StmtKind::decl)
      vis.insert(s.name);
    if (collect_visible(s.body, target, vis))
      return true;
    if (collect_visible(s.else_body, target, vis))
      return true;
    if (s.kind == StmtKind::while_stmt &&
        collect_visible(s.loop_step, target, vis))
      return true;
  }
  return false;
}

std::set<std::string> visible_locals(const Function &fn, int stmt_id) {
  std::set<std::string> vis;
  for (const Param &p : fn.params)
    vis.insert(p.name);
  collect_visible(fn.body, stmt_id, vis);
  return vis;
}

struct Linter {
  const WitnessSet &w;
  const ProgramAst &p;
  DiagnosticList diags;
  std::set<std::string> globals;

  void finding(Severity sev, std::string rule, std::string message,
               const NodePos &pos) {
    diags.push_back(Diagnostic{sev, std::move(rule), std::move(message),
                               w.source_name, pos.line, pos.column});
  }

  void program_finding(std::string rule, std::string message, SourcePos pos) {
    diags.push_back(Diagnostic{Severity::error, std::move(rule),
                               std::move(message), p.file_name, pos.line,
                               pos.column});
  }

  void check_contract_clause(const BoundEntry &be, const BoundClause &c,
                             const Function &fn,
                             const std::set<std::string> &params) {
    NodePos at = entry_anchor(*be.entry, c.pos);
    for (const auto &[name, kind] : free_variables(*c.expr)) {
      if (kind == VarKind::result) {
        if (!fn.returns_int)
          finding(Severity::error, "R4",
                  "\\result used in a contract for '" + fn.name +
                      "', which returns void",
                  at);
        continue;
      }
      if (globals.count(name) || params.count(name))
        continue;
      std::string subject =
          kind == VarKind::pre ? "\\old(" + name + "): '" + name + "'"
                               : "'" + name + "'";
      finding(Severity::error, "R3",
              subject + " is neither a global variable nor a parameter of "
                        "function '" +
                  fn.name + "'",
              at);
    }
  }

  void check_invariant_clause(const BoundEntry &be, const BoundClause &c,
                              const Function &fn,
                              const std::set<std::string> &params) {
    NodePos at = entry_anchor(*be.entry, c.pos);
    std::set<std::string> visible = visible_locals(fn, be.point.stmt_id);
    for (const auto &[name, kind] : free_variables(*c.expr)) {
      if (kind == VarKind::pre) {
        if (!globals.count(name) && !params.count(name))
          finding(Severity::error, "R6",
                  "\\at(" + name + ", Pre): '" + name +
                      "' is neither a global variable nor a parameter of "
                      "function '" +
                      fn.name + "'",
                  at);
        continue;
      }
      if (kind == VarKind::current && !globals.count(name) &&
          !visible.count(name))
        finding(Severity::error, "R6",
                "'" + name + "' is not in scope at " + p.file_name + ":" +
                    std::to_string(be.entry->location.line),
                at);
    }
    if (c.expr->kind == ExprKind::int_lit && c.expr->value != 0)
      finding(Severity::warning, "W2", "invariant is trivially true", at);
  }

  void check_reserved_names() {
    auto reserved = [](const std::string &name) {
      return name.rfind(ghost_prefix, 0) == 0;
    };
    auto flag = [&](const std::string &name, SourcePos pos) {
      if (reserved(name))
        program_finding("R8",
                        "identifier '" + name + "' uses the reserved prefix '" +
                            ghost_prefix + "'",
                        pos);
    };
    struct Walk {
      decltype(flag) &flag_fn;
      void run(const std::vector<Stmt> &body) {
        for (const Stmt &s : body) {
          if (s.kind == StmtKind::decl)
            flag_fn(s.name, s.pos);
          run(s.loop_init);
          run(s.body);
          run(s.else_body);
          run(s.loop_step);
        }
      }
    } walk{flag};
    for (const Global &g : p.globals)
      flag(g.name, g.pos);
    for (const Function &f : p.functions) {
      flag(f.name, f.pos);
      for (const Param &prm : f.params)
        flag(prm.name, prm.pos);
      walk.run(f.body);
    }
  }

  void check_main_shape() {
    const Function *main_fn = p.find_function("main");
    if (!main_fn) {
      program_finding("R9", "program defines no function 'main'",
                      SourcePos{0, 0});
      return;
    }
    if (!main_fn->returns_int)
      program_finding("R9", "'main' must return int", main_fn->pos);
    if (!main_fn->params.empty())
      program_finding("R9", "'main' must take no parameters", main_fn->pos);
  }
};

} // namespace

BindingResult bind_witness(const WitnessSet &w, const ProgramIndex &index,
                           const ResolveOptions &options) {
  BindingResult out;
  for (std::size_t i = 0; i < w.entries.size(); ++i) {
    const Entry &e = w.entries[i];
    ResolvedLocation resolved =
        resolve_location(e.location, index, e.kind, options);
    if (!resolved.ok()) {
      NodePos at = e.location.yaml_pos.line > 0 ? e.location.yaml_pos : e.pos;
      for (const Diagnostic &d : resolved.diagnostics)
        out.diagnostics.push_back(Diagnostic{Severity::error, "R1", d.message,
                                             w.source_name, at.line,
                                             at.column});
      continue;
    }

    BoundEntry be;
    be.entry = &e;
    be.entry_index = static_cast<int>(i);
    be.point = *resolved.point;
    bool ok = true;

    auto add_clause = [&](ClauseContext ctx, const std::string &text,
                          const NodePos &pos) {
      ParsedExpr parsed = parse_expression(text, e.format, ctx);
      if (!parsed.ok()) {
        NodePos at = entry_anchor(e, pos);
        for (const Diagnostic &d : parsed.diagnostics) {
          std::string msg =
              std::string(clause_key(ctx)) + ": " + d.message;
          if (d.column > 1)
            msg += " (column " + std::to_string(d.column) +
                   " of the expression)";
          out.diagnostics.push_back(Diagnostic{Severity::error,
                                               map_expr_rule(d.rule), msg,
                                               w.source_name, at.line,
                                               at.column});
        }
        ok = false;
        return;
      }
      be.clauses.push_back(BoundClause{ctx, text, parsed.ast, pos});
    };

    if (e.kind == EntryKind::function_contract) {
      add_clause(ClauseContext::requires_clause, e.requires_or_default(),
                 e.requires_pos);
      add_clause(ClauseContext::ensures_clause, e.ensures_or_default(),
                 e.ensures_pos);
    } else {
      add_clause(ClauseContext::invariant_clause, e.value_or_default(),
                 e.value_pos);
    }
    if (ok)
      out.entries.push_back(std::move(be));
  }
  return out;
}

DiagnosticList lint_witness(const WitnessSet &w, const ProgramAst &p,
                            const LintOptions &options) {
  Linter lint{w, p, {}, {}};
  for (const Global &g : p.globals)
    lint.globals.insert(g.name);

  ProgramIndex index(p);
  BindingResult bound = bind_witness(w, index, options.resolve);
  lint.diags = std::move(bound.diagnostics);

  for (const BoundEntry &be : bound.entries) {
    const Function *fn = p.find_function(be.point.function);
    if (!fn)
      continue;
    std::set<std::string> params;
    for (const Param &prm : fn->params)
      params.insert(prm.name);
    for (const BoundClause &c : be.clauses) {
      if (be.entry->kind == EntryKind::function_contract)
        lint.check_contract_clause(be, c, *fn, params);
      else
        lint.check_invariant_clause(be, c, *fn, params);
    }
  }

  for (std::size_t j = 0; j < w.entries.size(); ++j)
    for (std::size_t i = 0; i < j; ++i)
      if (w.entries[i] == w.entries[j]) {
        lint.finding(Severity::warning, "W1",
                     "duplicate of an earlier witness entry",
                     w.entries[j].pos);
        break;
      }

  if (!w.entries.empty()) {
    lint.check_reserved_names();
    lint.check_main_shape();
  }

  sort_diagnostics(lint.diags);
  return lint.diags;
}

} // namespace wit
