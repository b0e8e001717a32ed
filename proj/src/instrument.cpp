#include "wit/instrument.hpp"

#include <map>
#include <set>
#include <sstream>

#include "wit/lint.hpp"

namespace wit {

namespace {

std::string ghost_name(const std::string &var) {
  return std::string(ghost_prefix) + "pre_" + var;
}

const char *result_ghost = "__wit_result";

struct AssertSpec {
  ExprPtr expr;
  int entry_index = -1;
  ClauseContext clause = ClauseContext::invariant_clause;
};

Stmt make_assert(const AssertSpec &spec) {
  Stmt s;
  s.kind = StmtKind::assert_stmt;
  s.expr = spec.expr;
  s.origin_entry = spec.entry_index;
  s.origin_clause = spec.clause;
  return s;
}

struct FnPlan {
  std::vector<AssertSpec> requires_asserts;
  std::vector<AssertSpec> ensures_asserts; // already substituted
  std::map<int, std::vector<AssertSpec>> at_loop; // loop head id -> asserts
  std::map<int, std::vector<AssertSpec>> at_stmt; // statement id -> asserts
  std::set<std::string> ghosts;                   // variables to snapshot
  bool need_result = false;
};

struct Instrumenter {
  const ProgramAst &p;
  std::map<std::string, FnPlan> plans;

  bool loop_needs_flattening(const Stmt &loop, const FnPlan &plan) const {
    if (plan.at_loop.count(loop.id))
      return true;
    for (const Stmt &s : loop.loop_init)
      if (plan.at_stmt.count(s.id))
        return true;
    for (const Stmt &s : loop.loop_step)
      if (plan.at_stmt.count(s.id))
        return true;
    return false;
  }

  void append_asserts(std::vector<Stmt> &out,
                      const std::vector<AssertSpec> &specs) {
    for (const AssertSpec &spec : specs)
      out.push_back(make_assert(spec));
  }

  void append_asserts_at(std::vector<Stmt> &out, const FnPlan &plan, int id) {
    auto it = plan.at_stmt.find(id);
    if (it != plan.at_stmt.end())
      append_asserts(out, it->second);
  }

  void append_return_sequence(std::vector<Stmt> &out, const Stmt *ret,
                              const Function &fn, const FnPlan &plan) {
    if (fn.returns_int) {
      Stmt store;
      store.kind = StmtKind::assign;
      store.name = result_ghost;
      if (ret && ret->call)
        store.call = ret->call;
      else if (ret && ret->expr)
        store.expr = ret->expr;
      else
        store.expr = Expr::lit(0); // value of a body that falls off the end
      out.push_back(std::move(store));
      append_asserts(out, plan.ensures_asserts);
      Stmt back;
      back.kind = StmtKind::return_stmt;
      back.expr = Expr::var(result_ghost);
      out.push_back(std::move(back));
    } else {
      append_asserts(out, plan.ensures_asserts);
      if (ret) {
        Stmt back;
        back.kind = StmtKind::return_stmt;
        out.push_back(std::move(back));
      }
    }
  }

  std::vector<Stmt> rewrite_body(const std::vector<Stmt> &in,
                                 const Function &fn, const FnPlan &plan) {
    std::vector<Stmt> out;
    for (const Stmt &s : in) {
      append_asserts_at(out, plan, s.id);
      switch (s.kind) {
      case StmtKind::return_stmt:
        if (plan.ensures_asserts.empty())
          out.push_back(s);
        else
          append_return_sequence(out, &s, fn, plan);
        break;
      case StmtKind::if_stmt: {
        Stmt cp = s;
        cp.body = rewrite_body(s.body, fn, plan);
        cp.else_body = rewrite_body(s.else_body, fn, plan);
        out.push_back(std::move(cp));
        break;
      }
      case StmtKind::while_stmt: {
        auto loop_specs = plan.at_loop.find(s.id);
        if (loop_needs_flattening(s, plan)) {
          std::vector<Stmt> init = rewrite_body(s.loop_init, fn, plan);
          out.insert(out.end(), init.begin(), init.end());
          Stmt cp = s;
          cp.loop_init.clear();
          cp.loop_step.clear();
          cp.body = rewrite_body(s.body, fn, plan);
          std::vector<Stmt> step = rewrite_body(s.loop_step, fn, plan);
          cp.body.insert(cp.body.end(), step.begin(), step.end());
          if (loop_specs != plan.at_loop.end()) {
            append_asserts(out, loop_specs->second);
            append_asserts(cp.body, loop_specs->second);
          }
          out.push_back(std::move(cp));
        } else {
          Stmt cp = s;
          cp.body = rewrite_body(s.body, fn, plan);
          out.push_back(std::move(cp));
        }
        break;
      }
      default:
        out.push_back(s);
        break;
      }
    }
    return out;
  }

  Function rewrite_function(const Function &fn) {
    auto it = plans.find(fn.name);
    if (it == plans.end())
      return fn;
    const FnPlan &plan = it->second;

    Function out = fn;
    out.body.clear();
    for (const std::string &var : plan.ghosts) {
      Stmt ghost;
      ghost.kind = StmtKind::decl;
      ghost.name = ghost_name(var);
      ghost.expr = Expr::var(var);
      out.body.push_back(std::move(ghost));
    }
    if (plan.need_result) {
      Stmt res;
      res.kind = StmtKind::decl;
      res.name = result_ghost;
      out.body.push_back(std::move(res));
    }
    append_asserts(out.body, plan.requires_asserts);

    std::vector<Stmt> rewritten = rewrite_body(fn.body, fn, plan);
    out.body.insert(out.body.end(), rewritten.begin(), rewritten.end());

    if (!plan.ensures_asserts.empty() && !always_returns(fn.body))
      append_return_sequence(out.body, nullptr, fn, plan);
    return out;
  }
};

} // namespace

ProgramAst instrument_program(const ProgramAst &p, const WitnessSet &w,
                              const ResolveOptions &options) {
  ProgramIndex index(p);
  BindingResult bound = bind_witness(w, index, options);

  Instrumenter inst{p, {}};

  for (const BoundEntry &be : bound.entries) {
    FnPlan &plan = inst.plans[be.point.function];
    const Function *fn = p.find_function(be.point.function);
    std::set<std::string> params;
    if (fn)
      for (const Param &prm : fn->params)
        params.insert(prm.name);

    if (be.entry->kind == EntryKind::function_contract) {
      const BoundClause &req = be.clauses[0];
      const BoundClause &ens = be.clauses[1];
      plan.requires_asserts.push_back(
          AssertSpec{req.expr, be.entry_index, req.context});

      ExprSubstitution subst;
      subst.parameters = &params;
      subst.substitute_parameters = true;
      bool returns_int = fn && fn->returns_int;
      if (returns_int)
        subst.result_subst = Expr::var(result_ghost);
      for (const auto &[name, kind] : free_variables(*ens.expr)) {
        if (kind == VarKind::pre ||
            (kind == VarKind::current && params.count(name))) {
          plan.ghosts.insert(name);
          subst.pre_subst.emplace(name, Expr::var(ghost_name(name)));
        }
      }
      plan.ensures_asserts.push_back(AssertSpec{
          substitute(ens.expr, subst), be.entry_index, ens.context});
      if (returns_int)
        plan.need_result = true;
    } else {
      const BoundClause &inv = be.clauses[0];
      ExprSubstitution subst;
      for (const auto &[name, kind] : free_variables(*inv.expr))
        if (kind == VarKind::pre) {
          plan.ghosts.insert(name);
          subst.pre_subst.emplace(name, Expr::var(ghost_name(name)));
        }
      AssertSpec spec{substitute(inv.expr, subst), be.entry_index,
                      inv.context};
      if (be.point.kind == PointKind::loop_head)
        plan.at_loop[be.point.stmt_id].push_back(std::move(spec));
      else
        plan.at_stmt[be.point.stmt_id].push_back(std::move(spec));
    }
  }

  ProgramAst out = p;
  out.functions.clear();
  for (const Function &fn : p.functions)
    out.functions.push_back(inst.rewrite_function(fn));
  renumber_statements(out);
  return out;
}

namespace {

struct CPrinter {
  explicit CPrinter(const EmitOptions &o) : opt(o) {}

  const EmitOptions &opt;
  std::ostringstream os;
  int depth = 0;

  void indent() {
    for (int i = 0; i < depth; ++i)
      os << "  ";
  }

  std::string call_text(const CallExpr &c) {
    std::string s = c.callee + "(";
    for (std::size_t i = 0; i < c.args.size(); ++i) {
      if (i)
        s += ", ";
      s += print_expression(*c.args[i]);
    }
    return s + ")";
  }

  std::string rhs_text(const Stmt &s) {
    if (s.call)
      return call_text(*s.call);
    return print_expression(*s.expr);
  }

  // declaration or assignment without the trailing semicolon (for-headers)
  std::string inline_stmt(const Stmt &s) {
    std::string text;
    if (s.kind == StmtKind::decl)
      text = "int " + s.name;
    else
      text = s.name;
    if (s.expr || s.call)
      text += " = " + rhs_text(s);
    return text;
  }

  void print_assert(const Stmt &s) {
    indent();
    if (opt.reach_error_encoding)
      os << "if (!(" << print_expression(*s.expr) << ")) reach_error();\n";
    else
      os << "assert(" << print_expression(*s.expr) << ");\n";
  }

  void print_block(const std::vector<Stmt> &body) {
    os << "{\n";
    ++depth;
    for (const Stmt &s : body)
      print_stmt(s);
    --depth;
    indent();
    os << "}";
  }

  void print_if(const Stmt &s) {
    os << "if (" << print_expression(*s.expr) << ") ";
    print_block(s.body);
    if (!s.else_body.empty()) {
      os << " else ";
      if (s.else_body.size() == 1 &&
          s.else_body[0].kind == StmtKind::if_stmt) {
        print_if(s.else_body[0]);
        return;
      }
      print_block(s.else_body);
    }
    os << "\n";
  }

  void print_stmt(const Stmt &s) {
    switch (s.kind) {
    case StmtKind::decl:
    case StmtKind::assign:
      indent();
      os << inline_stmt(s) << ";\n";
      break;
    case StmtKind::expr_stmt:
      indent();
      os << rhs_text(s) << ";\n";
      break;
    case StmtKind::assert_stmt:
      print_assert(s);
      break;
    case StmtKind::return_stmt:
      indent();
      if (s.expr || s.call)
        os << "return " << rhs_text(s) << ";\n";
      else
        os << "return;\n";
      break;
    case StmtKind::if_stmt:
      indent();
      print_if(s);
      break;
    case StmtKind::while_stmt: {
      indent();
      if (s.loop_init.empty() && s.loop_step.empty()) {
        os << "while (" << print_expression(*s.expr) << ") ";
      } else {
        os << "for (";
        if (!s.loop_init.empty())
          os << inline_stmt(s.loop_init[0]);
        os << "; " << print_expression(*s.expr) << "; ";
        if (!s.loop_step.empty())
          os << inline_stmt(s.loop_step[0]);
        os << ") ";
      }
      print_block(s.body);
      os << "\n";
      break;
    }
    }
  }

  std::string run(const ProgramAst &p) {
    os << "#include <assert.h>\n\n";
    os << "extern int __VERIFIER_nondet_int(void);\n";
    if (opt.reach_error_encoding)
      os << "\nvoid reach_error(void) { assert(0); }\n";
    if (!p.globals.empty())
      os << "\n";
    for (const Global &g : p.globals) {
      os << "int " << g.name;
      if (g.init)
        os << " = " << print_expression(*g.init);
      os << ";\n";
    }
    for (const Function &fn : p.functions) {
      os << "\n";
      os << (fn.returns_int ? "int " : "void ") << fn.name << "(";
      if (fn.params.empty()) {
        os << "void";
      } else {
        for (std::size_t i = 0; i < fn.params.size(); ++i) {
          if (i)
            os << ", ";
          os << "int " << fn.params[i].name;
        }
      }
      os << ") ";
      depth = 0;
      print_block(fn.body);
      os << "\n";
    }
    return os.str();
  }
};

} // namespace

std::string emit_c(const ProgramAst &p, const EmitOptions &options) {
  CPrinter printer(options);
  return printer.run(p);
}

} // namespace wit
