#include "wit/lower.hpp"

#include "wit/expr.hpp"
#include "wit/lint.hpp"

namespace wit {

namespace {

bool trivially_true(const Expr &e) {
  return e.kind == ExprKind::int_lit && e.value != 0;
}

class Lowerer {
public:
  Lowerer(const WitnessSet &w, const ProgramAst &p,
          const ResolveOptions &resolve)
      : w(w), p(p), index(p) {
    BindingResult bound = bind_witness(w, index, resolve);
    for (const BoundEntry &be : bound.entries)
      entries.push_back(be);
  }

  LowerResult run() {
    LowerResult out;
    out.witness.metadata = w.metadata;
    out.witness.metadata.format_version = "2.0";
    out.witness.source_name = w.source_name;

    std::map<int, const BoundEntry *> by_index;
    for (const BoundEntry &be : entries)
      by_index[be.entry_index] = &be;

    for (std::size_t i = 0; i < w.entries.size(); ++i) {
      const Entry &e = w.entries[i];
      auto it = by_index.find(static_cast<int>(i));
      const BoundEntry *be = it == by_index.end() ? nullptr : it->second;
      lower_entry(static_cast<int>(i), e, be, out);
    }
    return out;
  }

private:
  const WitnessSet &w;
  const ProgramAst &p;
  ProgramIndex index;
  std::vector<BoundEntry> entries;

  void residue(LowerResult &out, int entry_index, const char *clause,
               const char *reason, std::string file, int line,
               std::string detail) {
    out.residue.items.push_back(ResidueItem{entry_index, clause, reason,
                                            std::move(file), line,
                                            std::move(detail)});
  }

  Entry invariant_at(const Stmt &s, const std::string &fn, std::string text) {
    Entry e;
    e.kind = EntryKind::location_invariant;
    e.location.file_name = p.file_name;
    e.location.line = s.pos.line;
    e.location.column = s.pos.column;
    e.location.function = fn;
    e.format = ExprFormat::c_expression;
    e.value = std::move(text);
    return e;
  }

  void lower_entry(int i, const Entry &e, const BoundEntry *be,
                   LowerResult &out) {
    if (e.kind != EntryKind::function_contract) {
      lower_invariant(i, e, be, out);
      return;
    }
    const Function *fn =
        be ? p.find_function(be->point.function) : nullptr;
    if (!fn) {
      residue(out, i, "requires", "NO_STATEMENT_POSITION",
              e.location.file_name, e.location.line,
              "entry does not bind to the program");
      return;
    }
    lower_requires(i, *be, *fn, out);
    lower_ensures(i, e, *be, *fn, out);
  }

  void lower_invariant(int i, const Entry &e, const BoundEntry *be,
                       LowerResult &out) {
    if (e.format == ExprFormat::c_expression) {
      out.witness.entries.push_back(e);
      return;
    }
    if (be && contains_at_pre(*be->clauses[0].expr)) {
      residue(out, i, "value", "AT_PRE", e.location.file_name,
              e.location.line,
              "\\at(_, Pre) names a value at function entry, which a plain "
              "invariant cannot");
      return;
    }
    Entry copy = e;
    copy.format = ExprFormat::c_expression;
    out.witness.entries.push_back(std::move(copy));
  }

  void lower_requires(int i, const BoundEntry &be, const Function &fn,
                      LowerResult &out) {
    const BoundClause &c = be.clauses[0];
    if (trivially_true(*c.expr))
      return;
    if (fn.body.empty()) {
      residue(out, i, "requires", "NO_STATEMENT_POSITION", p.file_name,
              fn.pos.line,
              "the body of '" + fn.name +
                  "' has no first statement to carry the check");
      return;
    }
    out.witness.entries.push_back(
        invariant_at(fn.body.front(), fn.name, c.text));
  }

  void lower_ensures(int i, const Entry &e, const BoundEntry &be,
                     const Function &fn, LowerResult &out) {
    const BoundClause &c = be.clauses[1];
    if (trivially_true(*c.expr))
      return;

    bool expressible = true;
    if (contains_result_ref(*c.expr)) {
      residue(out, i, "ensures", "RESULT_REF", e.location.file_name,
              e.location.line,
              "\\result names the return value, which a plain invariant "
              "cannot");
      expressible = false;
    }
    if (contains_old_of(*c.expr)) {
      residue(out, i, "ensures", "OLD_REF", e.location.file_name,
              e.location.line,
              "\\old(_) names a value at function entry, which a plain "
              "invariant cannot");
      expressible = false;
    } else {
      for (const auto &[name, kind] : free_variables(*c.expr)) {
        if (kind != VarKind::current)
          continue;
        bool is_param = false;
        for (const Param &prm : fn.params)
          if (prm.name == name)
            is_param = true;
        if (is_param) {
          residue(out, i, "ensures", "OLD_REF", e.location.file_name,
                  e.location.line,
                  "parameter '" + name +
                      "' in an ensures clause means its value at function "
                      "entry, which a plain invariant cannot name");
          expressible = false;
          break;
        }
      }
    }
    if (!expressible)
      return;

    // Globals only: pin the clause to each exit of the function.
    for (const ProgramPoint &rp : enumerate_return_points(fn)) {
      if (rp.stmt_id < 0) {
        residue(out, i, "ensures", "NO_STATEMENT_POSITION", p.file_name,
                fn.pos.line,
                "the body of '" + fn.name +
                    "' can end without a return statement; no statement "
                    "marks that exit");
        continue;
      }
      const ProgramIndex::StmtRef *ref = index.stmt(rp.stmt_id);
      if (!ref)
        continue;
      const Stmt &ret = *ref->stmt;
      if (ret.call) {
        residue(out, i, "ensures", "NO_STATEMENT_POSITION", p.file_name,
                ret.pos.line,
                "the clause must hold after the call in 'return " +
                    ret.call->callee +
                    "(...);' completes; no statement marks that point");
        continue;
      }
      out.witness.entries.push_back(invariant_at(ret, fn.name, c.text));
    }
  }
};

} // namespace

LowerResult lower_to_v20(const WitnessSet &w, const ProgramAst &p,
                         const ResolveOptions &resolve) {
  Lowerer lowerer(w, p, resolve);
  return lowerer.run();
}

nlohmann::ordered_json residue_to_json(const ResidueReport &r) {
  nlohmann::ordered_json items = nlohmann::ordered_json::array();
  for (const ResidueItem &it : r.items) {
    items.push_back({{"entry_index", it.entry_index},
                     {"clause", it.clause},
                     {"reason", it.reason},
                     {"file", it.file},
                     {"line", it.line},
                     {"detail", it.detail}});
  }
  nlohmann::ordered_json out;
  out["count"] = r.items.size();
  out["residue"] = std::move(items);
  return out;
}

} // namespace wit
