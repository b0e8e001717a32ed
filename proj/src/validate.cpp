#include "wit/validate.hpp"

#include <random>
#include <set>

namespace wit {

InputStrategy InputStrategy::exhaustive(std::int32_t lo, std::int32_t hi,
                                        int max_calls) {
  InputStrategy s;
  s.kind = Kind::exhaustive;
  s.lo = lo;
  s.hi = hi;
  s.max_calls = max_calls;
  return s;
}

InputStrategy InputStrategy::randomized(std::uint64_t seed, int samples) {
  InputStrategy s;
  s.kind = Kind::randomized;
  s.seed = seed;
  s.samples = samples;
  return s;
}

namespace {

struct Feeder {
  virtual ~Feeder() = default;
  virtual std::optional<std::int32_t> next() = 0;
};

struct VectorFeeder final : Feeder {
  const std::vector<std::int32_t> *values;
  std::size_t i = 0;
  explicit VectorFeeder(const std::vector<std::int32_t> &v) : values(&v) {}
  std::optional<std::int32_t> next() override {
    if (i < values->size())
      return (*values)[i++];
    return std::nullopt;
  }
};

// Depth-first enumeration: runs past the end of the current prefix extend it
// with the low bound, so each execution pins down exactly the inputs it read.
struct PrefixFeeder final : Feeder {
  std::vector<std::int32_t> *prefix;
  std::int32_t lo;
  int max_calls;
  std::size_t i = 0;
  std::optional<std::int32_t> next() override {
    if (i >= static_cast<std::size_t>(max_calls))
      return std::nullopt;
    if (i >= prefix->size())
      prefix->push_back(lo);
    return (*prefix)[i++];
  }
};

struct RandomFeeder final : Feeder {
  std::mt19937 engine;
  std::uniform_int_distribution<std::int32_t> dist;
  explicit RandomFeeder(std::uint64_t seed)
      : engine(static_cast<std::mt19937::result_type>(seed)),
        dist(std::numeric_limits<std::int32_t>::min(),
             std::numeric_limits<std::int32_t>::max()) {}
  std::optional<std::int32_t> next() override { return dist(engine); }
};

/// Witness checks grouped by where they fire.
struct CheckIndex {
  std::map<std::string, std::vector<const BoundEntry *>> contracts;
  std::map<int, std::vector<const BoundEntry *>> at_loop;
  std::map<int, std::vector<const BoundEntry *>> at_stmt;

  explicit CheckIndex(const std::vector<BoundEntry> &entries) {
    for (const BoundEntry &be : entries) {
      switch (be.point.kind) {
      case PointKind::function_entry:
        contracts[be.point.function].push_back(&be);
        break;
      case PointKind::loop_head:
        at_loop[be.point.stmt_id].push_back(&be);
        break;
      case PointKind::before_statement:
        at_stmt[be.point.stmt_id].push_back(&be);
        break;
      case PointKind::return_point:
        break; // not produced by binding
      }
    }
  }
};

struct Abort {
  RunRecord::Status status;
};

struct Flow {
  bool returned = false;
  std::optional<std::int32_t> value;
};

struct Activation {
  const Function *fn = nullptr;
  std::map<std::string, std::int32_t> locals; // params + initialized locals
  std::set<std::string> declared;             // locals declared so far
  std::map<std::string, std::int32_t> pre;    // globals + params at entry
  std::set<std::string> params;
};

class Exec {
public:
  Exec(const ProgramAst &p, const CheckIndex &checks,
       const ValidateLimits &limits, const RunOptions &options, Feeder &feeder)
      : p(p), checks(checks), limits(limits), options(options),
        feeder(feeder) {}

  RunRecord run() {
    try {
      init_globals();
      const Function *main_fn = p.find_function("main");
      if (!main_fn)
        fault(SourcePos{0, 0}, "program defines no function 'main'");
      std::optional<std::int32_t> v = call_function(*main_fn, {}, main_fn->pos);
      rec.main_return = v.value_or(0);
      rec.status = entry_faulted ? RunRecord::Status::entry_fault
                                 : RunRecord::Status::completed;
    } catch (const Abort &abort) {
      rec.status = abort.status;
    }
    return std::move(rec);
  }

private:
  const ProgramAst &p;
  const CheckIndex &checks;
  ValidateLimits limits;
  RunOptions options;
  Feeder &feeder;

  std::map<std::string, std::int32_t> globals;
  long long steps = 0;
  int depth = 0;
  bool entry_faulted = false;
  RunRecord rec;

  std::string point_of(SourcePos pos) const {
    return p.file_name + ":" + std::to_string(pos.line);
  }

  void trace(SourcePos pos, std::string event) {
    if (options.record_trace)
      rec.trace.push_back(TraceEvent{point_of(pos), std::move(event)});
  }

  [[noreturn]] void fault(SourcePos pos, std::string why) {
    rec.reason = point_of(pos) + ": " + why;
    trace(pos, "fault: " + std::move(why));
    throw Abort{RunRecord::Status::fault};
  }

  void bump_step(SourcePos pos) {
    ++rec.steps;
    if (++steps > limits.step_limit) {
      rec.reason = "step limit of " + std::to_string(limits.step_limit) +
                   " exceeded at " + point_of(pos);
      throw Abort{RunRecord::Status::limit};
    }
  }

  void init_globals() {
    for (const Global &g : p.globals) {
      std::int32_t value = 0;
      if (g.init) {
        EvalEnv env;
        EvalResult r = evaluate(*g.init, env, ClauseContext::invariant_clause);
        if (!r.ok)
          fault(g.pos, "initializing '" + g.name + "': " + r.fault);
        value = r.value;
      }
      globals[g.name] = value;
    }
  }

  EvalEnv env_for(Activation &act, std::optional<std::int32_t> result) {
    EvalEnv env;
    env.current = &act.locals;
    env.current_fallback = &globals;
    env.pre = &act.pre;
    env.parameters = &act.params;
    env.result = result;
    return env;
  }

  std::int32_t eval(const Expr &e, Activation &act, SourcePos at) {
    EvalEnv env = env_for(act, std::nullopt);
    EvalResult r = evaluate(e, env, ClauseContext::invariant_clause);
    if (!r.ok)
      fault(at, r.fault);
    return r.value;
  }

  const char *clause_label(ClauseContext c) const {
    switch (c) {
    case ClauseContext::requires_clause:
      return "requires";
    case ClauseContext::ensures_clause:
      return "ensures";
    case ClauseContext::invariant_clause:
      return "invariant";
    }
    return "?";
  }

  void check_entry(const BoundEntry &be, const BoundClause &c,
                   Activation &act, std::optional<std::int32_t> result,
                   SourcePos at) {
    ++rec.entry_checks;
    EvalEnv env = env_for(act, result);
    EvalResult r = evaluate(*c.expr, env, c.context);
    std::string label = std::string(clause_label(c.context)) + " of entry " +
                        std::to_string(be.entry_index);
    if (!r.ok) {
      // A faulting entry expression decides nothing; the run goes on and the
      // overall verdict degrades to unknown unless a real violation is found.
      if (!entry_faulted) {
        entry_faulted = true;
        rec.reason = point_of(at) + ": " + label + " faulted: " + r.fault;
      }
      trace(at, label + " faulted: " + r.fault);
      return;
    }
    bool passed = r.value != 0;
    if (options.record_checks)
      rec.checks.push_back(CheckEvent{be.entry_index, c.context, passed});
    trace(at, label + (passed ? " passed" : " failed"));
    if (!passed) {
      rec.violated_entry = be.entry_index;
      rec.violated_clause = c.context;
      rec.violation_point = point_of(at);
      throw Abort{RunRecord::Status::violation};
    }
  }

  void check_at_statement(const Stmt &s, Activation &act) {
    auto it = checks.at_stmt.find(s.id);
    if (it == checks.at_stmt.end())
      return;
    for (const BoundEntry *be : it->second)
      check_entry(*be, be->clauses[0], act, std::nullopt, s.pos);
  }

  void check_loop_invariants(const Stmt &s, Activation &act) {
    auto it = checks.at_loop.find(s.id);
    if (it == checks.at_loop.end())
      return;
    for (const BoundEntry *be : it->second)
      check_entry(*be, be->clauses[0], act, std::nullopt, s.pos);
  }

  std::int32_t store(Activation &act, const std::string &name,
                     std::int32_t value) {
    if (act.declared.count(name) || act.params.count(name))
      act.locals[name] = value;
    else
      globals[name] = value; // the parser resolved it: not local, so global
    return value;
  }

  std::optional<std::int32_t> exec_call(const CallExpr &c, Activation &act) {
    if (c.callee == "__VERIFIER_nondet_int") {
      std::optional<std::int32_t> v = feeder.next();
      if (!v) {
        rec.reason = "the input strategy provides no value for nondet call " +
                     std::to_string(rec.inputs.size() + 1);
        throw Abort{RunRecord::Status::input_budget};
      }
      rec.inputs.push_back(*v);
      trace(c.pos, "__VERIFIER_nondet_int() = " + std::to_string(*v));
      return *v;
    }
    const Function *fn = p.find_function(c.callee);
    if (!fn)
      fault(c.pos, "call to undefined function '" + c.callee + "'");
    std::vector<std::int32_t> args;
    args.reserve(c.args.size());
    for (const ExprPtr &a : c.args)
      args.push_back(eval(*a, act, c.pos));
    return call_function(*fn, std::move(args), c.pos);
  }

  std::int32_t call_value(const CallExpr &c, Activation &act) {
    std::optional<std::int32_t> v = exec_call(c, act);
    if (!v)
      fault(c.pos, "void value of '" + c.callee + "' used");
    return *v;
  }

  std::optional<std::int32_t> call_function(const Function &fn,
                                            std::vector<std::int32_t> args,
                                            SourcePos call_site) {
    if (++depth > limits.depth_limit) {
      rec.reason = "call depth limit of " + std::to_string(limits.depth_limit) +
                   " exceeded at " + point_of(call_site);
      throw Abort{RunRecord::Status::limit};
    }
    trace(fn.pos, "enter " + fn.name);
    Activation act;
    act.fn = &fn;
    act.pre = globals;
    for (std::size_t i = 0; i < fn.params.size(); ++i) {
      const std::string &name = fn.params[i].name;
      std::int32_t v = i < args.size() ? args[i] : 0;
      act.locals[name] = v;
      act.params.insert(name);
      act.pre[name] = v;
    }

    auto it = checks.contracts.find(fn.name);
    if (it != checks.contracts.end())
      for (const BoundEntry *be : it->second)
        check_entry(*be, be->clauses[0], act, std::nullopt, fn.pos);

    Flow flow = exec_block(fn.body, act);

    std::optional<std::int32_t> result;
    if (fn.returns_int)
      result = flow.returned ? flow.value : std::int32_t{0};

    if (it != checks.contracts.end())
      for (const BoundEntry *be : it->second)
        check_entry(*be, be->clauses[1], act, result, fn.pos);

    trace(fn.pos, "leave " + fn.name +
                      (result ? " = " + std::to_string(*result) : ""));
    --depth;
    return result;
  }

  Flow exec_block(const std::vector<Stmt> &body, Activation &act) {
    for (const Stmt &s : body) {
      Flow f = exec_stmt(s, act);
      if (f.returned)
        return f;
    }
    return {};
  }

  Flow exec_stmt(const Stmt &s, Activation &act) {
    bump_step(s.pos);
    check_at_statement(s, act);
    switch (s.kind) {
    case StmtKind::decl: {
      act.declared.insert(s.name);
      act.locals.erase(s.name); // re-entering a declaration resets it
      if (s.call)
        act.locals[s.name] = call_value(*s.call, act);
      else if (s.expr)
        act.locals[s.name] = eval(*s.expr, act, s.pos);
      return {};
    }
    case StmtKind::assign: {
      std::int32_t v = s.call ? call_value(*s.call, act)
                              : eval(*s.expr, act, s.pos);
      store(act, s.name, v);
      return {};
    }
    case StmtKind::expr_stmt:
      if (s.call)
        exec_call(*s.call, act);
      else
        eval(*s.expr, act, s.pos);
      return {};
    case StmtKind::assert_stmt: {
      EvalEnv env = env_for(act, std::nullopt);
      EvalResult r = evaluate(*s.expr, env, ClauseContext::invariant_clause);
      if (!r.ok)
        fault(s.pos, "assert: " + r.fault);
      bool passed = r.value != 0;
      if (options.record_checks)
        rec.checks.push_back(
            CheckEvent{s.origin_entry, s.origin_clause, passed});
      trace(s.pos, std::string("assert ") + (passed ? "passed" : "failed"));
      if (!passed) {
        rec.violated_entry = s.origin_entry;
        rec.violated_clause = s.origin_clause;
        rec.violation_point = point_of(s.pos);
        throw Abort{RunRecord::Status::violation};
      }
      return {};
    }
    case StmtKind::if_stmt: {
      std::int32_t c = eval(*s.expr, act, s.pos);
      return exec_block(c != 0 ? s.body : s.else_body, act);
    }
    case StmtKind::while_stmt: {
      Flow f = exec_block(s.loop_init, act);
      if (f.returned)
        return f;
      while (true) {
        bump_step(s.pos);
        check_loop_invariants(s, act);
        std::int32_t c = eval(*s.expr, act, s.pos);
        if (c == 0)
          break;
        f = exec_block(s.body, act);
        if (f.returned)
          return f;
        f = exec_block(s.loop_step, act);
        if (f.returned)
          return f;
      }
      return {};
    }
    case StmtKind::return_stmt: {
      Flow f;
      f.returned = true;
      if (s.call)
        f.value = call_value(*s.call, act);
      else if (s.expr)
        f.value = eval(*s.expr, act, s.pos);
      trace(s.pos, "return" +
                       (f.value ? " " + std::to_string(*f.value) : ""));
      return f;
    }
    }
    return {};
  }
};

std::string describe_entry(const WitnessSet &w, int entry_index) {
  if (entry_index < 0 ||
      entry_index >= static_cast<int>(w.entries.size()))
    return "program assert";
  const Entry &e = w.entries[static_cast<std::size_t>(entry_index)];
  return std::string(entry_kind_name(e.kind)) + " at " + e.location.file_name +
         ":" + std::to_string(e.location.line);
}

} // namespace

const char *verdict_clause_name(const Verdict &v) {
  if (v.entry_index < 0)
    return "assert";
  switch (v.clause) {
  case ClauseContext::requires_clause:
    return "requires";
  case ClauseContext::ensures_clause:
    return "ensures";
  case ClauseContext::invariant_clause:
    return "value";
  }
  return "?";
}

RunRecord run_once(const ProgramAst &p, const WitnessSet &w,
                   const std::vector<std::int32_t> &inputs,
                   const ValidateLimits &limits, const RunOptions &options,
                   const ResolveOptions &resolve) {
  ProgramIndex index(p);
  BindingResult bound = bind_witness(w, index, resolve);
  CheckIndex checks(bound.entries);
  VectorFeeder feeder(inputs);
  Exec exec(p, checks, limits, options, feeder);
  return exec.run();
}

Verdict validate(const ProgramAst &p, const WitnessSet &w,
                 const InputStrategy &strategy, const ValidateLimits &limits,
                 const ResolveOptions &resolve) {
  ProgramIndex index(p);
  BindingResult bound = bind_witness(w, index, resolve);

  Verdict verdict;
  if (has_errors(bound.diagnostics)) {
    verdict.kind = VerdictKind::unknown;
    verdict.reason = "witness entries do not bind to the program; run lint";
    return verdict;
  }

  CheckIndex checks(bound.entries);
  bool have_unknown = false;
  std::string unknown_reason;

  auto note_unknown = [&](const RunRecord &rec) {
    if (have_unknown)
      return;
    have_unknown = true;
    unknown_reason = rec.reason;
  };

  auto finish_violation = [&](RunRecord rec) {
    verdict.kind = VerdictKind::violated;
    verdict.entry_index = rec.violated_entry;
    verdict.clause = rec.violated_clause;
    verdict.entry_description = describe_entry(w, rec.violated_entry);
    verdict.violation_point = rec.violation_point;
    verdict.input_vector = rec.inputs;
    RunOptions replay_opts;
    replay_opts.record_trace = true;
    RunRecord replay =
        run_once(p, w, verdict.input_vector, limits, replay_opts, resolve);
    verdict.trace = std::move(replay.trace);
  };

  if (strategy.kind == InputStrategy::Kind::exhaustive) {
    std::vector<std::int32_t> prefix;
    while (true) {
      PrefixFeeder feeder;
      feeder.prefix = &prefix;
      feeder.lo = strategy.lo;
      feeder.max_calls = strategy.max_calls;
      Exec exec(p, checks, limits, {}, feeder);
      RunRecord rec = exec.run();
      ++verdict.inputs_explored;
      verdict.entries_evaluated += rec.entry_checks;
      if (rec.status == RunRecord::Status::violation) {
        finish_violation(std::move(rec));
        return verdict;
      }
      if (rec.status != RunRecord::Status::completed)
        note_unknown(rec);
      prefix.resize(rec.inputs.size());
      while (!prefix.empty() && prefix.back() == strategy.hi)
        prefix.pop_back();
      if (prefix.empty())
        break;
      ++prefix.back();
    }
  } else {
    for (int i = 0; i < strategy.samples; ++i) {
      RandomFeeder feeder(strategy.seed + static_cast<std::uint64_t>(i));
      Exec exec(p, checks, limits, {}, feeder);
      RunRecord rec = exec.run();
      ++verdict.inputs_explored;
      verdict.entries_evaluated += rec.entry_checks;
      if (rec.status == RunRecord::Status::violation) {
        finish_violation(std::move(rec));
        return verdict;
      }
      if (rec.status != RunRecord::Status::completed)
        note_unknown(rec);
    }
  }

  if (have_unknown) {
    verdict.kind = VerdictKind::unknown;
    verdict.reason = unknown_reason;
  } else {
    verdict.kind = VerdictKind::no_violation_found;
  }
  return verdict;
}

const char *verdict_kind_name(VerdictKind k) {
  switch (k) {
  case VerdictKind::no_violation_found:
    return "no_violation_found";
  case VerdictKind::violated:
    return "violated";
  case VerdictKind::unknown:
    return "unknown";
  }
  return "?";
}

int verdict_exit_code(const Verdict &v) {
  switch (v.kind) {
  case VerdictKind::no_violation_found:
    return 0;
  case VerdictKind::violated:
    return 1;
  case VerdictKind::unknown:
    return 2;
  }
  return 2;
}

nlohmann::ordered_json verdict_to_json(const Verdict &v) {
  nlohmann::ordered_json out;
  out["verdict"] = verdict_kind_name(v.kind);
  if (v.kind == VerdictKind::violated) {
    if (v.entry_index >= 0)
      out["entry_index"] = v.entry_index;
    else
      out["entry_index"] = nullptr;
    out["entry"] = v.entry_description;
    out["clause"] = verdict_clause_name(v);
    out["violation_point"] = v.violation_point;
    out["input_vector"] = v.input_vector;
    nlohmann::ordered_json trace = nlohmann::ordered_json::array();
    for (const TraceEvent &t : v.trace)
      trace.push_back({{"point", t.point}, {"event", t.event}});
    out["trace"] = std::move(trace);
  }
  if (v.kind == VerdictKind::unknown)
    out["reason"] = v.reason;
  out["stats"] = {{"inputs_explored", v.inputs_explored},
                  {"entries_evaluated", v.entries_evaluated}};
  return out;
}

} // namespace wit
