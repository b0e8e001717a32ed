#ifndef WIT_VALIDATE_HPP
#define WIT_VALIDATE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wit/csrc.hpp"
#include "wit/lint.hpp"
#include "wit/witness_model.hpp"

namespace wit {

struct InputStrategy {
  enum class Kind { exhaustive, randomized };
  Kind kind = Kind::exhaustive;

  // exhaustive: every vector over [lo, hi], at most max_calls nondet calls,
  // enumerated depth-first in lexicographic order (low to high)
  std::int32_t lo = -8;
  std::int32_t hi = 7;
  int max_calls = 4;

  // randomized: `samples` vectors; sample i draws each value from
  // mt19937(seed + i) over the full int32 range
  std::uint64_t seed = 0;
  int samples = 0;

  static InputStrategy exhaustive(std::int32_t lo, std::int32_t hi,
                                  int max_calls);
  static InputStrategy randomized(std::uint64_t seed, int samples);
};

struct ValidateLimits {
  long long step_limit = 200000; // statements executed per input vector
  int depth_limit = 64;          // call depth
};

struct TraceEvent {
  std::string point; // "file:line" or "file:line function f"
  std::string event;
};

/// One check evaluation in execution order; the oracle tests compare these
/// between the validator and the instrumented program.
struct CheckEvent {
  int entry_index = -1; // -1: the program's own assert
  ClauseContext clause = ClauseContext::invariant_clause;
  bool passed = false;
};

struct RunRecord {
  enum class Status {
    completed,    // main returned
    violation,    // a check evaluated to zero
    fault,        // program-level evaluation fault (div by zero, ...)
    entry_fault,  // completed, but an entry expression faulted along the way
    input_budget, // needed more nondet values than the strategy provides
    limit,        // step or depth limit hit
  };
  Status status = Status::completed;

  int violated_entry = -1; // violation: -1 = program assert, else entry index
  ClauseContext violated_clause = ClauseContext::invariant_clause;
  std::string violation_point;

  std::string reason; // fault / entry_fault / limit detail
  std::vector<std::int32_t> inputs; // nondet values consumed, in order
  std::int32_t main_return = 0;
  long long steps = 0;
  long long entry_checks = 0;
  std::vector<CheckEvent> checks; // filled when record_checks
  std::vector<TraceEvent> trace;  // filled when record_trace
};

struct RunOptions {
  bool record_checks = false;
  bool record_trace = false;
};

/// Executes the program from main once, feeding nondet calls from `inputs`
/// (running past the end yields input_budget), checking every witness entry
/// at its point. Requires lint_witness(w, p) to be error-free; pass an empty
/// witness to execute a program (for example an instrumented one) alone.
RunRecord run_once(const ProgramAst &p, const WitnessSet &w,
                   const std::vector<std::int32_t> &inputs,
                   const ValidateLimits &limits = {},
                   const RunOptions &options = {},
                   const ResolveOptions &resolve = {});

enum class VerdictKind { no_violation_found, violated, unknown };

struct Verdict {
  VerdictKind kind = VerdictKind::no_violation_found;

  // violated
  int entry_index = -1; // -1 = the program's own assert
  ClauseContext clause = ClauseContext::invariant_clause;
  std::string entry_description;
  std::string violation_point;
  std::vector<std::int32_t> input_vector; // replayable
  std::vector<TraceEvent> trace;

  // unknown
  std::string reason;

  // stats
  long long inputs_explored = 0;
  long long entries_evaluated = 0;
};

/// Runs every input vector of the strategy. The first zero-valued check (in
/// enumeration order) yields `violated` with a replayable input vector and a
/// trace; a violation on any vector dominates faults and limits elsewhere;
/// otherwise any fault or limit yields `unknown`; else no_violation_found.
Verdict validate(const ProgramAst &p, const WitnessSet &w,
                 const InputStrategy &strategy,
                 const ValidateLimits &limits = {},
                 const ResolveOptions &resolve = {});

nlohmann::ordered_json verdict_to_json(const Verdict &v);

const char *verdict_kind_name(VerdictKind k);

/// "requires" / "ensures" / "value", or "assert" for the program's own
/// assert.
const char *verdict_clause_name(const Verdict &v);

/// CLI exit code for a verdict: 0 no_violation_found, 1 violated, 2 unknown.
int verdict_exit_code(const Verdict &v);

} // namespace wit

#endif
