#ifndef WIT_INSTRUMENT_HPP
#define WIT_INSTRUMENT_HPP

#include <string>

#include "wit/csrc.hpp"
#include "wit/witness_model.hpp"

namespace wit {

/// Rewrites the program so that every witness entry is enforced by asserts:
/// ghost locals `__wit_pre_<x>` snapshot globals and parameters at function
/// entry, `assert(requires)` runs before the first body statement, every
/// return point evaluates the returned expression into `__wit_result` and
/// asserts the ensures clauses against it, loop invariants are asserted
/// immediately before each evaluation of the loop condition, and location
/// invariants before their statement. Asserts carry origin_entry/
/// origin_clause so runs can be mapped back to witness entries.
/// Requires lint_witness(w, p) to be error-free.
ProgramAst instrument_program(const ProgramAst &p, const WitnessSet &w,
                              const ResolveOptions &options = {});

struct EmitOptions {
  // encode checks as `if (!(e)) reach_error();` instead of `assert(e);`
  bool reach_error_encoding = false;
};

/// Prints the program as compilable C with a prelude for assert and
/// __VERIFIER_nondet_int. Reparsing the result yields a structurally equal
/// program (up to positions and for/while sugar).
std::string emit_c(const ProgramAst &p, const EmitOptions &options = {});

} // namespace wit

#endif
