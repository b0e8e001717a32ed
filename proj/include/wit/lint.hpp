#ifndef WIT_LINT_HPP
#define WIT_LINT_HPP

#include <string>
#include <vector>

#include "wit/csrc.hpp"
#include "wit/diagnostics.hpp"
#include "wit/expr.hpp"
#include "wit/witness_model.hpp"

namespace wit {

/// Reserved identifier prefix for instrumentation ghosts.
inline constexpr const char *ghost_prefix = "__wit_";

struct BoundClause {
  ClauseContext context = ClauseContext::invariant_clause;
  std::string text; // clause text after defaulting (absent clause -> "1")
  ExprPtr expr;
  NodePos pos; // position of the clause scalar in the witness document
};

/// One witness entry resolved against the program: where it attaches and the
/// parsed clause expressions. Contracts carry [requires, ensures] in that
/// order; invariants carry one invariant clause.
struct BoundEntry {
  const Entry *entry = nullptr;
  int entry_index = -1;
  ProgramPoint point;
  std::vector<BoundClause> clauses;
};

struct BindingResult {
  std::vector<BoundEntry> entries; // only entries that bound cleanly
  DiagnosticList diagnostics;
};

/// Resolves every entry's location (R1) and parses every clause in its
/// declared format and context (R2/R5/R7). Shared by lint, instrument,
/// validate, and lower so they agree on what an entry means.
BindingResult bind_witness(const WitnessSet &w, const ProgramIndex &index,
                           const ResolveOptions &options = {});

struct LintOptions {
  ResolveOptions resolve;
};

/// All static well-formedness findings for the witness against the program:
///   R1 locations resolve; R2 clauses parse in format and context;
///   R3 contract clause variables are globals or parameters of the function;
///   R4 \result only on non-void functions; R5 ACSL keywords require
///   acsl_expression; R6 invariant variables are in scope at the point, \at
///   over globals/parameters of the enclosing function; R7 \at label is Pre;
///   R8 the program does not use the reserved __wit_ prefix; R9 the program
///   defines int main() for validation. W1 duplicate entries; W2 trivially
///   true invariants. Sorted by (file, line, column, rule).
DiagnosticList lint_witness(const WitnessSet &w, const ProgramAst &p,
                            const LintOptions &options = {});

} // namespace wit

#endif
