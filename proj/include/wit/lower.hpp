#ifndef WIT_LOWER_HPP
#define WIT_LOWER_HPP

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wit/csrc.hpp"
#include "wit/witness_model.hpp"

namespace wit {

/// One clause (or one return point of a clause) that the plain 2.0 format
/// cannot express.
struct ResidueItem {
  int entry_index = -1;
  std::string clause; // "requires" | "ensures" | "value"
  std::string reason; // RESULT_REF | OLD_REF | AT_PRE | NO_STATEMENT_POSITION
  std::string file;
  int line = 0;
  std::string detail;
};

struct ResidueReport {
  std::vector<ResidueItem> items;
  bool empty() const { return items.empty(); }
};

struct LowerResult {
  WitnessSet witness; // format_version "2.0"
  ResidueReport residue;
};

/// Rewrites contract entries as location invariants where the plain format
/// can express them: requires moves to the first body statement, an ensures
/// over globals only moves to every plain return statement. Everything else
/// lands in the residue with a reason code. Requires lint_witness(w, p) to
/// be error-free. A 2.0 witness comes back unchanged with an empty residue.
LowerResult lower_to_v20(const WitnessSet &w, const ProgramAst &p,
                         const ResolveOptions &resolve = {});

nlohmann::ordered_json residue_to_json(const ResidueReport &r);

} // namespace wit

#endif
