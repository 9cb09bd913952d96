#ifndef PRS_NORMALIZE_HPP
#define PRS_NORMALIZE_HPP

#include <set>
#include <string>
#include <vector>

#include "prs/mbrs.hpp"

namespace prs {

struct CaseApplication {
  int case_index;        // 1..5
  std::string removed;   // rule id
  std::vector<std::string> added;
};

struct NormalizationResult {
  Mbrs mf;  // normal form, n+1 components; component n+1 = rules \ aux
  std::set<std::string> aux_rules;   // ids of the bookkeeping helper rules
  std::set<std::string> fresh_vars;  // names of introduced variables
  std::vector<CaseApplication> trace;
};

/// Ensures the start of a query is a single variable: if `t` is already a
/// variable it is returned as is, otherwise a fresh variable X0 with a
/// silent rule X0 -> t and empty components is added.
std::pair<Mbrs, VarId> add_entry_rule(const Mbrs& m, const TermPtr& t);

/// Eliminates bad rules one at a time until every rule is a PAR or SEQ
/// rule, then attaches the extra accepting component n+1 holding every
/// non-auxiliary rule.
NormalizationResult normalize(const Mbrs& m);

/// (K, Kw) -> (K + {n+1}, Kw + {n+1}).
std::pair<ComponentSet, ComponentSet> lift_query(ComponentSet k, ComponentSet kw, int n);

}  // namespace prs

#endif
