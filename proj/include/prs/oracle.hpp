#ifndef PRS_ORACLE_HPP
#define PRS_ORACLE_HPP

#include <map>
#include <vector>

#include "prs/altl.hpp"
#include "prs/mbrs.hpp"
#include "prs/verdict.hpp"

namespace prs {

/// Explicit fragment of the LTS reachable from one term.
struct TermGraph {
  std::vector<TermPtr> nodes;  // canonical, nodes[0] = start
  std::map<TermPtr, int, TermPtrLess> index;
  std::vector<std::vector<std::pair<RuleRef, int>>> edges;  // per node
  bool closed = true;  // every node's successors are fully present
};

TermGraph explore(const Mbrs& m, const TermPtr& t0, const SearchBudget& budget = {});

/// Pump witness: after `prefix`, the base term rewrites through `cycle` to a
/// term containing it as a rewrite subterm, so the cycle repeats forever.
struct OracleWitness {
  enum class Kind { ExactLasso, ParPump, HeadPump };
  Kind kind;
  RuleSeq prefix, cycle;
  TermPtr base, pumped;
};

/// Brute-force (K,Kw)-acceptance: searches for an exact lasso or a pump
/// witness; No only when the reachable graph is closed and the exhaustive
/// annotated cycle search finds nothing.
Verdict oracle_accepting(const Mbrs& m, const TermPtr& t0, ComponentSet k,
                         ComponentSet kw, const SearchBudget& budget = {},
                         OracleWitness* witness = nullptr);

/// Direct fragment semantics on all infinite runs of a closed graph via
/// enumeration of realizable action profiles; Unknown on open graphs.
Verdict oracle_holds_inf(const Mbrs& m, const TermPtr& t0, const FragPtr& phi,
                         const SearchBudget& budget = {});

}  // namespace prs

#endif
