#ifndef PRS_PARALLEL_HPP
#define PRS_PARALLEL_HPP

#include <set>
#include <string>
#include <vector>

#include "prs/mbrs.hpp"
#include "prs/verdict.hpp"

namespace prs {

/// Multiset over variables; index = VarId::value. The marking of a purely
/// parallel term is its top-level variable multiset, eps the zero marking.
using Marking = std::vector<std::uint32_t>;

Marking marking_of(const Mbrs& m, const TermPtr& t);
TermPtr term_of(const Mbrs& m, const Marking& mk);

struct Target {
  enum class Kind { Any, ExactVar, Empty, Covers };

  Kind kind = Kind::Any;
  VarId var{};  // ExactVar / Covers

  static Target any() { return {}; }
  static Target exact_var(VarId v) { return {Kind::ExactVar, v}; }
  static Target empty() { return {Kind::Empty, {}}; }
  static Target covers(VarId v) { return {Kind::Covers, v}; }
};

/// Is there a finite derivation from {x} reaching `target` with used
/// components exactly `k`? Covers additionally demands at least one step.
/// Any/Covers are answered exactly (annotated coverability with
/// acceleration); ExactVar/Empty by bounded concrete search, Unknown when
/// the budget binds. Yes carries a replayable rule sequence when a concrete
/// realization fits in the budget.
Verdict par_reach_exists(const Mbrs& mp, VarId x, ComponentSet k, Target target,
                         const SearchBudget& budget = {});

/// Is there a derivation sigma from {x}, infinite or containing a rule whose
/// id is outside `rstar`, with maximal_mp1(sigma) = k and
/// maximalInf_mp1(sigma) u maximal_mp2(sigma) = kw? mp1 and mp2 share one
/// rule list and differ only in components. Yes on the infinite branch
/// carries a self-covering lasso witness.
Verdict par_inf_exists(const Mbrs& mp1, const Mbrs& mp2, VarId x, ComponentSet k,
                       ComponentSet kw, const std::set<std::string>& rstar,
                       const SearchBudget& budget = {});

}  // namespace prs

#endif
