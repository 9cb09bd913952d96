#ifndef PRS_DECIDE_HPP
#define PRS_DECIDE_HPP

#include <map>
#include <set>
#include <string>

#include "prs/mbrs.hpp"
#include "prs/parallel.hpp"
#include "prs/sequential.hpp"
#include "prs/verdict.hpp"

namespace prs {

/// Parallel over-system for one K: the PAR restriction of the base system
/// closed under the collapse rules X->[K']Z_F / X->[K']Y / X->[K']W'.
struct BuiltParK {
  Mbrs sys;
  VarId zf;       // sink variable abstracting finished subderivations
  bool tainted;   // a bounded subquery was inconclusive during the build
};

/// The (K,Kw) extension: same rule list seen through two component
/// structures, plus the set of non-abstraction rule ids.
struct BuiltKkw {
  Mbrs mp1, mp2;
  VarId zinf;     // sink variable abstracting infinite subderivations
  std::set<std::string> rstar;
  bool tainted;
};

struct BuiltSeqK {
  Mbrs sys;
  AnnotatedRelations rel;
  bool tainted;
};

/// Decides existence of a (K,Kw)-accepting infinite derivation from a
/// variable of a normal-form system, by induction on |K|+|Kw|. Yes answers
/// are always sound; No degrades to Unknown when some bounded subquery
/// consulted during the evaluation was inconclusive.
class DecisionSession {
public:
  explicit DecisionSession(Mbrs m, SearchBudget budget = {});

  const Mbrs& system() const { return m_; }
  const SearchBudget& budget() const { return budget_; }

  const BuiltParK& par_k(ComponentSet k);
  const BuiltKkw& par_kkw(ComponentSet k, ComponentSet kw);
  const BuiltSeqK& seq_k(ComponentSet k);

  Verdict decide(VarId x, ComponentSet k, ComponentSet kw);

private:
  Mbrs m_;
  SearchBudget budget_;
  std::map<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>, Verdict> memo_;
  std::map<std::uint32_t, BuiltParK> park_;
  std::map<std::uint64_t, BuiltKkw> kkw_;
  std::map<std::uint32_t, BuiltSeqK> seqk_;
  std::vector<int> measure_stack_;
};

}  // namespace prs

#endif
