#ifndef PRS_SEQUENTIAL_HPP
#define PRS_SEQUENTIAL_HPP

#include <set>
#include <tuple>
#include <vector>

#include "prs/mbrs.hpp"

namespace prs {

/// Finite summaries of sequential derivations. A pop triple (A,B,c) states
/// that the single variable A rewrites to exactly B (or to eps) through a
/// derivation with maximal exactly c; a headreach triple (A,B,c) states that
/// A rewrites to some X1.X2...Xm.B (B the rewrite-active rightmost cell).
/// The `plus` flag distinguishes summaries with at least one step.
struct AnnotatedRelations {
  static constexpr std::uint32_t eps = ~0u;

  // (from, to, label bits, plus); to == eps only in pop
  using Triple = std::tuple<std::uint32_t, std::uint32_t, std::uint32_t, bool>;
  std::set<Triple> pop;
  std::set<Triple> headreach;

  bool pop_holds(VarId a, VarId b, ComponentSet c) const;
  bool pop_eps_holds(VarId a, ComponentSet c) const;
  bool headreach_holds(VarId a, VarId b, ComponentSet c) const;
};

/// Least fixpoint of the summary rules over a SEQ normal-form system.
AnnotatedRelations saturate(const Mbrs& ms);

/// Is some term X1...Xm.y (m >= 0) reachable from x through a derivation
/// with maximal exactly k? The null derivation gives (x,x,empty).
bool seq_reachable(const Mbrs& ms, const AnnotatedRelations& rel, VarId x, VarId y,
                   ComponentSet k);
bool seq_reachable(const Mbrs& ms, VarId x, VarId y, ComponentSet k);

/// All (y, k) with seq_reachable(x, y, k).
std::vector<std::pair<VarId, ComponentSet>> reachable_heads(const Mbrs& ms,
                                                            const AnnotatedRelations& rel,
                                                            VarId x);

/// Is there an infinite derivation from x with maximal = k and maximalInf
/// = kw? Decomposes infinite runs into a headreach prefix plus a pumpable
/// head cycle; false outright when kw is not a subset of k.
bool seq_buchi(const Mbrs& ms, const AnnotatedRelations& rel, VarId x, ComponentSet k,
               ComponentSet kw);
bool seq_buchi(const Mbrs& ms, VarId x, ComponentSet k, ComponentSet kw);

}  // namespace prs

#endif
