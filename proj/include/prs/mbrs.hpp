#ifndef PRS_MBRS_HPP
#define PRS_MBRS_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "prs/term.hpp"

namespace prs {

/// Subset of the accepting components {1..n}, n <= 32.
struct ComponentSet {
  std::uint32_t bits = 0;

  static ComponentSet none() { return {}; }
  static ComponentSet single(int i) { return ComponentSet{1u << (i - 1)}; }
  static ComponentSet full(int n) {
    return ComponentSet{n == 32 ? ~0u : ((1u << n) - 1)};
  }

  bool contains(int i) const { return (bits >> (i - 1)) & 1u; }
  bool empty() const { return bits == 0; }
  int count() const { return __builtin_popcount(bits); }
  bool subset_of(ComponentSet o) const { return (bits & ~o.bits) == 0; }

  ComponentSet& add(int i) { bits |= 1u << (i - 1); return *this; }
  friend ComponentSet operator|(ComponentSet a, ComponentSet b) {
    return ComponentSet{a.bits | b.bits};
  }
  friend ComponentSet operator&(ComponentSet a, ComponentSet b) {
    return ComponentSet{a.bits & b.bits};
  }
  ComponentSet& operator|=(ComponentSet o) { bits |= o.bits; return *this; }
  friend bool operator==(ComponentSet a, ComponentSet b) { return a.bits == b.bits; }
  friend bool operator!=(ComponentSet a, ComponentSet b) { return a.bits != b.bits; }
  friend bool operator<(ComponentSet a, ComponentSet b) { return a.bits < b.bits; }

  std::vector<int> members() const;
  std::string str() const;  // "{1,3}"
};

/// Enumerates all subsets of `sup` (including the empty set and sup itself).
std::vector<ComponentSet> subsets_of(ComponentSet sup);

/// Transition label. Besides plain alphabet symbols, derived systems label
/// their added rules with one component set (collapsed finite subderivations)
/// or a pair (abstracted infinite subderivations); helper rules introduced by
/// normalization carry no observable action.
struct Action {
  enum class Kind : std::uint8_t { Symbol, CompSet, CompPair, Silent };

  Kind kind = Kind::Silent;
  std::uint32_t symbol = 0;  // index into Mbrs::actions, Kind::Symbol only
  ComponentSet k1, k2;

  static Action sym(std::uint32_t s) { return Action{Kind::Symbol, s, {}, {}}; }
  static Action comp_set(ComponentSet k) { return Action{Kind::CompSet, 0, k, {}}; }
  static Action comp_pair(ComponentSet k, ComponentSet kw) {
    return Action{Kind::CompPair, 0, k, kw};
  }
  static Action silent() { return Action{}; }

  friend bool operator==(const Action& a, const Action& b) {
    return a.kind == b.kind && a.symbol == b.symbol && a.k1 == b.k1 && a.k2 == b.k2;
  }
};

struct Rule {
  std::string id;
  TermPtr lhs;
  Action action;
  TermPtr rhs;
  ComponentSet comps;
};

using RuleRef = std::size_t;
using RuleSeq = std::vector<RuleRef>;

/// Ultimately periodic rule sequence prefix . cycle^omega.
struct Lasso {
  RuleSeq prefix;
  RuleSeq cycle;  // non-empty
};

enum class RuleShape {
  Par,   // X1||...||Xp -> Y1||...||Yq, p >= 1
  Seq,   // X -> Y.Z | X.Y -> Z | X -> Y | X -> eps
  Bad1,  // rhs is a parallel composition (rule not PAR)
  Bad2,  // lhs is a parallel composition with a sequential component
  Bad3,  // head of a sequential side is not a single variable
  Bad4,  // rhs = X.u where u is not a single variable
  Bad5,  // lhs = X.u where u is not a single variable
};

/// Multi Buechi Rewrite System: a PRS plus n accepting rule subsets.
struct Mbrs {
  std::vector<std::string> actions;  // named alphabet
  VarTable vars;
  int n_components = 0;
  std::vector<Rule> rules;

  std::uint32_t intern_action(const std::string& name);
  std::optional<std::uint32_t> find_action(const std::string& name) const;
  std::string action_str(const Action& a) const;

  const Rule& rule(RuleRef r) const {
    if (r >= rules.size()) throw std::out_of_range("unknown rule");
    return rules[r];
  }
  std::optional<RuleRef> rule_by_id(const std::string& id) const;

  void check_component_bounds() const;
};

// Operations ----------------------------------------------------------------

/// Components whose rules occur at least once in sigma.
ComponentSet maximal(const Mbrs& m, std::span<const RuleRef> sigma);
inline ComponentSet maximal(const Mbrs& m, const RuleSeq& sigma) {
  return maximal(m, std::span<const RuleRef>(sigma));
}

/// Components occurring infinitely often in prefix . cycle^omega.
ComponentSet maximal_inf(const Mbrs& m, const Lasso& l);

/// maximal of the whole lasso, prefix plus cycle.
ComponentSet maximal_of_lasso(const Mbrs& m, const Lasso& l);

RuleShape classify_rule(const Rule& r);
inline bool is_normal_shape(RuleShape s) {
  return s == RuleShape::Par || s == RuleShape::Seq;
}
bool is_normal_form(const Mbrs& m);
bool is_parallel(const Mbrs& m);   // all rules PAR
bool is_sequential(const Mbrs& m); // all rules of SEQ shape

/// One-step successors of a canonical term under the LTS inference rules,
/// deduplicated on (rule, successor).
std::vector<std::pair<RuleRef, TermPtr>> step(const Mbrs& m, const TermPtr& t);

/// Does rule sequence sigma replay from t (under some choice of redexes)?
/// Returns a reachable end term on success.
std::optional<TermPtr> replay(const Mbrs& m, TermPtr t, std::span<const RuleRef> sigma);

/// All merge orders of finitely many finite sequences (test utility).
std::vector<RuleSeq> interleavings(const std::vector<RuleSeq>& seqs);

}  // namespace prs

#endif
