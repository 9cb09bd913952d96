#ifndef PRS_ALTL_HPP
#define PRS_ALTL_HPP

#include <cstdint>
#include <memory>
#include <vector>

#include "prs/mbrs.hpp"
#include "prs/verdict.hpp"

namespace prs {

// Propositional action formulas ---------------------------------------------

class PropFormula;
using PropPtr = std::shared_ptr<const PropFormula>;

class PropFormula {
public:
  enum class Kind : std::uint8_t { Act, And, Not, True };

  Kind kind() const { return kind_; }
  std::uint32_t action() const { return action_; }
  const PropPtr& left() const { return left_; }
  const PropPtr& right() const { return right_; }

  static PropPtr act(std::uint32_t a);
  static PropPtr conj(PropPtr a, PropPtr b);
  static PropPtr neg(PropPtr a);
  static const PropPtr& truth();

private:
  Kind kind_ = Kind::True;
  std::uint32_t action_ = 0;
  PropPtr left_, right_;
};

bool equal(const PropPtr& a, const PropPtr& b);

/// Subset of the alphabet denoted by a propositional formula, as a bitmask
/// over action indices. Requires |Sigma| <= 64.
std::uint64_t prop_denotation(const PropPtr& p, const Mbrs& m);

/// Rules whose (named) action satisfies the formula. Rules with structured
/// or silent labels never satisfy a propositional formula.
std::vector<RuleRef> ac_rules(const Mbrs& m, const PropPtr& p);

// The temporal fragment -----------------------------------------------------

class FragmentFormula;
using FragPtr = std::shared_ptr<const FragmentFormula>;

class FragmentFormula {
public:
  enum class Kind : std::uint8_t { F, GF, Not, And };

  Kind kind() const { return kind_; }
  const PropPtr& prop() const { return prop_; }    // F / GF
  const FragPtr& left() const { return left_; }    // Not / And
  const FragPtr& right() const { return right_; }  // And

  static FragPtr ev(PropPtr p);       // F p
  static FragPtr inf_often(PropPtr p);  // GF p
  static FragPtr neg(FragPtr f);
  static FragPtr conj(FragPtr a, FragPtr b);

private:
  Kind kind_ = Kind::F;
  PropPtr prop_;
  FragPtr left_, right_;
};

/// One disjunct of the normal form of a negated fragment formula:
/// conjunction of finitely-but-at-least-once constraints (F+), recurrence
/// constraints (GF) and one global constraint (G).
struct Disjunct {
  std::vector<PropPtr> fplus;
  std::vector<PropPtr> gf;
  PropPtr g;  // defaults to true
};

/// Acceptance query produced from a disjunct: an MBRS with m1+m2+1
/// components and the matching (K, Kw) pair.
struct McQuery {
  Mbrs mbrs;
  ComponentSet k;
  ComponentSet kw;
};

/// Negates `phi`, pushes negation inward, expands F and FG through F+, and
/// returns the disjuncts of the resulting normal form. An infinite run
/// satisfies !phi iff it satisfies some returned disjunct. Unsatisfiable
/// disjuncts are dropped; if the disjunction is a tautology over infinite
/// runs a single all-true disjunct is returned.
std::vector<Disjunct> negate_to_dnf(const FragPtr& phi, const Mbrs& m);

McQuery disjunct_to_query(const Mbrs& m, const Disjunct& d);

/// Semantic evaluation of a disjunct / formula on the action profile of an
/// infinite run: `occurring` are the actions seen at least once, `recurring`
/// those seen infinitely often.
bool disjunct_satisfied(const Disjunct& d, const Mbrs& m, std::uint64_t occurring,
                        std::uint64_t recurring);
bool formula_satisfied(const FragPtr& f, const Mbrs& m, std::uint64_t occurring,
                       std::uint64_t recurring);

struct McResult {
  Verdict verdict;  // Yes = formula holds on all infinite runs
  std::vector<Disjunct> disjuncts;
  std::vector<Verdict> per_disjunct;  // acceptance verdict per disjunct
  int violating = -1;                 // index of a Yes disjunct, if any
};

/// Model checking restricted to infinite runs: holds iff no infinite run
/// from `t` satisfies any disjunct of the negated formula.
McResult model_check_inf(const Mbrs& m, const TermPtr& t, const FragPtr& phi,
                         const SearchBudget& budget = {});

}  // namespace prs

#endif
