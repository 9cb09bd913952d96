#include "prs/altl.hpp"

#include <algorithm>
#include <map>

#include "prs/decide.hpp"
#include "prs/normalize.hpp"

namespace prs {

// Propositional layer ---------------------------------------------------------

PropPtr PropFormula::act(std::uint32_t a) {
  auto p = std::make_shared<PropFormula>();
  p->kind_ = Kind::Act;
  p->action_ = a;
  return p;
}

PropPtr PropFormula::conj(PropPtr a, PropPtr b) {
  auto p = std::make_shared<PropFormula>();
  p->kind_ = Kind::And;
  p->left_ = std::move(a);
  p->right_ = std::move(b);
  return p;
}

PropPtr PropFormula::neg(PropPtr a) {
  auto p = std::make_shared<PropFormula>();
  p->kind_ = Kind::Not;
  p->left_ = std::move(a);
  return p;
}

const PropPtr& PropFormula::truth() {
  static const PropPtr t = std::make_shared<PropFormula>();
  return t;
}

bool equal(const PropPtr& a, const PropPtr& b) {
  if (a.get() == b.get()) return true;
  if (a->kind() != b->kind()) return false;
  switch (a->kind()) {
    case PropFormula::Kind::True:
      return true;
    case PropFormula::Kind::Act:
      return a->action() == b->action();
    case PropFormula::Kind::Not:
      return equal(a->left(), b->left());
    case PropFormula::Kind::And:
      return equal(a->left(), b->left()) && equal(a->right(), b->right());
  }
  return false;
}

std::uint64_t prop_denotation(const PropPtr& p, const Mbrs& m) {
  std::size_t n = m.actions.size();
  if (n > 64) throw std::invalid_argument("alphabet too large for denotations");
  std::uint64_t full = n == 64 ? ~0ull : ((1ull << n) - 1);
  switch (p->kind()) {
    case PropFormula::Kind::True:
      return full;
    case PropFormula::Kind::Act:
      if (p->action() >= n) throw std::invalid_argument("unknown action in formula");
      return 1ull << p->action();
    case PropFormula::Kind::Not:
      return full & ~prop_denotation(p->left(), m);
    case PropFormula::Kind::And:
      return prop_denotation(p->left(), m) & prop_denotation(p->right(), m);
  }
  return 0;
}

std::vector<RuleRef> ac_rules(const Mbrs& m, const PropPtr& p) {
  std::uint64_t d = prop_denotation(p, m);
  std::vector<RuleRef> out;
  for (RuleRef i = 0; i < m.rules.size(); ++i) {
    const Action& a = m.rules[i].action;
    if (a.kind == Action::Kind::Symbol && ((d >> a.symbol) & 1)) out.push_back(i);
  }
  return out;
}

// Fragment layer --------------------------------------------------------------

FragPtr FragmentFormula::ev(PropPtr p) {
  auto f = std::make_shared<FragmentFormula>();
  f->kind_ = Kind::F;
  f->prop_ = std::move(p);
  return f;
}

FragPtr FragmentFormula::inf_often(PropPtr p) {
  auto f = std::make_shared<FragmentFormula>();
  f->kind_ = Kind::GF;
  f->prop_ = std::move(p);
  return f;
}

FragPtr FragmentFormula::neg(FragPtr a) {
  auto f = std::make_shared<FragmentFormula>();
  f->kind_ = Kind::Not;
  f->left_ = std::move(a);
  return f;
}

FragPtr FragmentFormula::conj(FragPtr a, FragPtr b) {
  auto f = std::make_shared<FragmentFormula>();
  f->kind_ = Kind::And;
  f->left_ = std::move(a);
  f->right_ = std::move(b);
  return f;
}

// Normal form -----------------------------------------------------------------

namespace {

std::string prop_key(const PropPtr& p) {
  switch (p->kind()) {
    case PropFormula::Kind::True:
      return "T";
    case PropFormula::Kind::Act:
      return "a" + std::to_string(p->action());
    case PropFormula::Kind::Not:
      return "!(" + prop_key(p->left()) + ")";
    case PropFormula::Kind::And:
      return "(" + prop_key(p->left()) + "&" + prop_key(p->right()) + ")";
  }
  return "?";
}

std::string disjunct_key(const Disjunct& d) {
  std::vector<std::string> fp, gf;
  for (const auto& p : d.fplus) fp.push_back(prop_key(p));
  for (const auto& p : d.gf) gf.push_back(prop_key(p));
  std::sort(fp.begin(), fp.end());
  std::sort(gf.begin(), gf.end());
  std::string out = "F+";
  for (auto& s : fp) out += s + ";";
  out += "GF";
  for (auto& s : gf) out += s + ";";
  return out + "G" + prop_key(d.g);
}

std::vector<Disjunct> dnf(const FragPtr& f, bool positive) {
  switch (f->kind()) {
    case FragmentFormula::Kind::F:
      if (positive)
        return {Disjunct{{f->prop()}, {}, PropFormula::truth()},
                Disjunct{{}, {f->prop()}, PropFormula::truth()}};
      return {Disjunct{{}, {}, PropFormula::neg(f->prop())}};
    case FragmentFormula::Kind::GF:
      if (positive) return {Disjunct{{}, {f->prop()}, PropFormula::truth()}};
      // !GF p == FG !p == F+ p | G !p
      return {Disjunct{{f->prop()}, {}, PropFormula::truth()},
              Disjunct{{}, {}, PropFormula::neg(f->prop())}};
    case FragmentFormula::Kind::Not:
      return dnf(f->left(), !positive);
    case FragmentFormula::Kind::And: {
      if (!positive) {
        auto l = dnf(f->left(), false);
        auto r = dnf(f->right(), false);
        l.insert(l.end(), r.begin(), r.end());
        return l;
      }
      std::vector<Disjunct> out;
      for (const Disjunct& a : dnf(f->left(), true))
        for (const Disjunct& b : dnf(f->right(), true)) {
          Disjunct d = a;
          d.fplus.insert(d.fplus.end(), b.fplus.begin(), b.fplus.end());
          d.gf.insert(d.gf.end(), b.gf.begin(), b.gf.end());
          bool at = a.g->kind() == PropFormula::Kind::True;
          bool bt = b.g->kind() == PropFormula::Kind::True;
          d.g = at ? b.g : bt ? a.g : PropFormula::conj(a.g, b.g);
          out.push_back(std::move(d));
        }
      return out;
    }
  }
  return {};
}

/// A disjunct constrains the action profile (O = occurring, I = recurring)
/// of an infinite run; satisfiable by some profile with I possibly empty
/// (runs of silent rules only) iff the three picks below all exist.
bool disjunct_profile_sat(const Disjunct& d, const Mbrs& m) {
  std::uint64_t a = prop_denotation(d.g, m);
  std::uint64_t banned = 0;
  for (const auto& p : d.fplus) banned |= prop_denotation(p, m);
  for (const auto& p : d.fplus)
    if ((a & prop_denotation(p, m)) == 0) return false;
  for (const auto& p : d.gf)
    if ((a & prop_denotation(p, m) & ~banned) == 0) return false;
  return true;
}

}  // namespace

bool disjunct_satisfied(const Disjunct& d, const Mbrs& m, std::uint64_t occurring,
                        std::uint64_t recurring) {
  if ((occurring & ~prop_denotation(d.g, m)) != 0) return false;
  for (const auto& p : d.fplus) {
    std::uint64_t dn = prop_denotation(p, m);
    if ((occurring & dn) == 0 || (recurring & dn) != 0) return false;
  }
  for (const auto& p : d.gf)
    if ((recurring & prop_denotation(p, m)) == 0) return false;
  return true;
}

bool formula_satisfied(const FragPtr& f, const Mbrs& m, std::uint64_t occurring,
                       std::uint64_t recurring) {
  switch (f->kind()) {
    case FragmentFormula::Kind::F:
      return (occurring & prop_denotation(f->prop(), m)) != 0;
    case FragmentFormula::Kind::GF:
      return (recurring & prop_denotation(f->prop(), m)) != 0;
    case FragmentFormula::Kind::Not:
      return !formula_satisfied(f->left(), m, occurring, recurring);
    case FragmentFormula::Kind::And:
      return formula_satisfied(f->left(), m, occurring, recurring) &&
             formula_satisfied(f->right(), m, occurring, recurring);
  }
  return false;
}

std::vector<Disjunct> negate_to_dnf(const FragPtr& phi, const Mbrs& m) {
  std::vector<Disjunct> raw = dnf(phi, false);

  std::vector<Disjunct> out;
  std::set<std::string> seen;
  for (Disjunct& d : raw) {
    if (!disjunct_profile_sat(d, m)) continue;
    if (seen.insert(disjunct_key(d)).second) out.push_back(std::move(d));
  }

  // collapse a disjunction valid over every action profile to a single
  // unconstrained disjunct
  if (m.actions.size() <= 12 && !out.empty()) {
    std::uint64_t full = (1ull << m.actions.size()) - 1;
    bool valid = true;
    for (std::uint64_t o = 0; o <= full && valid; ++o) {
      for (std::uint64_t i = o;; i = (i - 1) & o) {
        bool sat = false;
        for (const Disjunct& d : out)
          if (disjunct_satisfied(d, m, o, i)) {
            sat = true;
            break;
          }
        if (!sat) {
          valid = false;
          break;
        }
        if (i == 0) break;
      }
    }
    if (valid) return {Disjunct{{}, {}, PropFormula::truth()}};
  }
  return out;
}

McQuery disjunct_to_query(const Mbrs& m, const Disjunct& d) {
  McQuery q;
  q.mbrs = m;
  const int m1 = int(d.fplus.size());
  const int m2 = int(d.gf.size());
  q.mbrs.n_components = m1 + m2 + 1;
  if (q.mbrs.n_components > 32)
    throw std::invalid_argument("too many conjuncts for component encoding");
  for (auto& r : q.mbrs.rules) r.comps = ComponentSet::none();
  auto assign = [&](const PropPtr& p, int comp) {
    for (RuleRef r : ac_rules(m, p)) q.mbrs.rules[r].comps.add(comp);
  };
  for (int i = 0; i < m1; ++i) assign(d.fplus[i], i + 1);
  for (int j = 0; j < m2; ++j) assign(d.gf[j], m1 + j + 1);
  assign(PropFormula::neg(d.g), m1 + m2 + 1);
  for (int i = 1; i <= m1 + m2; ++i) q.k.add(i);
  for (int j = m1 + 1; j <= m1 + m2; ++j) q.kw.add(j);
  return q;
}

McResult model_check_inf(const Mbrs& m, const TermPtr& t, const FragPtr& phi,
                         const SearchBudget& budget) {
  McResult res;
  res.disjuncts = negate_to_dnf(phi, m);
  bool unknown = false;
  for (std::size_t i = 0; i < res.disjuncts.size(); ++i) {
    McQuery q = disjunct_to_query(m, res.disjuncts[i]);
    auto [entry_sys, x0] = add_entry_rule(q.mbrs, t);
    NormalizationResult nf = normalize(entry_sys);
    auto [k, kw] = lift_query(q.k, q.kw, q.mbrs.n_components);
    DecisionSession session(nf.mf, budget);
    Verdict v = session.decide(x0, k, kw);
    if (v.is_yes() && res.violating < 0) res.violating = int(i);
    if (v.is_unknown()) unknown = true;
    res.per_disjunct.push_back(std::move(v));
  }
  if (res.violating >= 0)
    res.verdict = Verdict::no();
  else if (unknown)
    res.verdict = Verdict::unknown("inconclusive disjunct");
  else
    res.verdict = Verdict::yes();
  return res;
}

}  // namespace prs
