#include "prs/normalize.hpp"

#include <algorithm>

namespace prs {

namespace {

int weight(const TermPtr& t) {
  switch (t->kind()) {
    case Term::Kind::Empty:
    case Term::Kind::Variable:
      return 1;
    case Term::Kind::Par: {
      int w = 0;
      for (const auto& c : t->parts()) w += weight(c);
      return w;
    }
    case Term::Kind::Seq:
      return weight(t->head()) + weight(t->tail());
  }
  return 1;
}

int weight(const Rule& r) { return weight(r.lhs) + weight(r.rhs); }

bool multiset_remove(std::vector<TermPtr>& pool, const std::vector<TermPtr>& pat) {
  std::vector<TermPtr> saved = pool;
  for (const auto& p : pat) {
    auto it = std::find_if(pool.begin(), pool.end(),
                           [&](const TermPtr& q) { return equal(p, q); });
    if (it == pool.end()) {
      pool = saved;
      return false;
    }
    pool.erase(it);
  }
  return true;
}

/// Syntactic replacement of every occurrence of a parallel pattern,
/// including occurrences in head position and as sub-multisets.
TermPtr replace_everywhere(const TermPtr& t, const TermPtr& pat, const TermPtr& z) {
  if (equal(t, pat)) return z;
  switch (t->kind()) {
    case Term::Kind::Empty:
    case Term::Kind::Variable:
      return t;
    case Term::Kind::Seq:
      return Term::seq(replace_everywhere(t->head(), pat, z),
                       replace_everywhere(t->tail(), pat, z));
    case Term::Kind::Par: {
      std::vector<TermPtr> cs;
      cs.reserve(t->parts().size());
      for (const auto& c : t->parts()) cs.push_back(replace_everywhere(c, pat, z));
      TermPtr reb = Term::par(std::move(cs));
      if (!reb->is_par()) return equal(reb, pat) ? z : reb;
      std::vector<TermPtr> pool = reb->parts();
      std::vector<TermPtr> atoms = par_atoms(pat);
      int hits = 0;
      while (atoms.size() <= pool.size() && multiset_remove(pool, atoms)) ++hits;
      if (hits == 0) return reb;
      for (int i = 0; i < hits; ++i) pool.push_back(z);
      return Term::par(std::move(pool));
    }
  }
  return t;
}

struct Work {
  Mbrs m;
  std::vector<bool> aux;
  NormalizationResult* out;
  int fresh_counter = 0;

  VarId fresh_var(const char* stem) {
    VarId v = m.vars.fresh(std::string(stem) + std::to_string(fresh_counter++));
    out->fresh_vars.insert(m.vars.name(v));
    return v;
  }

  std::string fresh_id(const std::string& base) {
    std::string id = base;
    while (m.rule_by_id(id)) id += "'";
    return id;
  }
};

}  // namespace

std::pair<Mbrs, VarId> add_entry_rule(const Mbrs& m, const TermPtr& t) {
  if (t->is_empty()) throw std::invalid_argument("initial term must not be eps");
  if (t->is_variable()) return {m, t->var()};
  Mbrs out = m;
  VarId x0 = out.vars.fresh("X0");
  Rule r;
  r.id = "entry";
  while (out.rule_by_id(r.id)) r.id += "'";
  r.lhs = Term::variable(x0);
  r.action = Action::silent();
  r.rhs = t;
  r.comps = ComponentSet::none();
  out.rules.push_back(std::move(r));
  return {out, x0};
}

NormalizationResult normalize(const Mbrs& m) {
  NormalizationResult res;
  Work w{m, std::vector<bool>(m.rules.size(), false), &res};

  std::size_t guard = 0;
  const std::size_t guard_max = 10000 + 1000 * (m.rules.size() + 1);
  while (true) {
    if (++guard > guard_max) throw std::logic_error("normalize: no fixpoint reached");
    std::size_t bad_idx = w.m.rules.size();
    RuleShape shape = RuleShape::Par;
    for (std::size_t i = 0; i < w.m.rules.size(); ++i) {
      RuleShape s = classify_rule(w.m.rules[i]);
      if (!is_normal_shape(s)) {
        bad_idx = i;
        shape = s;
        break;
      }
    }
    if (bad_idx == w.m.rules.size()) break;

    Rule r = w.m.rules[bad_idx];
    bool r_aux = w.aux[bad_idx];
    const int w_before = weight(r);
    CaseApplication app;
    app.removed = r.id;

    auto erase_rule = [&] {
      w.m.rules.erase(w.m.rules.begin() + bad_idx);
      w.aux.erase(w.aux.begin() + bad_idx);
    };
    std::vector<std::pair<Rule, bool>> added;  // rule, is_aux
    auto helper = [&](const std::string& id, TermPtr lhs, TermPtr rhs) {
      Rule h{w.fresh_id(id), std::move(lhs), Action::silent(), std::move(rhs),
             ComponentSet::none()};
      added.emplace_back(std::move(h), true);
    };
    auto primed = [&](TermPtr lhs, TermPtr rhs) {
      // carries the removed rule's label and components
      Rule p{w.fresh_id(r.id + "'"), std::move(lhs), r.action, std::move(rhs), r.comps};
      added.emplace_back(std::move(p), r_aux);
    };

    switch (shape) {
      case RuleShape::Bad1: {
        // u -> u1 || u2  becomes  u -> W, W -> Z1||Z2, Z1 -> u1, Z2 -> u2
        const auto& cs = r.rhs->parts();
        TermPtr u1 = cs[0];
        TermPtr u2 = Term::par({cs.begin() + 1, cs.end()});
        TermPtr wv = Term::variable(w.fresh_var("_W"));
        TermPtr z1 = Term::variable(w.fresh_var("_Z"));
        TermPtr z2 = Term::variable(w.fresh_var("_Z"));
        app.case_index = 1;
        erase_rule();
        primed(r.lhs, wv);
        helper(r.id + "_split", wv, Term::par({z1, z2}));
        helper(r.id + "_l", z1, u1);
        helper(r.id + "_r", z2, u2);
        break;
      }
      case RuleShape::Bad2: {
        // u1 || (u2.u3) -> u  becomes  u1 -> Z1, u2.u3 -> Z2, Z1||Z2 -> u
        const auto& cs = r.lhs->parts();
        std::size_t seq_at = 0;
        while (!cs[seq_at]->is_seq()) ++seq_at;
        TermPtr s = cs[seq_at];
        std::vector<TermPtr> rest;
        for (std::size_t i = 0; i < cs.size(); ++i)
          if (i != seq_at) rest.push_back(cs[i]);
        TermPtr u1 = Term::par(std::move(rest));
        TermPtr z1 = Term::variable(w.fresh_var("_Z"));
        TermPtr z2 = Term::variable(w.fresh_var("_Z"));
        app.case_index = 2;
        erase_rule();
        helper(r.id + "_l", u1, z1);
        helper(r.id + "_s", s, z2);
        primed(Term::par({z1, z2}), r.rhs);
        break;
      }
      case RuleShape::Bad3: {
        // a sequential side whose head u1 is a parallel composition:
        // substitute a fresh Z for u1 everywhere, add Z -> u1, u1 -> Z
        TermPtr u1 = (r.rhs->is_seq() && !r.rhs->head()->is_variable())
                         ? r.rhs->head()
                         : r.lhs->head();
        TermPtr z = Term::variable(w.fresh_var("_Z"));
        app.case_index = 3;
        for (std::size_t i = 0; i < w.m.rules.size(); ++i) {
          Rule& q = w.m.rules[i];
          int before = weight(q);
          q.lhs = replace_everywhere(q.lhs, u1, z);
          q.rhs = replace_everywhere(q.rhs, u1, z);
          if (weight(q) > before)
            throw std::logic_error("normalize: substitution increased a rule");
        }
        helper("mk" + w.m.vars.name(z->var()), z, u1);
        helper("un" + w.m.vars.name(z->var()), u1, z);
        break;
      }
      case RuleShape::Bad4: {
        // u -> X.u2  becomes  u -> W, W -> X.Z, Z -> u2
        TermPtr x = r.rhs->head();
        TermPtr u2 = r.rhs->tail();
        TermPtr wv = Term::variable(w.fresh_var("_W"));
        TermPtr z = Term::variable(w.fresh_var("_Z"));
        app.case_index = 4;
        erase_rule();
        primed(r.lhs, wv);
        helper(r.id + "_push", wv, Term::seq(x, z));
        helper(r.id + "_t", z, u2);
        break;
      }
      case RuleShape::Bad5: {
        app.case_index = 5;
        if (r.lhs->tail()->is_variable()) {
          // leftover X.Y -> eps  becomes  X.Y -> W, W -> eps
          TermPtr wv = Term::variable(w.fresh_var("_W"));
          erase_rule();
          primed(r.lhs, wv);
          helper(r.id + "_e", wv, Term::empty());
        } else {
          // X.u1 -> u  becomes  u1 -> Z, X.Z -> u
          TermPtr x = r.lhs->head();
          TermPtr u1 = r.lhs->tail();
          TermPtr z = Term::variable(w.fresh_var("_Z"));
          erase_rule();
          helper(r.id + "_t", u1, z);
          primed(Term::seq(x, z), r.rhs);
        }
        break;
      }
      default:
        throw std::logic_error("normalize: unexpected shape");
    }

    for (auto& [rule, is_aux] : added) {
      if (!is_normal_shape(classify_rule(rule)) && weight(rule) >= w_before)
        throw std::logic_error("normalize: termination measure did not decrease");
      app.added.push_back(rule.id);
      w.m.rules.push_back(std::move(rule));
      w.aux.push_back(is_aux);
    }
    res.trace.push_back(std::move(app));
  }

  // component n+1 collects every rule that simulates an original step
  const int n = w.m.n_components;
  w.m.n_components = n + 1;
  for (std::size_t i = 0; i < w.m.rules.size(); ++i) {
    if (w.aux[i])
      res.aux_rules.insert(w.m.rules[i].id);
    else
      w.m.rules[i].comps.add(n + 1);
  }
  res.mf = std::move(w.m);
  return res;
}

std::pair<ComponentSet, ComponentSet> lift_query(ComponentSet k, ComponentSet kw, int n) {
  if (!k.subset_of(ComponentSet::full(n)) || !kw.subset_of(ComponentSet::full(n)))
    throw std::invalid_argument("lift_query: sets exceed component count");
  k.add(n + 1);
  kw.add(n + 1);
  return {k, kw};
}

}  // namespace prs
