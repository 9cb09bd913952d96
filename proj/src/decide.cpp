#include "prs/decide.hpp"

#include <cassert>

namespace prs {

namespace {

std::uint64_t kkw_key(ComponentSet k, ComponentSet kw) {
  return std::uint64_t(k.bits) | (std::uint64_t(kw.bits) << 32);
}

bool is_push(const Rule& r) { return r.rhs->is_seq(); }
bool is_pair(const Rule& r) { return r.lhs->is_seq(); }

bool has_rule(const Mbrs& m, const TermPtr& lhs, const Action& a, const TermPtr& rhs) {
  for (const auto& r : m.rules)
    if (r.action == a && equal(r.lhs, lhs) && equal(r.rhs, rhs)) return true;
  return false;
}

std::string bits_tag(ComponentSet k) { return std::to_string(k.bits); }

}  // namespace

DecisionSession::DecisionSession(Mbrs m, SearchBudget budget)
    : m_(std::move(m)), budget_(budget) {
  budget_.validate();
  m_.check_component_bounds();
  if (!is_normal_form(m_))
    throw std::invalid_argument("decision session requires a normal-form system");
}

const BuiltParK& DecisionSession::par_k(ComponentSet k) {
  auto it = park_.find(k.bits);
  if (it != park_.end()) return it->second;

  BuiltParK b;
  b.tainted = false;
  b.sys.actions = m_.actions;
  b.sys.vars = m_.vars;
  b.sys.n_components = m_.n_components;
  b.zf = b.sys.vars.fresh("ZF", VarKind::SinkFinite);
  for (const auto& r : m_.rules)
    if (classify_rule(r) == RuleShape::Par) b.sys.rules.push_back(r);

  auto add = [&](const TermPtr& lhs, const TermPtr& rhs, ComponentSet kp,
                 const std::string& id) {
    Action a = Action::comp_set(kp);
    if (has_rule(b.sys, lhs, a, rhs)) return false;
    b.sys.rules.push_back(Rule{id, lhs, a, rhs, kp});
    return true;
  };

  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& r : m_.rules) {
      if (!is_push(r) || !r.comps.subset_of(k)) continue;
      TermPtr x = r.lhs;
      TermPtr y = r.rhs->head();
      VarId z = r.rhs->tail()->var();
      std::string xn = m_.vars.name(x->var());
      for (ComponentSet k1 : subsets_of(k)) {
        ComponentSet kp = k1 | r.comps;
        Verdict any = par_reach_exists(b.sys, z, k1, Target::any(), budget_);
        if (any.is_yes()) {
          if (add(x, Term::variable(b.zf), kp,
                  "pk_" + xn + "_ZF_" + bits_tag(kp)))
            changed = true;
        } else if (any.is_unknown()) {
          b.tainted = true;
        }
        Verdict emp = par_reach_exists(b.sys, z, k1, Target::empty(), budget_);
        if (emp.is_yes()) {
          if (add(x, y, kp,
                  "pk_" + xn + "_" + m_.vars.name(y->var()) + "_" + bits_tag(kp)))
            changed = true;
        } else if (emp.is_unknown()) {
          b.tainted = true;
        }
        for (const auto& rr : m_.rules) {
          if (!is_pair(rr) || !rr.comps.subset_of(k)) continue;
          if (rr.lhs->head()->var() != y->var()) continue;
          VarId w = rr.lhs->tail()->var();
          ComponentSet kp2 = k1 | r.comps | rr.comps;
          Verdict ex = par_reach_exists(b.sys, z, k1, Target::exact_var(w), budget_);
          if (ex.is_yes()) {
            if (add(x, rr.rhs, kp2,
                    "pk_" + xn + "_" + m_.vars.name(rr.rhs->var()) + "_" +
                        bits_tag(kp2)))
              changed = true;
          } else if (ex.is_unknown()) {
            b.tainted = true;
          }
        }
      }
    }
  }
  return park_.emplace(k.bits, std::move(b)).first->second;
}

const BuiltKkw& DecisionSession::par_kkw(ComponentSet k, ComponentSet kw) {
  auto it = kkw_.find(kkw_key(k, kw));
  if (it != kkw_.end()) return it->second;

  const BuiltParK& base = par_k(k);
  BuiltKkw b;
  b.tainted = base.tainted;
  b.mp1 = base.sys;
  b.zinf = b.mp1.vars.fresh("Zinf", VarKind::SinkInfinite);
  for (const auto& r : b.mp1.rules) b.rstar.insert(r.id);

  const int measure = k.count() + kw.count();
  struct Cand {
    ComponentSet f, i;
  };
  std::vector<Cand> cands;
  for (ComponentSet f : subsets_of(k))
    for (ComponentSet i : subsets_of(kw))
      if (i.subset_of(f) && f.count() + i.count() < measure) cands.push_back({f, i});
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    int ma = a.f.count() + a.i.count(), mb = b.f.count() + b.i.count();
    if (ma != mb) return ma < mb;
    if (a.f.bits != b.f.bits) return a.f.bits < b.f.bits;
    return a.i.bits < b.i.bits;
  });

  std::vector<ComponentSet> inf_comps(b.mp1.rules.size(), ComponentSet::none());
  for (const auto& r : m_.rules) {
    if (!is_push(r) || !r.comps.subset_of(k)) continue;
    VarId z = r.rhs->tail()->var();
    std::string xn = m_.vars.name(r.lhs->var());
    for (const Cand& c : cands) {
      ComponentSet kbar = c.f | r.comps;
      if (!kbar.subset_of(k)) continue;
      Verdict sub = decide(z, c.f, c.i);
      if (sub.is_unknown()) {
        b.tainted = true;
        continue;
      }
      if (!sub.is_yes()) continue;
      Action a = Action::comp_pair(kbar, c.i);
      if (has_rule(b.mp1, r.lhs, a, Term::variable(b.zinf))) continue;
      b.mp1.rules.push_back(Rule{"pinf_" + xn + "_" + bits_tag(kbar) + "_" +
                                     bits_tag(c.i),
                                 r.lhs, a, Term::variable(b.zinf), kbar});
      inf_comps.push_back(c.i);
    }
  }

  b.mp2 = b.mp1;
  for (std::size_t i = 0; i < b.mp2.rules.size(); ++i) b.mp2.rules[i].comps = inf_comps[i];
  return kkw_.emplace(kkw_key(k, kw), std::move(b)).first->second;
}

const BuiltSeqK& DecisionSession::seq_k(ComponentSet k) {
  auto it = seqk_.find(k.bits);
  if (it != seqk_.end()) return it->second;

  const BuiltParK& base = par_k(k);
  BuiltSeqK b;
  b.tainted = base.tainted;
  b.sys.actions = m_.actions;
  b.sys.vars = m_.vars;
  b.sys.n_components = m_.n_components;
  for (const auto& r : m_.rules)
    if (is_push(r)) b.sys.rules.push_back(r);

  for (VarId x : m_.vars.all()) {
    for (VarId y : m_.vars.all()) {
      for (ComponentSet kp : subsets_of(k)) {
        Verdict v = par_reach_exists(base.sys, x, kp, Target::covers(y), budget_);
        if (v.is_yes()) {
          b.sys.rules.push_back(Rule{"sq_" + m_.vars.name(x) + "_" + m_.vars.name(y) +
                                         "_" + bits_tag(kp),
                                     Term::variable(x), Action::comp_set(kp),
                                     Term::variable(y), kp});
        } else if (v.is_unknown()) {
          b.tainted = true;
        }
      }
    }
  }
  b.rel = saturate(b.sys);
  return seqk_.emplace(k.bits, std::move(b)).first->second;
}

Verdict DecisionSession::decide(VarId x, ComponentSet k, ComponentSet kw) {
  if (x.value >= m_.vars.size()) throw std::invalid_argument("unknown variable");
  if (!kw.subset_of(k)) return Verdict::no();

  const int measure = k.count() + kw.count();
  assert(measure_stack_.empty() || measure < measure_stack_.back());

  auto mkey = std::make_tuple(x.value, k.bits, kw.bits);
  if (auto it = memo_.find(mkey); it != memo_.end()) return it->second;

  measure_stack_.push_back(measure);
  const BuiltKkw& ext = par_kkw(k, kw);
  const BuiltSeqK& sk = seq_k(k);
  measure_stack_.pop_back();

  bool tainted = ext.tainted || sk.tainted;
  Verdict result = Verdict::no();
  for (const auto& [y, kp] : reachable_heads(sk.sys, sk.rel, x)) {
    if (!kp.subset_of(k)) continue;
    Verdict v = par_inf_exists(ext.mp1, ext.mp2, y, k, kw, ext.rstar, budget_);
    if (v.is_yes()) {
      result = std::move(v);
      break;
    }
    if (v.is_unknown()) tainted = true;
  }
  if (!result.is_yes() && k == kw && seq_buchi(sk.sys, sk.rel, x, k, kw))
    result = Verdict::yes();
  if (!result.is_yes() && tainted)
    result = Verdict::unknown("inconclusive bounded subquery");

  return memo_.emplace(mkey, std::move(result)).first->second;
}

}  // namespace prs
