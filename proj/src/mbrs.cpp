#include "prs/mbrs.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace prs {

std::vector<int> ComponentSet::members() const {
  std::vector<int> out;
  for (int i = 1; i <= 32; ++i)
    if (contains(i)) out.push_back(i);
  return out;
}

std::string ComponentSet::str() const {
  std::string s = "{";
  bool first = true;
  for (int i : members()) {
    if (!first) s += ",";
    s += std::to_string(i);
    first = false;
  }
  return s + "}";
}

std::vector<ComponentSet> subsets_of(ComponentSet sup) {
  std::vector<ComponentSet> out;
  std::uint32_t m = sup.bits;
  std::uint32_t sub = 0;
  while (true) {
    out.push_back(ComponentSet{sub});
    if (sub == m) break;
    sub = (sub - m) & m;  // next subset in increasing order of bit pattern
  }
  std::sort(out.begin(), out.end(), [](ComponentSet a, ComponentSet b) {
    return a.count() != b.count() ? a.count() < b.count() : a.bits < b.bits;
  });
  return out;
}

std::uint32_t Mbrs::intern_action(const std::string& name) {
  for (std::size_t i = 0; i < actions.size(); ++i)
    if (actions[i] == name) return static_cast<std::uint32_t>(i);
  actions.push_back(name);
  return static_cast<std::uint32_t>(actions.size() - 1);
}

std::optional<std::uint32_t> Mbrs::find_action(const std::string& name) const {
  for (std::size_t i = 0; i < actions.size(); ++i)
    if (actions[i] == name) return static_cast<std::uint32_t>(i);
  return std::nullopt;
}

std::string Mbrs::action_str(const Action& a) const {
  switch (a.kind) {
    case Action::Kind::Symbol:
      return actions.at(a.symbol);
    case Action::Kind::CompSet:
      return "[" + a.k1.str() + "]";
    case Action::Kind::CompPair:
      return "[" + a.k1.str() + "," + a.k2.str() + "]";
    case Action::Kind::Silent:
      return "tau";
  }
  return "?";
}

std::optional<RuleRef> Mbrs::rule_by_id(const std::string& id) const {
  for (std::size_t i = 0; i < rules.size(); ++i)
    if (rules[i].id == id) return i;
  return std::nullopt;
}

void Mbrs::check_component_bounds() const {
  ComponentSet all = ComponentSet::full(n_components);
  for (const auto& r : rules)
    if (!r.comps.subset_of(all))
      throw std::invalid_argument("rule '" + r.id + "' uses component beyond n");
}

ComponentSet maximal(const Mbrs& m, std::span<const RuleRef> sigma) {
  ComponentSet out;
  for (RuleRef r : sigma) out |= m.rule(r).comps;
  return out;
}

ComponentSet maximal_inf(const Mbrs& m, const Lasso& l) {
  if (l.cycle.empty()) throw std::invalid_argument("lasso cycle must be non-empty");
  return maximal(m, l.cycle);
}

ComponentSet maximal_of_lasso(const Mbrs& m, const Lasso& l) {
  return maximal(m, l.prefix) | maximal_inf(m, l);
}

namespace {

bool is_seq_of_two_vars(const Term& t) {
  return t.is_seq() && t.head()->is_variable() && t.tail()->is_variable();
}

}  // namespace

RuleShape classify_rule(const Rule& r) {
  const Term& l = *r.lhs;
  const Term& h = *r.rhs;
  if (l.is_empty()) throw std::invalid_argument("rule lhs must not be empty");

  if (is_var_par(l) && (h.is_empty() || is_var_par(h))) return RuleShape::Par;
  if (l.is_variable() &&
      (h.is_empty() || h.is_variable() || is_seq_of_two_vars(h)))
    return RuleShape::Seq;
  if (is_seq_of_two_vars(l) && h.is_variable()) return RuleShape::Seq;

  // lhs is a parallel composition with a sequential component
  if (l.is_par() && !is_var_par(l)) return RuleShape::Bad2;
  // rhs is a parallel composition (and the rule is not a PAR rule)
  if (h.is_par()) return RuleShape::Bad1;
  // the head of a sequential side is not a single variable
  if (h.is_seq() && !h.head()->is_variable()) return RuleShape::Bad3;
  if (l.is_seq() && !l.head()->is_variable()) return RuleShape::Bad3;
  // rhs = X.u; covers u not a variable and the leftover
  // combinations with a non-variable lhs
  if (h.is_seq()) return RuleShape::Bad4;
  // lhs = X.u with u not a variable, or the leftover X.Y -> eps
  if (l.is_seq()) return RuleShape::Bad5;
  throw std::logic_error("unclassifiable rule");
}

bool is_normal_form(const Mbrs& m) {
  for (const auto& r : m.rules)
    if (!is_normal_shape(classify_rule(r))) return false;
  return true;
}

bool is_parallel(const Mbrs& m) {
  for (const auto& r : m.rules)
    if (classify_rule(r) != RuleShape::Par) return false;
  return true;
}

bool is_sequential(const Mbrs& m) {
  for (const auto& r : m.rules) {
    RuleShape s = classify_rule(r);
    if (s == RuleShape::Seq) continue;
    // X -> Y, X -> eps are both PAR and SEQ shaped
    if (s == RuleShape::Par && r.lhs->is_variable() && !r.rhs->is_par()) continue;
    return false;
  }
  return true;
}

namespace {

// Removes one occurrence of each element of `pat` from `pool` (both sorted
// canonical multisets). Returns false if `pat` is not a sub-multiset.
bool multiset_remove(std::vector<TermPtr>& pool, const std::vector<TermPtr>& pat) {
  for (const auto& p : pat) {
    auto it = std::find_if(pool.begin(), pool.end(),
                           [&](const TermPtr& q) { return equal(p, q); });
    if (it == pool.end()) return false;
    pool.erase(it);
  }
  return true;
}

struct SuccLess {
  bool operator()(const std::pair<RuleRef, TermPtr>& a,
                  const std::pair<RuleRef, TermPtr>& b) const {
    if (a.first != b.first) return a.first < b.first;
    return compare(a.second, b.second) < 0;
  }
};

using SuccSet = std::set<std::pair<RuleRef, TermPtr>, SuccLess>;

void successors(const Mbrs& m, const TermPtr& t, SuccSet& out) {
  for (RuleRef i = 0; i < m.rules.size(); ++i) {
    const Rule& r = m.rules[i];
    if (equal(t, r.lhs)) out.emplace(i, r.rhs);
  }
  switch (t->kind()) {
    case Term::Kind::Empty:
    case Term::Kind::Variable:
      break;
    case Term::Kind::Par: {
      const auto& cs = t->parts();
      // rewrite a top-level sub-multiset equal to some lhs
      for (RuleRef i = 0; i < m.rules.size(); ++i) {
        const Rule& r = m.rules[i];
        std::vector<TermPtr> atoms = par_atoms(r.lhs);
        if (atoms.empty() || atoms.size() > cs.size()) continue;
        std::vector<TermPtr> rest = cs;
        if (!multiset_remove(rest, atoms)) continue;
        rest.push_back(r.rhs);
        out.emplace(i, Term::par(std::move(rest)));
      }
      // rewrite inside a sequential component
      for (std::size_t j = 0; j < cs.size(); ++j) {
        if (!cs[j]->is_seq()) continue;
        SuccSet inner;
        successors(m, cs[j], inner);
        for (const auto& [ref, c2] : inner) {
          std::vector<TermPtr> rest;
          for (std::size_t k2 = 0; k2 < cs.size(); ++k2)
            if (k2 != j) rest.push_back(cs[k2]);
          rest.push_back(c2);
          out.emplace(ref, Term::par(std::move(rest)));
        }
      }
      break;
    }
    case Term::Kind::Seq: {
      // only the suffix rewrites
      SuccSet inner;
      successors(m, t->tail(), inner);
      for (const auto& [ref, u2] : inner)
        out.emplace(ref, Term::seq(t->head(), u2));
      break;
    }
  }
}

}  // namespace

std::vector<std::pair<RuleRef, TermPtr>> step(const Mbrs& m, const TermPtr& t) {
  SuccSet out;
  successors(m, t, out);
  return {out.begin(), out.end()};
}

std::optional<TermPtr> replay(const Mbrs& m, TermPtr t, std::span<const RuleRef> sigma) {
  std::set<TermPtr, TermPtrLess> current{std::move(t)};
  for (RuleRef r : sigma) {
    std::set<TermPtr, TermPtrLess> next;
    for (const auto& u : current)
      for (const auto& [ref, v] : step(m, u))
        if (ref == r) next.insert(v);
    if (next.empty()) return std::nullopt;
    current = std::move(next);
  }
  return *current.begin();
}

namespace {

void interleave_rec(const std::vector<RuleSeq>& seqs, std::vector<std::size_t>& pos,
                    RuleSeq& acc, std::set<RuleSeq>& out) {
  bool done = true;
  for (std::size_t h = 0; h < seqs.size(); ++h) {
    if (pos[h] < seqs[h].size()) {
      done = false;
      acc.push_back(seqs[h][pos[h]]);
      ++pos[h];
      interleave_rec(seqs, pos, acc, out);
      --pos[h];
      acc.pop_back();
    }
  }
  if (done) out.insert(acc);
}

}  // namespace

std::vector<RuleSeq> interleavings(const std::vector<RuleSeq>& seqs) {
  std::set<RuleSeq> out;
  std::vector<std::size_t> pos(seqs.size(), 0);
  RuleSeq acc;
  interleave_rec(seqs, pos, acc, out);
  return {out.begin(), out.end()};
}

}  // namespace prs
