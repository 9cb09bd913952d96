#include "prs/parallel.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <optional>
#include <set>

namespace prs {

namespace {

constexpr std::uint32_t kOmega = ~0u;

/// Annotation carried through the searches: packed used-component sets plus
/// a flag lane. Joins are bitwise.
struct Ctrl {
  std::uint64_t sets = 0;
  std::uint64_t flag = 0;

  friend Ctrl operator|(Ctrl a, Ctrl b) { return {a.sets | b.sets, a.flag | b.flag}; }
  friend bool operator==(Ctrl a, Ctrl b) { return a.sets == b.sets && a.flag == b.flag; }
  friend bool operator<(Ctrl a, Ctrl b) {
    return a.sets != b.sets ? a.sets < b.sets : a.flag < b.flag;
  }
};

Ctrl pack(ComponentSet u1, ComponentSet u2, bool esc) {
  return {std::uint64_t(u1.bits) | (std::uint64_t(u2.bits) << 32), esc ? 1u : 0u};
}

struct PRule {
  RuleRef idx;
  Marking take, give;
  Ctrl ctrl;
};

Marking marking_of_checked(const Mbrs& m, const TermPtr& t) {
  Marking mk(m.vars.size(), 0);
  for (const auto& a : par_atoms(t)) {
    if (!a->is_variable()) throw std::invalid_argument("term is not purely parallel");
    mk.at(a->var().value)++;
  }
  return mk;
}

std::uint64_t tokens(const Marking& m) {
  std::uint64_t n = 0;
  for (auto c : m)
    if (c != kOmega) n += c;
  return n;
}

bool enabled(const Marking& m, const Marking& take) {
  for (std::size_t i = 0; i < m.size(); ++i)
    if (m[i] != kOmega && m[i] < take[i]) return false;
  return true;
}

Marking fire(const Marking& m, const PRule& r) {
  Marking out = m;
  for (std::size_t i = 0; i < m.size(); ++i)
    if (out[i] != kOmega) out[i] = out[i] - r.take[i] + r.give[i];
  return out;
}

bool leq(const Marking& a, const Marking& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == kOmega && b[i] != kOmega) return false;
    if (a[i] != kOmega && b[i] != kOmega && a[i] > b[i]) return false;
  }
  return true;
}

void check_parallel(const Mbrs& m) {
  for (const auto& r : m.rules)
    if (classify_rule(r) != RuleShape::Par)
      throw std::invalid_argument("rule '" + r.id + "' is not a PAR rule");
}

std::vector<PRule> prule_view(const Mbrs& m, ComponentSet allow1, ComponentSet allow2,
                              const std::set<std::string>* rstar, const Mbrs* m2) {
  std::vector<PRule> out;
  for (RuleRef i = 0; i < m.rules.size(); ++i) {
    const Rule& r = m.rules[i];
    ComponentSet c1 = r.comps;
    ComponentSet c2 = m2 ? m2->rules[i].comps : ComponentSet::none();
    if (!c1.subset_of(allow1) || !c2.subset_of(allow2)) continue;
    bool esc = rstar && !rstar->count(r.id);
    PRule pr{i, marking_of_checked(m, r.lhs), marking_of_checked(m, r.rhs),
             pack(c1, c2, esc)};
    out.push_back(std::move(pr));
  }
  return out;
}

// Annotated coverability ------------------------------------------------------

struct KmResult {
  bool complete = true;
  std::set<Ctrl> controls;                          // any number of steps
  std::set<std::pair<std::uint32_t, Ctrl>> covers;  // var covered, any depth
  std::set<std::pair<std::uint32_t, Ctrl>> covers_plus;  // depth >= 1
  std::set<std::pair<Marking, Ctrl>> states;        // deduplicated nodes
  std::set<std::size_t> fired;                      // rule indices ever enabled
};

/// Karp-Miller style exploration over (marking, annotation) pairs with
/// omega-acceleration against ancestors. Every recorded annotation (and
/// cover) is realized by a concrete derivation with exactly that used set,
/// and every concrete derivation is recorded.
KmResult run_km(const std::vector<PRule>& rules, const Marking& start,
                std::size_t node_bound) {
  struct Node {
    Marking m;
    Ctrl c;
    int parent;
  };
  KmResult res;
  std::vector<Node> nodes{{start, Ctrl{}, -1}};
  std::set<std::pair<Marking, Ctrl>> seen{{start, Ctrl{}}};
  auto record = [&](const Node& n, bool plus) {
    res.controls.insert(n.c);
    for (std::size_t v = 0; v < n.m.size(); ++v)
      if (n.m[v] > 0) {
        res.covers.insert({std::uint32_t(v), n.c});
        if (plus) res.covers_plus.insert({std::uint32_t(v), n.c});
      }
  };
  record(nodes[0], false);
  std::deque<int> queue{0};
  while (!queue.empty()) {
    if (nodes.size() > node_bound) {
      res.complete = false;
      break;
    }
    int cur = queue.front();
    queue.pop_front();
    for (std::size_t ri = 0; ri < rules.size(); ++ri) {
      const PRule& r = rules[ri];
      if (!enabled(nodes[cur].m, r.take)) continue;
      res.fired.insert(ri);
      Node child{fire(nodes[cur].m, r), nodes[cur].c | r.ctrl, cur};
      // accelerate: any strictly grown coordinate w.r.t. a dominated
      // ancestor can be pumped without touching the used sets
      for (int a = cur; a != -1; a = nodes[a].parent) {
        if (!leq(nodes[a].m, child.m)) continue;
        for (std::size_t i = 0; i < child.m.size(); ++i)
          if (nodes[a].m[i] != kOmega && child.m[i] != kOmega &&
              child.m[i] > nodes[a].m[i])
            child.m[i] = kOmega;
      }
      record(child, true);
      if (seen.insert({child.m, child.c}).second) {
        nodes.push_back(child);
        queue.push_back(int(nodes.size()) - 1);
      }
    }
  }
  res.states = std::move(seen);
  return res;
}

// Rational feasibility --------------------------------------------------------

/// Feasibility of a system of linear constraints sum coeff*x + const >= 0
/// over the rationals, by Fourier-Motzkin elimination with exact integer
/// arithmetic. Returns nothing when the instance grows beyond desk scale.
std::optional<bool> fm_feasible(std::vector<std::vector<long long>> cons, int nvars) {
  constexpr std::size_t kMaxCons = 4000;
  auto reduce = [](std::vector<long long>& c) {
    long long g = 0;
    for (long long v : c) g = std::gcd(g, v < 0 ? -v : v);
    if (g > 1)
      for (auto& v : c) v /= g;
  };
  for (int x = 0; x < nvars; ++x) {
    std::vector<std::vector<long long>> pos, neg, rest;
    for (auto& c : cons) {
      if (c[x] > 0)
        pos.push_back(std::move(c));
      else if (c[x] < 0)
        neg.push_back(std::move(c));
      else
        rest.push_back(std::move(c));
    }
    cons = std::move(rest);
    for (const auto& p : pos)
      for (const auto& n : neg) {
        std::vector<long long> c(nvars + 1);
        for (int i = 0; i <= nvars; ++i) {
          __int128 v = __int128(p[x]) * n[i] - __int128(n[x]) * p[i];
          if (v > (__int128(1) << 62) || v < -(__int128(1) << 62)) return std::nullopt;
          c[i] = static_cast<long long>(v);
        }
        reduce(c);
        bool vacuous = true;
        for (int i = 0; i < nvars; ++i)
          if (c[i] != 0) vacuous = false;
        if (vacuous) {
          if (c[nvars] < 0) return false;
        } else {
          cons.push_back(std::move(c));
        }
        if (cons.size() > kMaxCons) return std::nullopt;
      }
    // one-sided constraints on x are satisfiable by choosing x; drop them
  }
  for (const auto& c : cons)
    if (c[nvars] < 0) return false;
  return true;
}

// Concrete bounded search -----------------------------------------------------

struct ConcreteResult {
  bool closed = true;
  std::optional<RuleSeq> witness;
};

/// Breadth-first exploration of exact (marking, annotation) states. The
/// predicate sees (marking, ctrl, depth); the first hit yields the rule path.
template <typename Pred>
ConcreteResult concrete_search(const std::vector<PRule>& rules, const Marking& start,
                               const SearchBudget& b, Pred&& hit) {
  struct Node {
    Marking m;
    Ctrl c;
    int parent;
    RuleRef via;
    int depth;
  };
  ConcreteResult res;
  std::vector<Node> nodes{{start, Ctrl{}, -1, 0, 0}};
  std::set<std::pair<Marking, Ctrl>> seen{{start, Ctrl{}}};
  auto path = [&](int i) {
    RuleSeq s;
    for (; nodes[i].parent != -1; i = nodes[i].parent) s.push_back(nodes[i].via);
    std::reverse(s.begin(), s.end());
    return s;
  };
  if (hit(nodes[0].m, nodes[0].c, 0)) {
    res.witness = RuleSeq{};
    return res;
  }
  std::deque<int> queue{0};
  while (!queue.empty()) {
    int cur = queue.front();
    queue.pop_front();
    if (nodes[cur].depth >= b.depth_bound) {
      res.closed = false;
      continue;
    }
    for (const PRule& r : rules) {
      if (!enabled(nodes[cur].m, r.take)) continue;
      Node child{fire(nodes[cur].m, r), nodes[cur].c | r.ctrl, cur, r.idx,
                 nodes[cur].depth + 1};
      nodes.push_back(child);
      int ci = int(nodes.size()) - 1;
      if (hit(child.m, child.c, child.depth)) {
        res.witness = path(ci);
        return res;
      }
      if (tokens(child.m) > std::uint64_t(b.size_bound)) {
        res.closed = false;
        nodes.pop_back();
        continue;
      }
      if (!seen.insert({child.m, child.c}).second) {
        nodes.pop_back();
        continue;
      }
      if (nodes.size() > b.node_bound) {
        res.closed = false;
        return res;
      }
      queue.push_back(ci);
    }
  }
  return res;
}

}  // namespace

Marking marking_of(const Mbrs& m, const TermPtr& t) { return marking_of_checked(m, t); }

TermPtr term_of(const Mbrs& m, const Marking& mk) {
  (void)m;
  std::vector<TermPtr> atoms;
  for (std::size_t v = 0; v < mk.size(); ++v) {
    if (mk[v] == kOmega) throw std::invalid_argument("omega marking has no term");
    for (std::uint32_t i = 0; i < mk[v]; ++i)
      atoms.push_back(Term::variable(VarId{std::uint32_t(v)}));
  }
  return Term::par(std::move(atoms));
}

Verdict par_reach_exists(const Mbrs& mp, VarId x, ComponentSet k, Target target,
                         const SearchBudget& budget) {
  budget.validate();
  check_parallel(mp);
  if (x.value >= mp.vars.size()) throw std::invalid_argument("unknown variable");
  auto rules = prule_view(mp, k, ComponentSet::full(32), nullptr, nullptr);
  Marking start(mp.vars.size(), 0);
  start[x.value] = 1;
  const Ctrl want = pack(k, {}, false);

  auto matches = [&](const Marking& m, Ctrl c, int depth) {
    if (!(c == want)) return false;
    switch (target.kind) {
      case Target::Kind::Any:
        return true;
      case Target::Kind::Covers:
        return depth >= 1 && m[target.var.value] >= 1;
      case Target::Kind::ExactVar:
        return tokens(m) == 1 && m[target.var.value] == 1;
      case Target::Kind::Empty:
        return tokens(m) == 0;
    }
    return false;
  };

  if (target.kind == Target::Kind::Any || target.kind == Target::Kind::Covers) {
    KmResult km = run_km(rules, start, budget.node_bound);
    bool hit = target.kind == Target::Kind::Any
                   ? km.controls.count(want) > 0
                   : km.covers_plus.count({target.var.value, want}) > 0;
    if (!hit) return km.complete ? Verdict::no() : Verdict::unknown("coverability budget exhausted");
    ConcreteResult c = concrete_search(rules, start, budget, matches);
    return c.witness ? Verdict::yes(std::move(*c.witness)) : Verdict::yes();
  }

  ConcreteResult c = concrete_search(rules, start, budget, matches);
  if (c.witness) return Verdict::yes(std::move(*c.witness));
  if (c.closed) return Verdict::no();
  // necessary condition via the exact coverability layer
  KmResult km = run_km(rules, start, budget.node_bound);
  if (km.complete) {
    if (target.kind == Target::Kind::Empty && !km.controls.count(want))
      return Verdict::no();
    if (target.kind == Target::Kind::ExactVar &&
        !km.covers.count({target.var.value, want}))
      return Verdict::no();
  }
  return Verdict::unknown("reachability budget exhausted");
}

Verdict par_inf_exists(const Mbrs& mp1, const Mbrs& mp2, VarId x, ComponentSet k,
                       ComponentSet kw, const std::set<std::string>& rstar,
                       const SearchBudget& budget) {
  budget.validate();
  check_parallel(mp1);
  if (mp1.rules.size() != mp2.rules.size())
    throw std::invalid_argument("mp1/mp2 rule lists differ");
  for (std::size_t i = 0; i < mp1.rules.size(); ++i)
    if (mp1.rules[i].id != mp2.rules[i].id || !equal(mp1.rules[i].lhs, mp2.rules[i].lhs) ||
        !equal(mp1.rules[i].rhs, mp2.rules[i].rhs))
      throw std::invalid_argument("mp1/mp2 rule lists differ");
  if (x.value >= mp1.vars.size()) throw std::invalid_argument("unknown variable");

  auto rules = prule_view(mp1, k, kw, &rstar, &mp2);
  Marking start(mp1.vars.size(), 0);
  start[x.value] = 1;
  const std::uint64_t want = pack(k, kw, false).sets;

  // Finite branch: a finite derivation escaping rstar with used sets
  // exactly (k, kw); maximalInf of a finite sequence is empty.
  auto finite_hit = [&](const Marking&, Ctrl c, int) {
    return c.sets == want && c.flag != 0;
  };
  KmResult km = run_km(rules, start, budget.node_bound);
  bool finite_yes = false;
  for (const Ctrl& c : km.controls)
    if (c.sets == want && c.flag != 0) finite_yes = true;
  if (finite_yes) {
    ConcreteResult c = concrete_search(rules, start, budget, finite_hit);
    return c.witness ? Verdict::yes(std::move(*c.witness)) : Verdict::yes();
  }

  // Infinite branch: prefix to a marking m, then a cycle back to some
  // m' >= m. With profile (u1,u2) of the prefix and (c1,c2) of the cycle,
  // the pumped run has maximal = u1|c1 and maximalInf = c1 | u2 | c2.
  struct Node {
    Marking m;
    Ctrl c;
    int parent;
    RuleRef via;
    int depth;
  };
  std::vector<Node> nodes{{start, Ctrl{}, -1, 0, 0}};
  std::map<std::pair<Marking, Ctrl>, int> seen{{{start, Ctrl{}}, 0}};
  std::map<Marking, std::vector<int>> by_marking{{start, {0}}};
  bool closed = true;
  std::size_t used_nodes = 1;
  std::deque<int> queue{0};
  while (!queue.empty()) {
    int cur = queue.front();
    queue.pop_front();
    if (nodes[cur].depth >= budget.depth_bound) {
      closed = false;
      continue;
    }
    for (const PRule& r : rules) {
      if (!enabled(nodes[cur].m, r.take)) continue;
      Node child{fire(nodes[cur].m, r), nodes[cur].c | r.ctrl, cur, r.idx,
                 nodes[cur].depth + 1};
      if (!finite_yes && km.complete == false && finite_hit(child.m, child.c, 0)) {
        // the exact layer could not rule the finite branch out; a concrete
        // hit settles it
        RuleSeq w;
        nodes.push_back(child);
        for (int i = int(nodes.size()) - 1; nodes[i].parent != -1; i = nodes[i].parent)
          w.push_back(nodes[i].via);
        std::reverse(w.begin(), w.end());
        return Verdict::yes(std::move(w));
      }
      if (tokens(child.m) > std::uint64_t(budget.size_bound)) {
        closed = false;
        continue;
      }
      auto key = std::make_pair(child.m, child.c);
      if (seen.count(key)) continue;
      if (++used_nodes > budget.node_bound) {
        closed = false;
        queue.clear();
        break;
      }
      nodes.push_back(child);
      int ci = int(nodes.size()) - 1;
      seen.emplace(std::move(key), ci);
      by_marking[child.m].push_back(ci);
      queue.push_back(ci);
    }
  }

  auto prefix_path = [&](int i) {
    RuleSeq s;
    for (; nodes[i].parent != -1; i = nodes[i].parent) s.push_back(nodes[i].via);
    std::reverse(s.begin(), s.end());
    return s;
  };

  bool cycles_closed = true;
  for (const auto& [base, members] : by_marking) {
    // one cycle search per base marking, checked against every prefix
    // profile that reaches it
    struct CNode {
      Marking m;
      Ctrl c;
      int parent;
      RuleRef via;
      int depth;
    };
    std::vector<CNode> cn{{base, Ctrl{}, -1, 0, 0}};
    std::set<std::pair<Marking, Ctrl>> cseen{{base, Ctrl{}}};
    std::deque<int> cq{0};
    while (!cq.empty()) {
      int cur = cq.front();
      cq.pop_front();
      if (cn[cur].depth >= budget.depth_bound) {
        cycles_closed = false;
        continue;
      }
      for (const PRule& r : rules) {
        if (!enabled(cn[cur].m, r.take)) continue;
        CNode child{fire(cn[cur].m, r), cn[cur].c | r.ctrl, cur, r.idx,
                    cn[cur].depth + 1};
        if (leq(base, child.m)) {
          for (int pi : members) {
            Ctrl pc = nodes[pi].c;
            std::uint32_t u1 = std::uint32_t(pc.sets), u2 = std::uint32_t(pc.sets >> 32);
            std::uint32_t c1 = std::uint32_t(child.c.sets),
                          c2 = std::uint32_t(child.c.sets >> 32);
            if ((u1 | c1) == k.bits && (c1 | u2 | c2) == kw.bits) {
              cn.push_back(child);
              RuleSeq cyc;
              for (int i = int(cn.size()) - 1; cn[i].parent != -1; i = cn[i].parent)
                cyc.push_back(cn[i].via);
              std::reverse(cyc.begin(), cyc.end());
              return Verdict::yes(Lasso{prefix_path(pi), std::move(cyc)});
            }
          }
        }
        if (tokens(child.m) > std::uint64_t(budget.size_bound)) {
          cycles_closed = false;
          continue;
        }
        if (!cseen.insert({child.m, child.c}).second) continue;
        if (++used_nodes > budget.node_bound) {
          cycles_closed = false;
          cq.clear();
          break;
        }
        cn.push_back(child);
        cq.push_back(int(cn.size()) - 1);
      }
    }
    if (!cycles_closed && used_nodes > budget.node_bound) break;
  }

  if (km.complete && closed && cycles_closed) return Verdict::no();

  // Exact refutation of the infinite branch on the accelerated layer. Any
  // pumpable run decomposes into a prefix to a covered state (M,u1,u2) and a
  // window of the infinitely-fired rules T with componentwise nonnegative net
  // effect; T lives in the kw-internal subnet firable from M. If no covered
  // state admits a nonempty subnet subset with a nonnegative rational
  // combination whose components complete (k,kw), no accepting run exists.
  if (km.complete) {
    std::vector<PRule> sub;
    for (const PRule& r : rules) {
      std::uint32_t c1 = std::uint32_t(r.ctrl.sets), c2 = std::uint32_t(r.ctrl.sets >> 32);
      if ((c1 & ~kw.bits) == 0 && (c2 & ~kw.bits) == 0) sub.push_back(r);
    }
    std::map<Marking, std::vector<std::uint64_t>> groups;
    for (const auto& [mk, c] : km.states) groups[mk].push_back(c.sets);

    bool evidence = false, undecided = false;
    for (const auto& [mk, anns] : groups) {
      bool cand = false;
      for (std::uint64_t a : anns)
        if ((std::uint32_t(a) | kw.bits) == k.bits) cand = true;
      if (!cand) continue;

      KmResult cl = run_km(sub, mk, budget.node_bound);
      if (!cl.complete) {
        undecided = true;
        break;
      }
      if (cl.fired.empty()) continue;
      std::vector<std::size_t> s(cl.fired.begin(), cl.fired.end());
      const int nv = int(s.size());
      std::uint32_t c1s = 0, c2s = 0;
      for (std::size_t t : s) {
        c1s |= std::uint32_t(sub[t].ctrl.sets);
        c2s |= std::uint32_t(sub[t].ctrl.sets >> 32);
      }

      // base constraints: x >= 0 and nonnegative net effect per variable
      std::vector<std::vector<long long>> base;
      for (int t = 0; t < nv; ++t) {
        std::vector<long long> c(nv + 1, 0);
        c[t] = 1;
        base.push_back(std::move(c));
      }
      for (std::size_t v = 0; v < mk.size(); ++v) {
        std::vector<long long> c(nv + 1, 0);
        bool nonzero = false;
        for (int t = 0; t < nv; ++t) {
          const PRule& r = sub[s[t]];
          c[t] = (long long)r.give[v] - (long long)r.take[v];
          if (c[t] != 0) nonzero = true;
        }
        if (nonzero) base.push_back(std::move(c));
      }

      // components of the rules admitting some positive weight; an
      // unsettled feasibility counts the rule in (only refutation matters)
      std::uint32_t c1u = 0;
      bool any_feasible = false;
      for (int t = 0; t < nv; ++t) {
        auto cons = base;
        std::vector<long long> atleast(nv + 1, 0);
        atleast[t] = 1;
        atleast[nv] = -1;
        cons.push_back(std::move(atleast));
        if (fm_feasible(std::move(cons), nv) != std::optional<bool>(false)) {
          any_feasible = true;
          c1u |= std::uint32_t(sub[s[t]].ctrl.sets);
        }
      }
      if (!any_feasible) continue;

      for (std::uint64_t a : anns) {
        std::uint32_t u1 = std::uint32_t(a), u2 = std::uint32_t(a >> 32);
        if ((u1 | c1s) == k.bits && (c1u | u2 | c2s) == kw.bits) {
          evidence = true;
          break;
        }
      }
      if (evidence) break;
    }
    if (!evidence && !undecided) return Verdict::no();
  }
  return Verdict::unknown("self-covering budget exhausted");
}

}  // namespace prs
