#include "prs/oracle.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace prs {

TermGraph explore(const Mbrs& m, const TermPtr& t0, const SearchBudget& budget) {
  budget.validate();
  TermGraph g;
  TermPtr start = canonicalize(t0);
  g.nodes.push_back(start);
  g.index.emplace(start, 0);
  g.edges.emplace_back();
  std::vector<int> depth{0};
  std::deque<int> queue{0};
  while (!queue.empty()) {
    int cur = queue.front();
    queue.pop_front();
    if (depth[cur] >= budget.depth_bound) {
      g.closed = false;
      continue;
    }
    for (const auto& [r, succ] : step(m, g.nodes[cur])) {
      if (succ->size() > budget.size_bound) {
        g.closed = false;
        continue;
      }
      auto it = g.index.find(succ);
      int id;
      if (it != g.index.end()) {
        id = it->second;
      } else if (g.nodes.size() >= budget.node_bound) {
        g.closed = false;
        continue;
      } else {
        id = int(g.nodes.size());
        g.nodes.push_back(succ);
        g.index.emplace(succ, id);
        g.edges.emplace_back();
        depth.push_back(depth[cur] + 1);
        queue.push_back(id);
      }
      g.edges[cur].push_back({r, id});
    }
  }
  return g;
}

namespace {

bool is_rewrite_subterm(const TermPtr& small, const TermPtr& big) {
  if (equal(small, big)) return true;
  for (const auto& s : subterms(big))
    if (equal(small, s)) return true;
  return false;
}

struct AnnNode {
  TermPtr t;
  std::uint32_t used;
  int parent;
  RuleRef via;
  int depth;
};

RuleSeq path_of(const std::vector<AnnNode>& nodes, int i) {
  RuleSeq s;
  for (; nodes[i].parent != -1; i = nodes[i].parent) s.push_back(nodes[i].via);
  std::reverse(s.begin(), s.end());
  return s;
}

}  // namespace

Verdict oracle_accepting(const Mbrs& m, const TermPtr& t0, ComponentSet k,
                         ComponentSet kw, const SearchBudget& budget,
                         OracleWitness* witness) {
  budget.validate();
  if (!kw.subset_of(k)) return Verdict::no();

  TermPtr start = canonicalize(t0);
  std::map<TermPtr, std::vector<std::pair<RuleRef, TermPtr>>, TermPtrLess> succs;
  auto successors = [&](const TermPtr& t) -> const auto& {
    auto it = succs.find(t);
    if (it == succs.end()) it = succs.emplace(t, step(m, t)).first;
    return it->second;
  };

  bool complete = true;
  std::size_t nodes_used = 0;
  auto spend = [&] {
    if (++nodes_used > budget.node_bound) {
      complete = false;
      return false;
    }
    return true;
  };

  // phase 1: annotated prefixes (term, used components within k)
  std::vector<AnnNode> pre{{start, 0, -1, 0, 0}};
  struct KeyLess {
    bool operator()(const std::pair<TermPtr, std::uint32_t>& a,
                    const std::pair<TermPtr, std::uint32_t>& b) const {
      int c = compare(a.first, b.first);
      return c != 0 ? c < 0 : a.second < b.second;
    }
  };
  std::map<std::pair<TermPtr, std::uint32_t>, int, KeyLess> seen;
  seen.emplace(std::make_pair(start, 0u), 0);
  std::map<TermPtr, std::vector<int>, TermPtrLess> by_term{{start, {0}}};
  std::deque<int> queue{0};
  spend();
  while (!queue.empty()) {
    int cur = queue.front();
    queue.pop_front();
    if (pre[cur].depth >= budget.depth_bound) {
      complete = false;
      continue;
    }
    for (const auto& [r, succ] : successors(pre[cur].t)) {
      if (!m.rules[r].comps.subset_of(k)) continue;
      if (succ->size() > budget.size_bound) {
        complete = false;
        continue;
      }
      std::uint32_t used = pre[cur].used | m.rules[r].comps.bits;
      auto key = std::make_pair(succ, used);
      if (seen.count(key)) continue;
      if (!spend()) {
        queue.clear();
        break;
      }
      pre.push_back({succ, used, cur, r, pre[cur].depth + 1});
      int id = int(pre.size()) - 1;
      seen.emplace(key, id);
      by_term[succ].push_back(id);
      queue.push_back(id);
    }
  }

  // phase 2: from each reached term, search for a cycle whose used set is
  // exactly kw and whose end term contains the base as a rewrite subterm
  for (const auto& [base, members] : by_term) {
    bool useful = false;
    for (int i : members)
      if ((pre[i].used | kw.bits) == k.bits) useful = true;
    if (!useful) continue;

    std::vector<AnnNode> cyc{{base, 0, -1, 0, 0}};
    std::map<std::pair<TermPtr, std::uint32_t>, int, KeyLess> cseen;
    cseen.emplace(std::make_pair(base, 0u), 0);
    std::deque<int> cq{0};
    while (!cq.empty()) {
      int cur = cq.front();
      cq.pop_front();
      if (cyc[cur].depth >= budget.depth_bound) {
        complete = false;
        continue;
      }
      for (const auto& [r, succ] : successors(cyc[cur].t)) {
        if (!m.rules[r].comps.subset_of(kw)) continue;
        std::uint32_t used = cyc[cur].used | m.rules[r].comps.bits;
        if (used == kw.bits && is_rewrite_subterm(base, succ)) {
          for (int i : members) {
            if ((pre[i].used | kw.bits) != k.bits) continue;
            cyc.push_back({succ, used, cur, r, cyc[cur].depth + 1});
            RuleSeq cycle = path_of(cyc, int(cyc.size()) - 1);
            RuleSeq prefix = path_of(pre, i);
            if (!replay(m, succ, cycle))
              throw std::logic_error("oracle pump does not replay");
            if (witness) {
              witness->kind = equal(base, succ) ? OracleWitness::Kind::ExactLasso
                              : succ->is_par()  ? OracleWitness::Kind::ParPump
                                                : OracleWitness::Kind::HeadPump;
              witness->prefix = prefix;
              witness->cycle = cycle;
              witness->base = base;
              witness->pumped = succ;
            }
            return Verdict::yes(Lasso{std::move(prefix), std::move(cycle)});
          }
        }
        if (succ->size() > budget.size_bound) {
          complete = false;
          continue;
        }
        auto key = std::make_pair(succ, used);
        if (cseen.count(key)) continue;
        if (!spend()) {
          cq.clear();
          break;
        }
        cyc.push_back({succ, used, cur, r, cyc[cur].depth + 1});
        cseen.emplace(key, int(cyc.size()) - 1);
        cq.push_back(int(cyc.size()) - 1);
      }
    }
    if (!complete && nodes_used > budget.node_bound) break;
  }

  return complete ? Verdict::no() : Verdict::unknown("oracle budget exhausted");
}

Verdict oracle_holds_inf(const Mbrs& m, const TermPtr& t0, const FragPtr& phi,
                         const SearchBudget& budget) {
  TermGraph g = explore(m, t0, budget);
  if (!g.closed) return Verdict::unknown("reachable graph not closed");

  auto edge_mask = [&](RuleRef r) -> std::uint64_t {
    const Action& a = m.rules[r].action;
    return a.kind == Action::Kind::Symbol ? (1ull << a.symbol) : 0;
  };
  std::uint64_t all = 0;
  for (const auto& es : g.edges)
    for (const auto& [r, to] : es) all |= edge_mask(r);
  if (__builtin_popcountll(all) > 16)
    return Verdict::unknown("too many distinct actions for profile enumeration");

  // prefix action sets per node
  std::set<std::pair<int, std::uint64_t>> pref{{0, 0}};
  std::deque<std::pair<int, std::uint64_t>> queue{{0, 0}};
  while (!queue.empty()) {
    auto [v, o] = queue.front();
    queue.pop_front();
    for (const auto& [r, to] : g.edges[v]) {
      auto next = std::make_pair(to, o | edge_mask(r));
      if (pref.insert(next).second) queue.push_back(next);
    }
  }

  // cycle action sets per node
  std::map<int, std::set<std::uint64_t>> cycles;
  for (int v = 0; v < int(g.nodes.size()); ++v) {
    std::set<std::pair<int, std::uint64_t>> seen{{v, 0}};
    std::deque<std::pair<int, std::uint64_t>> q{{v, 0}};
    while (!q.empty()) {
      auto [u, c] = q.front();
      q.pop_front();
      for (const auto& [r, to] : g.edges[u]) {
        std::uint64_t c2 = c | edge_mask(r);
        if (to == v) cycles[v].insert(c2);
        if (seen.insert({to, c2}).second) q.push_back({to, c2});
      }
    }
  }

  for (const auto& [v, o] : pref)
    for (std::uint64_t c : cycles.count(v) ? cycles[v] : std::set<std::uint64_t>{})
      if (!formula_satisfied(phi, m, o | c, c)) return Verdict::no();
  return Verdict::yes();
}

}  // namespace prs
