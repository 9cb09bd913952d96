// Shared test utilities: compact system construction and random generators.
// Generators are deterministic for a fixed seed and biased toward small
// systems whose reachable graphs close under the default budgets.
#ifndef TESTS_GEN_HPP
#define TESTS_GEN_HPP

#include <random>
#include <string>
#include <vector>

#include "prs/mbrs.hpp"
#include "prs/textio.hpp"

namespace gen {

inline prs::Mbrs sys(const std::string& text) { return prs::parse_system(text).mbrs; }

inline prs::TermPtr term(const prs::Mbrs& m, const std::string& text) {
  return prs::parse_term(text, m.vars);
}

inline prs::VarId var(const prs::Mbrs& m, const std::string& name) {
  prs::VarId v;
  if (!m.vars.find(name, v)) throw std::runtime_error("no var " + name);
  return v;
}

inline prs::ComponentSet comps(std::initializer_list<int> is) {
  prs::ComponentSet k;
  for (int i : is) k.add(i);
  return k;
}

using Rng = std::mt19937;

inline int pick(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline bool chance(Rng& rng, double p) {
  return std::uniform_real_distribution<double>(0, 1)(rng) < p;
}

inline prs::ComponentSet rand_comps(Rng& rng, int n) {
  prs::ComponentSet k;
  for (int i = 1; i <= n; ++i)
    if (chance(rng, 0.35)) k.add(i);
  return k;
}

struct GenOptions {
  int max_vars = 4;
  int max_rules = 6;
  int max_components = 2;
  bool par_only = false;
  bool seq_only = false;
  bool allow_bad = false;  // permit non-normal shapes
  double silent_p = 0.15;  // probability of a tau rule
};

inline prs::Mbrs random_mbrs(Rng& rng, const GenOptions& o = {}) {
  prs::Mbrs m;
  const char* actions[] = {"a", "b", "c"};
  for (const char* a : actions) m.intern_action(a);
  const char* names[] = {"A", "B", "C", "D"};
  int nv = pick(rng, 2, o.max_vars);
  std::vector<prs::VarId> vs;
  for (int i = 0; i < nv; ++i) vs.push_back(m.vars.intern(names[i]));
  m.n_components = pick(rng, 1, o.max_components);

  auto v = [&] { return prs::Term::variable(vs[pick(rng, 0, nv - 1)]); };
  auto var_par = [&](int lo, int hi) {
    int c = pick(rng, lo, hi);
    std::vector<prs::TermPtr> parts;
    for (int i = 0; i < c; ++i) parts.push_back(v());
    return c == 0 ? prs::Term::empty() : prs::Term::par(std::move(parts));
  };

  int nr = pick(rng, 1, o.max_rules);
  for (int i = 0; i < nr; ++i) {
    prs::Rule r;
    r.id = "r" + std::to_string(i + 1);
    r.action = chance(rng, o.silent_p)
                   ? prs::Action::silent()
                   : prs::Action::sym(std::uint32_t(pick(rng, 0, 2)));
    r.comps = rand_comps(rng, m.n_components);
    if (o.par_only) {
      r.lhs = var_par(1, 2);
      // bias shrinking: most random nets should terminate or stay small
      r.rhs = var_par(0, chance(rng, 0.7) ? 1 : 2);
    } else if (o.seq_only) {
      switch (pick(rng, 0, 3)) {
        case 0:
          r.lhs = v();
          r.rhs = prs::Term::seq(v(), v());
          break;
        case 1:
          r.lhs = prs::Term::seq(v(), v());
          r.rhs = v();
          break;
        case 2:
          r.lhs = v();
          r.rhs = v();
          break;
        default:
          r.lhs = v();
          r.rhs = prs::Term::empty();
          break;
      }
    } else if (o.allow_bad && chance(rng, 0.5)) {
      // shapes hitting the five elimination cases
      switch (pick(rng, 0, 4)) {
        case 0:  // rhs parallel under a sequential context
          r.lhs = v();
          r.rhs = prs::Term::seq(v(), var_par(2, 2));
          break;
        case 1:  // parallel lhs with a sequential component
          r.lhs = prs::Term::par({v(), prs::Term::seq(v(), v())});
          r.rhs = v();
          break;
        case 2:  // parallel head
          r.lhs = v();
          r.rhs = prs::Term::seq(var_par(2, 2), v());
          break;
        case 3:  // long sequential rhs
          r.lhs = v();
          r.rhs = prs::Term::seq(v(), prs::Term::seq(v(), v()));
          break;
        default:  // long sequential lhs (includes X.Y -> eps)
          r.lhs = prs::Term::seq(v(), prs::Term::seq(v(), v()));
          r.rhs = chance(rng, 0.5) ? prs::Term::empty() : v();
          break;
      }
    } else if (chance(rng, 0.5)) {
      r.lhs = var_par(1, 2);
      r.rhs = var_par(0, chance(rng, 0.7) ? 1 : 2);
    } else {
      switch (pick(rng, 0, 3)) {
        case 0:
          r.lhs = v();
          r.rhs = prs::Term::seq(v(), v());
          break;
        case 1:
          r.lhs = prs::Term::seq(v(), v());
          r.rhs = v();
          break;
        case 2:
          r.lhs = v();
          r.rhs = v();
          break;
        default:
          r.lhs = v();
          r.rhs = prs::Term::empty();
          break;
      }
    }
    m.rules.push_back(std::move(r));
  }
  return m;
}

inline prs::TermPtr random_term(Rng& rng, const prs::Mbrs& m, int max_size = 3,
                                bool par_only = false) {
  auto vs = m.vars.all();
  auto v = [&] { return prs::Term::variable(vs[pick(rng, 0, int(vs.size()) - 1)]); };
  int size = pick(rng, 1, max_size);
  std::vector<prs::TermPtr> parts;
  for (int i = 0; i < size; ++i) parts.push_back(v());
  if (par_only || chance(rng, 0.6)) return prs::Term::par(std::move(parts));
  prs::TermPtr t = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) t = prs::Term::seq(parts[i], t);
  return t;
}

}  // namespace gen

#endif
