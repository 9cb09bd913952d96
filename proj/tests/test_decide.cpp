#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <set>
#include <tuple>

#include "doctest.h"
#include "gen.hpp"
#include "prs/decide.hpp"
#include "prs/oracle.hpp"

using namespace prs;

namespace {

using Added = std::set<std::tuple<std::string, std::string, std::uint32_t>>;

// rules of `built` not present in the base system, keyed by printed sides
Added added_rules(const Mbrs& base, const Mbrs& built) {
  std::set<std::string> orig;
  for (const auto& r : base.rules) orig.insert(r.id);
  Added out;
  for (const auto& r : built.rules)
    if (!orig.count(r.id))
      out.insert({to_string(r.lhs, built.vars), to_string(r.rhs, built.vars),
                  r.comps.bits});
  return out;
}

Mbrs s1() {
  return gen::sys(
      "actions a b\nvars X Y\ncomponents 2\n"
      "rule r1: X -a-> X || Y @ {1}\n"
      "rule r2: Y -b-> eps @ {2}\n");
}

Mbrs s2() {
  return gen::sys(
      "actions a\nvars X Y\ncomponents 1\n"
      "rule r1: X -a-> Y.X @ {1}\n");
}

}  // namespace

TEST_CASE("par_k: no sequential rules means no added rules") {
  Mbrs m = s1();
  DecisionSession s(m);
  const BuiltParK& p = s.par_k(gen::comps({1, 2}));
  CHECK(added_rules(m, p.sys).empty());
  CHECK(p.sys.rules.size() == 2);
  CHECK(!p.tainted);
}

TEST_CASE("par_k: collapse through a vanishing tail") {
  Mbrs m = gen::sys(
      "actions a c\nvars X Y Z\ncomponents 1\n"
      "rule r1: X -a-> Y.Z @ {1}\n"
      "rule r2: Z -c-> eps @ {}\n");
  DecisionSession s(m);
  const BuiltParK& p = s.par_k(gen::comps({1}));
  Added a = added_rules(m, p.sys);
  CHECK(a.count({"X", "Y", gen::comps({1}).bits}));
  // the finished-subderivation sink is reachable too (target Any, K1 = {})
  CHECK(a.count({"X", p.sys.vars.name(p.zf), gen::comps({1}).bits}));
  for (const auto& [l, r, c] : a) CHECK(ComponentSet{c}.subset_of(gen::comps({1})));
}

TEST_CASE("par_k: collapse through a pair rule") {
  Mbrs m = gen::sys(
      "actions a b c\nvars X Y Z W V\ncomponents 2\n"
      "rule r1: X -a-> Y.Z @ {}\n"
      "rule r2: Z -c-> W @ {}\n"
      "rule r3: Y.W -b-> V @ {2}\n");
  DecisionSession s(m);
  const BuiltParK& p = s.par_k(gen::comps({2}));
  Added a = added_rules(m, p.sys);
  CHECK(a.count({"X", "V", gen::comps({2}).bits}));
  // r3 itself is sequential and must not survive into the parallel system
  for (const auto& r : p.sys.rules) CHECK(classify_rule(r) == RuleShape::Par);
}

TEST_CASE("par_kkw: the infinity sink appears only for strictly smaller subqueries") {
  Mbrs m = gen::sys(
      "actions a c\nvars X Y Z\ncomponents 2\n"
      "rule r1: X -a-> Y.Z @ {}\n"
      "rule r2: Z -c-> Z @ {1}\n");
  DecisionSession s(m);

  const BuiltKkw& small = s.par_kkw(gen::comps({1}), gen::comps({1}));
  for (const auto& r : small.mp1.rules)
    CHECK(to_string(r.rhs, small.mp1.vars) != small.mp1.vars.name(small.zinf));

  const BuiltKkw& big = s.par_kkw(gen::comps({1, 2}), gen::comps({1}));
  bool found = false;
  for (std::size_t i = 0; i < big.mp1.rules.size(); ++i) {
    const Rule& r = big.mp1.rules[i];
    if (to_string(r.rhs, big.mp1.vars) != big.mp1.vars.name(big.zinf)) continue;
    CHECK(to_string(r.lhs, big.mp1.vars) == "X");
    CHECK(r.comps == gen::comps({1}));
    CHECK(big.mp2.rules[i].comps == gen::comps({1}));
    CHECK(!big.rstar.count(r.id));
    found = true;
  }
  CHECK(found);
  // both views share one rule list
  REQUIRE(big.mp1.rules.size() == big.mp2.rules.size());
  for (std::size_t i = 0; i < big.mp1.rules.size(); ++i) {
    CHECK(equal(big.mp1.rules[i].lhs, big.mp2.rules[i].lhs));
    CHECK(equal(big.mp1.rules[i].rhs, big.mp2.rules[i].rhs));
  }
}

TEST_CASE("par_kkw at the empty pair adds nothing") {
  DecisionSession s(s1());
  const BuiltKkw& b = s.par_kkw(ComponentSet::none(), ComponentSet::none());
  const BuiltParK& p = s.par_k(ComponentSet::none());
  CHECK(b.mp1.rules.size() == p.sys.rules.size());
}

TEST_CASE("seq_k: labeled renames from parallel coverings") {
  Mbrs m = gen::sys(
      "actions a\nvars X Y\ncomponents 1\n"
      "rule r1: X -a-> X || Y @ {1}\n");
  DecisionSession s(m);
  const BuiltSeqK& q = s.seq_k(gen::comps({1}));
  Added a = added_rules(m, q.sys);
  CHECK(a.count({"X", "Y", gen::comps({1}).bits}));
  CHECK(a.count({"X", "X", gen::comps({1}).bits}));
  for (const auto& r : q.sys.rules) CHECK(!r.rhs->is_par());
}

TEST_CASE("seq_k keeps push rules and drops everything else parallel") {
  Mbrs m = gen::sys(
      "actions a b\nvars X Y Z\ncomponents 1\n"
      "rule r1: X -a-> Y.Z @ {1}\n"
      "rule r2: Y -b-> Y || Y @ {}\n");
  DecisionSession s(m);
  const BuiltSeqK& q = s.seq_k(ComponentSet::none());
  bool push = false;
  for (const auto& r : q.sys.rules) {
    CHECK(!r.rhs->is_par());
    if (r.rhs->is_seq()) push = true;
  }
  CHECK(push);
}

TEST_CASE("decide regressions") {
  DecisionSession a(s1());
  VarId X = gen::var(a.system(), "X");
  CHECK(a.decide(X, gen::comps({1}), gen::comps({1})).is_yes());
  CHECK(a.decide(X, gen::comps({2}), gen::comps({2})).is_no());
  CHECK(a.decide(X, gen::comps({1, 2}), gen::comps({1, 2})).is_yes());
  // Kw outside K can never be met
  CHECK(a.decide(X, gen::comps({1}), gen::comps({2})).is_no());

  DecisionSession b(s2());
  CHECK(b.decide(gen::var(b.system(), "X"), gen::comps({1}), gen::comps({1})).is_yes());
}

TEST_CASE("decide is memoized and stable across repeated queries") {
  DecisionSession s(s1());
  VarId X = gen::var(s.system(), "X");
  for (int i = 0; i < 3; ++i) {
    CHECK(s.decide(X, gen::comps({1}), gen::comps({1})).is_yes());
    CHECK(s.decide(X, gen::comps({2}), gen::comps({2})).is_no());
  }
}

TEST_CASE("decide matches the oracle over every query on the regressions") {
  for (Mbrs m : {s1(), s2()}) {
    DecisionSession s(m);
    for (VarId x : m.vars.all())
      for (ComponentSet k : subsets_of(ComponentSet::full(m.n_components)))
        for (ComponentSet kw : subsets_of(k)) {
          Verdict want = oracle_accepting(m, Term::variable(x), k, kw);
          Verdict got = s.decide(x, k, kw);
          if (want.definite() && got.definite())
            CHECK(got.is_yes() == want.is_yes());
        }
  }
}

TEST_CASE("decide agrees with the oracle on random normal systems") {
  gen::Rng rng(41);
  int agreed = 0;
  for (int i = 0; i < 150; ++i) {
    Mbrs m = gen::random_mbrs(rng);
    if (!is_normal_form(m)) continue;
    DecisionSession s(m);
    VarId x{std::uint32_t(gen::pick(rng, 0, int(m.vars.size()) - 1))};
    ComponentSet k = gen::rand_comps(rng, m.n_components);
    ComponentSet kw = gen::rand_comps(rng, m.n_components) & k;
    Verdict want = oracle_accepting(m, Term::variable(x), k, kw);
    Verdict got = s.decide(x, k, kw);
    if (want.definite() && got.definite()) {
      CHECK(got.is_yes() == want.is_yes());
      ++agreed;
    }
  }
  CHECK(agreed > 60);
}
