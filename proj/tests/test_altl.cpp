#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <set>
#include <tuple>

#include "doctest.h"
#include "gen.hpp"
#include "prs/altl.hpp"
#include "prs/oracle.hpp"
#include "prs/textio.hpp"

using namespace prs;

namespace {

Mbrs s1() {
  return gen::sys(
      "actions a b\nvars X Y\ncomponents 0\n"
      "rule r1: X -a-> X || Y @ {}\n"
      "rule r2: Y -b-> eps @ {}\n");
}

// structure-free summary of a disjunct: denotation bitmasks only
using Shape = std::tuple<std::multiset<std::uint64_t>, std::multiset<std::uint64_t>,
                         std::uint64_t>;

Shape shape(const Disjunct& d, const Mbrs& m) {
  std::multiset<std::uint64_t> fp, gf;
  for (const auto& p : d.fplus) fp.insert(prop_denotation(p, m));
  for (const auto& p : d.gf) gf.insert(prop_denotation(p, m));
  return {fp, gf, prop_denotation(d.g, m)};
}

std::multiset<Shape> shapes(const std::vector<Disjunct>& ds, const Mbrs& m) {
  std::multiset<Shape> out;
  for (const auto& d : ds) out.insert(shape(d, m));
  return out;
}

FragPtr random_formula(gen::Rng& rng, int depth, int nacts) {
  auto prop = [&] {
    PropPtr p = PropFormula::act(std::uint32_t(gen::pick(rng, 0, nacts - 1)));
    if (gen::chance(rng, 0.3))
      p = PropFormula::conj(
          p, PropFormula::neg(PropFormula::act(std::uint32_t(gen::pick(rng, 0, nacts - 1)))));
    return p;
  };
  if (depth == 0 || gen::chance(rng, 0.4))
    return gen::chance(rng, 0.5) ? FragmentFormula::ev(prop())
                                 : FragmentFormula::inf_often(prop());
  if (gen::chance(rng, 0.5))
    return FragmentFormula::neg(random_formula(rng, depth - 1, nacts));
  return FragmentFormula::conj(random_formula(rng, depth - 1, nacts),
                               random_formula(rng, depth - 1, nacts));
}

}  // namespace

TEST_CASE("formula parsing") {
  Mbrs m = s1();
  FragPtr f = parse_formula("GF a & !F b", m);
  REQUIRE(f->kind() == FragmentFormula::Kind::And);
  CHECK(f->left()->kind() == FragmentFormula::Kind::GF);
  REQUIRE(f->right()->kind() == FragmentFormula::Kind::Not);
  CHECK(f->right()->left()->kind() == FragmentFormula::Kind::F);

  FragPtr g = parse_formula("F (a & !b)", m);
  REQUIRE(g->kind() == FragmentFormula::Kind::F);
  CHECK(g->prop()->kind() == PropFormula::Kind::And);

  CHECK_THROWS(parse_formula("a U b", m));
  CHECK_THROWS(parse_formula("G a", m));
  CHECK_THROWS(parse_formula("F F a", m));
  CHECK_THROWS(parse_formula("GF", m));
}

TEST_CASE("prop_denotation is a boolean-algebra homomorphism") {
  Mbrs m = s1();  // sigma = {a, b}
  PropPtr a = parse_prop("a", m), b = parse_prop("b", m);
  CHECK(prop_denotation(a, m) == 0b01);
  CHECK(prop_denotation(PropFormula::neg(a), m) == 0b10);
  CHECK(prop_denotation(PropFormula::conj(a, PropFormula::neg(a)), m) == 0);
  CHECK(prop_denotation(PropFormula::neg(PropFormula::conj(a, b)), m) == 0b11);
  CHECK(prop_denotation(PropFormula::truth(), m) == 0b11);
}

TEST_CASE("ac_rules") {
  Mbrs m = s1();
  CHECK(ac_rules(m, parse_prop("a", m)) == std::vector<RuleRef>{0});
  CHECK(ac_rules(m, PropFormula::truth()) == std::vector<RuleRef>{0, 1});
  CHECK(ac_rules(m, parse_prop("a & !a", m)).empty());
  // silent rules never satisfy a proposition, not even True
  Mbrs t = gen::sys(
      "actions a\nvars X\ncomponents 0\n"
      "rule r1: X -tau-> X @ {}\n");
  CHECK(ac_rules(t, PropFormula::truth()).empty());
}

TEST_CASE("negate_to_dnf on the frozen examples") {
  Mbrs m = s1();
  std::uint64_t A = 0b01, B = 0b10, ALL = 0b11;

  auto gfa = shapes(negate_to_dnf(parse_formula("GF a", m), m), m);
  CHECK(gfa == std::multiset<Shape>{{{A}, {}, ALL}, {{}, {}, B}});

  auto nfb = shapes(negate_to_dnf(parse_formula("!F b", m), m), m);
  CHECK(nfb == std::multiset<Shape>{{{B}, {}, ALL}, {{}, {B}, ALL}});

  auto taut = shapes(negate_to_dnf(parse_formula("F a & !F a", m), m), m);
  CHECK(taut == std::multiset<Shape>{{{}, {}, ALL}});
}

TEST_CASE("negate_to_dnf matches profile semantics of the negation") {
  gen::Rng rng(51);
  Mbrs m = gen::sys(
      "actions a b c\nvars X\ncomponents 0\n"
      "rule r1: X -a-> X @ {}\n");
  for (int i = 0; i < 400; ++i) {
    FragPtr f = random_formula(rng, 2, 3);
    auto ds = negate_to_dnf(f, m);
    for (std::uint64_t occ = 0; occ < 8; ++occ)
      for (std::uint64_t rec = 0; rec < 8; ++rec) {
        if ((rec & occ) != rec) continue;
        bool direct = formula_satisfied(FragmentFormula::neg(f), m, occ, rec);
        bool any = false;
        for (const auto& d : ds) any = any || disjunct_satisfied(d, m, occ, rec);
        CHECK(direct == any);
      }
  }
}

TEST_CASE("the F+ / GF split of F is a partition") {
  Mbrs m = s1();
  Disjunct fin{{parse_prop("a", m)}, {}, PropFormula::truth()};
  Disjunct rec{{}, {parse_prop("a", m)}, PropFormula::truth()};
  for (std::uint64_t occ = 0; occ < 4; ++occ)
    for (std::uint64_t rec_acts = 0; rec_acts < 4; ++rec_acts) {
      if ((rec_acts & occ) != rec_acts) continue;
      bool f1 = disjunct_satisfied(fin, m, occ, rec_acts);
      bool f2 = disjunct_satisfied(rec, m, occ, rec_acts);
      CHECK(!(f1 && f2));
      CHECK((f1 || f2) == ((occ & 1) != 0));
    }
}

TEST_CASE("disjunct_to_query component assignment") {
  Mbrs m = s1();

  McQuery q0 = disjunct_to_query(m, Disjunct{{}, {}, PropFormula::truth()});
  CHECK(q0.mbrs.n_components == 1);
  CHECK(q0.k == ComponentSet::none());
  CHECK(q0.kw == ComponentSet::none());
  for (const auto& r : q0.mbrs.rules) CHECK(r.comps == ComponentSet::none());

  McQuery q = disjunct_to_query(
      m, Disjunct{{}, {parse_prop("a", m)}, PropFormula::neg(parse_prop("b", m))});
  CHECK(q.mbrs.n_components == 2);
  CHECK(q.k == gen::comps({1}));
  CHECK(q.kw == gen::comps({1}));
  CHECK(q.mbrs.rules[0].comps == gen::comps({1}));  // r1 carries a
  CHECK(q.mbrs.rules[1].comps == gen::comps({2}));  // r2 carries b = !zeta
}

TEST_CASE("model_check_inf regressions") {
  Mbrs m = s1();
  TermPtr X = gen::term(m, "X");
  CHECK(model_check_inf(m, X, parse_formula("GF a", m)).verdict.is_yes());
  CHECK(model_check_inf(m, X, parse_formula("F a", m)).verdict.is_yes());
  McResult fb = model_check_inf(m, X, parse_formula("F b", m));
  CHECK(fb.verdict.is_no());
  CHECK(fb.violating >= 0);
  CHECK(fb.per_disjunct[fb.violating].is_yes());
  CHECK(model_check_inf(m, X, parse_formula("F b & GF b", m)).verdict.is_no());

  Mbrs p = gen::sys(
      "actions a\nvars X Y\ncomponents 0\n"
      "rule r1: X -a-> Y.X @ {}\n");
  CHECK(model_check_inf(p, gen::term(p, "X"), parse_formula("GF a", p)).verdict.is_yes());

  // no infinite runs: everything holds vacuously
  Mbrs fin = gen::sys(
      "actions a b\nvars X\ncomponents 0\n"
      "rule r1: X -a-> eps @ {}\n");
  CHECK(model_check_inf(fin, gen::term(fin, "X"), parse_formula("F b", fin)).verdict.is_yes());
  CHECK(model_check_inf(fin, gen::term(fin, "X"), parse_formula("GF a & !GF a", fin))
            .verdict.is_yes());
}

TEST_CASE("double negation leaves verdicts unchanged") {
  gen::Rng rng(52);
  Mbrs m = s1();
  TermPtr X = gen::term(m, "X");
  for (int i = 0; i < 30; ++i) {
    FragPtr f = random_formula(rng, 2, 2);
    Verdict v1 = model_check_inf(m, X, f).verdict;
    Verdict v2 =
        model_check_inf(m, X, FragmentFormula::neg(FragmentFormula::neg(f))).verdict;
    CHECK(v1.outcome == v2.outcome);
  }
}

TEST_CASE("model_check_inf agrees with the profile oracle on finite instances") {
  gen::Rng rng(53);
  int agreed = 0;
  for (int i = 0; i < 60; ++i) {
    Mbrs m = gen::random_mbrs(rng);
    TermPtr t = gen::random_term(rng, m, 2);
    if (!explore(m, t).closed) continue;
    FragPtr f = random_formula(rng, 2, 3);
    Verdict want = oracle_holds_inf(m, t, f);
    Verdict got = model_check_inf(m, t, f).verdict;
    if (want.definite() && got.definite()) {
      CHECK(got.is_yes() == want.is_yes());
      ++agreed;
    }
  }
  CHECK(agreed > 20);
}
