// prsmc: acceptance queries and model checking for multi Buechi rewrite
// systems from the command line.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "prs/altl.hpp"
#include "prs/decide.hpp"
#include "prs/normalize.hpp"
#include "prs/oracle.hpp"
#include "prs/textio.hpp"

namespace {

constexpr int kExitHolds = 0;
constexpr int kExitFails = 1;
constexpr int kExitUnknown = 2;
constexpr int kExitError = 3;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

prs::TermPtr initial_term(const prs::SystemFile& sf, const std::string& term_arg) {
  if (!term_arg.empty()) return prs::parse_term(term_arg, sf.mbrs.vars);
  if (sf.init) return *sf.init;
  throw std::runtime_error("no --term given and the system file has no init");
}

prs::ComponentSet comp_set(const std::vector<int>& comps, int n) {
  prs::ComponentSet k;
  for (int i : comps) {
    if (i < 1 || i > n)
      throw std::runtime_error("component " + std::to_string(i) +
                               " outside 1.." + std::to_string(n));
    k.add(i);
  }
  return k;
}

void print_rule_seq(const prs::Mbrs& m, const prs::RuleSeq& s) {
  for (std::size_t i = 0; i < s.size(); ++i)
    std::cout << (i ? " " : "") << m.rule(s[i]).id;
}

void print_lasso(const prs::Mbrs& m, const prs::Lasso& l) {
  std::cout << "  witness: ";
  print_rule_seq(m, l.prefix);
  std::cout << (l.prefix.empty() ? "(" : " (");
  print_rule_seq(m, l.cycle);
  std::cout << ")^w\n";
}

int report(const prs::Verdict& v, const char* yes, const char* no) {
  if (v.is_yes()) {
    std::cout << yes << "\n";
    return kExitHolds;
  }
  if (v.is_no()) {
    std::cout << no << "\n";
    return kExitFails;
  }
  std::cout << "unknown: " << v.reason << "\n";
  return kExitUnknown;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance and model checking for multi Buechi rewrite systems"};
  app.require_subcommand(1);

  std::string file, term_arg, formula_arg;
  std::vector<int> comps, inf_comps;
  prs::SearchBudget budget;

  auto common = [&](CLI::App* c, bool with_term) {
    c->add_option("file", file, "system file")->required();
    if (with_term) c->add_option("--term", term_arg, "initial term (default: init)");
    c->add_option("--node-bound", budget.node_bound, "explored-state bound");
    c->add_option("--depth-bound", budget.depth_bound, "search depth bound");
    c->add_option("--size-bound", budget.size_bound, "term size bound");
  };

  CLI::App* check = app.add_subcommand("check", "does the formula hold on all infinite runs?");
  common(check, true);
  check->add_option("--formula", formula_arg, "fragment formula")->required();

  CLI::App* accept = app.add_subcommand("accept", "is there a (K,Kw)-accepting infinite derivation?");
  common(accept, true);
  accept->add_option("-K,--comps", comps, "components used exactly")->delimiter(',');
  accept->add_option("-W,--inf-comps", inf_comps, "components used infinitely often")->delimiter(',');

  CLI::App* norm = app.add_subcommand("normalize", "print the normal form of a system");
  common(norm, false);

  CLI::App* oracle = app.add_subcommand("oracle", "answer by explicit state search");
  common(oracle, true);
  oracle->add_option("--formula", formula_arg, "fragment formula");
  oracle->add_option("-K,--comps", comps, "components used exactly")->delimiter(',');
  oracle->add_option("-W,--inf-comps", inf_comps, "components used infinitely often")->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  try {
    budget.validate();
    prs::SystemFile sf = prs::parse_system(slurp(file));
    const int n = sf.mbrs.n_components;

    if (check->parsed()) {
      prs::TermPtr t = initial_term(sf, term_arg);
      prs::FragPtr phi = prs::parse_formula(formula_arg, sf.mbrs);
      prs::McResult res = prs::model_check_inf(sf.mbrs, t, phi, budget);
      for (std::size_t i = 0; i < res.disjuncts.size(); ++i) {
        const prs::Verdict& v = res.per_disjunct[i];
        std::cout << "violation " << prs::to_string(res.disjuncts[i], sf.mbrs)
                  << ": "
                  << (v.is_yes() ? "realizable"
                                 : v.is_no() ? "unrealizable" : "unknown")
                  << "\n";
      }
      return report(res.verdict, "holds (on all infinite runs)", "fails");
    }

    if (accept->parsed()) {
      prs::TermPtr t = initial_term(sf, term_arg);
      prs::ComponentSet k = comp_set(comps, n), kw = comp_set(inf_comps, n);
      if (!kw.subset_of(k)) {
        std::cout << "no accepting derivation: Kw must be a subset of K\n";
        return kExitFails;
      }
      auto [entry, x0] = prs::add_entry_rule(sf.mbrs, t);
      prs::NormalizationResult nf = prs::normalize(entry);
      auto [lk, lkw] = prs::lift_query(k, kw, sf.mbrs.n_components);
      prs::DecisionSession session(nf.mf, budget);
      prs::Verdict v = session.decide(x0, lk, lkw);
      if (v.is_yes() && v.lasso)
        print_lasso(session.par_kkw(lk, lkw).mp1, *v.lasso);
      return report(v, "accepting derivation exists", "no accepting derivation");
    }

    if (norm->parsed()) {
      prs::NormalizationResult nf = prs::normalize(sf.mbrs);
      std::cout << prs::print_system(nf.mf, sf.init ? &*sf.init : nullptr);
      for (const std::string& id : nf.aux_rules) std::cout << "# aux " << id << "\n";
      return kExitHolds;
    }

    // oracle
    prs::TermPtr t = initial_term(sf, term_arg);
    if (!formula_arg.empty()) {
      prs::FragPtr phi = prs::parse_formula(formula_arg, sf.mbrs);
      return report(prs::oracle_holds_inf(sf.mbrs, t, phi, budget),
                    "holds (on all infinite runs)", "fails");
    }
    prs::ComponentSet k = comp_set(comps, n), kw = comp_set(inf_comps, n);
    prs::Verdict v = prs::oracle_accepting(sf.mbrs, t, k, kw, budget);
    if (v.is_yes() && v.lasso) print_lasso(sf.mbrs, *v.lasso);
    return report(v, "accepting derivation exists", "no accepting derivation");
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
}
