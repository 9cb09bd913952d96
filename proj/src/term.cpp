#include "prs/term.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace prs {

VarId VarTable::intern(const std::string& name, VarKind kind) {
  VarId v;
  if (find(name, v)) {
    if (kinds_[v.value] != kind)
      throw std::invalid_argument("variable '" + name + "' re-interned with different kind");
    return v;
  }
  names_.push_back(name);
  kinds_.push_back(kind);
  return VarId{static_cast<std::uint32_t>(names_.size() - 1)};
}

bool VarTable::find(const std::string& name, VarId& out) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) {
      out.value = static_cast<std::uint32_t>(i);
      return true;
    }
  }
  return false;
}

bool VarTable::contains(const std::string& name) const {
  VarId v;
  return find(name, v);
}

VarId VarTable::fresh(const std::string& stem, VarKind kind) {
  if (!contains(stem)) return intern(stem, kind);
  for (int i = 0;; ++i) {
    std::string cand = stem + std::to_string(i);
    if (!contains(cand)) return intern(cand, kind);
  }
}

std::vector<VarId> VarTable::all() const {
  std::vector<VarId> out;
  out.reserve(names_.size());
  for (std::size_t i = 0; i < names_.size(); ++i)
    out.push_back(VarId{static_cast<std::uint32_t>(i)});
  return out;
}

VarId Term::var() const {
  if (kind_ != Kind::Variable) throw std::logic_error("Term::var on non-variable");
  return var_;
}

const std::vector<TermPtr>& Term::parts() const {
  if (kind_ != Kind::Par) throw std::logic_error("Term::parts on non-par");
  return children_;
}

const TermPtr& Term::head() const {
  if (kind_ != Kind::Seq) throw std::logic_error("Term::head on non-seq");
  return children_[0];
}

const TermPtr& Term::tail() const {
  if (kind_ != Kind::Seq) throw std::logic_error("Term::tail on non-seq");
  return children_[1];
}

const TermPtr& Term::empty() {
  static const TermPtr eps = std::shared_ptr<const Term>(new Term());
  return eps;
}

TermPtr Term::variable(VarId v) {
  auto t = new Term();
  t->kind_ = Kind::Variable;
  t->var_ = v;
  t->size_ = 1;
  return std::shared_ptr<const Term>(t);
}

TermPtr Term::par(std::vector<TermPtr> children) {
  std::vector<TermPtr> flat;
  for (auto& c : children) {
    if (!c) throw std::invalid_argument("null term");
    if (c->is_empty()) continue;
    if (c->is_par())
      flat.insert(flat.end(), c->parts().begin(), c->parts().end());
    else
      flat.push_back(c);
  }
  if (flat.empty()) return empty();
  if (flat.size() == 1) return flat[0];
  std::sort(flat.begin(), flat.end(),
            [](const TermPtr& a, const TermPtr& b) { return compare(a, b) < 0; });
  auto t = new Term();
  t->kind_ = Kind::Par;
  int sz = 0;
  for (auto& c : flat) sz += c->size();
  t->size_ = sz;
  t->children_ = std::move(flat);
  return std::shared_ptr<const Term>(t);
}

TermPtr Term::seq(TermPtr head, TermPtr tail) {
  if (!head || !tail) throw std::invalid_argument("null term");
  if (head->is_empty()) return tail;
  if (tail->is_empty()) return head;
  if (head->is_seq()) return seq(head->head(), seq(head->tail(), std::move(tail)));
  auto t = new Term();
  t->kind_ = Kind::Seq;
  t->size_ = head->size() + tail->size();
  t->children_ = {std::move(head), std::move(tail)};
  return std::shared_ptr<const Term>(t);
}

int compare(const Term& a, const Term& b) {
  if (&a == &b) return 0;
  if (a.kind() != b.kind())
    return static_cast<int>(a.kind()) < static_cast<int>(b.kind()) ? -1 : 1;
  switch (a.kind()) {
    case Term::Kind::Empty:
      return 0;
    case Term::Kind::Variable:
      if (a.var() == b.var()) return 0;
      return a.var() < b.var() ? -1 : 1;
    case Term::Kind::Par: {
      const auto& xs = a.parts();
      const auto& ys = b.parts();
      if (xs.size() != ys.size()) return xs.size() < ys.size() ? -1 : 1;
      for (std::size_t i = 0; i < xs.size(); ++i)
        if (int c = compare(xs[i], ys[i]); c != 0) return c;
      return 0;
    }
    case Term::Kind::Seq: {
      if (int c = compare(a.head(), b.head()); c != 0) return c;
      return compare(a.tail(), b.tail());
    }
  }
  return 0;
}

bool equal(const TermPtr& a, const TermPtr& b) { return compare(a, b) == 0; }

std::size_t term_hash(const Term& t) {
  auto mix = [](std::size_t h, std::size_t v) {
    return h * 1099511628211ULL ^ v;
  };
  std::size_t h = static_cast<std::size_t>(t.kind()) + 0x9e3779b9;
  switch (t.kind()) {
    case Term::Kind::Empty:
      break;
    case Term::Kind::Variable:
      h = mix(h, t.var().value);
      break;
    case Term::Kind::Par:
      for (const auto& c : t.parts()) h = mix(h, term_hash(*c));
      break;
    case Term::Kind::Seq:
      h = mix(h, term_hash(*t.head()));
      h = mix(h, term_hash(*t.tail()));
      break;
  }
  return h;
}

TermPtr canonicalize(const TermPtr& t) {
  switch (t->kind()) {
    case Term::Kind::Empty:
    case Term::Kind::Variable:
      return t;
    case Term::Kind::Par: {
      std::vector<TermPtr> cs;
      cs.reserve(t->parts().size());
      for (const auto& c : t->parts()) cs.push_back(canonicalize(c));
      return Term::par(std::move(cs));
    }
    case Term::Kind::Seq:
      return Term::seq(canonicalize(t->head()), canonicalize(t->tail()));
  }
  return t;
}

std::string to_string(const Term& t, const VarTable& vars) {
  switch (t.kind()) {
    case Term::Kind::Empty:
      return "eps";
    case Term::Kind::Variable:
      return vars.name(t.var());
    case Term::Kind::Par: {
      std::string out;
      for (std::size_t i = 0; i < t.parts().size(); ++i) {
        if (i) out += " || ";
        const Term& c = *t.parts()[i];
        out += c.is_seq() ? "(" + to_string(c, vars) + ")" : to_string(c, vars);
      }
      return out;
    }
    case Term::Kind::Seq: {
      const Term& h = *t.head();
      std::string hs = h.is_par() ? "(" + to_string(h, vars) + ")" : to_string(h, vars);
      const Term& u = *t.tail();
      std::string us = u.is_par() ? "(" + to_string(u, vars) + ")" : to_string(u, vars);
      return hs + "." + us;
    }
  }
  return "";
}

std::vector<TermPtr> par_atoms(const TermPtr& t) {
  if (t->is_empty()) return {};
  if (t->is_par()) return t->parts();
  return {t};
}

bool purely_parallel(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Empty:
    case Term::Kind::Variable:
      return true;
    case Term::Kind::Par:
      for (const auto& c : t.parts())
        if (!purely_parallel(*c)) return false;
      return true;
    case Term::Kind::Seq:
      return false;
  }
  return false;
}

bool purely_sequential(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Empty:
    case Term::Kind::Variable:
      return true;
    case Term::Kind::Par:
      return false;
    case Term::Kind::Seq:
      return purely_sequential(*t.head()) && purely_sequential(*t.tail());
  }
  return false;
}

bool is_var_par(const Term& t) {
  if (t.is_variable()) return true;
  if (!t.is_par()) return false;
  for (const auto& c : t.parts())
    if (!c->is_variable()) return false;
  return true;
}

namespace {

void collect_subterms(const TermPtr& t, std::set<TermPtr, TermPtrLess>& out) {
  if (!out.insert(t).second) return;
  switch (t->kind()) {
    case Term::Kind::Empty:
    case Term::Kind::Variable:
      break;
    case Term::Kind::Seq:
      collect_subterms(t->tail(), out);
      // The head alone is not a subterm of X.t per the inductive definition,
      // unless it coincides with a subterm of the tail elsewhere.
      break;
    case Term::Kind::Par: {
      // Every split into two non-empty sub-multisets contributes the
      // subterms of both halves. Equivalently: every non-empty proper
      // sub-multiset, taken as a term, plus recursion into it.
      const auto& cs = t->parts();
      std::size_t m = cs.size();
      // enumerate non-empty proper sub-multisets by bitmask over positions;
      // duplicates collapse in the output set
      for (std::size_t mask = 1; mask + 1 < (1ULL << m); ++mask) {
        std::vector<TermPtr> half;
        for (std::size_t i = 0; i < m; ++i)
          if (mask & (1ULL << i)) half.push_back(cs[i]);
        collect_subterms(Term::par(std::move(half)), out);
      }
      break;
    }
  }
}

}  // namespace

std::vector<TermPtr> subterms(const TermPtr& t) {
  std::set<TermPtr, TermPtrLess> out;
  collect_subterms(canonicalize(t), out);
  return {out.begin(), out.end()};
}

std::vector<TermPtr> substitute(const TermPtr& t0, const TermPtr& st0, const TermPtr& repl) {
  TermPtr t = canonicalize(t0);
  TermPtr st = canonicalize(st0);
  std::set<TermPtr, TermPtrLess> out;
  if (equal(t, st)) out.insert(canonicalize(repl));
  switch (t->kind()) {
    case Term::Kind::Empty:
    case Term::Kind::Variable:
      break;
    case Term::Kind::Seq:
      for (const auto& s : substitute(t->tail(), st, repl))
        out.insert(Term::seq(t->head(), s));
      break;
    case Term::Kind::Par: {
      const auto& cs = t->parts();
      std::size_t m = cs.size();
      for (std::size_t mask = 1; mask + 1 < (1ULL << m); ++mask) {
        std::vector<TermPtr> in, rest;
        for (std::size_t i = 0; i < m; ++i)
          ((mask & (1ULL << i)) ? in : rest).push_back(cs[i]);
        TermPtr half = Term::par(std::move(in));
        for (const auto& s : substitute(half, st, repl)) {
          std::vector<TermPtr> cs2 = rest;
          cs2.push_back(s);
          out.insert(Term::par(std::move(cs2)));
        }
      }
      break;
    }
  }
  return {out.begin(), out.end()};
}

std::vector<TermPtr> seq_parts(const TermPtr& t) {
  std::set<TermPtr, TermPtrLess> out;
  std::function<void(const TermPtr&, std::set<TermPtr, TermPtrLess>&)> go =
      [&](const TermPtr& u, std::set<TermPtr, TermPtrLess>& acc) {
        switch (u->kind()) {
          case Term::Kind::Empty:
            break;
          case Term::Kind::Variable:
            acc.insert(u);
            break;
          case Term::Kind::Seq: {
            std::set<TermPtr, TermPtrLess> tails;
            go(u->tail(), tails);
            for (const auto& s : tails) acc.insert(Term::seq(u->head(), s));
            break;
          }
          case Term::Kind::Par:
            for (const auto& c : u->parts()) go(c, acc);
            break;
        }
      };
  go(canonicalize(t), out);
  return {out.begin(), out.end()};
}

VarId last(const TermPtr& t) {
  if (t->is_variable()) return t->var();
  if (t->is_seq() && purely_sequential(*t)) return last(t->tail());
  throw std::invalid_argument("last: term is not a non-empty purely sequential term");
}

TermPtr seq_concat(const TermPtr& t, const TermPtr& u) {
  if (t->is_empty() || u->is_empty() || !purely_sequential(*t) || !purely_sequential(*u))
    throw std::invalid_argument("seq_concat: arguments must be non-empty sequential terms");
  if (t->is_variable()) return u;
  return Term::seq(t->head(), seq_concat(t->tail(), u));
}

}  // namespace prs
