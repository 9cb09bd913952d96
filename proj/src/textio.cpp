#include "prs/textio.hpp"

#include <cctype>
#include <sstream>

namespace prs {

namespace {

struct Lexer {
  explicit Lexer(const std::string& text) : text(text) { skip(); }

  const std::string& text;
  std::size_t pos = 0;
  int line = 1;
  int col = 1;

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line, col); }

  void advance() {
    if (pos < text.size()) {
      if (text[pos] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++pos;
    }
  }

  void skip(bool stop_at_newline = false) {
    while (pos < text.size()) {
      char c = text[pos];
      if (c == '#') {
        while (pos < text.size() && text[pos] != '\n') advance();
      } else if (c == '\n') {
        if (stop_at_newline) return;
        advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        return;
      }
    }
  }

  bool eof() const { return pos >= text.size(); }
  char peek() const { return pos < text.size() ? text[pos] : '\0'; }

  bool at_ident() const {
    char c = peek();
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  }

  std::string ident() {
    if (!at_ident()) fail("expected identifier");
    std::string out;
    while (pos < text.size()) {
      char c = text[pos];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'') {
        out += c;
        advance();
      } else {
        break;
      }
    }
    skip();
    return out;
  }

  bool try_punct(const std::string& p) {
    if (text.compare(pos, p.size(), p) == 0) {
      for (std::size_t i = 0; i < p.size(); ++i) advance();
      skip();
      return true;
    }
    return false;
  }

  void expect(const std::string& p) {
    if (!try_punct(p)) fail("expected '" + p + "'");
  }

  int number() {
    if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected number");
    int v = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      v = v * 10 + (text[pos] - '0');
      advance();
    }
    skip();
    return v;
  }
};

// term := seq ('||' seq)*       (parallel binds loosest)
// seq  := atom ('.' seq)?       (right-associative)
// atom := 'eps' | identifier | '(' term ')'
TermPtr parse_term_rec(Lexer& lx, const VarTable& vars);

TermPtr parse_atom(Lexer& lx, const VarTable& vars) {
  if (lx.try_punct("(")) {
    TermPtr t = parse_term_rec(lx, vars);
    lx.expect(")");
    return t;
  }
  if (!lx.at_ident()) lx.fail("expected term");
  std::string name = lx.ident();
  if (name == "eps") return Term::empty();
  VarId v;
  if (!vars.find(name, v)) lx.fail("undeclared variable '" + name + "'");
  return Term::variable(v);
}

TermPtr parse_seq(Lexer& lx, const VarTable& vars) {
  TermPtr head = parse_atom(lx, vars);
  if (lx.try_punct(".")) return Term::seq(head, parse_seq(lx, vars));
  return head;
}

TermPtr parse_term_rec(Lexer& lx, const VarTable& vars) {
  std::vector<TermPtr> parts{parse_seq(lx, vars)};
  while (lx.try_punct("||")) parts.push_back(parse_seq(lx, vars));
  return parts.size() == 1 ? parts[0] : Term::par(std::move(parts));
}

ComponentSet parse_compset(Lexer& lx, int n) {
  lx.expect("{");
  ComponentSet k;
  if (!lx.try_punct("}")) {
    while (true) {
      int i = lx.number();
      if (i < 1 || i > n) lx.fail("component index " + std::to_string(i) + " out of range");
      k.add(i);
      if (lx.try_punct("}")) break;
      lx.expect(",");
    }
  }
  return k;
}

bool is_directive(const std::string& s) {
  return s == "actions" || s == "vars" || s == "components" || s == "rule" ||
         s == "init";
}

// Next identifier without consuming it; empty when the input continues with
// something else.
std::string peek_ident(const Lexer& lx) {
  if (!lx.at_ident()) return {};
  std::string out;
  for (std::size_t p = lx.pos; p < lx.text.size(); ++p) {
    char c = lx.text[p];
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'')
      out += c;
    else
      break;
  }
  return out;
}

}  // namespace

TermPtr parse_term(const std::string& text, const VarTable& vars) {
  Lexer lx(text);
  TermPtr t = parse_term_rec(lx, vars);
  if (!lx.eof()) lx.fail("trailing input after term");
  return t;
}

SystemFile parse_system(const std::string& text) {
  Lexer lx(text);
  SystemFile out;
  Mbrs& m = out.mbrs;
  bool have_components = false;
  while (!lx.eof()) {
    std::string kw = lx.ident();
    if (kw == "actions") {
      while (lx.at_ident() && !is_directive(peek_ident(lx))) {
        std::string a = lx.ident();
        if (a == "tau" || a == "eps") lx.fail("'" + a + "' is reserved");
        m.intern_action(a);
      }
    } else if (kw == "vars") {
      while (lx.at_ident() && !is_directive(peek_ident(lx))) {
        std::string v = lx.ident();
        if (v == "tau" || v == "eps") lx.fail("'" + v + "' is reserved");
        m.vars.intern(v);
      }
    } else if (kw == "components") {
      m.n_components = lx.number();
      if (m.n_components > 32) lx.fail("at most 32 components supported");
      have_components = true;
    } else if (kw == "rule") {
      if (!have_components) lx.fail("'components' must precede rules");
      Rule r;
      r.id = lx.ident();
      if (m.rule_by_id(r.id)) lx.fail("duplicate rule id '" + r.id + "'");
      lx.expect(":");
      r.lhs = parse_term_rec(lx, m.vars);
      if (r.lhs->is_empty()) lx.fail("rule lhs must not be eps");
      lx.expect("-");
      std::string a = lx.ident();
      if (a == "tau") {
        r.action = Action::silent();
      } else {
        auto idx = m.find_action(a);
        if (!idx) lx.fail("undeclared action '" + a + "'");
        r.action = Action::sym(*idx);
      }
      lx.expect("->");
      r.rhs = parse_term_rec(lx, m.vars);
      lx.expect("@");
      r.comps = parse_compset(lx, m.n_components);
      m.rules.push_back(std::move(r));
    } else if (kw == "init") {
      out.init = parse_term_rec(lx, m.vars);
    } else {
      lx.fail("unknown directive '" + kw + "'");
    }
  }
  return out;
}

std::string print_system(const Mbrs& m, const TermPtr* init) {
  std::ostringstream os;
  os << "actions";
  for (const auto& a : m.actions) os << " " << a;
  os << "\nvars";
  for (VarId v : m.vars.all()) os << " " << m.vars.name(v);
  os << "\ncomponents " << m.n_components << "\n";
  for (const auto& r : m.rules) {
    os << "rule " << r.id << ": " << to_string(r.lhs, m.vars) << " -"
       << m.action_str(r.action) << "-> " << to_string(r.rhs, m.vars) << " @ "
       << r.comps.str() << "\n";
  }
  if (init) os << "init " << to_string(*init, m.vars) << "\n";
  return os.str();
}

// Formulas -------------------------------------------------------------------

namespace {

PropPtr parse_prop_rec(Lexer& lx, const Mbrs& m);

PropPtr parse_prop_unary(Lexer& lx, const Mbrs& m) {
  if (lx.try_punct("!")) return PropFormula::neg(parse_prop_unary(lx, m));
  if (lx.try_punct("(")) {
    PropPtr p = parse_prop_rec(lx, m);
    lx.expect(")");
    return p;
  }
  if (!lx.at_ident()) lx.fail("expected propositional formula");
  std::string name = lx.ident();
  if (name == "true") return PropFormula::truth();
  if (name == "F" || name == "GF" || name == "G" || name == "U" || name == "X")
    lx.fail("temporal operator '" + name + "' not allowed inside a propositional formula");
  auto idx = m.find_action(name);
  if (!idx) lx.fail("unknown action '" + name + "'");
  return PropFormula::act(*idx);
}

PropPtr parse_prop_rec(Lexer& lx, const Mbrs& m) {
  PropPtr p = parse_prop_unary(lx, m);
  while (lx.try_punct("&")) p = PropFormula::conj(p, parse_prop_unary(lx, m));
  return p;
}

FragPtr parse_frag_rec(Lexer& lx, const Mbrs& m);

FragPtr parse_frag_unary(Lexer& lx, const Mbrs& m) {
  if (lx.try_punct("!")) return FragmentFormula::neg(parse_frag_unary(lx, m));
  if (lx.try_punct("(")) {
    FragPtr f = parse_frag_rec(lx, m);
    lx.expect(")");
    return f;
  }
  if (!lx.at_ident()) lx.fail("expected formula");
  std::size_t save_pos = lx.pos;
  int save_line = lx.line, save_col = lx.col;
  std::string name = lx.ident();
  if (name == "F") return FragmentFormula::ev(parse_prop_unary(lx, m));
  if (name == "GF") return FragmentFormula::inf_often(parse_prop_unary(lx, m));
  if (name == "G" || name == "U" || name == "X")
    lx.fail("operator '" + name + "' is outside the supported fragment");
  // A bare propositional formula is not a formula of the fragment.
  lx.pos = save_pos;
  lx.line = save_line;
  lx.col = save_col;
  lx.fail("expected F or GF; propositional formulas must appear under a temporal operator");
}

FragPtr parse_frag_rec(Lexer& lx, const Mbrs& m) {
  FragPtr f = parse_frag_unary(lx, m);
  while (true) {
    if (lx.try_punct("&")) {
      f = FragmentFormula::conj(f, parse_frag_unary(lx, m));
    } else if (lx.at_ident() && lx.text.compare(lx.pos, 1, "U") == 0) {
      // catch `phi U phi` early with a clear message
      std::size_t p = lx.pos;
      std::string name;
      while (p < lx.text.size() &&
             (std::isalnum(static_cast<unsigned char>(lx.text[p])) || lx.text[p] == '_'))
        name += lx.text[p++];
      if (name == "U") lx.fail("until operator is outside the supported fragment");
      break;
    } else {
      break;
    }
  }
  return f;
}

}  // namespace

PropPtr parse_prop(const std::string& text, const Mbrs& m) {
  Lexer lx(text);
  PropPtr p = parse_prop_rec(lx, m);
  if (!lx.eof()) lx.fail("trailing input after formula");
  return p;
}

FragPtr parse_formula(const std::string& text, const Mbrs& m) {
  Lexer lx(text);
  FragPtr f = parse_frag_rec(lx, m);
  if (!lx.eof()) lx.fail("trailing input after formula");
  return f;
}

std::string to_string(const PropPtr& p, const Mbrs& m) {
  switch (p->kind()) {
    case PropFormula::Kind::True:
      return "true";
    case PropFormula::Kind::Act:
      return m.actions.at(p->action());
    case PropFormula::Kind::Not: {
      const PropPtr& a = p->left();
      bool atom = a->kind() == PropFormula::Kind::Act || a->kind() == PropFormula::Kind::True;
      return atom ? "!" + to_string(a, m) : "!(" + to_string(a, m) + ")";
    }
    case PropFormula::Kind::And: {
      auto wrap = [&](const PropPtr& q) {
        return q->kind() == PropFormula::Kind::And ? to_string(q, m)
                                                   : to_string(q, m);
      };
      return wrap(p->left()) + " & " + wrap(p->right());
    }
  }
  return "?";
}

std::string to_string(const FragPtr& f, const Mbrs& m) {
  switch (f->kind()) {
    case FragmentFormula::Kind::F:
      return "F (" + to_string(f->prop(), m) + ")";
    case FragmentFormula::Kind::GF:
      return "GF (" + to_string(f->prop(), m) + ")";
    case FragmentFormula::Kind::Not:
      return "!(" + to_string(f->left(), m) + ")";
    case FragmentFormula::Kind::And:
      return to_string(f->left(), m) + " & " + to_string(f->right(), m);
  }
  return "?";
}

std::string to_string(const Disjunct& d, const Mbrs& m) {
  std::string out;
  for (const auto& p : d.fplus) out += (out.empty() ? "" : " & ") + ("F+ (" + to_string(p, m) + ")");
  for (const auto& p : d.gf) out += (out.empty() ? "" : " & ") + ("GF (" + to_string(p, m) + ")");
  out += (out.empty() ? "" : " & ") + ("G (" + to_string(d.g, m) + ")");
  return out;
}

}  // namespace prs
