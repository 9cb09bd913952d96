#ifndef PRS_TEXTIO_HPP
#define PRS_TEXTIO_HPP

#include <optional>
#include <stdexcept>
#include <string>

#include "prs/altl.hpp"
#include "prs/mbrs.hpp"

namespace prs {

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, int line, int col)
      : std::runtime_error("line " + std::to_string(line) + ":" +
                           std::to_string(col) + ": " + msg),
        line(line),
        col(col) {}
  int line;
  int col;
};

struct SystemFile {
  Mbrs mbrs;
  std::optional<TermPtr> init;
};

/// Parses a system file:
///   actions a b ...
///   vars X Y ...
///   components n
///   rule <id>: <term> -<action>-> <term> @ {i,j,...}
///   init <term>           (optional)
/// Term syntax: eps, identifiers, `||` (parallel, lowest precedence),
/// `.` (sequential, right-associative, binds tighter), parentheses.
/// `#` starts a comment. Undeclared symbols are rejected; the action name
/// `tau` is reserved for silent rules.
SystemFile parse_system(const std::string& text);

std::string print_system(const Mbrs& m, const TermPtr* init = nullptr);

/// Parses a term against an existing variable table.
TermPtr parse_term(const std::string& text, const VarTable& vars);

/// Parses a formula of the restricted fragment: F p, GF p, !f, f & f,
/// parentheses; propositional p: action names, true, !, &. Anything outside
/// the fragment (U, nested temporal operators, bare temporal-level actions)
/// is rejected.
FragPtr parse_formula(const std::string& text, const Mbrs& m);

PropPtr parse_prop(const std::string& text, const Mbrs& m);

std::string to_string(const PropPtr& p, const Mbrs& m);
std::string to_string(const FragPtr& f, const Mbrs& m);
std::string to_string(const Disjunct& d, const Mbrs& m);

}  // namespace prs

#endif
