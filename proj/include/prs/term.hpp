#ifndef PRS_TERM_HPP
#define PRS_TERM_HPP

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace prs {

enum class VarKind : std::uint8_t {
  Ordinary,
  SinkFinite,    // abstracts a finished sequential subderivation
  SinkInfinite,  // abstracts a subderivation that never terminates
};

struct VarId {
  std::uint32_t value = 0;

  friend bool operator==(VarId a, VarId b) { return a.value == b.value; }
  friend bool operator!=(VarId a, VarId b) { return a.value != b.value; }
  friend bool operator<(VarId a, VarId b) { return a.value < b.value; }
};

/// Interned variable names. Derived systems extend a copy by appending,
/// so variable ids of the base system stay valid.
class VarTable {
public:
  VarId intern(const std::string& name, VarKind kind = VarKind::Ordinary);
  /// Returns the id of `name`, or nothing.
  bool find(const std::string& name, VarId& out) const;
  bool contains(const std::string& name) const;

  const std::string& name(VarId v) const { return names_.at(v.value); }
  VarKind kind(VarId v) const { return kinds_.at(v.value); }
  std::size_t size() const { return names_.size(); }

  /// Interns a name not colliding with any existing one, derived from `stem`.
  VarId fresh(const std::string& stem, VarKind kind = VarKind::Ordinary);

  std::vector<VarId> all() const;

private:
  std::vector<std::string> names_;
  std::vector<VarKind> kinds_;
};

class Term;
using TermPtr = std::shared_ptr<const Term>;

/// Canonical process term. Parallel composition is a sorted multiset of
/// non-empty children none of which is itself a Par; sequential composition
/// is right-associated with a non-Seq, non-empty head and a non-empty tail.
/// Equality of canonical forms coincides with equivalence modulo AC of the
/// parallel operator, associativity of the sequential one, and the identity
/// of the empty term.
class Term {
public:
  enum class Kind : std::uint8_t { Empty, Variable, Par, Seq };

  Kind kind() const { return kind_; }
  bool is_empty() const { return kind_ == Kind::Empty; }
  bool is_variable() const { return kind_ == Kind::Variable; }
  bool is_par() const { return kind_ == Kind::Par; }
  bool is_seq() const { return kind_ == Kind::Seq; }

  VarId var() const;
  const std::vector<TermPtr>& parts() const;  // Par children
  const TermPtr& head() const;                // Seq head
  const TermPtr& tail() const;                // Seq tail

  /// Number of variable occurrences.
  int size() const { return size_; }

  static const TermPtr& empty();
  static TermPtr variable(VarId v);
  static TermPtr par(std::vector<TermPtr> children);
  static TermPtr seq(TermPtr head, TermPtr tail);

private:
  Term() = default;
  Kind kind_ = Kind::Empty;
  VarId var_{};
  std::vector<TermPtr> children_;  // Par: all; Seq: {head, tail}
  int size_ = 0;
};

/// Total order on canonical encodings; fixes the order of parallel children.
int compare(const Term& a, const Term& b);
inline int compare(const TermPtr& a, const TermPtr& b) { return compare(*a, *b); }

bool equal(const TermPtr& a, const TermPtr& b);

std::size_t term_hash(const Term& t);

struct TermPtrHash {
  std::size_t operator()(const TermPtr& t) const { return term_hash(*t); }
};
struct TermPtrEq {
  bool operator()(const TermPtr& a, const TermPtr& b) const { return equal(a, b); }
};
struct TermPtrLess {
  bool operator()(const TermPtr& a, const TermPtr& b) const { return compare(a, b) < 0; }
};

/// Rebuilds `t` through the canonicalizing constructors. Idempotent.
TermPtr canonicalize(const TermPtr& t);

std::string to_string(const Term& t, const VarTable& vars);
inline std::string to_string(const TermPtr& t, const VarTable& vars) {
  return to_string(*t, vars);
}

/// Top-level parallel decomposition: the multiset of parallel atoms
/// (a single-element vector when t is not a Par; empty when t is empty).
std::vector<TermPtr> par_atoms(const TermPtr& t);

bool purely_parallel(const Term& t);   // no sequential composition
bool purely_sequential(const Term& t); // no parallel composition
bool is_var_par(const Term& t);        // variable, or parallel of variables (non-empty)

// Appendix-style term operations -------------------------------------------

std::vector<TermPtr> subterms(const TermPtr& t);

/// All terms obtained by substituting one occurrence of `st` in `t` by `repl`.
std::vector<TermPtr> substitute(const TermPtr& t, const TermPtr& st, const TermPtr& repl);

/// The maximal purely sequential slices of `t`.
std::vector<TermPtr> seq_parts(const TermPtr& t);

/// Last (rightmost) variable of a non-empty purely sequential term.
VarId last(const TermPtr& t);

/// Concatenation of non-empty purely sequential terms: the unique element
/// of t[last(t) -> u].
TermPtr seq_concat(const TermPtr& t, const TermPtr& u);

}  // namespace prs

#endif
