#ifndef PRS_VERDICT_HPP
#define PRS_VERDICT_HPP

#include <cstddef>
#include <optional>
#include <string>

#include "prs/mbrs.hpp"

namespace prs {

enum class Outcome { Yes, No, Unknown };

/// Three-valued answer. Bounded searches report Unknown instead of
/// guessing; witnesses, when present, replay through the step relation.
struct Verdict {
  Outcome outcome = Outcome::Unknown;
  std::optional<Lasso> lasso;     // ultimately periodic infinite witness
  std::optional<RuleSeq> finite;  // finite witness
  std::string reason;             // why Unknown

  static Verdict yes() { return {Outcome::Yes, {}, {}, {}}; }
  static Verdict yes(Lasso w) { return {Outcome::Yes, std::move(w), {}, {}}; }
  static Verdict yes(RuleSeq w) { return {Outcome::Yes, {}, std::move(w), {}}; }
  static Verdict no() { return {Outcome::No, {}, {}, {}}; }
  static Verdict unknown(std::string why) {
    return {Outcome::Unknown, {}, {}, std::move(why)};
  }

  bool is_yes() const { return outcome == Outcome::Yes; }
  bool is_no() const { return outcome == Outcome::No; }
  bool is_unknown() const { return outcome == Outcome::Unknown; }
  bool definite() const { return outcome != Outcome::Unknown; }
};

struct SearchBudget {
  std::size_t node_bound = 20000;  // explored states
  int depth_bound = 64;            // steps
  int size_bound = 12;             // term size / marking token count

  void validate() const {
    if (node_bound == 0 || depth_bound <= 0 || size_bound <= 0)
      throw std::invalid_argument("search budget fields must be positive");
  }
};

}  // namespace prs

#endif
