#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ctt/cts.hpp"
#include "ctt/type.hpp"

namespace ctt {

/// Unranked subterm: a CTS tree whose rank annotations are optional.
/// Boolean nodes carry `rank` only when the user wrote `[k]`; variables and
/// big-operator indices carry one only when written `@k`.
struct Ucts {
  using Kind = Cts::Kind;
  Kind kind = Kind::Var;
  std::optional<int> rank;
  std::string name;
  /// Variable type, or the index type of a big operator.
  Type type = Type::bot();
  /// Big operators: index rank annotation.
  std::optional<int> atom_rank;
  /// Big operators: false for the plain `All(x:TY)` form.
  bool has_body = false;
  std::vector<Ucts> kids;

  /// Type of the whole subterm; throws a Type error when ill-typed.
  Type value_type() const;
  bool is_boolean() const { return kind != Kind::Var && kind != Kind::App; }

  friend bool operator==(const Ucts& a, const Ucts& b);
  friend bool operator!=(const Ucts& a, const Ucts& b) { return !(a == b); }
};

using UctsContext = std::map<std::string, Type>;

/// `and(A, B)`, `neg(A)`, `All(x:e)`, `Ex(x:e; P)`, applications `(F A)`,
/// variables `x:TY` on first use. Optional `[k]` after an operator and `@k`
/// after a variable type are kept as annotations.
Ucts parse_ucts(std::string_view text, UctsContext& ctx);
Ucts parse_ucts(std::string_view text);

/// Prints annotations only where present; the first occurrence of each free
/// variable shows its type.
std::string render(const Ucts& u);

Ucts erase_ranks(const Cts& c);
Ucts erase_ranks(const Ucts& u);

enum class Elaboration { OutermostIncreasing, Uniform, Annotations };

struct ElaborationStrategy {
  Elaboration kind = Elaboration::OutermostIncreasing;
  /// Rank used by Uniform.
  int k = 1;
};

/// Assigns ranks so every side condition holds. Unannotated variables and
/// indices get rank 0.
///  - OutermostIncreasing: each Boolean node gets 1 + the largest child rank
///    (operator annotations are ignored).
///  - Uniform: every Boolean node gets k; fails when k < 1 or a child needs more.
///  - Annotations: written ranks are kept, the rest filled outermost-increasing;
///    fails when a written rank is below a child's.
Cts elaborate_ranks(const Ucts& u, const ElaborationStrategy& s = {});

ElaborationStrategy parse_elaboration(const std::string& text);

}  // namespace ctt
