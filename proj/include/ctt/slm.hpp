#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ctt/type.hpp"

namespace ctt {

/// Annotated lambda-mu term. Every node carries its type; the factories
/// compute it and reject ill-typed constructions.
class Term {
 public:
  enum class Kind { Var, App, Lam, Mu };

  static Term var(std::string name, Type type);
  static Term app(Term fun, Term arg);
  static Term lam(std::string binder, Type binder_type, Term body);
  /// `binder_type` must be `~s`; the node gets type `s`.
  static Term mu(std::string binder, Type binder_type, Term body);

  Kind kind() const { return node_->kind; }
  const Type& type() const { return node_->type; }
  /// Variable name or binder name.
  const std::string& name() const { return node_->name; }
  const Type& binder_type() const { return node_->binder_type; }
  const Term& fun() const { return node_->kids[0]; }
  const Term& arg() const { return node_->kids[1]; }
  const Term& body() const { return node_->kids[0]; }

  bool is_var() const { return kind() == Kind::Var; }
  bool is_app() const { return kind() == Kind::App; }
  bool is_lam() const { return kind() == Kind::Lam; }
  bool is_mu() const { return kind() == Kind::Mu; }

  /// Pointer identity, for cheap sharing checks.
  bool same_node(const Term& o) const { return node_ == o.node_; }

  /// Structural equality (binder names significant).
  friend bool operator==(const Term& a, const Term& b);
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }

 private:
  struct Node {
    Kind kind;
    Type type;
    std::string name;
    Type binder_type;
    std::vector<Term> kids;
  };
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

using TypeContext = std::map<std::string, Type>;
using FreeVarSet = std::set<std::pair<std::string, Type>>;

/// Re-derives the type of `term`, checking every variable against its binder
/// or `ctx`. Errors carry the path (`fun`/`arg`/`body` steps) to the node.
Type typecheck_slm(const Term& term, const TypeContext& ctx);

/// Free variables with their types. A name occurring free at two types throws.
FreeVarSet free_vars(const Term& term);
bool occurs_free(const std::string& name, const Term& term);

/// Every variable name in the term, bound or free.
std::set<std::string> all_names(const Term& term);

}  // namespace ctt
