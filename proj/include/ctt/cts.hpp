#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "ctt/type.hpp"

namespace ctt {

/// Ranked subterm of the classical type system.
///
/// Boolean nodes carry an operator rank k >= 1 that dominates every child
/// rank; applications take the max of their parts. Big operators bind an
/// index variable of rank `atom_rank`; their body is the bare index variable
/// unless a family body was given (`All[k](x:s@0; P)`).
class Cts {
 public:
  enum class Kind { Var, App, Neg, Conj, Disj, BigConj, BigDisj };

  static Cts var(std::string name, Type type, int rank);
  static Cts app(Cts fun, Cts arg);
  static Cts neg(int k, Cts child);
  static Cts conj(int k, Cts left, Cts right);
  static Cts disj(int k, Cts left, Cts right);
  static Cts big(Kind kind, int k, std::string index, Type index_type,
                 int atom_rank);
  /// Family form: the big operator ranges `index` over its domain in `body`.
  static Cts big_family(Kind kind, int k, std::string index, Type index_type,
                        int atom_rank, Cts body);

  Kind kind() const { return node_->kind; }
  const Type& type() const { return node_->type; }
  int rank() const { return node_->rank; }
  /// Operator rank of Boolean nodes (0 for Var/App).
  int op_rank() const { return is_boolean() ? node_->rank : 0; }
  const std::string& name() const { return node_->name; }
  const Type& index_type() const { return node_->index_type; }
  int atom_rank() const { return node_->atom_rank; }
  const std::vector<Cts>& children() const { return node_->kids; }
  const Cts& child(std::size_t i) const { return node_->kids.at(i); }
  const Cts& fun() const { return child(0); }
  const Cts& arg() const { return child(1); }
  /// Body of a big operator (the index variable itself for the plain form).
  const Cts& body() const { return child(0); }
  bool is_plain_big() const;

  bool is_var() const { return kind() == Kind::Var; }
  bool is_app() const { return kind() == Kind::App; }
  bool is_big() const {
    return kind() == Kind::BigConj || kind() == Kind::BigDisj;
  }
  bool is_boolean() const { return !is_var() && !is_app(); }

  /// Replaces child i, re-running the factory checks.
  Cts with_child(std::size_t i, Cts c) const;

  friend bool operator==(const Cts& a, const Cts& b);
  friend bool operator!=(const Cts& a, const Cts& b) { return !(a == b); }

 private:
  struct Node {
    Kind kind;
    Type type;
    int rank;
    std::string name;
    Type index_type;
    int atom_rank;
    std::vector<Cts> kids;
  };
  explicit Cts(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

enum class SyntaxClass { Atomic, Canonical, Molecular };
const char* to_string(SyntaxClass c);

/// Atomic: no Boolean node. Canonical: no Boolean node below an application.
SyntaxClass classify(const Cts& expr);

struct CtsVar {
  std::string name;
  Type type;
  int rank;
  friend bool operator<(const CtsVar& a, const CtsVar& b) {
    return std::tie(a.name, a.type, a.rank) < std::tie(b.name, b.type, b.rank);
  }
  friend bool operator==(const CtsVar& a, const CtsVar& b) {
    return a.name == b.name && a.type == b.type && a.rank == b.rank;
  }
};

/// Free variables; big-operator index variables are bound in their body.
std::set<CtsVar> free_vars(const Cts& expr);

/// Capture-free replacement of free `name` by `by` (used for instantiation).
Cts substitute_var(const Cts& expr, const std::string& name, const Cts& by);

/// Subterm at an occurrence path (child indices from the root).
const Cts& subterm_at(const Cts& expr, const std::vector<int>& path);
Cts replace_at(const Cts& expr, const std::vector<int>& path, Cts by);

}  // namespace ctt
