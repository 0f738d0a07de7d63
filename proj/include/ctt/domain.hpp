#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ctt/cts.hpp"
#include "ctt/type.hpp"

namespace ctt {

/// Element of a ranked domain: a rank-0 atom or a ranked Boolean node.
///
/// Atoms are truth values, individuals, function tables (entries listed in
/// the enumeration order of the argument domain), opaque symbols and
/// symbolic applications. Meet/Join are n-ary; empty ones are top/bottom.
class Elem {
 public:
  enum class Kind { Truth, Individual, Table, Symbol, AtomicApp, Neg, Meet, Join };

  static Elem truth(bool v);
  static Elem individual(Type base, int index);
  /// `keys` is the rank-0 domain of the argument type, shared by all tables
  /// over it.
  static Elem table(Type fn, std::shared_ptr<const std::vector<Elem>> keys,
                    std::vector<Elem> entries);
  static Elem symbol(std::string name, Type type, int rank = 0);
  static Elem atomic_app(Elem fun, Elem arg);
  static Elem neg(int k, Elem child);
  static Elem meet(int k, Type type, std::vector<Elem> kids);
  static Elem join(int k, Type type, std::vector<Elem> kids);

  Kind kind() const { return node_->kind; }
  const Type& type() const { return node_->type; }
  int rank() const { return node_->rank; }
  bool truth_value() const { return node_->value != 0; }
  int index() const { return node_->value; }
  const std::string& name() const { return node_->name; }
  const std::vector<Elem>& children() const { return node_->kids; }
  const std::vector<Elem>& entries() const { return node_->kids; }
  const std::vector<Elem>& keys() const { return *node_->keys; }
  const Elem& child(std::size_t i) const { return node_->kids.at(i); }
  const Elem& fun() const { return child(0); }
  const Elem& arg() const { return child(1); }

  bool is_node() const {
    return kind() == Kind::Neg || kind() == Kind::Meet || kind() == Kind::Join;
  }
  bool is_atom() const { return !is_node(); }
  /// No symbols anywhere inside.
  bool concrete() const { return node_->concrete; }

  friend bool operator==(const Elem& a, const Elem& b);
  friend bool operator!=(const Elem& a, const Elem& b) { return !(a == b); }
  friend bool operator<(const Elem& a, const Elem& b);

 private:
  struct Node {
    Kind kind = Kind::Truth;
    Type type = Type::bot();
    int rank = 0;
    int value = 0;
    std::string name;
    std::vector<Elem> kids;
    std::shared_ptr<const std::vector<Elem>> keys;
    bool concrete = true;
  };
  explicit Elem(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static std::shared_ptr<Node> make_node(Kind kind, Type type);
  static int compare(const Elem& a, const Elem& b);
  std::shared_ptr<const Node> node_;
};

/// Name of the i-th individual of a base type: a, b, c, d.
std::string individual_name(int index);

std::string render(const Elem& e, bool sort_children = false);

inline constexpr int kMaxBaseSize = 4;
inline constexpr std::size_t kMaxRank0Size = std::size_t{1} << 16;
inline constexpr int kMaxGenerators = 20;

struct ModelConfig {
  std::map<std::string, int> base_sizes;
  int rank_cap = 2;
  std::map<std::string, Elem> constants;

  /// Throws Model/Cap errors for sizes outside 1..kMaxBaseSize.
  void validate() const;
};

/// Rank-0 domain of `ty`, in enumeration order. Tables vary their last
/// entry fastest. Memoized per model shape.
std::shared_ptr<const std::vector<Elem>> rank0_atoms(const ModelConfig& m,
                                                     const Type& ty);
std::size_t rank0_size(const ModelConfig& m, const Type& ty);
/// Position of a concrete rank-0 element in its domain.
std::size_t atom_index(const ModelConfig& m, const Elem& atom);

/// rank 0: all atoms. rank 1: every full-DNF Join of minterms over the
/// atoms, 2^(2^k) of them, in mask order.
std::vector<Elem> enumerate_domain(const ModelConfig& m, const Type& ty, int rank);

/// Minterm over the rank-0 atoms of `ty`: atom i positive iff `member[i]`.
Elem minterm(const ModelConfig& m, const Type& ty, const std::vector<bool>& member);

/// Equality in the nested free Boolean algebra. Type bot is the two-element
/// algebra at every rank: 0/1 are its constants and symbolic atoms are the
/// only generators.
bool ba_equal(const Elem& x, const Elem& y);
bool ba_leq(const Elem& x, const Elem& y);

/// Truth table of `e` over `gens` (bit v set iff e holds at valuation v).
/// Subelements are matched against `gens` by ba_equal at rank `level`.
std::vector<bool> truth_table(const Elem& e, int level, const std::vector<Elem>& gens);

/// Value of a concrete element of type bot, if it has one.
std::optional<bool> bot_value(const Elem& e);

/// Rank-driven application (expansion conditions).
Elem apply_elem(const Elem& p, const Elem& a, const ModelConfig& m);

/// Flattens same-rank nested Meets/Joins and drops duplicate children.
Elem tidy(const Elem& e);

/// Parses an element literal of type `ty`: `0`, `1`, individual names,
/// `table{k->v, ...}`, `neg[k](E)`, `and[k](E, ...)`, `or[k](E, ...)`.
Elem parse_elem(const std::string& text, const Type& ty, const ModelConfig& m);

using Assignment = std::map<std::string, Elem>;

/// Interprets a CTS subterm. Free variables come from `rho`, then the
/// model's constants; when `symbolic` is set the rest become symbols.
Elem interpret_cts(const Cts& expr, const ModelConfig& m, const Assignment& rho,
                   bool symbolic);

/// Replaces symbols bound in `rho` and re-applies symbolic applications.
Elem instantiate(const Elem& e, const Assignment& rho, const ModelConfig& m);

/// Canonical form of a molecular expression; free variables stay symbolic.
Elem canonicalize(const Cts& expr, const ModelConfig& m);

/// Reading of a set of subsets of the rank-0 domain of `sigma`:
/// the Join of the member minterms, in the given order.
Elem iso_from_sets(const ModelConfig& m, const Type& sigma,
                   const std::vector<std::vector<bool>>& sets);

/// Type reduction: f of type ~~s at rank n becomes an element of s at rank n+1.
Elem iso_i(const Elem& f, const ModelConfig& m);

/// Applies iso_i once per pair of leading negations on f's type.
Elem iso_iterate(const Elem& f, const ModelConfig& m);

}  // namespace ctt
