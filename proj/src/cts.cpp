#include "ctt/cts.hpp"

#include "ctt/error.hpp"

namespace ctt {

namespace {

void require_op_rank(int k, const char* op) {
  if (k < 1)
    throw Error(ErrorKind::Rank, std::string(op) + " rank must be >= 1, got " +
                                     std::to_string(k));
}

void require_child_rank(int k, const Cts& c, const char* op) {
  if (c.rank() > k)
    throw Error(ErrorKind::Rank, std::string(op) + ": child rank " +
                                     std::to_string(c.rank()) +
                                     " > node rank " + std::to_string(k));
}

const char* op_name(Cts::Kind k) {
  switch (k) {
    case Cts::Kind::Neg: return "neg";
    case Cts::Kind::Conj: return "and";
    case Cts::Kind::Disj: return "or";
    case Cts::Kind::BigConj: return "All";
    case Cts::Kind::BigDisj: return "Ex";
    default: return "app";
  }
}

}  // namespace

Cts Cts::var(std::string name, Type type, int rank) {
  if (rank < 0) throw Error(ErrorKind::Rank, "negative rank for " + name);
  return Cts(std::make_shared<const Node>(Node{
      Kind::Var, std::move(type), rank, std::move(name), Type::bot(), 0, {}}));
}

Cts Cts::app(Cts fun, Cts arg) {
  const Type& ft = fun.type();
  if (!ft.is_arrow())
    throw Error(ErrorKind::Type, to_string(ft) + " is not an arrow type");
  if (ft.dom() != arg.type())
    throw Error(ErrorKind::Type, "argument of type " + to_string(arg.type()) +
                                     " where " + to_string(ft.dom()) +
                                     " expected");
  int r = std::max(fun.rank(), arg.rank());
  return Cts(std::make_shared<const Node>(Node{
      Kind::App, ft.cod(), r, "", Type::bot(), 0, {std::move(fun), std::move(arg)}}));
}

Cts Cts::neg(int k, Cts child) {
  require_op_rank(k, "neg");
  require_child_rank(k, child, "neg");
  Type t = child.type();
  return Cts(std::make_shared<const Node>(
      Node{Kind::Neg, std::move(t), k, "", Type::bot(), 0, {std::move(child)}}));
}

Cts Cts::conj(int k, Cts left, Cts right) {
  require_op_rank(k, "and");
  require_child_rank(k, left, "and");
  require_child_rank(k, right, "and");
  if (left.type() != right.type())
    throw Error(ErrorKind::Type, "and: operand types differ: " +
                                     to_string(left.type()) + " vs " +
                                     to_string(right.type()));
  Type t = left.type();
  return Cts(std::make_shared<const Node>(Node{
      Kind::Conj, std::move(t), k, "", Type::bot(), 0, {std::move(left), std::move(right)}}));
}

Cts Cts::disj(int k, Cts left, Cts right) {
  require_op_rank(k, "or");
  require_child_rank(k, left, "or");
  require_child_rank(k, right, "or");
  if (left.type() != right.type())
    throw Error(ErrorKind::Type, "or: operand types differ: " +
                                     to_string(left.type()) + " vs " +
                                     to_string(right.type()));
  Type t = left.type();
  return Cts(std::make_shared<const Node>(Node{
      Kind::Disj, std::move(t), k, "", Type::bot(), 0, {std::move(left), std::move(right)}}));
}

Cts Cts::big(Kind kind, int k, std::string index, Type index_type,
             int atom_rank) {
  Cts body = var(index, index_type, atom_rank);
  return big_family(kind, k, std::move(index), std::move(index_type),
                    atom_rank, std::move(body));
}

Cts Cts::big_family(Kind kind, int k, std::string index, Type index_type,
                    int atom_rank, Cts body) {
  if (kind != Kind::BigConj && kind != Kind::BigDisj)
    throw Error(ErrorKind::Syntax, "big_family needs All or Ex");
  require_op_rank(k, op_name(kind));
  if (atom_rank > k)
    throw Error(ErrorKind::Rank, std::string(op_name(kind)) +
                                     ": index rank " +
                                     std::to_string(atom_rank) +
                                     " > node rank " + std::to_string(k));
  require_child_rank(k, body, op_name(kind));
  Type t = body.type();
  return Cts(std::make_shared<const Node>(
      Node{kind, std::move(t), k, std::move(index), std::move(index_type),
           atom_rank, {std::move(body)}}));
}

bool Cts::is_plain_big() const {
  const Cts& b = body();
  return b.is_var() && b.name() == name() && b.type() == index_type() &&
         b.rank() == atom_rank();
}

Cts Cts::with_child(std::size_t i, Cts c) const {
  switch (kind()) {
    case Kind::Var: throw Error(ErrorKind::Syntax, "variable has no children");
    case Kind::App:
      return i == 0 ? app(std::move(c), arg()) : app(fun(), std::move(c));
    case Kind::Neg: return neg(rank(), std::move(c));
    case Kind::Conj:
      return i == 0 ? conj(rank(), std::move(c), child(1))
                    : conj(rank(), child(0), std::move(c));
    case Kind::Disj:
      return i == 0 ? disj(rank(), std::move(c), child(1))
                    : disj(rank(), child(0), std::move(c));
    case Kind::BigConj:
    case Kind::BigDisj:
      return big_family(kind(), rank(), name(), index_type(), atom_rank(),
                        std::move(c));
  }
  return *this;
}

bool operator==(const Cts& a, const Cts& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind() || a.rank() != b.rank() || a.type() != b.type())
    return false;
  if (a.is_var()) return a.name() == b.name();
  if (a.is_big() && (a.name() != b.name() || a.index_type() != b.index_type() ||
                     a.atom_rank() != b.atom_rank()))
    return false;
  const auto& ka = a.children();
  const auto& kb = b.children();
  if (ka.size() != kb.size()) return false;
  for (std::size_t i = 0; i < ka.size(); ++i)
    if (ka[i] != kb[i]) return false;
  return true;
}

const char* to_string(SyntaxClass c) {
  switch (c) {
    case SyntaxClass::Atomic: return "atomic";
    case SyntaxClass::Canonical: return "canonical";
    case SyntaxClass::Molecular: return "molecular";
  }
  return "?";
}

namespace {

bool has_boolean(const Cts& e) {
  if (e.is_boolean()) return true;
  for (const auto& c : e.children())
    if (has_boolean(c)) return true;
  return false;
}

bool boolean_under_app(const Cts& e) {
  if (e.is_app()) return has_boolean(e.fun()) || has_boolean(e.arg());
  for (const auto& c : e.children())
    if (boolean_under_app(c)) return true;
  return false;
}

void collect_free(const Cts& e, std::set<std::string>& bound,
                  std::set<CtsVar>& out) {
  if (e.is_var()) {
    if (!bound.count(e.name())) out.insert({e.name(), e.type(), e.rank()});
    return;
  }
  if (e.is_big()) {
    bool ins = bound.insert(e.name()).second;
    collect_free(e.body(), bound, out);
    if (ins) bound.erase(e.name());
    return;
  }
  for (const auto& c : e.children()) collect_free(c, bound, out);
}

}  // namespace

SyntaxClass classify(const Cts& expr) {
  if (!has_boolean(expr)) return SyntaxClass::Atomic;
  if (!boolean_under_app(expr)) return SyntaxClass::Canonical;
  return SyntaxClass::Molecular;
}

std::set<CtsVar> free_vars(const Cts& expr) {
  std::set<std::string> bound;
  std::set<CtsVar> out;
  collect_free(expr, bound, out);
  return out;
}

Cts substitute_var(const Cts& expr, const std::string& name, const Cts& by) {
  if (expr.is_var()) return expr.name() == name ? by : expr;
  if (expr.is_big() && expr.name() == name) return expr;
  Cts out = expr;
  for (std::size_t i = 0; i < expr.children().size(); ++i) {
    Cts c = substitute_var(expr.child(i), name, by);
    if (c != expr.child(i)) out = out.with_child(i, std::move(c));
  }
  return out;
}

const Cts& subterm_at(const Cts& expr, const std::vector<int>& path) {
  const Cts* cur = &expr;
  for (int i : path) {
    if (i < 0 || static_cast<std::size_t>(i) >= cur->children().size())
      throw Error(ErrorKind::Syntax, "occurrence path leaves the term");
    cur = &cur->child(static_cast<std::size_t>(i));
  }
  return *cur;
}

Cts replace_at(const Cts& expr, const std::vector<int>& path, Cts by) {
  if (path.empty()) return by;
  std::vector<int> rest(path.begin() + 1, path.end());
  auto i = static_cast<std::size_t>(path.front());
  if (i >= expr.children().size())
    throw Error(ErrorKind::Syntax, "occurrence path leaves the term");
  return expr.with_child(i, replace_at(expr.child(i), rest, std::move(by)));
}

}  // namespace ctt
