#include "ctt/domain.hpp"

#include <algorithm>
#include <cstdint>
#include <mutex>

#include "ctt/error.hpp"
#include "ctt/syntax.hpp"
#include "lexer.hpp"

namespace ctt {

// ---------------------------------------------------------------------------
// Elem

std::shared_ptr<Elem::Node> Elem::make_node(Kind kind, Type type) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->type = std::move(type);
  return n;
}

Elem Elem::truth(bool v) {
  auto n = make_node(Kind::Truth, Type::bot());
  n->value = v ? 1 : 0;
  return Elem(n);
}

Elem Elem::individual(Type base, int index) {
  if (!base.is_base())
    throw Error(ErrorKind::Type, "individuals need a base type, got " + to_string(base));
  auto n = make_node(Kind::Individual, std::move(base));
  n->value = index;
  return Elem(n);
}

Elem Elem::table(Type fn, std::shared_ptr<const std::vector<Elem>> keys,
                 std::vector<Elem> entries) {
  if (!fn.is_arrow())
    throw Error(ErrorKind::Type, "table type " + to_string(fn) + " is not an arrow");
  if (!keys || keys->size() != entries.size())
    throw Error(ErrorKind::Model, "table over " + to_string(fn) + " is not total");
  auto n = make_node(Kind::Table, fn);
  for (const auto& e : entries) {
    if (e.type() != fn.cod() || e.rank() != 0)
      throw Error(ErrorKind::Type, "table entry " + render(e) + " does not belong to " +
                                       to_string(fn.cod()) + " at rank 0");
    n->concrete = n->concrete && e.concrete();
  }
  n->kids = std::move(entries);
  n->keys = std::move(keys);
  return Elem(n);
}

Elem Elem::symbol(std::string name, Type type, int rank) {
  auto n = make_node(Kind::Symbol, std::move(type));
  n->name = std::move(name);
  n->rank = rank;
  n->concrete = false;
  return Elem(n);
}

Elem Elem::atomic_app(Elem fun, Elem arg) {
  const Type& ft = fun.type();
  if (!ft.is_arrow() || ft.dom() != arg.type())
    throw Error(ErrorKind::Type, "cannot apply " + to_string(ft) + " to " +
                                     to_string(arg.type()));
  auto n = make_node(Kind::AtomicApp, ft.cod());
  n->rank = std::max(fun.rank(), arg.rank());
  n->concrete = false;
  n->kids = {std::move(fun), std::move(arg)};
  return Elem(n);
}

namespace {

void check_node(const char* op, int k, const Type& type, const std::vector<Elem>& kids) {
  if (k < 1)
    throw Error(ErrorKind::Rank, std::string(op) + " rank must be >= 1, got " +
                                     std::to_string(k));
  for (const auto& c : kids) {
    if (c.rank() > k)
      throw Error(ErrorKind::Rank, std::string(op) + ": child rank " +
                                       std::to_string(c.rank()) + " > node rank " +
                                       std::to_string(k));
    if (c.type() != type)
      throw Error(ErrorKind::Type, std::string(op) + ": child of type " +
                                       to_string(c.type()) + " under " + to_string(type));
  }
}

}  // namespace

Elem Elem::neg(int k, Elem child) {
  Type t = child.type();
  check_node("neg", k, t, {child});
  auto n = make_node(Kind::Neg, t);
  n->rank = k;
  n->concrete = child.concrete();
  n->kids = {std::move(child)};
  return Elem(n);
}

Elem Elem::meet(int k, Type type, std::vector<Elem> kids) {
  check_node("and", k, type, kids);
  auto n = make_node(Kind::Meet, std::move(type));
  n->rank = k;
  for (const auto& c : kids) n->concrete = n->concrete && c.concrete();
  n->kids = std::move(kids);
  return Elem(n);
}

Elem Elem::join(int k, Type type, std::vector<Elem> kids) {
  check_node("or", k, type, kids);
  auto n = make_node(Kind::Join, std::move(type));
  n->rank = k;
  for (const auto& c : kids) n->concrete = n->concrete && c.concrete();
  n->kids = std::move(kids);
  return Elem(n);
}

int Elem::compare(const Elem& a, const Elem& b) {
  if (a.node_ == b.node_) return 0;
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  if (a.type() != b.type()) return a.type() < b.type() ? -1 : 1;
  if (a.rank() != b.rank()) return a.rank() < b.rank() ? -1 : 1;
  if (a.node_->value != b.node_->value) return a.node_->value < b.node_->value ? -1 : 1;
  if (int c = a.name().compare(b.name())) return c < 0 ? -1 : 1;
  const auto& ka = a.node_->kids;
  const auto& kb = b.node_->kids;
  for (std::size_t i = 0; i < std::min(ka.size(), kb.size()); ++i)
    if (int c = compare(ka[i], kb[i])) return c;
  if (ka.size() != kb.size()) return ka.size() < kb.size() ? -1 : 1;
  return 0;
}

bool operator==(const Elem& a, const Elem& b) { return Elem::compare(a, b) == 0; }
bool operator<(const Elem& a, const Elem& b) { return Elem::compare(a, b) < 0; }

std::string individual_name(int index) {
  if (index >= 0 && index < 26) return std::string(1, static_cast<char>('a' + index));
  return "i" + std::to_string(index);
}

std::string render(const Elem& e, bool sort_children) {
  switch (e.kind()) {
    case Elem::Kind::Truth: return e.truth_value() ? "1" : "0";
    case Elem::Kind::Individual: return individual_name(e.index());
    case Elem::Kind::Symbol: return e.name();
    case Elem::Kind::AtomicApp:
      return "(" + render(e.fun(), sort_children) + " " + render(e.arg(), sort_children) +
             ")";
    case Elem::Kind::Table: {
      std::string out = "table{";
      for (std::size_t i = 0; i < e.entries().size(); ++i) {
        if (i) out += ", ";
        out += render(e.keys()[i], sort_children) + "->" +
               render(e.entries()[i], sort_children);
      }
      return out + "}";
    }
    case Elem::Kind::Neg:
      return "neg[" + std::to_string(e.rank()) + "](" + render(e.child(0), sort_children) +
             ")";
    case Elem::Kind::Meet:
    case Elem::Kind::Join: {
      std::vector<std::string> parts;
      bool any_op = false;
      for (const auto& c : e.children()) {
        parts.push_back(render(c, sort_children));
        any_op = any_op || c.is_node();
      }
      if (sort_children) std::sort(parts.begin(), parts.end());
      std::string out = (e.kind() == Elem::Kind::Meet ? "and[" : "or[") +
                        std::to_string(e.rank()) + "](";
      for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += any_op ? ", " : ",";
        out += parts[i];
      }
      return out + ")";
    }
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Models and rank-0 domains

void ModelConfig::validate() const {
  for (const auto& [name, size] : base_sizes) {
    if (size < 1)
      throw Error(ErrorKind::Model, "base type " + name + " needs at least one individual");
    if (size > kMaxBaseSize)
      throw Error(ErrorKind::Cap, "base type " + name + " has " + std::to_string(size) +
                                      " individuals; the cap is " +
                                      std::to_string(kMaxBaseSize));
  }
  if (rank_cap < 0) throw Error(ErrorKind::Model, "negative rank cap");
}

namespace {

std::string shape_key(const ModelConfig& m, const Type& ty) {
  std::string key;
  for (const auto& [name, size] : m.base_sizes) key += name + "=" + std::to_string(size) + ";";
  return key + to_string(ty);
}

std::shared_ptr<const std::vector<Elem>> build_atoms(const ModelConfig& m, const Type& ty);

std::shared_ptr<const std::vector<Elem>> cached_atoms(const ModelConfig& m, const Type& ty) {
  static std::mutex mu;
  static std::map<std::string, std::shared_ptr<const std::vector<Elem>>> cache;
  std::string key = shape_key(m, ty);
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto built = build_atoms(m, ty);
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(key, built).first->second;
}

std::shared_ptr<const std::vector<Elem>> build_atoms(const ModelConfig& m, const Type& ty) {
  auto out = std::make_shared<std::vector<Elem>>();
  switch (ty.kind()) {
    case Type::Kind::Bot:
      out->push_back(Elem::truth(false));
      out->push_back(Elem::truth(true));
      break;
    case Type::Kind::Base: {
      auto it = m.base_sizes.find(ty.name());
      if (it == m.base_sizes.end())
        throw Error(ErrorKind::Model, "model has no base type " + ty.name());
      for (int i = 0; i < it->second; ++i) out->push_back(Elem::individual(ty, i));
      break;
    }
    case Type::Kind::Arrow: {
      auto keys = cached_atoms(m, ty.dom());
      auto vals = cached_atoms(m, ty.cod());
      std::size_t count = 1;
      for (std::size_t i = 0; i < keys->size(); ++i) {
        count *= vals->size();
        if (count > kMaxRank0Size)
          throw Error(ErrorKind::Cap, "rank-0 domain of " + to_string(ty) +
                                          " exceeds " + std::to_string(kMaxRank0Size) +
                                          " elements");
      }
      out->reserve(count);
      std::vector<std::size_t> digits(keys->size(), 0);
      for (std::size_t n = 0; n < count; ++n) {
        std::vector<Elem> entries;
        entries.reserve(digits.size());
        for (std::size_t d : digits) entries.push_back((*vals)[d]);
        out->push_back(Elem::table(ty, keys, std::move(entries)));
        for (std::size_t i = digits.size(); i-- > 0;) {
          if (++digits[i] < vals->size()) break;
          digits[i] = 0;
        }
      }
      break;
    }
  }
  return out;
}

}  // namespace

std::shared_ptr<const std::vector<Elem>> rank0_atoms(const ModelConfig& m, const Type& ty) {
  return cached_atoms(m, ty);
}

std::size_t rank0_size(const ModelConfig& m, const Type& ty) {
  switch (ty.kind()) {
    case Type::Kind::Bot: return 2;
    case Type::Kind::Base: {
      auto it = m.base_sizes.find(ty.name());
      if (it == m.base_sizes.end())
        throw Error(ErrorKind::Model, "model has no base type " + ty.name());
      return static_cast<std::size_t>(it->second);
    }
    case Type::Kind::Arrow: {
      std::size_t k = rank0_size(m, ty.dom());
      std::size_t v = rank0_size(m, ty.cod());
      std::size_t count = 1;
      for (std::size_t i = 0; i < k; ++i) {
        count *= v;
        if (count > kMaxRank0Size)
          throw Error(ErrorKind::Cap, "rank-0 domain of " + to_string(ty) + " is too large");
      }
      return count;
    }
  }
  return 0;
}

std::size_t atom_index(const ModelConfig& m, const Elem& atom) {
  switch (atom.kind()) {
    case Elem::Kind::Truth: return atom.truth_value() ? 1 : 0;
    case Elem::Kind::Individual: return static_cast<std::size_t>(atom.index());
    case Elem::Kind::Table: {
      std::size_t v = rank0_size(m, atom.type().cod());
      std::size_t idx = 0;
      for (const auto& e : atom.entries()) idx = idx * v + atom_index(m, e);
      return idx;
    }
    default:
      throw Error(ErrorKind::Unsupported, render(atom) + " is not a concrete rank-0 element");
  }
}

Elem minterm(const ModelConfig& m, const Type& ty, const std::vector<bool>& member) {
  auto atoms = rank0_atoms(m, ty);
  if (member.size() != atoms->size())
    throw Error(ErrorKind::Model, "minterm needs one literal per atom of " + to_string(ty));
  std::vector<Elem> lits;
  for (std::size_t i = 0; i < atoms->size(); ++i)
    lits.push_back(member[i] ? (*atoms)[i] : Elem::neg(1, (*atoms)[i]));
  return Elem::meet(1, ty, std::move(lits));
}

std::vector<Elem> enumerate_domain(const ModelConfig& m, const Type& ty, int rank) {
  if (rank == 0) return *rank0_atoms(m, ty);
  if (rank != 1)
    throw Error(ErrorKind::Cap, "only ranks 0 and 1 can be enumerated, got " +
                                    std::to_string(rank));
  std::size_t k = rank0_size(m, ty);
  if (k > 4)
    throw Error(ErrorKind::Cap, "rank-1 domain of " + to_string(ty) + " would have 2^(2^" +
                                    std::to_string(k) + ") elements");
  std::size_t nmin = std::size_t{1} << k;
  std::vector<Elem> mins;
  for (std::size_t j = 0; j < nmin; ++j) {
    std::vector<bool> member(k);
    for (std::size_t i = 0; i < k; ++i) member[i] = (j >> (k - 1 - i)) & 1;
    mins.push_back(minterm(m, ty, member));
  }
  std::vector<Elem> out;
  std::size_t total = std::size_t{1} << nmin;
  out.reserve(total);
  for (std::size_t mask = 0; mask < total; ++mask) {
    std::vector<Elem> kids;
    for (std::size_t j = 0; j < nmin; ++j)
      if ((mask >> j) & 1) kids.push_back(mins[j]);
    out.push_back(Elem::join(1, ty, std::move(kids)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Boolean-algebra equality

namespace {

class Bits {
 public:
  explicit Bits(int g, bool fill = false)
      : nbits_(std::size_t{1} << g), w_((nbits_ + 63) / 64, fill ? ~0ULL : 0ULL) {
    trim();
  }
  static Bits generator(int g, int i) {
    Bits b(g);
    for (std::size_t v = 0; v < b.nbits_; ++v)
      if ((v >> i) & 1) b.w_[v / 64] |= 1ULL << (v % 64);
    return b;
  }
  void flip() {
    for (auto& x : w_) x = ~x;
    trim();
  }
  void and_with(const Bits& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
  }
  void or_with(const Bits& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
  }
  bool test(std::size_t v) const { return (w_[v / 64] >> (v % 64)) & 1; }
  std::size_t size() const { return nbits_; }
  friend bool operator==(const Bits& a, const Bits& b) { return a.w_ == b.w_; }

 private:
  void trim() {
    if (nbits_ % 64) w_.back() &= (1ULL << (nbits_ % 64)) - 1;
  }
  std::size_t nbits_;
  std::vector<std::uint64_t> w_;
};

// Generators of one comparison. In bot mode every Boolean node is looked
// through and symbolic atoms are matched structurally; otherwise nodes of
// rank `level` are looked through and everything else is matched by ba_equal.
struct GenSet {
  bool bot;
  int level;
  std::vector<Elem> gens;

  bool transparent(const Elem& e) const {
    return e.is_node() && (bot || e.rank() == level);
  }
  int find(const Elem& e) const {
    for (std::size_t i = 0; i < gens.size(); ++i)
      if (bot ? gens[i] == e : ba_equal(gens[i], e)) return static_cast<int>(i);
    return -1;
  }
  void collect(const Elem& e) {
    if (transparent(e)) {
      for (const auto& c : e.children()) collect(c);
      return;
    }
    if (bot && e.kind() == Elem::Kind::Truth) return;
    if (find(e) < 0) {
      gens.push_back(e);
      if (static_cast<int>(gens.size()) > kMaxGenerators)
        throw Error(ErrorKind::Cap, "more than " + std::to_string(kMaxGenerators) +
                                        " generators in a Boolean comparison");
    }
  }
  Bits eval(const Elem& e, const std::vector<Bits>& vars) const {
    int g = static_cast<int>(gens.size());
    if (transparent(e)) {
      switch (e.kind()) {
        case Elem::Kind::Neg: {
          Bits b = eval(e.child(0), vars);
          b.flip();
          return b;
        }
        case Elem::Kind::Meet: {
          Bits b(g, true);
          for (const auto& c : e.children()) b.and_with(eval(c, vars));
          return b;
        }
        default: {
          Bits b(g, false);
          for (const auto& c : e.children()) b.or_with(eval(c, vars));
          return b;
        }
      }
    }
    if (bot && e.kind() == Elem::Kind::Truth) return Bits(g, e.truth_value());
    int i = find(e);
    if (i < 0) throw Error(ErrorKind::Model, "no generator for " + render(e));
    return vars[static_cast<std::size_t>(i)];
  }
  std::vector<Bits> variables() const {
    std::vector<Bits> vars;
    int g = static_cast<int>(gens.size());
    for (int i = 0; i < g; ++i) vars.push_back(Bits::generator(g, i));
    return vars;
  }
};

void require_same_type(const Elem& x, const Elem& y) {
  if (x.type() != y.type())
    throw Error(ErrorKind::Type, "comparing elements of types " + to_string(x.type()) +
                                     " and " + to_string(y.type()));
}

}  // namespace

bool ba_equal(const Elem& x, const Elem& y) {
  require_same_type(x, y);
  bool bot = x.type().is_bot();
  int level = std::max(x.rank(), y.rank());
  if (!bot && level == 0) return x == y;
  if (x == y) return true;
  GenSet gs{bot, level, {}};
  gs.collect(x);
  gs.collect(y);
  auto vars = gs.variables();
  return gs.eval(x, vars) == gs.eval(y, vars);
}

bool ba_leq(const Elem& x, const Elem& y) {
  require_same_type(x, y);
  int k = std::max({1, x.rank(), y.rank()});
  return ba_equal(Elem::meet(k, x.type(), {x, y}), x);
}

std::vector<bool> truth_table(const Elem& e, int level, const std::vector<Elem>& gens) {
  GenSet gs{e.type().is_bot(), level, gens};
  if (static_cast<int>(gens.size()) > kMaxGenerators)
    throw Error(ErrorKind::Cap, "too many generators");
  Bits b = gs.eval(e, gs.variables());
  std::vector<bool> out(b.size());
  for (std::size_t v = 0; v < b.size(); ++v) out[v] = b.test(v);
  return out;
}

std::optional<bool> bot_value(const Elem& e) {
  if (!e.type().is_bot()) return std::nullopt;
  if (e.kind() == Elem::Kind::Truth) return e.truth_value();
  if (ba_equal(e, Elem::truth(true))) return true;
  if (ba_equal(e, Elem::truth(false))) return false;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Application and tidying

namespace {

Elem rebuild(const Elem& node, const Type& type, std::vector<Elem> kids) {
  switch (node.kind()) {
    case Elem::Kind::Neg: return Elem::neg(node.rank(), std::move(kids.at(0)));
    case Elem::Kind::Meet: return Elem::meet(node.rank(), type, std::move(kids));
    default: return Elem::join(node.rank(), type, std::move(kids));
  }
}

}  // namespace

Elem apply_elem(const Elem& p, const Elem& a, const ModelConfig& m) {
  const Type& ft = p.type();
  if (!ft.is_arrow() || ft.dom() != a.type())
    throw Error(ErrorKind::Type, "cannot apply " + to_string(ft) + " to " +
                                     to_string(a.type()));
  Type tau = ft.cod();
  const Elem& arg = a;

  bool fun_node = p.is_node();
  bool arg_node = arg.is_node();
  if (fun_node && (!arg_node || p.rank() >= arg.rank())) {
    std::vector<Elem> kids;
    for (const auto& c : p.children()) kids.push_back(apply_elem(c, arg, m));
    return rebuild(p, tau, std::move(kids));
  }
  if (arg_node) {
    std::vector<Elem> kids;
    for (const auto& c : arg.children()) kids.push_back(apply_elem(p, c, m));
    return rebuild(arg, tau, std::move(kids));
  }
  if (p.kind() == Elem::Kind::Table && arg.concrete())
    return p.entries().at(atom_index(m, arg));
  return Elem::atomic_app(p, arg);
}

Elem tidy(const Elem& e) {
  if (e.is_atom()) return e;
  if (e.kind() == Elem::Kind::Neg) return Elem::neg(e.rank(), tidy(e.child(0)));
  std::vector<Elem> kids;
  auto push = [&](const Elem& c) {
    if (std::find(kids.begin(), kids.end(), c) == kids.end()) kids.push_back(c);
  };
  for (const auto& c : e.children()) {
    Elem t = tidy(c);
    if (t.kind() == e.kind() && t.rank() == e.rank()) {
      for (const auto& g : t.children()) push(g);
    } else {
      push(t);
    }
  }
  return rebuild(e, e.type(), std::move(kids));
}

// ---------------------------------------------------------------------------
// Element literals

namespace {

Elem parse_elem_at(detail::TokenStream& ts, const Type& ty, const ModelConfig& m);

Elem parse_op(detail::TokenStream& ts, const std::string& op, const Type& ty,
              const ModelConfig& m) {
  ts.expect("[");
  int k = ts.number();
  ts.expect("]");
  ts.expect("(");
  std::vector<Elem> kids;
  if (!ts.at(")")) {
    do {
      kids.push_back(parse_elem_at(ts, ty, m));
    } while (ts.accept(","));
  }
  ts.expect(")");
  if (op == "neg") {
    if (kids.size() != 1) ts.fail("neg takes one operand");
    return Elem::neg(k, kids[0]);
  }
  return op == "and" ? Elem::meet(k, ty, std::move(kids))
                     : Elem::join(k, ty, std::move(kids));
}

Elem parse_elem_at(detail::TokenStream& ts, const Type& ty, const ModelConfig& m) {
  using detail::Token;
  const Token& t = ts.peek();
  if (t.kind == Token::Kind::Ident &&
      (t.text == "neg" || t.text == "and" || t.text == "or") && ts.at("[", 1)) {
    std::string op = ts.next().text;
    return parse_op(ts, op, ty, m);
  }
  if (ts.at_ident("table")) {
    ts.next();
    if (!ty.is_arrow()) ts.fail("table literal for non-function type " + to_string(ty));
    auto keys = rank0_atoms(m, ty.dom());
    std::vector<std::optional<Elem>> slots(keys->size());
    ts.expect("{");
    if (!ts.at("}")) {
      do {
        Elem key = parse_elem_at(ts, ty.dom(), m);
        ts.expect("->");
        Elem val = parse_elem_at(ts, ty.cod(), m);
        std::size_t i = atom_index(m, key);
        if (slots[i]) ts.fail("duplicate table key " + render(key));
        slots[i] = val;
      } while (ts.accept(","));
    }
    ts.expect("}");
    std::vector<Elem> entries;
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (!slots[i])
        throw Error(ErrorKind::Model, "table for " + to_string(ty) + " misses key " +
                                          render((*keys)[i]));
      entries.push_back(*slots[i]);
    }
    return Elem::table(ty, keys, std::move(entries));
  }
  if (t.kind == Token::Kind::Number) {
    if (!ty.is_bot()) ts.fail("truth value for type " + to_string(ty));
    int v = ts.number();
    if (v != 0 && v != 1) ts.fail("truth values are 0 and 1");
    return Elem::truth(v == 1);
  }
  if (t.kind == Token::Kind::Ident) {
    if (!ty.is_base()) ts.fail("individual for non-base type " + to_string(ty));
    std::string name = ts.next().text;
    auto atoms = rank0_atoms(m, ty);
    for (const auto& a : *atoms)
      if (individual_name(a.index()) == name) return a;
    throw Error(ErrorKind::Model, "no individual " + name + " in " + to_string(ty));
  }
  ts.fail("expected an element");
}

}  // namespace

Elem parse_elem(const std::string& text, const Type& ty, const ModelConfig& m) {
  detail::TokenStream ts(text);
  Elem e = parse_elem_at(ts, ty, m);
  if (!ts.done()) ts.fail("trailing input after element");
  return e;
}

// ---------------------------------------------------------------------------
// Interpretation of CTS subterms and canonicalization

namespace {

Elem lookup(const Cts& v, const ModelConfig& m, const Assignment& rho, bool symbolic) {
  const Elem* found = nullptr;
  if (auto it = rho.find(v.name()); it != rho.end()) found = &it->second;
  else if (auto c = m.constants.find(v.name()); c != m.constants.end()) found = &c->second;
  if (!found) {
    if (symbolic) return Elem::symbol(v.name(), v.type(), v.rank());
    throw Error(ErrorKind::Unassigned, "no value for variable " + v.name());
  }
  if (found->type() != v.type())
    throw Error(ErrorKind::Type, "value of " + v.name() + " has type " +
                                     to_string(found->type()) + ", expected " +
                                     to_string(v.type()));
  if (found->rank() > v.rank())
    throw Error(ErrorKind::Rank, "value of " + v.name() + " has rank " +
                                     std::to_string(found->rank()) + " > " +
                                     std::to_string(v.rank()));
  return *found;
}

Elem interpret(const Cts& e, const ModelConfig& m, const Assignment& rho, bool symbolic) {
  switch (e.kind()) {
    case Cts::Kind::Var: return lookup(e, m, rho, symbolic);
    case Cts::Kind::App:
      return apply_elem(interpret(e.fun(), m, rho, symbolic),
                        interpret(e.arg(), m, rho, symbolic), m);
    case Cts::Kind::Neg: return Elem::neg(e.rank(), interpret(e.child(0), m, rho, symbolic));
    case Cts::Kind::Conj:
      return Elem::meet(e.rank(), e.type(),
                        {interpret(e.child(0), m, rho, symbolic),
                         interpret(e.child(1), m, rho, symbolic)});
    case Cts::Kind::Disj:
      return Elem::join(e.rank(), e.type(),
                        {interpret(e.child(0), m, rho, symbolic),
                         interpret(e.child(1), m, rho, symbolic)});
    case Cts::Kind::BigConj:
    case Cts::Kind::BigDisj: {
      if (e.atom_rank() != 0)
        throw Error(ErrorKind::Unsupported,
                    "big operators range over rank-0 elements only, got rank " +
                        std::to_string(e.atom_rank()));
      std::vector<Elem> kids;
      Assignment inner = rho;
      for (const auto& a : *rank0_atoms(m, e.index_type())) {
        inner.insert_or_assign(e.name(), a);
        kids.push_back(interpret(e.body(), m, inner, symbolic));
      }
      return e.kind() == Cts::Kind::BigConj ? Elem::meet(e.rank(), e.type(), std::move(kids))
                                            : Elem::join(e.rank(), e.type(), std::move(kids));
    }
  }
  throw Error(ErrorKind::Unsupported, "unknown CTS node");
}

}  // namespace

Elem interpret_cts(const Cts& expr, const ModelConfig& m, const Assignment& rho,
                   bool symbolic) {
  return interpret(expr, m, rho, symbolic);
}

Elem instantiate(const Elem& e, const Assignment& rho, const ModelConfig& m) {
  if (e.concrete()) return e;
  switch (e.kind()) {
    case Elem::Kind::Symbol: {
      auto it = rho.find(e.name());
      if (it == rho.end()) return e;
      if (it->second.type() != e.type())
        throw Error(ErrorKind::Type, "value of " + e.name() + " has type " +
                                         to_string(it->second.type()));
      return it->second;
    }
    case Elem::Kind::AtomicApp:
      return apply_elem(instantiate(e.fun(), rho, m), instantiate(e.arg(), rho, m), m);
    case Elem::Kind::Table: {
      std::vector<Elem> entries;
      for (const auto& x : e.entries()) entries.push_back(instantiate(x, rho, m));
      return Elem::table(e.type(), rank0_atoms(m, e.type().dom()), std::move(entries));
    }
    default: {
      std::vector<Elem> kids;
      for (const auto& c : e.children()) kids.push_back(instantiate(c, rho, m));
      return rebuild(e, e.type(), std::move(kids));
    }
  }
}

Elem canonicalize(const Cts& expr, const ModelConfig& m) {
  return tidy(interpret(expr, m, {}, true));
}

// ---------------------------------------------------------------------------
// Type reduction

Elem iso_from_sets(const ModelConfig& m, const Type& sigma,
                   const std::vector<std::vector<bool>>& sets) {
  std::vector<Elem> mins;
  for (const auto& s : sets) mins.push_back(minterm(m, sigma, s));
  return Elem::join(1, sigma, std::move(mins));
}

Elem iso_i(const Elem& f, const ModelConfig& m) {
  const Type& ft = f.type();
  if (!ft.is_negation() || !ft.dom().is_negation())
    throw Error(ErrorKind::Type, "type reduction needs a ~~s element, got " + to_string(ft));
  Type sigma = ft.dom().dom();
  if (f.is_node()) {
    std::vector<Elem> kids;
    for (const auto& c : f.children()) kids.push_back(iso_i(c, m));
    switch (f.kind()) {
      case Elem::Kind::Neg: return Elem::neg(f.rank() + 1, kids.at(0));
      case Elem::Kind::Meet: return Elem::meet(f.rank() + 1, sigma, std::move(kids));
      default: return Elem::join(f.rank() + 1, sigma, std::move(kids));
    }
  }
  if (f.kind() != Elem::Kind::Table || !f.concrete())
    throw Error(ErrorKind::Unsupported, "type reduction of non-table atom " + render(f));
  std::vector<std::vector<bool>> sets;
  for (std::size_t i = 0; i < f.entries().size(); ++i) {
    if (!f.entries()[i].truth_value()) continue;
    std::vector<bool> member;
    for (const auto& v : f.keys()[i].entries()) member.push_back(v.truth_value());
    sets.push_back(std::move(member));
  }
  return iso_from_sets(m, sigma, sets);
}

Elem iso_iterate(const Elem& f, const ModelConfig& m) {
  int negs = 0;
  for (Type t = f.type(); t.is_negation(); t = t.dom()) ++negs;
  if (negs < 2)
    throw Error(ErrorKind::Type, "type reduction needs at least two negations, got " +
                                     to_string(f.type()));
  Elem cur = f;
  for (int i = 0; i < negs / 2; ++i) {
    if (cur.rank() + 1 > m.rank_cap)
      throw Error(ErrorKind::Cap, "type reduction would exceed rank cap " +
                                      std::to_string(m.rank_cap));
    cur = iso_i(cur, m);
  }
  return cur;
}

}  // namespace ctt
