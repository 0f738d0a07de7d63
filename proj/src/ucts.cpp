#include "ctt/ucts.hpp"

#include <algorithm>
#include <regex>
#include <set>

#include "ctt/error.hpp"
#include "ctt/syntax.hpp"
#include "lexer.hpp"

namespace ctt {

using detail::TokenStream;

Type Ucts::value_type() const {
  switch (kind) {
    case Kind::Var: return type;
    case Kind::App: {
      Type f = kids.at(0).value_type(), a = kids.at(1).value_type();
      if (!f.is_arrow() || f.dom() != a)
        throw Error(ErrorKind::Type, "cannot apply " + to_string(f) + " to " + to_string(a));
      return f.cod();
    }
    case Kind::Neg: return kids.at(0).value_type();
    case Kind::Conj:
    case Kind::Disj: {
      Type l = kids.at(0).value_type(), r = kids.at(1).value_type();
      if (l != r)
        throw Error(ErrorKind::Type, "operands of types " + to_string(l) + " and " + to_string(r));
      return l;
    }
    case Kind::BigConj:
    case Kind::BigDisj: return has_body ? kids.at(0).value_type() : type;
  }
  return type;
}

bool operator==(const Ucts& a, const Ucts& b) {
  return a.kind == b.kind && a.rank == b.rank && a.name == b.name && a.type == b.type &&
         a.atom_rank == b.atom_rank && a.has_body == b.has_body && a.kids == b.kids;
}

namespace {

struct UctsParser {
  TokenStream& ts;
  UctsContext& ctx;
  std::map<std::string, std::optional<int>> ranks;
  std::map<std::string, std::vector<std::pair<Type, std::optional<int>>>> scope;

  std::optional<int> annotation(const char* open, const char* close) {
    if (!ts.accept(open)) return std::nullopt;
    int k = ts.number();
    if (close) ts.expect(close);
    return k;
  }

  bool at_op() const {
    const auto& t = ts.peek();
    if (t.kind != detail::Token::Kind::Ident) return false;
    static const std::set<std::string> ops = {"neg", "and", "or", "All", "Ex"};
    return ops.count(t.text) && (ts.at("[", 1) || ts.at("(", 1));
  }

  Ucts op() {
    Ucts u;
    std::string name = ts.ident();
    u.rank = annotation("[", "]");
    ts.expect("(");
    if (name == "neg") {
      u.kind = Ucts::Kind::Neg;
      u.kids.push_back(expr());
    } else if (name == "and" || name == "or") {
      u.kind = name == "and" ? Ucts::Kind::Conj : Ucts::Kind::Disj;
      u.kids.push_back(expr());
      ts.expect(",");
      u.kids.push_back(expr());
    } else {
      u.kind = name == "All" ? Ucts::Kind::BigConj : Ucts::Kind::BigDisj;
      u.name = ts.ident();
      ts.expect(":");
      u.type = detail::parse_type_tokens(ts);
      u.atom_rank = annotation("@", nullptr);
      if (ts.accept(";")) {
        u.has_body = true;
        scope[u.name].emplace_back(u.type, u.atom_rank);
        u.kids.push_back(expr());
        scope[u.name].pop_back();
      }
    }
    ts.expect(")");
    u.value_type();
    return u;
  }

  Ucts variable() {
    std::size_t offset = ts.peek().pos;
    Ucts u;
    u.name = ts.ident();
    if (auto it = scope.find(u.name); it != scope.end() && !it->second.empty()) {
      std::tie(u.type, u.rank) = it->second.back();
      if (ts.at(":")) ts.fail("bound index " + u.name + " cannot be redeclared");
      return u;
    }
    auto known = ctx.find(u.name);
    if (ts.accept(":")) {
      Type ty = detail::parse_type_tokens(ts);
      std::optional<int> r = annotation("@", nullptr);
      bool clash = known != ctx.end() && known->second != ty;
      if (auto kr = ranks.find(u.name); kr != ranks.end() && kr->second != r) clash = true;
      if (clash)
        throw Error(ErrorKind::Type,
                    "variable " + u.name + " redeclared at offset " + std::to_string(offset));
      ctx.insert_or_assign(u.name, ty);
      ranks[u.name] = r;
      u.type = ty;
      u.rank = r;
      return u;
    }
    if (known == ctx.end())
      throw Error(ErrorKind::Unbound,
                  "undeclared variable " + u.name + " at offset " + std::to_string(offset));
    u.type = known->second;
    if (auto kr = ranks.find(u.name); kr != ranks.end()) u.rank = kr->second;
    return u;
  }

  Ucts expr() {
    if (at_op()) return op();
    if (ts.accept("(")) {
      std::vector<Ucts> items;
      while (!ts.at(")")) {
        if (ts.done()) ts.fail("unclosed '('");
        items.push_back(expr());
      }
      ts.next();
      if (items.empty()) ts.fail("empty application");
      Ucts acc = items[0];
      for (std::size_t i = 1; i < items.size(); ++i) {
        Ucts app;
        app.kind = Ucts::Kind::App;
        app.kids = {acc, items[i]};
        app.value_type();
        acc = std::move(app);
      }
      return acc;
    }
    return variable();
  }
};

struct UctsPrinter {
  std::set<std::string> seen, bound;

  static std::string rank_suffix(const std::optional<int>& r, const char* open,
                                 const char* close) {
    return r ? open + std::to_string(*r) + close : "";
  }

  std::string print(const Ucts& u) {
    switch (u.kind) {
      case Ucts::Kind::Var:
        if (bound.count(u.name) || !seen.insert(u.name).second) return u.name;
        return u.name + ":" + to_string(u.type) + rank_suffix(u.rank, "@", "");
      case Ucts::Kind::App:
        return "(" + print(u.kids[0]) + " " + print(u.kids[1]) + ")";
      case Ucts::Kind::Neg:
        return "neg" + rank_suffix(u.rank, "[", "]") + "(" + print(u.kids[0]) + ")";
      case Ucts::Kind::Conj:
      case Ucts::Kind::Disj: {
        std::string l = print(u.kids[0]), r = print(u.kids[1]);
        return std::string(u.kind == Ucts::Kind::Conj ? "and" : "or") +
               rank_suffix(u.rank, "[", "]") + "(" + l +
               operand_separator(u.kids[0].is_boolean(), u.kids[1].is_boolean()) + r + ")";
      }
      case Ucts::Kind::BigConj:
      case Ucts::Kind::BigDisj: {
        std::string head = std::string(u.kind == Ucts::Kind::BigConj ? "All" : "Ex") +
                           rank_suffix(u.rank, "[", "]") + "(" + u.name + ":" +
                           to_string(u.type) + rank_suffix(u.atom_rank, "@", "");
        if (!u.has_body) return head + ")";
        bool fresh = bound.insert(u.name).second;
        std::string body = print(u.kids[0]);
        if (fresh) bound.erase(u.name);
        return head + "; " + body + ")";
      }
    }
    return "?";
  }
};

const char* op_word(Ucts::Kind k) {
  switch (k) {
    case Ucts::Kind::Neg: return "neg";
    case Ucts::Kind::Conj: return "and";
    case Ucts::Kind::Disj: return "or";
    case Ucts::Kind::BigConj: return "All";
    case Ucts::Kind::BigDisj: return "Ex";
    default: return "";
  }
}

struct Elaborator {
  const ElaborationStrategy& s;
  std::map<std::string, std::vector<int>> scope;

  int choose(const Ucts& u, int need) {
    switch (s.kind) {
      case Elaboration::OutermostIncreasing: return need + 1;
      case Elaboration::Uniform:
        if (need > s.k)
          throw Error(ErrorKind::Rank, std::string("uniform(") + std::to_string(s.k) + ") is below the rank " +
                                           std::to_string(need) + " needed under " + op_word(u.kind));
        return s.k;
      case Elaboration::Annotations:
        if (!u.rank) return need + 1;
        if (*u.rank < std::max(need, 1))
          throw Error(ErrorKind::Rank, std::string(op_word(u.kind)) + "[" + std::to_string(*u.rank) +
                                           "] needs rank >= " + std::to_string(std::max(need, 1)));
        return *u.rank;
    }
    return need + 1;
  }

  Cts run(const Ucts& u) {
    switch (u.kind) {
      case Ucts::Kind::Var: {
        if (auto it = scope.find(u.name); it != scope.end() && !it->second.empty())
          return Cts::var(u.name, u.type, it->second.back());
        return Cts::var(u.name, u.type, u.rank.value_or(0));
      }
      case Ucts::Kind::App: return Cts::app(run(u.kids[0]), run(u.kids[1]));
      case Ucts::Kind::Neg: {
        Cts c = run(u.kids[0]);
        return Cts::neg(choose(u, c.rank()), c);
      }
      case Ucts::Kind::Conj:
      case Ucts::Kind::Disj: {
        Cts l = run(u.kids[0]), r = run(u.kids[1]);
        int k = choose(u, std::max(l.rank(), r.rank()));
        return u.kind == Ucts::Kind::Conj ? Cts::conj(k, l, r) : Cts::disj(k, l, r);
      }
      case Ucts::Kind::BigConj:
      case Ucts::Kind::BigDisj: {
        int m = u.atom_rank.value_or(0);
        if (!u.has_body) return Cts::big(u.kind, choose(u, m), u.name, u.type, m);
        scope[u.name].push_back(m);
        Cts body = run(u.kids[0]);
        scope[u.name].pop_back();
        return Cts::big_family(u.kind, choose(u, std::max(m, body.rank())), u.name, u.type, m,
                               body);
      }
    }
    throw Error(ErrorKind::Syntax, "unknown node");
  }
};

}  // namespace

Ucts parse_ucts(std::string_view text, UctsContext& ctx) {
  TokenStream ts(text);
  UctsParser p{ts, ctx, {}, {}};
  Ucts u = p.expr();
  if (!ts.done()) ts.fail("trailing input after subterm");
  return u;
}

Ucts parse_ucts(std::string_view text) {
  UctsContext ctx;
  return parse_ucts(text, ctx);
}

std::string render(const Ucts& u) {
  UctsPrinter p;
  return p.print(u);
}

Ucts erase_ranks(const Cts& c) {
  Ucts u;
  u.kind = c.kind();
  switch (c.kind()) {
    case Cts::Kind::Var:
      u.name = c.name();
      u.type = c.type();
      return u;
    case Cts::Kind::BigConj:
    case Cts::Kind::BigDisj:
      u.name = c.name();
      u.type = c.index_type();
      u.has_body = !c.is_plain_big();
      if (u.has_body) u.kids.push_back(erase_ranks(c.body()));
      return u;
    default:
      for (const auto& k : c.children()) u.kids.push_back(erase_ranks(k));
      return u;
  }
}

Ucts erase_ranks(const Ucts& u) {
  Ucts out = u;
  out.rank.reset();
  out.atom_rank.reset();
  for (auto& k : out.kids) k = erase_ranks(k);
  return out;
}

Cts elaborate_ranks(const Ucts& u, const ElaborationStrategy& s) {
  if (s.kind == Elaboration::Uniform && s.k < 1)
    throw Error(ErrorKind::Rank, "uniform(" + std::to_string(s.k) + ") needs k >= 1");
  Elaborator e{s, {}};
  return e.run(u);
}

ElaborationStrategy parse_elaboration(const std::string& text) {
  if (text == "outermost-increasing") return {Elaboration::OutermostIncreasing, 1};
  if (text == "annotations") return {Elaboration::Annotations, 1};
  static const std::regex uniform(R"(uniform[(:=](\d+)\)?)");
  std::smatch m;
  if (std::regex_match(text, m, uniform)) return {Elaboration::Uniform, std::stoi(m[1].str())};
  throw Error(ErrorKind::Syntax, "unknown elaboration strategy '" + text +
                                     "' (outermost-increasing, uniform(k), annotations)");
}

}  // namespace ctt
