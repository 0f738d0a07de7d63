#include "ctt/syntax.hpp"

#include <algorithm>
#include <set>

#include "ctt/error.hpp"
#include "lexer.hpp"

namespace ctt {

using detail::TokenStream;

namespace {

Type type_expr(TokenStream& ts);

Type type_atom(TokenStream& ts) {
  if (ts.accept("~")) return Type::neg(type_atom(ts));
  if (ts.accept("(")) {
    Type t = type_expr(ts);
    ts.expect(")");
    return t;
  }
  if (ts.at_ident("bot")) {
    ts.next();
    return Type::bot();
  }
  return Type::base(ts.ident());
}

// Arrows are right-associative: `(a -> b -> c)` is `(a -> (b -> c))`.
Type type_expr(TokenStream& ts) {
  Type lhs = type_atom(ts);
  if (ts.accept("->")) return Type::arrow(lhs, type_expr(ts));
  return lhs;
}

struct SlmParser {
  TokenStream& ts;
  TypeContext ctx;
  std::optional<Type> default_type;
  std::map<std::string, std::vector<Type>> scope;

  Term binder(bool is_mu) {
    std::size_t offset = ts.next().pos;
    std::string x = ts.ident();
    ts.expect(":");
    Type ty = type_expr(ts);
    ts.expect(".");
    scope[x].push_back(ty);
    Term body = term();
    scope[x].pop_back();
    try {
      return is_mu ? Term::mu(x, ty, body) : Term::lam(x, ty, body);
    } catch (const Error& e) {
      throw Error(e.kind(), std::string(e.what()) + " (binder at offset " +
                                std::to_string(offset) + ")");
    }
  }

  Term variable() {
    std::size_t offset = ts.peek().pos;
    std::string name = ts.ident();
    std::optional<Type> annotated;
    if (ts.accept(":")) annotated = type_expr(ts);
    std::optional<Type> known;
    if (auto it = scope.find(name); it != scope.end() && !it->second.empty())
      known = it->second.back();
    else if (auto c = ctx.find(name); c != ctx.end())
      known = c->second;
    if (annotated) {
      if (known && *known != *annotated)
        throw Error(ErrorKind::Type, "variable " + name + " annotated " +
                                         to_string(*annotated) +
                                         " but declared " + to_string(*known));
      if (!known) ctx.emplace(name, *annotated);
      return Term::var(name, *annotated);
    }
    if (known) return Term::var(name, *known);
    if (default_type) {
      ctx.emplace(name, *default_type);
      return Term::var(name, *default_type);
    }
    throw Error(ErrorKind::Unbound, "unbound variable " + name + " at offset " +
                                        std::to_string(offset));
  }

  Term term() {
    if (ts.at("\\")) return binder(false);
    if (ts.at("#")) return binder(true);
    if (ts.at("(")) {
      ts.next();
      std::vector<std::pair<std::size_t, Term>> items;
      while (!ts.at(")")) {
        if (ts.done()) ts.fail("unclosed '('");
        std::size_t off = ts.peek().pos;
        items.emplace_back(off, term());
      }
      ts.next();
      if (items.empty()) ts.fail("empty application");
      Term acc = items[0].second;
      for (std::size_t i = 1; i < items.size(); ++i) {
        try {
          acc = Term::app(acc, items[i].second);
        } catch (const Error& e) {
          throw Error(e.kind(), std::string(e.what()) + " (argument at offset " +
                                    std::to_string(items[i].first) + ")");
        }
      }
      return acc;
    }
    return variable();
  }
};

void context_header(TokenStream& ts, TypeContext& ctx) {
  if (!ts.accept("{")) return;
  while (!ts.accept("}")) {
    std::string n = ts.ident();
    ts.expect(":");
    ctx.insert_or_assign(n, type_expr(ts));
    if (!ts.at("}")) ts.expect(",");
  }
}

struct CtsParser {
  TokenStream& ts;
  CtsContext& ctx;
  std::map<std::string, std::vector<CtsDecl>> scope;

  bool at_op() const {
    const auto& t = ts.peek();
    if (t.kind != detail::Token::Kind::Ident) return false;
    static const std::set<std::string> ops = {"neg", "and", "or", "All", "Ex"};
    return ops.count(t.text) && (ts.at("[", 1) || ts.at("(", 1));
  }

  int op_rank() {
    ts.expect("[");
    int k = ts.number();
    ts.expect("]");
    return k;
  }

  Cts op() {
    std::size_t offset = ts.peek().pos;
    std::string name = ts.ident();
    if (!ts.at("[")) ts.fail("operator " + name + " needs a rank '[k]'");
    int k = op_rank();
    ts.expect("(");
    auto wrap = [&](auto&& build) -> Cts {
      try {
        return build();
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::Syntax) throw;
        throw Error(e.kind(), std::string(e.what()) + " (operator at offset " +
                                  std::to_string(offset) + ")");
      }
    };
    if (name == "neg") {
      Cts c = expr();
      ts.expect(")");
      return wrap([&] { return Cts::neg(k, c); });
    }
    if (name == "and" || name == "or") {
      Cts l = expr();
      ts.expect(",");
      Cts r = expr();
      ts.expect(")");
      return wrap([&] {
        return name == "and" ? Cts::conj(k, l, r) : Cts::disj(k, l, r);
      });
    }
    auto kind = name == "All" ? Cts::Kind::BigConj : Cts::Kind::BigDisj;
    std::string x = ts.ident();
    ts.expect(":");
    Type ty = type_expr(ts);
    ts.expect("@");
    int m = ts.number();
    if (ts.accept(";")) {
      scope[x].push_back({ty, m});
      Cts body = expr();
      scope[x].pop_back();
      ts.expect(")");
      return wrap([&] { return Cts::big_family(kind, k, x, ty, m, body); });
    }
    ts.expect(")");
    return wrap([&] { return Cts::big(kind, k, x, ty, m); });
  }

  Cts variable() {
    std::size_t offset = ts.peek().pos;
    std::string name = ts.ident();
    std::optional<CtsDecl> known;
    bool bound = false;
    if (auto it = scope.find(name); it != scope.end() && !it->second.empty()) {
      known = it->second.back();
      bound = true;
    } else if (auto c = ctx.find(name); c != ctx.end()) {
      known = c->second;
    }
    if (ts.accept(":")) {
      Type ty = type_expr(ts);
      ts.expect("@");
      int r = ts.number();
      if (known && (known->type != ty || known->rank != r))
        throw Error(ErrorKind::Type,
                    "variable " + name + " redeclared as " + to_string(ty) +
                        "@" + std::to_string(r) + " at offset " +
                        std::to_string(offset));
      if (!known && !bound) ctx.emplace(name, CtsDecl{ty, r});
      return Cts::var(name, ty, r);
    }
    if (!known) {
      if (auto d = ctx.find(kDefaultDecl); d != ctx.end()) {
        ctx.emplace(name, d->second);
        return Cts::var(name, d->second.type, d->second.rank);
      }
      throw Error(ErrorKind::Unbound, "undeclared variable " + name +
                                          " at offset " +
                                          std::to_string(offset));
    }
    return Cts::var(name, known->type, known->rank);
  }

  Cts expr() {
    if (at_op()) return op();
    if (ts.at("(")) {
      ts.next();
      std::vector<std::pair<std::size_t, Cts>> items;
      while (!ts.at(")")) {
        if (ts.done()) ts.fail("unclosed '('");
        std::size_t off = ts.peek().pos;
        items.emplace_back(off, expr());
      }
      ts.next();
      if (items.empty()) ts.fail("empty application");
      Cts acc = items[0].second;
      for (std::size_t i = 1; i < items.size(); ++i) {
        try {
          acc = Cts::app(acc, items[i].second);
        } catch (const Error& e) {
          throw Error(e.kind(), std::string(e.what()) + " (argument at offset " +
                                    std::to_string(items[i].first) + ")");
        }
      }
      return acc;
    }
    return variable();
  }
};

}  // namespace

Type detail::parse_type_tokens(TokenStream& ts) { return type_expr(ts); }

Type parse_type(std::string_view text) {
  TokenStream ts(text);
  Type t = type_expr(ts);
  if (!ts.done()) ts.fail("trailing input after type");
  return t;
}

Term parse_slm(std::string_view text, const TypeContext& ctx) {
  TokenStream ts(text);
  TypeContext local = ctx;
  context_header(ts, local);
  std::size_t body_start = ts.mark();

  auto plain = [&]() {
    ts.reset(body_start);
    SlmParser p{ts, local, std::nullopt, {}};
    Term t = p.term();
    if (!ts.done()) ts.fail("trailing input after term");
    return t;
  };
  try {
    return plain();
  } catch (const Error&) {
    // `TY: term` sets the type of unannotated free variables.
    ts.reset(body_start);
    std::optional<Type> default_type;
    try {
      Type t = type_expr(ts);
      if (ts.accept(":")) default_type = t;
    } catch (const Error&) {
    }
    if (!default_type) throw;
    SlmParser p{ts, local, default_type, {}};
    Term t = p.term();
    if (!ts.done()) ts.fail("trailing input after term");
    return t;
  }
}

Cts parse_cts(std::string_view text, CtsContext& ctx) {
  TokenStream ts(text);
  CtsParser p{ts, ctx, {}};
  Cts e = p.expr();
  if (!ts.done()) ts.fail("trailing input after subterm");
  return e;
}

Cts parse_cts(std::string_view text) {
  CtsContext ctx;
  return parse_cts(text, ctx);
}

std::string render(const Type& t) { return to_string(t); }

std::string render(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Var: return t.name();
    case Term::Kind::App: {
      std::string f = render(t.fun());
      if (t.fun().is_lam() || t.fun().is_mu()) f = "(" + f + ")";
      return "(" + f + " " + render(t.arg()) + ")";
    }
    case Term::Kind::Lam:
      return "\\" + t.name() + ":" + to_string(t.binder_type()) + ". " +
             render(t.body());
    case Term::Kind::Mu:
      return "#" + t.name() + ":" + to_string(t.binder_type()) + ". " +
             render(t.body());
  }
  return "?";
}

std::string operand_separator(bool left_is_op, bool right_is_op) {
  return left_is_op || right_is_op ? ", " : ",";
}

namespace {

struct CtsPrinter {
  const RenderOptions& opts;
  std::set<std::string> seen;
  std::set<std::string> bound;

  std::string var(const Cts& v) {
    if (!opts.annotate_vars || bound.count(v.name()) ||
        !seen.insert(v.name()).second)
      return v.name();
    return v.name() + ":" + to_string(v.type()) + "@" + std::to_string(v.rank());
  }

  std::string print(const Cts& e) {
    switch (e.kind()) {
      case Cts::Kind::Var: return var(e);
      case Cts::Kind::App: {
        std::string f = print(e.fun());
        return "(" + f + " " + print(e.arg()) + ")";
      }
      case Cts::Kind::Neg:
        return "neg[" + std::to_string(e.rank()) + "](" + print(e.child(0)) + ")";
      case Cts::Kind::Conj:
      case Cts::Kind::Disj: {
        const char* op = e.kind() == Cts::Kind::Conj ? "and" : "or";
        const Cts* l = &e.child(0);
        const Cts* r = &e.child(1);
        if (opts.sort_children) {
          RenderOptions bare{true, false};
          if (render(*r, bare) < render(*l, bare)) std::swap(l, r);
        }
        std::string ls = print(*l);
        std::string rs = print(*r);
        return std::string(op) + "[" + std::to_string(e.rank()) + "](" + ls +
               operand_separator(l->is_boolean(), r->is_boolean()) + rs + ")";
      }
      case Cts::Kind::BigConj:
      case Cts::Kind::BigDisj: {
        std::string head =
            std::string(e.kind() == Cts::Kind::BigConj ? "All" : "Ex") + "[" +
            std::to_string(e.rank()) + "](" + e.name() + ":" +
            to_string(e.index_type()) + "@" + std::to_string(e.atom_rank());
        if (e.is_plain_big()) return head + ")";
        bool fresh = bound.insert(e.name()).second;
        std::string body = print(e.body());
        if (fresh) bound.erase(e.name());
        return head + "; " + body + ")";
      }
    }
    return "?";
  }
};

}  // namespace

std::string render(const Cts& t, const RenderOptions& opts) {
  CtsPrinter p{opts, {}, {}};
  return p.print(t);
}

}  // namespace ctt
