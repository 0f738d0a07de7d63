#include "ctt/slm.hpp"

#include <optional>

#include "ctt/error.hpp"

namespace ctt {

Term Term::var(std::string name, Type type) {
  return Term(std::make_shared<const Node>(
      Node{Kind::Var, std::move(type), std::move(name), Type::bot(), {}}));
}

Term Term::app(Term fun, Term arg) {
  const Type& ft = fun.type();
  if (!ft.is_arrow())
    throw Error(ErrorKind::Type, to_string(ft) + " is not an arrow type");
  if (ft.dom() != arg.type())
    throw Error(ErrorKind::Type, "argument of type " + to_string(arg.type()) +
                                     " where " + to_string(ft.dom()) +
                                     " expected");
  Type result = ft.cod();
  return Term(std::make_shared<const Node>(
      Node{Kind::App, std::move(result), "", Type::bot(),
           {std::move(fun), std::move(arg)}}));
}

Term Term::lam(std::string binder, Type binder_type, Term body) {
  Type t = Type::arrow(binder_type, body.type());
  return Term(std::make_shared<const Node>(
      Node{Kind::Lam, std::move(t), std::move(binder), std::move(binder_type),
           {std::move(body)}}));
}

Term Term::mu(std::string binder, Type binder_type, Term body) {
  if (!binder_type.is_negation())
    throw Error(ErrorKind::Type, "mu binder must have a negated type, got " +
                                     to_string(binder_type));
  if (!body.type().is_bot())
    throw Error(ErrorKind::Type,
                "mu body must have type bot, got " + to_string(body.type()));
  Type t = binder_type.dom();
  return Term(std::make_shared<const Node>(
      Node{Kind::Mu, std::move(t), std::move(binder), std::move(binder_type),
           {std::move(body)}}));
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind() || a.type() != b.type()) return false;
  switch (a.kind()) {
    case Term::Kind::Var: return a.name() == b.name();
    case Term::Kind::App: return a.fun() == b.fun() && a.arg() == b.arg();
    case Term::Kind::Lam:
    case Term::Kind::Mu:
      return a.name() == b.name() && a.binder_type() == b.binder_type() &&
             a.body() == b.body();
  }
  return false;
}

namespace {

Type check(const Term& t, TypeContext& ctx, const std::string& path) {
  auto fail = [&](const std::string& msg) -> Type {
    throw Error(ErrorKind::Type,
                msg + " at " + (path.empty() ? std::string("root") : path));
  };
  auto sub = [&](const char* step) {
    return path.empty() ? std::string(step) : path + "." + step;
  };
  switch (t.kind()) {
    case Term::Kind::Var: {
      auto it = ctx.find(t.name());
      if (it == ctx.end())
        throw Error(ErrorKind::Unbound, "unbound variable " + t.name() +
                                            " at " +
                                            (path.empty() ? "root" : path));
      if (it->second != t.type())
        fail("variable " + t.name() + " annotated " + to_string(t.type()) +
             " but bound at " + to_string(it->second));
      return t.type();
    }
    case Term::Kind::App: {
      Type f = check(t.fun(), ctx, sub("fun"));
      Type a = check(t.arg(), ctx, sub("arg"));
      if (!f.is_arrow()) fail(to_string(f) + " is not an arrow type");
      if (f.dom() != a) fail("argument type mismatch");
      if (f.cod() != t.type()) fail("stored type disagrees");
      return t.type();
    }
    case Term::Kind::Lam:
    case Term::Kind::Mu: {
      auto saved = ctx.find(t.name()) == ctx.end()
                       ? std::optional<Type>()
                       : std::optional<Type>(ctx.at(t.name()));
      ctx.insert_or_assign(t.name(), t.binder_type());
      Type b = check(t.body(), ctx, sub("body"));
      if (saved) ctx.insert_or_assign(t.name(), *saved);
      else ctx.erase(t.name());
      if (t.is_lam()) {
        if (Type::arrow(t.binder_type(), b) != t.type())
          fail("stored type disagrees");
      } else {
        if (!t.binder_type().is_negation()) fail("mu binder not negated");
        if (!b.is_bot()) fail("mu body not of type bot");
        if (t.binder_type().dom() != t.type()) fail("stored type disagrees");
      }
      return t.type();
    }
  }
  return t.type();
}

void collect_free(const Term& t, std::set<std::string>& bound,
                  std::map<std::string, Type>& out) {
  switch (t.kind()) {
    case Term::Kind::Var: {
      if (bound.count(t.name())) return;
      auto [it, fresh] = out.emplace(t.name(), t.type());
      if (!fresh && it->second != t.type())
        throw Error(ErrorKind::Type, "variable " + t.name() +
                                         " occurs free at types " +
                                         to_string(it->second) + " and " +
                                         to_string(t.type()));
      return;
    }
    case Term::Kind::App:
      collect_free(t.fun(), bound, out);
      collect_free(t.arg(), bound, out);
      return;
    case Term::Kind::Lam:
    case Term::Kind::Mu: {
      bool inserted = bound.insert(t.name()).second;
      collect_free(t.body(), bound, out);
      if (inserted) bound.erase(t.name());
      return;
    }
  }
}

void collect_names(const Term& t, std::set<std::string>& out) {
  out.insert(t.name());
  if (t.is_app()) {
    collect_names(t.fun(), out);
    collect_names(t.arg(), out);
  } else if (!t.is_var()) {
    collect_names(t.body(), out);
  }
}

}  // namespace

Type typecheck_slm(const Term& term, const TypeContext& ctx) {
  TypeContext scope = ctx;
  return check(term, scope, "");
}

FreeVarSet free_vars(const Term& term) {
  std::set<std::string> bound;
  std::map<std::string, Type> found;
  collect_free(term, bound, found);
  FreeVarSet out;
  for (auto& [n, t] : found) out.emplace(n, t);
  return out;
}

bool occurs_free(const std::string& name, const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Var: return t.name() == name;
    case Term::Kind::App:
      return occurs_free(name, t.fun()) || occurs_free(name, t.arg());
    default: return t.name() != name && occurs_free(name, t.body());
  }
}

std::set<std::string> all_names(const Term& term) {
  std::set<std::string> out;
  collect_names(term, out);
  out.erase("");
  return out;
}

}  // namespace ctt
