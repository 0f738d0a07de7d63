#include "ctt/rewrite.hpp"

#include <map>

#include "ctt/error.hpp"

namespace ctt {

const char* to_string(RuleTag r) {
  switch (r) {
    case RuleTag::Beta: return "beta";
    case RuleTag::Eta: return "eta";
    case RuleTag::BetaMu: return "beta-mu";
    case RuleTag::EtaMu: return "eta-mu";
    case RuleTag::Mu: return "mu";
  }
  return "?";
}

const char* to_string(Decision d) {
  return d == Decision::EqualByNormalForm ? "equal" : "unknown";
}

Strategy parse_strategy(const std::string& s) {
  if (s == "lo" || s == "leftmost-outermost" || s == "outermost")
    return Strategy::LeftmostOutermost;
  if (s == "li" || s == "leftmost-innermost" || s == "innermost")
    return Strategy::LeftmostInnermost;
  throw Error(ErrorKind::Syntax, "unknown strategy '" + s + "'");
}

std::string to_string(const Path& p) {
  if (p.empty()) return "root";
  std::string out;
  for (int i : p) {
    if (!out.empty()) out += '.';
    out += std::to_string(i);
  }
  return out;
}

std::string FreshNames::fresh(const std::string& base) {
  std::string name = base;
  while (avoid_.count(name)) name += '\'';
  avoid_.insert(name);
  return name;
}

namespace {

std::set<std::string> free_names(const Term& t) {
  std::set<std::string> out;
  for (auto& [n, ty] : free_vars(t)) out.insert(n);
  return out;
}

Term rebuild_binder(const Term& b, std::string name, Term body) {
  return b.is_lam() ? Term::lam(std::move(name), b.binder_type(), std::move(body))
                    : Term::mu(std::move(name), b.binder_type(), std::move(body));
}

// Renames the binder of `b` away from `avoid`, returning the new binder node.
Term rename_binder(const Term& b, const std::set<std::string>& avoid) {
  std::set<std::string> used = avoid;
  auto names = all_names(b.body());
  used.insert(names.begin(), names.end());
  used.insert(b.name());
  FreshNames fresh(std::move(used));
  std::string nn = fresh.fresh(b.name());
  Term body = substitute(b.body(), b.name(), Term::var(nn, b.binder_type()));
  return rebuild_binder(b, nn, std::move(body));
}

}  // namespace

Term substitute(const Term& p, const std::string& x, const Term& q) {
  switch (p.kind()) {
    case Term::Kind::Var:
      if (p.name() != x) return p;
      if (p.type() != q.type())
        throw Error(ErrorKind::Type, "substituting " + to_string(q.type()) +
                                         " for " + x + " of type " +
                                         to_string(p.type()));
      return q;
    case Term::Kind::App: {
      Term f = substitute(p.fun(), x, q);
      Term a = substitute(p.arg(), x, q);
      if (f.same_node(p.fun()) && a.same_node(p.arg())) return p;
      return Term::app(std::move(f), std::move(a));
    }
    case Term::Kind::Lam:
    case Term::Kind::Mu: {
      if (p.name() == x || !occurs_free(x, p.body())) return p;
      auto fq = free_names(q);
      Term b = p;
      if (fq.count(p.name())) {
        fq.insert(x);
        b = rename_binder(p, fq);
      }
      return rebuild_binder(b, b.name(), substitute(b.body(), x, q));
    }
  }
  return p;
}

Term structural_subst(const Term& p, const std::string& x, const Term& q,
                      const std::string& y) {
  switch (p.kind()) {
    case Term::Kind::Var:
      if (p.name() == x)
        throw Error(ErrorKind::NonFunctorOccurrence,
                    "variable " + x + " occurs outside functor position");
      return p;
    case Term::Kind::App: {
      if (p.fun().is_var() && p.fun().name() == x) {
        const Type& xt = p.fun().type();
        if (!xt.is_negation() || !xt.dom().is_arrow())
          throw Error(ErrorKind::Type, "mu variable " + x +
                                           " must have type ~(s -> t), got " +
                                           to_string(xt));
        Type yt = Type::neg(xt.dom().cod());
        Term r = structural_subst(p.arg(), x, q, y);
        return Term::app(Term::var(y, yt), Term::app(std::move(r), q));
      }
      Term f = structural_subst(p.fun(), x, q, y);
      Term a = structural_subst(p.arg(), x, q, y);
      if (f.same_node(p.fun()) && a.same_node(p.arg())) return p;
      return Term::app(std::move(f), std::move(a));
    }
    case Term::Kind::Lam:
    case Term::Kind::Mu: {
      if (p.name() == x || !occurs_free(x, p.body())) return p;
      auto avoid = free_names(q);
      avoid.insert(y);
      Term b = p;
      if (avoid.count(p.name())) {
        avoid.insert(x);
        b = rename_binder(p, avoid);
      }
      return rebuild_binder(b, b.name(), structural_subst(b.body(), x, q, y));
    }
  }
  return p;
}

namespace {

std::optional<Term> try_rule(const Term& t, RuleTag rule) {
  switch (rule) {
    case RuleTag::Beta:
      if (t.is_app() && t.fun().is_lam())
        return substitute(t.fun().body(), t.fun().name(), t.arg());
      return std::nullopt;
    case RuleTag::Mu: {
      if (!t.is_app() || !t.fun().is_mu() || !t.fun().type().is_arrow())
        return std::nullopt;
      const Term& m = t.fun();
      auto used = all_names(t);
      FreshNames fresh(std::move(used));
      std::string y = fresh.fresh("y");
      Term body = structural_subst(m.body(), m.name(), t.arg(), y);
      return Term::mu(y, Type::neg(t.type()), std::move(body));
    }
    case RuleTag::BetaMu:
      if (t.is_app() && t.arg().is_mu() && t.type().is_bot())
        return substitute(t.arg().body(), t.arg().name(), t.fun());
      return std::nullopt;
    case RuleTag::Eta: {
      if (!t.is_lam() || !t.body().is_app()) return std::nullopt;
      const Term& a = t.body().arg();
      if (!a.is_var() || a.name() != t.name()) return std::nullopt;
      if (occurs_free(t.name(), t.body().fun())) return std::nullopt;
      return t.body().fun();
    }
    case RuleTag::EtaMu: {
      if (!t.is_mu() || !t.body().is_app()) return std::nullopt;
      const Term& f = t.body().fun();
      if (!f.is_var() || f.name() != t.name()) return std::nullopt;
      if (occurs_free(t.name(), t.body().arg())) return std::nullopt;
      return t.body().arg();
    }
  }
  return std::nullopt;
}

constexpr RuleTag kRuleOrder[] = {RuleTag::Beta, RuleTag::Mu, RuleTag::BetaMu,
                                  RuleTag::Eta, RuleTag::EtaMu};

struct Found {
  Term before;
  Term after;
  RuleTag rule;
  Path path;
};

std::optional<Found> at_root(const Term& t) {
  for (RuleTag r : kRuleOrder)
    if (auto out = try_rule(t, r)) return Found{t, *out, r, {}};
  return std::nullopt;
}

std::optional<std::pair<Term, Found>> search(const Term& t, Strategy s) {
  if (s == Strategy::LeftmostOutermost)
    if (auto f = at_root(t)) return std::make_pair(f->after, *f);
  if (t.is_app()) {
    if (auto r = search(t.fun(), s)) {
      r->second.path.insert(r->second.path.begin(), 0);
      return std::make_pair(Term::app(r->first, t.arg()), r->second);
    }
    if (auto r = search(t.arg(), s)) {
      r->second.path.insert(r->second.path.begin(), 1);
      return std::make_pair(Term::app(t.fun(), r->first), r->second);
    }
  } else if (!t.is_var()) {
    if (auto r = search(t.body(), s)) {
      r->second.path.insert(r->second.path.begin(), 0);
      return std::make_pair(rebuild_binder(t, t.name(), r->first), r->second);
    }
  }
  if (s == Strategy::LeftmostInnermost)
    if (auto f = at_root(t)) return std::make_pair(f->after, *f);
  return std::nullopt;
}

Term replace(const Term& t, const Path& path, std::size_t i, const Term& by) {
  if (i == path.size()) return by;
  if (t.is_app()) {
    if (path[i] == 0) return Term::app(replace(t.fun(), path, i + 1, by), t.arg());
    return Term::app(t.fun(), replace(t.arg(), path, i + 1, by));
  }
  if (t.is_var() || path[i] != 0)
    throw Error(ErrorKind::Syntax, "path " + to_string(path) + " leaves the term");
  return rebuild_binder(t, t.name(), replace(t.body(), path, i + 1, by));
}

const Term& at_path(const Term& t, const Path& path) {
  const Term* cur = &t;
  for (int i : path) {
    if (cur->is_app()) cur = i == 0 ? &cur->fun() : &cur->arg();
    else if (!cur->is_var() && i == 0) cur = &cur->body();
    else throw Error(ErrorKind::Syntax, "path " + to_string(path) + " leaves the term");
  }
  return *cur;
}

}  // namespace

std::optional<Step> step(const Term& term, Strategy strategy) {
  auto r = search(term, strategy);
  if (!r) return std::nullopt;
  return Step{r->first, r->second.path, r->second.rule, r->second.before,
              r->second.after};
}

std::optional<Term> contract_at(const Term& term, const Path& position,
                                RuleTag rule) {
  auto out = try_rule(at_path(term, position), rule);
  if (!out) return std::nullopt;
  return replace(term, position, 0, *out);
}

Normalized normalize(const Term& term, Strategy strategy, int fuel) {
  Normalized n{term, {}, NormalizeStatus::NormalForm};
  while (true) {
    auto s = step(n.term, strategy);
    if (!s) return n;
    if (fuel <= 0) {
      n.status = NormalizeStatus::FuelExhausted;
      return n;
    }
    --fuel;
    n.term = s->result;
    n.trace.steps.push_back(std::move(*s));
  }
}

Term replay(const Term& start, const RewriteTrace& trace) {
  Term cur = start;
  for (const auto& s : trace.steps) {
    auto next = contract_at(cur, s.position, s.rule);
    if (!next)
      throw Error(ErrorKind::Syntax, "trace step " + std::string(to_string(s.rule)) +
                                         " does not apply at " +
                                         to_string(s.position));
    cur = *next;
  }
  return cur;
}

namespace {

bool alpha(const Term& a, const Term& b, std::map<std::string, std::vector<int>>& ea,
           std::map<std::string, std::vector<int>>& eb, int depth) {
  if (a.kind() != b.kind() || a.type() != b.type()) return false;
  switch (a.kind()) {
    case Term::Kind::Var: {
      auto ia = ea.find(a.name());
      auto ib = eb.find(b.name());
      bool ba = ia != ea.end() && !ia->second.empty();
      bool bb = ib != eb.end() && !ib->second.empty();
      if (ba != bb) return false;
      if (ba) return ia->second.back() == ib->second.back();
      return a.name() == b.name();
    }
    case Term::Kind::App:
      return alpha(a.fun(), b.fun(), ea, eb, depth) &&
             alpha(a.arg(), b.arg(), ea, eb, depth);
    default: {
      if (a.binder_type() != b.binder_type()) return false;
      ea[a.name()].push_back(depth);
      eb[b.name()].push_back(depth);
      bool ok = alpha(a.body(), b.body(), ea, eb, depth + 1);
      ea[a.name()].pop_back();
      eb[b.name()].pop_back();
      return ok;
    }
  }
}

}  // namespace

bool alpha_equivalent(const Term& a, const Term& b) {
  std::map<std::string, std::vector<int>> ea, eb;
  return alpha(a, b, ea, eb, 0);
}

Decision decide_equal(const Term& a, const Term& b, int fuel) {
  if (a.type() != b.type())
    throw Error(ErrorKind::Type, "decide_equal on terms of different types");
  auto na = normalize(a, Strategy::LeftmostOutermost, fuel);
  auto nb = normalize(b, Strategy::LeftmostOutermost, fuel);
  if (na.status == NormalizeStatus::NormalForm &&
      nb.status == NormalizeStatus::NormalForm &&
      alpha_equivalent(na.term, nb.term))
    return Decision::EqualByNormalForm;
  return Decision::Unknown;
}

}  // namespace ctt
