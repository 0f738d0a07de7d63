#include "ctt/semantics.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include "ctt/error.hpp"
#include "ctt/rewrite.hpp"
#include "ctt/syntax.hpp"

namespace ctt {

const char* to_string(ContextClass c) {
  switch (c) {
    case ContextClass::T1: return "T1";
    case ContextClass::T2: return "T2";
    case ContextClass::T3: return "T3";
    case ContextClass::T4: return "T4";
  }
  return "?";
}

namespace {

class Binding {
 public:
  Binding(Assignment& rho, const std::string& name) : rho_(rho), name_(name) {
    if (auto it = rho.find(name); it != rho.end()) saved_ = it->second;
  }
  void set(const Elem& v) { rho_.insert_or_assign(name_, v); }
  ~Binding() {
    if (saved_) rho_.insert_or_assign(name_, *saved_);
    else rho_.erase(name_);
  }

 private:
  Assignment& rho_;
  std::string name_;
  std::optional<Elem> saved_;
};

Elem eval(const Term& t, const ModelConfig& m, Assignment& rho) {
  switch (t.kind()) {
    case Term::Kind::Var: {
      const Elem* v = nullptr;
      if (auto it = rho.find(t.name()); it != rho.end()) v = &it->second;
      else if (auto c = m.constants.find(t.name()); c != m.constants.end()) v = &c->second;
      if (!v) throw Error(ErrorKind::Unassigned, "no value for variable " + t.name());
      if (v->type() != t.type())
        throw Error(ErrorKind::Type, "value of " + t.name() + " has type " +
                                         to_string(v->type()) + ", expected " +
                                         to_string(t.type()));
      return *v;
    }
    case Term::Kind::App:
      return apply_elem(eval(t.fun(), m, rho), eval(t.arg(), m, rho), m);
    case Term::Kind::Lam: {
      auto keys = rank0_atoms(m, t.binder_type());
      std::vector<Elem> entries;
      Binding bind(rho, t.name());
      for (const auto& a : *keys) {
        bind.set(a);
        Elem v = eval(t.body(), m, rho);
        if (v.rank() > 0)
          throw Error(ErrorKind::RankOverflow, "body of \\" + t.name() +
                                                   " has a rank-" + std::to_string(v.rank()) +
                                                   " value where rank 0 is required");
        entries.push_back(v);
      }
      return Elem::table(t.type(), keys, std::move(entries));
    }
    case Term::Kind::Mu: {
      if (m.rank_cap < 1)
        throw Error(ErrorKind::RankOverflow, "mu needs rank 1 but the rank cap is " +
                                                 std::to_string(m.rank_cap));
      auto keys = rank0_atoms(m, t.binder_type());
      std::vector<Elem> entries;
      Binding bind(rho, t.name());
      for (const auto& g : *keys) {
        bind.set(g);
        Elem v = eval(t.body(), m, rho);
        if (v.kind() != Elem::Kind::Truth)
          throw Error(ErrorKind::RankOverflow,
                      "body of #" + t.name() + " has no rank-0 truth value: " + render(v));
        entries.push_back(v);
      }
      Elem table = Elem::table(Type::neg(t.binder_type()), keys, std::move(entries));
      return iso_i(table, m);
    }
  }
  throw Error(ErrorKind::Unsupported, "unknown term");
}

}  // namespace

Elem eval_slm(const Term& term, const ModelConfig& m, const Assignment& rho) {
  Assignment local = rho;
  return eval(term, m, local);
}

Elem eval_cts(const Cts& sub, const ModelConfig& m, const Assignment& rho) {
  return interpret_cts(sub, m, rho, false);
}

ContextClass classify_context(const HoleContext& c, const ModelConfig& m,
                              const Assignment& rho) {
  if (!c.term.type().is_bot())
    throw Error(ErrorKind::Type, "a context must have type bot");
  bool out[2];
  for (int h = 0; h < 2; ++h) {
    Assignment local = rho;
    local.insert_or_assign(c.hole, Elem::truth(h == 1));
    auto v = bot_value(eval(c.term, m, local));
    if (!v) throw Error(ErrorKind::RankOverflow, "context has no truth value");
    out[h] = *v;
  }
  if (!out[0] && out[1]) return ContextClass::T1;
  if (out[0] && !out[1]) return ContextClass::T2;
  if (!out[0]) return ContextClass::T3;
  return ContextClass::T4;
}

bool check_equation(const Term& lhs, const Term& rhs, const ModelConfig& m,
                    const Assignment& rho) {
  if (lhs.type() != rhs.type())
    throw Error(ErrorKind::Type, "equation between types " + to_string(lhs.type()) +
                                     " and " + to_string(rhs.type()));
  return ba_equal(eval_slm(lhs, m, rho), eval_slm(rhs, m, rho));
}

bool valid_at(const std::vector<Cts>& gamma, const std::vector<Cts>& delta,
              const ModelConfig& m, const Assignment& rho) {
  std::vector<Elem> gv, dv;
  int k = 1;
  for (const auto& g : gamma) {
    if (!g.type().is_bot()) throw Error(ErrorKind::Type, "sequent members must have type bot");
    gv.push_back(eval_cts(g, m, rho));
    k = std::max(k, gv.back().rank());
  }
  for (const auto& d : delta) {
    if (!d.type().is_bot()) throw Error(ErrorKind::Type, "sequent members must have type bot");
    dv.push_back(eval_cts(d, m, rho));
    k = std::max(k, dv.back().rank());
  }
  return ba_leq(Elem::meet(k, Type::bot(), std::move(gv)),
                Elem::join(k, Type::bot(), std::move(dv)));
}

std::vector<Assignment> enumerate_assignments(const std::vector<CtsVar>& vars,
                                              const ModelConfig& m, std::size_t cap) {
  std::vector<std::pair<std::string, std::vector<Elem>>> doms;
  std::size_t total = 1;
  for (const auto& v : vars) {
    if (m.constants.count(v.name)) continue;
    std::vector<Elem> dom;
    if (v.type.is_bot()) dom = {Elem::truth(false), Elem::truth(true)};
    else dom = enumerate_domain(m, v.type, v.rank == 0 ? 0 : 1);
    total *= dom.size();
    if (total > cap)
      throw Error(ErrorKind::Cap, "more than " + std::to_string(cap) + " assignments");
    doms.emplace_back(v.name, std::move(dom));
  }
  std::vector<Assignment> out;
  out.reserve(total);
  std::vector<std::size_t> idx(doms.size(), 0);
  for (std::size_t n = 0; n < total; ++n) {
    Assignment rho;
    for (std::size_t i = 0; i < doms.size(); ++i)
      rho.insert_or_assign(doms[i].first, doms[i].second[idx[i]]);
    out.push_back(std::move(rho));
    for (std::size_t i = doms.size(); i-- > 0;) {
      if (++idx[i] < doms[i].second.size()) break;
      idx[i] = 0;
    }
  }
  return out;
}

std::string render(const Assignment& rho) {
  std::string out = "{";
  for (const auto& [name, v] : rho) {
    if (out.size() > 1) out += ", ";
    out += name + "=" + render(v);
  }
  return out + "}";
}

Verdict sequent_valid(const std::vector<Cts>& gamma, const std::vector<Cts>& delta,
                      const std::vector<ModelConfig>& models, std::size_t cap) {
  std::map<std::string, CtsVar> vars;
  for (const auto* side : {&gamma, &delta})
    for (const auto& t : *side)
      for (const auto& v : free_vars(t)) {
        auto [it, fresh] = vars.emplace(v.name, v);
        if (!fresh && !(it->second == v))
          throw Error(ErrorKind::Type, "variable " + v.name + " used at two types or ranks");
      }
  std::vector<CtsVar> list;
  for (auto& [n, v] : vars) list.push_back(v);
  Verdict out;
  for (std::size_t i = 0; i < models.size(); ++i) {
    for (const auto& rho : enumerate_assignments(list, models[i], cap)) {
      ++out.assignments;
      if (!valid_at(gamma, delta, models[i], rho)) {
        out.valid = false;
        out.counterexample = std::make_pair(i, render(rho));
        return out;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Harness

std::string HarnessReport::records() const {
  std::ostringstream os;
  for (const auto& f : failures)
    os << "rule=" << rule << " trial=" << f.trial << " seed=" << f.seed
       << " status=fail detail=" << f.detail << "\n";
  os << "rule=" << rule << " seed=" << seed << " trials=" << trials << " checked=" << checked
     << " skipped=" << skipped << " failures=" << failures.size()
     << " status=" << (ok() ? "ok" : "fail") << "\n";
  return os.str();
}

std::vector<std::string> slm_harness_rules() {
  return {"rule1", "rule2", "rule3", "rule4",  "rule5",  "rule6",           "rule7",
          "rule8", "rule9", "rule10", "rule11", "rule12", "eta-mu-unguarded", "mu-corrupt"};
}

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::string canonical_rule(const std::string& r) {
  static const std::map<std::string, std::string> alias = {
      {"beta", "rule8"}, {"eta", "rule9"}, {"beta-mu", "rule10"},
      {"eta-mu", "rule11"}, {"mu", "rule12"}};
  if (auto it = alias.find(r); it != alias.end()) return it->second;
  auto rules = slm_harness_rules();
  if (std::find(rules.begin(), rules.end(), r) == rules.end())
    throw Error(ErrorKind::Syntax, "unknown harness rule '" + r + "'");
  return r;
}

using Scope = std::vector<std::pair<std::string, Type>>;

// Random well-typed terms whose free variables all have small rank-0 domains.
class TermGen {
 public:
  TermGen(std::uint64_t seed, const ModelConfig& m) : rng_(seed), m_(m) {
    for (const auto& [name, size] : m.base_sizes) {
      (void)size;
      values_.push_back(Type::base(name));
    }
    values_.push_back(Type::bot());
  }

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  Type value_type() { return values_[static_cast<std::size_t>(pick(static_cast<int>(values_.size())))]; }
  std::string binder() { return "x" + std::to_string(next_binder_++); }

  bool small(const Type& t) const {
    try {
      return rank0_size(m_, t) <= 4096;
    } catch (const Error&) {
      return false;
    }
  }

  Term free_var(const Type& t) {
    std::string key = to_string(t);
    auto it = prefix_.find(key);
    if (it == prefix_.end()) {
      std::string p;
      if (t.is_bot()) p = "p";
      else if (t.is_base()) p = t.name() + "v";
      else p = "k" + std::to_string(prefix_.size());
      it = prefix_.emplace(key, p).first;
    }
    return Term::var(it->second + std::to_string(pick(2)), t);
  }

  Term gen(const Type& t, int depth, const Scope& scope) {
    std::vector<Term> vars;
    for (const auto& [n, ty] : scope)
      if (ty == t) vars.push_back(Term::var(n, ty));
    int r = depth <= 0 ? 0 : pick(10);
    if (r < 2 || depth <= 0) {
      if (!vars.empty() && pick(3) != 0) return vars[static_cast<std::size_t>(pick(static_cast<int>(vars.size())))];
      if (small(t)) return free_var(t);
    }
    if (r < 4 && t.is_arrow()) {
      std::string x = binder();
      Scope inner = scope;
      inner.emplace_back(x, t.dom());
      return Term::lam(x, t.dom(), gen(t.cod(), depth - 1, inner));
    }
    if (r == 4 && (t.is_base() || t.is_bot()) && m_.rank_cap >= 1) {
      std::string x = binder();
      Scope inner = scope;
      inner.emplace_back(x, Type::neg(t));
      return Term::mu(x, Type::neg(t), gen(Type::bot(), depth - 1, inner));
    }
    // Application with an argument type keeping the functor's domain small.
    std::vector<Type> args;
    for (const auto& a : values_)
      if (small(Type::arrow(a, t))) args.push_back(a);
    if ((t.is_base() || t.is_bot()) && !values_.empty()) {
      Type na = Type::neg(values_[0]);
      if (small(Type::arrow(na, t))) args.push_back(na);
    }
    for (const auto& [n, ty] : scope)
      if (ty.is_arrow() && ty.cod() == t && small(ty.dom())) args.push_back(ty.dom());
    if (args.empty() || depth <= 0) {
      if (!vars.empty()) return vars[0];
      if (t.is_arrow()) {
        std::string x = binder();
        Scope inner = scope;
        inner.emplace_back(x, t.dom());
        return Term::lam(x, t.dom(), gen(t.cod(), 0, inner));
      }
      return free_var(t);
    }
    Type a = args[static_cast<std::size_t>(pick(static_cast<int>(args.size())))];
    Term f = gen(Type::arrow(a, t), depth - 1, scope);
    return Term::app(f, gen(a, depth - 1, scope));
  }

  // A provably equal variant of p: a beta- or eta-expansion.
  Term expand(const Term& p, const Scope& scope) {
    int r = pick(3);
    if (r == 0) {
      std::string z = binder();
      return Term::app(Term::lam(z, p.type(), Term::var(z, p.type())), p);
    }
    if (r == 1 || !p.type().is_arrow()) {
      Type a = value_type();
      std::string z = binder();
      Term r2 = gen(a, 1, scope);
      rank0.push_back(r2);
      return Term::app(Term::lam(z, a, p), r2);
    }
    std::string z = binder();
    return Term::lam(z, p.type().dom(), Term::app(p, Term::var(z, p.type().dom())));
  }

  Assignment assign(const std::vector<Term>& terms) {
    Assignment rho;
    for (const auto& t : terms)
      for (const auto& [n, ty] : free_vars(t)) {
        if (rho.count(n)) continue;
        auto dom = rank0_atoms(m_, ty);
        rho.insert_or_assign(n, (*dom)[static_cast<std::size_t>(pick(static_cast<int>(dom->size())))]);
      }
    return rho;
  }

  std::mt19937_64& rng() { return rng_; }

  // Terms standing for a lambda/mu-bound value; instances where one of them
  // denotes a shadow are outside the rank-0 reduction and get skipped.
  std::vector<Term> rank0;

 private:
  std::mt19937_64 rng_;
  const ModelConfig& m_;
  std::vector<Type> values_;
  std::map<std::string, std::string> prefix_;
  int next_binder_ = 0;
};

struct Skip {};

struct Instance {
  Term lhs;
  Term rhs;
  // Premises that must hold (checked for every value of `bound`, if set).
  std::vector<std::pair<Term, Term>> premises;
  std::optional<std::pair<std::string, Type>> bound;
};

// Mu-rule types: the mu variable's table domain must stay small.
std::pair<Type, Type> mu_types(TermGen& g, const ModelConfig& m) {
  std::vector<std::pair<Type, Type>> ok;
  std::vector<Type> vals;
  for (const auto& [n, s] : m.base_sizes) {
    (void)s;
    vals.push_back(Type::base(n));
  }
  vals.push_back(Type::bot());
  for (const auto& s : vals)
    for (const auto& t : vals)
      if (rank0_size(m, Type::arrow(s, t)) <= 8) ok.emplace_back(s, t);
  if (ok.empty()) throw Skip{};
  return ok[static_cast<std::size_t>(g.pick(static_cast<int>(ok.size())))];
}

Instance make_instance(const std::string& rule, TermGen& g, const ModelConfig& m) {
  int d = 1 + g.pick(3);
  if (rule == "rule1") {
    Term p = g.gen(g.value_type(), d, {});
    return {p, p, {}, {}};
  }
  if (rule == "rule2" || rule == "rule3") {
    Term p = g.gen(g.value_type(), d, {});
    Term q = g.expand(p, {});
    if (rule == "rule2") return {q, p, {{p, q}}, {}};
    Term r = g.expand(q, {});
    return {p, r, {{p, q}, {q, r}}, {}};
  }
  if (rule == "rule4") {
    Type s = g.value_type(), t = g.value_type();
    Term p = g.gen(Type::arrow(s, t), d, {});
    Term q = g.expand(p, {});
    Term a = g.gen(s, d, {});
    return {Term::app(p, a), Term::app(q, a), {{p, q}}, {}};
  }
  if (rule == "rule5") {
    Type s = g.value_type(), t = g.value_type();
    Term a = g.gen(s, d, {});
    Term b = g.expand(a, {});
    Term p = g.gen(Type::arrow(s, t), d, {});
    return {Term::app(p, a), Term::app(p, b), {{a, b}}, {}};
  }
  if (rule == "rule6" || rule == "rule7") {
    bool mu = rule == "rule7";
    Type s = g.value_type();
    Type xt = mu ? Type::neg(s) : s;
    Type body = mu ? Type::bot() : g.value_type();
    std::string x = g.binder();
    Scope scope{{x, xt}};
    Term p = g.gen(body, d, scope);
    Term q = g.expand(p, scope);
    Term l = mu ? Term::mu(x, xt, p) : Term::lam(x, xt, p);
    Term r = mu ? Term::mu(x, xt, q) : Term::lam(x, xt, q);
    return {l, r, {{p, q}}, std::make_pair(x, xt)};
  }
  if (rule == "rule8") {
    Type s = g.value_type(), t = g.value_type();
    std::string x = g.binder();
    Term p = g.gen(t, d, {{x, s}});
    Term q = g.gen(s, d, {});
    g.rank0.push_back(q);
    return {Term::app(Term::lam(x, s, p), q), substitute(p, x, q), {}, {}};
  }
  if (rule == "rule9") {
    Type s = g.value_type(), t = g.value_type();
    Term p = g.gen(Type::arrow(s, t), d, {});
    std::string x = g.binder();
    return {Term::lam(x, s, Term::app(p, Term::var(x, s))), p, {}, {}};
  }
  if (rule == "rule10") {
    Type s = g.value_type();
    std::string x = g.binder();
    Term p = g.gen(Type::bot(), d, {{x, Type::neg(s)}});
    Term q = g.gen(Type::neg(s), d, {});
    g.rank0.push_back(q);
    return {Term::app(q, Term::mu(x, Type::neg(s), p)), substitute(p, x, q), {}, {}};
  }
  if (rule == "rule11" || rule == "eta-mu-unguarded") {
    Type s = g.value_type();
    std::string x = g.binder();
    Scope scope;
    if (rule != "rule11") scope.emplace_back(x, Type::neg(s));
    Term p = g.gen(s, d, scope);
    if (rule != "rule11" && !occurs_free(x, p)) throw Skip{};
    Term lhs = Term::mu(x, Type::neg(s), Term::app(Term::var(x, Type::neg(s)), p));
    return {lhs, p, {}, {}};
  }
  // rule12 and mu-corrupt: P is a bot context around x-headed applications.
  auto [s, t] = mu_types(g, m);
  Type fn = Type::arrow(s, t);
  Type xt = Type::neg(fn);
  std::string x = g.binder();
  Term r1 = g.gen(fn, d - 1, {});
  Term hole = Term::app(Term::var(x, xt), r1);
  Term p = hole;
  switch (g.pick(3)) {
    case 0: break;
    case 1: p = Term::app(g.gen(Type::arrow(Type::bot(), Type::bot()), d - 1, {}), hole); break;
    default: {
      Term r2 = g.gen(fn, d - 1, {});
      g.rank0.push_back(r2);
      Term h = g.gen(Type::arrow(Type::bot(), Type::arrow(Type::bot(), Type::bot())), d - 1, {});
      p = Term::app(Term::app(h, hole), Term::app(Term::var(x, xt), r2));
    }
  }
  Term q = g.gen(s, d, {});
  g.rank0.push_back(r1);
  g.rank0.push_back(q);
  Term lhs = Term::app(Term::mu(x, xt, p), q);
  if (rule == "mu-corrupt") return {lhs, Term::app(r1, q), {}, {}};
  auto rhs = contract_at(lhs, {}, RuleTag::Mu);
  if (!rhs) throw Skip{};
  return {lhs, *rhs, {}, {}};
}

bool holds(const Term& l, const Term& r, const ModelConfig& m, const Assignment& rho,
           const std::optional<std::pair<std::string, Type>>& bound) {
  if (!bound) return check_equation(l, r, m, rho);
  for (const auto& a : *rank0_atoms(m, bound->second)) {
    Assignment local = rho;
    local.insert_or_assign(bound->first, a);
    if (!check_equation(l, r, m, local)) return false;
  }
  return true;
}

bool denotes_rank0(const Term& t, const ModelConfig& m, const Assignment& rho,
                   const std::optional<std::pair<std::string, Type>>& bound) {
  if (!bound || !occurs_free(bound->first, t)) return eval_slm(t, m, rho).rank() == 0;
  for (const auto& a : *rank0_atoms(m, bound->second)) {
    Assignment local = rho;
    local.insert_or_assign(bound->first, a);
    if (eval_slm(t, m, local).rank() != 0) return false;
  }
  return true;
}

// Rule 12 over every truth context (c [.]) and every R, Q at sizes 2/2.
void mu_sweep(HarnessReport& rep, bool corrupt) {
  ModelConfig m;
  m.base_sizes = {{"e", 2}, {"t", 2}};
  Type s = Type::base("e"), t = Type::base("t"), bb = Type::arrow(Type::bot(), Type::bot());
  Type fn = Type::arrow(s, t), xt = Type::neg(fn);
  Term c = Term::var("c", bb), r = Term::var("r", fn), q = Term::var("q", s);
  Term lhs = Term::app(Term::mu("x", xt, Term::app(c, Term::app(Term::var("x", xt), r))), q);
  Term rhs = corrupt ? Term::app(r, q) : *contract_at(lhs, {}, RuleTag::Mu);
  HoleContext ctx{Term::app(c, Term::var("h", Type::bot())), "h"};
  for (const auto& cv : *rank0_atoms(m, bb))
    for (const auto& rv : *rank0_atoms(m, fn))
      for (const auto& qv : *rank0_atoms(m, s)) {
        Assignment rho{{"c", cv}, {"r", rv}, {"q", qv}};
        ContextClass cls = classify_context(ctx, m, rho);
        Elem lv = eval_slm(lhs, m, rho), rv2 = eval_slm(rhs, m, rho);
        bool ok = ba_equal(lv, rv2);
        if (ok && (cls == ContextClass::T3 || cls == ContextClass::T4)) {
          Elem want = cls == ContextClass::T3 ? Elem::join(1, t, {}) : Elem::meet(1, t, {});
          ok = ba_equal(lv, want) && lv.rank() == 1;
        }
        ++rep.checked;
        if (!ok)
          rep.failures.push_back({-1, rep.seed,
                                  std::string("sweep class=") + to_string(cls) + " rho=" +
                                      render(rho) + " lhs=" + render(lv) + " rhs=" + render(rv2)});
      }
}

}  // namespace

HarnessReport slm_harness(const std::string& rule_name, const ModelConfig& m, int trials,
                          std::uint64_t seed) {
  std::string rule = canonical_rule(rule_name);
  m.validate();
  HarnessReport rep;
  rep.rule = rule;
  rep.seed = seed;
  rep.trials = trials;
  int attempts = 0;
  int done = 0;
  while (done < trials && attempts < trials * 50) {
    std::uint64_t ts = splitmix(seed + static_cast<std::uint64_t>(attempts));
    ++attempts;
    TermGen g(ts, m);
    try {
      Instance inst = make_instance(rule, g, m);
      std::vector<Term> all{inst.lhs, inst.rhs};
      for (auto& [a, b] : inst.premises) {
        all.push_back(a);
        all.push_back(b);
      }
      all.insert(all.end(), g.rank0.begin(), g.rank0.end());
      Assignment rho = g.assign(all);
      for (const auto& t : g.rank0)
        if (!denotes_rank0(t, m, rho, inst.bound)) throw Skip{};
      for (auto& [a, b] : inst.premises)
        if (!holds(a, b, m, rho, inst.bound)) {
          rep.failures.push_back({done, ts, "premise " + render(a) + " = " + render(b) +
                                                " fails under " + render(rho)});
        }
      if (!check_equation(inst.lhs, inst.rhs, m, rho))
        rep.failures.push_back({done, ts, render(inst.lhs) + " = " + render(inst.rhs) +
                                              " fails under " + render(rho)});
      ++rep.checked;
      ++done;
    } catch (const Skip&) {
      ++rep.skipped;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::RankOverflow && e.kind() != ErrorKind::Cap &&
          e.kind() != ErrorKind::NonFunctorOccurrence)
        throw;
      ++rep.skipped;
    }
  }
  if (rule == "rule12" || rule == "mu-corrupt") mu_sweep(rep, rule == "mu-corrupt");
  return rep;
}

}  // namespace ctt
