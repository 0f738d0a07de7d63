#include <random>

#include "ctt/error.hpp"
#include "ctt/prover.hpp"

namespace ctt {

namespace {

struct Skip {};

Type ty(const std::string& s) { return parse_type(s); }

// Random ranked subterms over a fixed vocabulary with small rank-0 domains.
class CtsRand {
 public:
  explicit CtsRand(std::uint64_t seed) : rng_(seed) {}

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  bool coin() { return pick(2) == 0; }

  Cts atom(const Type& t, int max_rank) {
    static const std::vector<std::pair<Type, std::vector<std::string>>> names = {
        {ty("bot"), {"p", "q"}},   {ty("e"), {"a", "b"}},     {ty("e -> bot"), {"f", "g"}},
        {ty("e -> e"), {"h"}},     {ty("bot -> bot"), {"c"}}, {ty("e -> e -> bot"), {"l"}}};
    for (const auto& [n, scoped] : scope_)
      if (scoped == t && pick(3) != 0) return Cts::var(n, t, 0);
    const std::vector<std::string>* found = nullptr;
    for (const auto& [nt, pool] : names)
      if (nt == t) found = &pool;
    if (!found) throw Skip{};
    const auto& pool = *found;
    std::string n = pool[static_cast<std::size_t>(pick(static_cast<int>(pool.size())))];
    int r = 0;
    // Rank-1 variables only where D1 stays enumerable.
    if (max_rank >= 1 && (t.is_bot() || t == ty("e")) && pick(8) == 0) {
      r = 1;
      n += "1";
    }
    return Cts::var(n, t, r);
  }

  Cts term(const Type& t, int max_rank, int depth) {
    int r = depth <= 0 ? 0 : pick(6);
    if (r <= 1) return atom(t, max_rank);
    if (r <= 3 && max_rank >= 1) {
      int k = 1 + pick(max_rank);
      switch (pick(3)) {
        case 0: return Cts::neg(k, term(t, k, depth - 1));
        case 1: return Cts::conj(k, term(t, k, depth - 1), term(t, k, depth - 1));
        default: return Cts::disj(k, term(t, k, depth - 1), term(t, k, depth - 1));
      }
    }
    std::vector<Type> args;
    if (t.is_bot()) args = {ty("e"), Type::bot()};
    if (t == ty("e") || t == ty("e -> bot")) args = {ty("e")};
    if (args.empty()) return atom(t, max_rank);
    Type a = args[static_cast<std::size_t>(pick(static_cast<int>(args.size())))];
    return Cts::app(term(Type::arrow(a, t), max_rank, depth - 1), term(a, max_rank, depth - 1));
  }

  Cts bot_term(int max_rank = 2, int depth = 2) { return term(Type::bot(), max_rank, depth); }

  std::vector<Cts> members(int max_count) {
    std::vector<Cts> out;
    int n = pick(max_count + 1);
    for (int i = 0; i < n; ++i) out.push_back(bot_term());
    return out;
  }

  Cts op_node(CtsOp op, int k, const Type& t, int depth) {
    switch (op) {
      case CtsOp::Neg: return Cts::neg(k, term(t, k, depth));
      case CtsOp::And: return Cts::conj(k, term(t, k, depth), term(t, k, depth));
      case CtsOp::Or: return Cts::disj(k, term(t, k, depth), term(t, k, depth));
      case CtsOp::All:
      case CtsOp::Ex: {
        auto kind = op == CtsOp::All ? Cts::Kind::BigConj : Cts::Kind::BigDisj;
        std::string x = "x";
        if (coin() || (!t.is_bot() && t != ty("e -> bot"))) {
          if (t.is_bot() || t == ty("e -> bot")) return Cts::big(kind, k, x, t, 0);
          // Family over e with a body of type t.
          scope_.emplace_back(x, ty("e"));
          Cts body = Cts::app(Cts::var("h", ty("e -> e"), 0), Cts::var(x, ty("e"), 0));
          scope_.pop_back();
          if (body.type() != t) throw Skip{};
          return Cts::big_family(kind, k, x, ty("e"), 0, body);
        }
        scope_.emplace_back(x, ty("e"));
        Cts body = t.is_bot() ? term(t, k, depth)
                              : Cts::app(Cts::var("l", ty("e -> e -> bot"), 0),
                                         Cts::var(x, ty("e"), 0));
        scope_.pop_back();
        return Cts::big_family(kind, k, x, ty("e"), 0, body);
      }
    }
    throw Skip{};
  }

 private:
  std::mt19937_64 rng_;
  std::vector<std::pair<std::string, Type>> scope_;
};

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

struct RuleInstance {
  Sequent conclusion;
  std::vector<Sequent> premises;
  Direction dir = Direction::Down;
  Position pos;
  std::optional<std::pair<Cts, Cts>> redex;
};

std::vector<Cts> plus(std::vector<Cts> v, const Cts& c) {
  v.push_back(c);
  return v;
}

RuleInstance make_intro(const CtsRuleId& rule, CtsRand& g) {
  bool left = rule.side == Side::Left;
  std::vector<Cts> gam = g.members(2), del = g.members(2);
  int k = 1 + g.pick(3);
  RuleInstance ri;
  if (rule.form == RuleForm::Ax) {
    Cts a = g.bot_term();
    ri.conclusion = Sequent::make(plus(gam, a), plus(del, a));
    return ri;
  }
  Cts p = g.op_node(rule.op, k, Type::bot(), 2);
  auto mk = [](std::vector<Cts> a, std::vector<Cts> b) {
    return Sequent::make(std::move(a), std::move(b));
  };
  ri.conclusion = left ? mk(plus(gam, p), del) : mk(gam, plus(del, p));
  switch (rule.op) {
    case CtsOp::Neg:
      ri.premises.push_back(left ? mk(gam, plus(del, p.child(0))) : mk(plus(gam, p.child(0)), del));
      break;
    case CtsOp::And:
      if (left) {
        ri.premises.push_back(mk(plus(plus(gam, p.child(0)), p.child(1)), del));
      } else {
        ri.premises.push_back(mk(gam, plus(del, p.child(0))));
        ri.premises.push_back(mk(gam, plus(del, p.child(1))));
      }
      break;
    case CtsOp::Or:
      if (left) {
        ri.premises.push_back(mk(plus(gam, p.child(0)), del));
        ri.premises.push_back(mk(plus(gam, p.child(1)), del));
      } else {
        ri.premises.push_back(mk(gam, plus(plus(del, p.child(0)), p.child(1))));
      }
      break;
    case CtsOp::All:
    case CtsOp::Ex: {
      bool eigen = (rule.op == CtsOp::All) != left;
      Cts w = eigen ? Cts::var("y", p.index_type(), 0) : g.atom(p.index_type(), 0);
      if (w.rank() > p.atom_rank()) throw Skip{};
      Cts inst = substitute_var(p.body(), p.name(), w);
      ri.premises.push_back(left ? mk(plus(gam, inst), del) : mk(gam, plus(del, inst)));
      break;
    }
  }
  return ri;
}

RuleInstance make_subst(const CtsRuleId& rule, CtsRand& g) {
  bool right = rule.form == RuleForm::SubstR;
  Type sigma = g.coin() ? ty("e") : Type::bot();
  Type tau = Type::bot();
  if (sigma == ty("e") && g.pick(3) == 0) tau = ty("e -> bot");
  Type fn = Type::arrow(sigma, tau);
  Cts u = Cts::var("p", Type::bot(), 0);
  if (right) {
    int h = g.pick(2);
    Cts r = g.term(fn, h, 1);
    h = r.rank();
    int k = h + 1 + g.pick(3 - h);
    Cts x = g.op_node(rule.op, k, sigma, 1);
    if (x.type() != sigma) throw Skip{};
    u = Cts::app(r, x);
  } else {
    int k = 1 + g.pick(3);
    Cts x = g.op_node(rule.op, k, fn, 1);
    if (x.type() != fn) throw Skip{};
    Cts a = g.term(sigma, g.pick(k + 1), 1);
    u = Cts::app(x, a);
  }
  Distribution d = distribute(u, rule);
  if (!d.result) throw Error(ErrorKind::Rank, "generator built a bad redex: " + d.violation);
  // Context C[.] around the redex.
  Cts filled_u = u, filled_d = *d.result;
  std::vector<int> path;
  if (!tau.is_bot()) {
    Cts a = g.atom(ty("e"), 0);
    filled_u = Cts::app(filled_u, a);
    filled_d = Cts::app(filled_d, a);
    path.insert(path.begin(), 0);
  }
  int wraps = g.pick(3);
  for (int i = 0; i < wraps; ++i) {
    int k = std::max(filled_u.rank(), filled_d.rank());
    k = std::max(k, 1) + g.pick(2);
    Cts other = g.bot_term(k, 1);
    switch (g.pick(3)) {
      case 0:
        filled_u = Cts::neg(k, filled_u);
        filled_d = Cts::neg(k, filled_d);
        path.insert(path.begin(), 0);
        break;
      case 1:
        filled_u = Cts::conj(k, filled_u, other);
        filled_d = Cts::conj(k, filled_d, other);
        path.insert(path.begin(), 0);
        break;
      default:
        filled_u = Cts::disj(k, other, filled_u);
        filled_d = Cts::disj(k, other, filled_d);
        path.insert(path.begin(), 1);
    }
  }
  std::vector<Cts> gam = g.members(2), del = g.members(1);
  bool left = rule.side == Side::Left;
  auto place = [&](const Cts& m) {
    std::vector<Cts> side = left ? gam : del;
    for (const auto& s : side)
      if (s == filled_u || s == filled_d) throw Skip{};
    side.push_back(m);
    return left ? Sequent::make(side, del) : Sequent::make(gam, side);
  };
  RuleInstance ri;
  ri.dir = g.coin() ? Direction::Down : Direction::Up;
  Sequent su = place(filled_u), sd = place(filled_d);
  ri.conclusion = ri.dir == Direction::Down ? su : sd;
  ri.premises.push_back(ri.dir == Direction::Down ? sd : su);
  const auto& members = left ? ri.conclusion.ante : ri.conclusion.succ;
  const Cts& target = ri.dir == Direction::Down ? filled_u : filled_d;
  for (std::size_t i = 0; i < members.size(); ++i)
    if (members[i] == target) ri.pos.member = static_cast<int>(i);
  ri.pos.path = path;
  ri.redex = std::make_pair(filled_u, filled_d);
  return ri;
}

std::vector<CtsVar> vars_of(const std::vector<Cts>& ts) {
  std::map<std::string, CtsVar> seen;
  for (const auto& t : ts)
    for (const auto& v : free_vars(t)) seen.emplace(v.name, v);
  std::vector<CtsVar> out;
  for (auto& [n, v] : seen) out.push_back(v);
  return out;
}

// First assignment under which the two subterms denote different elements.
std::optional<std::string> disagreement(const Cts& u, const Cts& d,
                                        const std::vector<ModelConfig>& family) {
  for (const auto& m : family)
    for (const auto& rho : enumerate_assignments(vars_of({u, d}), m))
      if (!ba_equal(eval_cts(u, m, rho), eval_cts(d, m, rho))) return render(rho);
  return std::nullopt;
}

}  // namespace

HarnessReport cts_harness(const std::string& rule_name, const std::vector<ModelConfig>& family,
                          int trials, std::uint64_t seed) {
  std::vector<CtsRuleId> rules;
  if (rule_name == "all") rules = all_cts_rules();
  else rules.push_back(parse_rule_id(rule_name));
  HarnessReport rep;
  rep.rule = rule_name;
  rep.seed = seed;
  rep.trials = trials;
  int attempts = 0;
  while (rep.checked < trials && attempts < trials * 50) {
    std::uint64_t ts = splitmix(seed + static_cast<std::uint64_t>(attempts));
    const CtsRuleId& rule = rules[static_cast<std::size_t>(attempts) % rules.size()];
    ++attempts;
    CtsRand g(ts);
    try {
      RuleInstance ri = rule.double_line() ? make_subst(rule, g) : make_intro(rule, g);
      int trial = rep.checked;
      std::string tag = to_string(rule) + " " + to_string(ri.dir) + " ";
      RuleCheck rc = check_rule_instance(ri.conclusion, ri.premises, rule, ri.dir, ri.pos);
      if (!rc.ok) {
        rep.failures.push_back({trial, ts, tag + "rejected generated instance: " + rc.violation});
        ++rep.checked;
        continue;
      }
      bool prem_valid = true;
      for (const auto& p : ri.premises)
        prem_valid = prem_valid && sequent_valid(p.ante, p.succ, family).valid;
      Verdict concl = sequent_valid(ri.conclusion.ante, ri.conclusion.succ, family);
      if (prem_valid && !concl.valid)
        rep.failures.push_back({trial, ts, tag + "premises valid, conclusion not: " +
                                               render(ri.conclusion) + " counterexample " +
                                               concl.counterexample->second});
      if (rule.double_line() && concl.valid && !prem_valid)
        rep.failures.push_back({trial, ts, tag + "conclusion valid, premise not: " +
                                               render(ri.premises[0])});
      if (ri.redex) {
        const auto& [u, d] = *ri.redex;
        if (auto bad = disagreement(u, d, family))
          rep.failures.push_back({trial, ts, tag + "redex and contractum differ: " + render(u) +
                                                 " vs " + render(d) + " under " + *bad});
      }
      ++rep.checked;
    } catch (const Skip&) {
      ++rep.skipped;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Cap && e.kind() != ErrorKind::RankOverflow) throw;
      ++rep.skipped;
    }
  }
  return rep;
}

}  // namespace ctt
