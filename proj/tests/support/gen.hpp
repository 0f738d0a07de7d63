// Random well-formed trees for property tests.
#pragma once

#include <cctype>
#include <random>
#include <string>
#include <vector>

#include "ctt/cts.hpp"
#include "ctt/slm.hpp"
#include "ctt/syntax.hpp"

namespace ctt::testing {

inline Type ty(const std::string& s) { return parse_type(s); }

/// CTS subterms over a fixed vocabulary: p,q:bot, a,b:e, f:~e, g:(e->e).
/// Variable names encode their rank so declarations never clash.
class CtsGen {
 public:
  explicit CtsGen(unsigned seed) : rng_(seed) {}

  Cts term(int depth) { return gen(Type::bot(), depth); }

  Cts gen(const Type& t, int depth) {
    int choice = depth <= 0 ? 0 : pick(6);
    if (choice == 0) return leaf(t);
    if (choice == 1) {
      if (t.is_bot()) return Cts::app(gen(ty("~e"), depth - 1), gen(ty("e"), depth - 1));
      if (t == ty("e")) return Cts::app(gen(ty("e -> e"), depth - 1), gen(ty("e"), depth - 1));
      return leaf(t);
    }
    if (choice == 5 && (t.is_bot() || t == ty("e"))) return big(t, depth);
    Cts l = gen(t, depth - 1);
    if (choice == 2) return Cts::neg(std::max(1, l.rank() + pick(2)), l);
    Cts r = gen(t, depth - 1);
    int k = std::max({1, l.rank(), r.rank()}) + pick(2);
    return choice == 3 ? Cts::conj(k, l, r) : Cts::disj(k, l, r);
  }

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

 private:
  Cts leaf(const Type& t) {
    int r = pick(2);
    std::string base;
    if (t.is_bot()) base = pick(2) ? "p" : "q";
    else if (t == ty("e")) base = pick(2) ? "a" : "b";
    else if (t == ty("~e")) base = "f";
    else base = "g";
    return Cts::var(base + std::to_string(r), t, r);
  }

  Cts big(const Type& t, int depth) {
    auto kind = pick(2) ? Cts::Kind::BigConj : Cts::Kind::BigDisj;
    int k = 1 + pick(2);
    if (t == ty("e")) return Cts::big(kind, k, "z", t, 0);
    // Family over e with a body of type bot mentioning the index.
    Cts body = Cts::app(gen(ty("~e"), depth - 1), Cts::var("z", ty("e"), 0));
    return Cts::big_family(kind, std::max(k, body.rank()), "z", ty("e"), 0, body);
  }

  std::mt19937 rng_;
};

/// Well-typed lambda-mu terms. Free variables are named after their type.
class SlmGen {
 public:
  explicit SlmGen(unsigned seed) : rng_(seed) {}

  Term gen(const Type& t, int depth, std::vector<std::pair<std::string, Type>> scope = {}) {
    std::vector<Term> vars;
    for (auto it = scope.rbegin(); it != scope.rend(); ++it)
      if (it->second == t) vars.push_back(Term::var(it->first, it->second));
    int choice = depth <= 0 ? 0 : pick(5);
    if (choice == 0 || (choice == 4 && !vars.empty() && pick(2))) {
      if (!vars.empty() && pick(3)) return vars[pick(static_cast<int>(vars.size()))];
      return free_var(t);
    }
    if (choice == 1 && t.is_arrow()) {
      std::string x = fresh(scope);
      scope.emplace_back(x, t.dom());
      return Term::lam(x, t.dom(), gen(t.cod(), depth - 1, scope));
    }
    if (choice == 2 && !t.is_bot() && !t.is_arrow()) {
      std::string x = fresh(scope);
      Type xt = Type::neg(t);
      scope.emplace_back(x, xt);
      return Term::mu(x, xt, gen(Type::bot(), depth - 1, scope));
    }
    // Application with an argument type from a small menu.
    static const char* menu[] = {"e", "bot", "~e"};
    Type at = ty(menu[pick(3)]);
    Term f = gen(Type::arrow(at, t), depth - 1, scope);
    Term a = gen(at, depth - 1, scope);
    return Term::app(f, a);
  }

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

 private:
  Term free_var(const Type& t) {
    std::string name = "v";
    for (char c : to_string(t))
      name += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
    return Term::var(name + std::to_string(pick(2)), t);
  }

  static std::string fresh(const std::vector<std::pair<std::string, Type>>& scope) {
    return "x" + std::to_string(scope.size());
  }

  std::mt19937 rng_;
};

}  // namespace ctt::testing
