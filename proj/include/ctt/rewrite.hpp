#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ctt/slm.hpp"

namespace ctt {

/// Directed instances of the beta-eta-mu equality rules.
enum class RuleTag { Beta, Eta, BetaMu, EtaMu, Mu };
const char* to_string(RuleTag r);

enum class Strategy { LeftmostOutermost, LeftmostInnermost };
Strategy parse_strategy(const std::string& s);

/// Occurrence path: 0 = function / binder body, 1 = argument.
using Path = std::vector<int>;
std::string to_string(const Path& p);

/// Picks names not in `avoid` by appending primes to a base name.
class FreshNames {
 public:
  explicit FreshNames(std::set<std::string> avoid) : avoid_(std::move(avoid)) {}
  std::string fresh(const std::string& base);
  void reserve(const std::string& name) { avoid_.insert(name); }

 private:
  std::set<std::string> avoid_;
};

/// Capture-avoiding `p[x := q]`; `q` must have x's type.
Term substitute(const Term& p, const std::string& x, const Term& q);

/// Replaces every free `(x R)` in `p` by `(y (R q))`, innermost occurrences
/// included. Throws NonFunctorOccurrence if `x` occurs free elsewhere.
Term structural_subst(const Term& p, const std::string& x, const Term& q,
                      const std::string& y);

struct Step {
  Term result;
  Path position;
  RuleTag rule;
  Term before;
  Term after;
};

/// Contracts one redex, or returns nothing for a normal form. When several
/// rules match at the same node the order is Beta, Mu, BetaMu, Eta, EtaMu.
std::optional<Step> step(const Term& term, Strategy strategy);

/// Contracts the redex at `position` with `rule`, if it is one.
std::optional<Term> contract_at(const Term& term, const Path& position,
                                RuleTag rule);

struct RewriteTrace {
  std::vector<Step> steps;
};

enum class NormalizeStatus { NormalForm, FuelExhausted };

struct Normalized {
  Term term;
  RewriteTrace trace;
  NormalizeStatus status;
};

inline constexpr int kDefaultFuel = 10000;

Normalized normalize(const Term& term, Strategy strategy = Strategy::LeftmostOutermost,
                     int fuel = kDefaultFuel);

/// Replays a trace from `start`; returns the final term.
Term replay(const Term& start, const RewriteTrace& trace);

/// Equality up to renaming of bound variables.
bool alpha_equivalent(const Term& a, const Term& b);

enum class Decision { EqualByNormalForm, Unknown };
const char* to_string(Decision d);

Decision decide_equal(const Term& a, const Term& b, int fuel = kDefaultFuel);

}  // namespace ctt
