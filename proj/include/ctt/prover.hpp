#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ctt/cts.hpp"
#include "ctt/domain.hpp"
#include "ctt/semantics.hpp"
#include "ctt/syntax.hpp"

namespace ctt {

/// Gamma => Delta. Members are terms (type bot); both sides are sets, kept
/// in first-occurrence order so positions can index them.
struct Sequent {
  std::vector<Cts> ante;
  std::vector<Cts> succ;

  /// Drops duplicates and rejects members that are not of type bot.
  static Sequent make(std::vector<Cts> ante, std::vector<Cts> succ);
  /// Set equality of both sides.
  bool same_as(const Sequent& o) const;
};

/// `A, B => C` with members in CTS syntax; `ctx` collects declarations.
Sequent parse_sequent(std::string_view text, CtsContext& ctx);
Sequent parse_sequent(std::string_view text);
std::string render(const Sequent& s);

enum class CtsOp { Neg, And, Or, All, Ex };
enum class RuleForm { Ax, Intro, SubstR, SubstL };
enum class Side { Left, Right };

/// Ax, the introduction rules (negL, andR, ...) and the substitution rules
/// (negLr, andRl, ...: side of the sequent, then r = operator in the
/// argument, l = operator in the functor).
struct CtsRuleId {
  RuleForm form = RuleForm::Ax;
  CtsOp op = CtsOp::Neg;
  Side side = Side::Left;

  bool double_line() const { return form == RuleForm::SubstR || form == RuleForm::SubstL; }
  friend bool operator==(const CtsRuleId& a, const CtsRuleId& b) {
    return a.form == b.form && (a.form == RuleForm::Ax || (a.op == b.op && a.side == b.side));
  }
};

std::string to_string(const CtsRuleId& r);
CtsRuleId parse_rule_id(const std::string& s);
std::vector<CtsRuleId> all_cts_rules();

/// Substitution rules are double-line: down reads premise to conclusion
/// (the conclusion holds the undistributed redex), up the reverse.
enum class Direction { Down, Up };
const char* to_string(Direction d);

/// Member index on the rule's side of the conclusion plus a path into it.
/// member < 0 means "find it".
struct Position {
  int member = -1;
  std::vector<int> path;
};
std::string to_string(const Position& p);
Position parse_position(const std::string& s);

struct RuleCheck {
  bool ok = true;
  std::string violation;
};

/// Validates one rule application: shape, rank side conditions, and for
/// substitution rules the exact redex/contractum pair in a shared context.
RuleCheck check_rule_instance(const Sequent& conclusion, const std::vector<Sequent>& premises,
                              const CtsRuleId& rule, Direction dir = Direction::Down,
                              const Position& pos = {});

/// The distributed form of an undistributed redex `u`, or a violation naming
/// the failed side condition.
struct Distribution {
  std::optional<Cts> result;
  std::string violation;
};
Distribution distribute(const Cts& u, const CtsRuleId& rule);

struct Derivation {
  std::string id;
  CtsRuleId rule;
  Direction dir = Direction::Down;
  Position pos;
  Sequent conclusion;
  std::vector<Derivation> premises;
};

struct DerivationCheck {
  bool ok = true;
  /// Id of the first failing node and the premise indices leading to it.
  std::string node;
  std::vector<int> path;
  std::string violation;
};

DerivationCheck check_derivation(const Derivation& d);

/// Line format, premises before their conclusions, root last:
///   decl x:TY@k
///   node <id> rule=<R> dir=<down|up> pos=<member.path|-> concl=<sequent> premises=<ids|->
Derivation parse_derivation(std::string_view text);
std::string render(const Derivation& d);

int height(const Derivation& d);
int size(const Derivation& d);

/// Bounded backward search: substitution rules until every member is
/// canonical, then the introduction rules, then Ax. Results pass
/// check_derivation.
std::optional<Derivation> prove(const Sequent& goal, int depth = 30);

/// Model shapes used when checking rule soundness semantically.
std::vector<ModelConfig> standard_family();

/// Random accepted instances of CTS rules ("all" cycles through every rule),
/// checking that valid premises give a valid conclusion (and back for
/// double-line rules) on `family`, and that substitution redex and
/// contractum agree under every assignment.
HarnessReport cts_harness(const std::string& rule, const std::vector<ModelConfig>& family,
                          int trials, std::uint64_t seed);

}  // namespace ctt
