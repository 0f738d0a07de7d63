#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ctt/cts.hpp"
#include "ctt/domain.hpp"
#include "ctt/slm.hpp"

namespace ctt {

/// Value of a lambda-mu term. Lambdas become rank-0 tables, mu-abstractions
/// the type-reduction image of the corresponding table.
Elem eval_slm(const Term& term, const ModelConfig& m, const Assignment& rho);

/// Value of a CTS subterm; operators map to Neg/Meet/Join at the same rank.
Elem eval_cts(const Cts& sub, const ModelConfig& m, const Assignment& rho);

enum class ContextClass { T1, T2, T3, T4 };
const char* to_string(ContextClass c);

/// A bot-typed term with one distinguished free variable `hole` of type bot.
struct HoleContext {
  Term term;
  std::string hole;
};

/// Truth function of the context: hole=0/1 give (0,1)->T1, (1,0)->T2,
/// (0,0)->T3, (1,1)->T4.
ContextClass classify_context(const HoleContext& c, const ModelConfig& m,
                              const Assignment& rho);

bool check_equation(const Term& lhs, const Term& rhs, const ModelConfig& m,
                    const Assignment& rho);

/// Whether meet(gamma) <= join(delta) under one model and assignment.
bool valid_at(const std::vector<Cts>& gamma, const std::vector<Cts>& delta,
              const ModelConfig& m, const Assignment& rho);

struct Verdict {
  bool valid = true;
  std::size_t assignments = 0;
  /// Model index and rendered assignment of the first counterexample.
  std::optional<std::pair<std::size_t, std::string>> counterexample;
};

inline constexpr std::size_t kMaxAssignments = 200000;

/// Checks the sequent under every enumerated assignment of every model.
/// Variables of rank 0 range over D0, higher ranks over D1.
Verdict sequent_valid(const std::vector<Cts>& gamma, const std::vector<Cts>& delta,
                      const std::vector<ModelConfig>& models,
                      std::size_t cap = kMaxAssignments);

/// Every assignment of the given variables, or a Cap error past `cap`.
std::vector<Assignment> enumerate_assignments(const std::vector<CtsVar>& vars,
                                              const ModelConfig& m,
                                              std::size_t cap = kMaxAssignments);

std::string render(const Assignment& rho);

struct HarnessFailure {
  int trial = 0;
  std::uint64_t seed = 0;
  std::string detail;
};

struct HarnessReport {
  std::string rule;
  std::uint64_t seed = 0;
  int trials = 0;
  int checked = 0;
  int skipped = 0;
  std::vector<HarnessFailure> failures;

  bool ok() const { return failures.empty(); }
  /// One line per failure, then a summary line.
  std::string records() const;
};

/// Names accepted by slm_harness: rule1..rule12 (aliases beta, eta, beta-mu,
/// eta-mu, mu), eta-mu-unguarded and mu-corrupt (negative controls).
std::vector<std::string> slm_harness_rules();

/// Random instances of one equality rule, checked with check_equation under
/// rank-0 assignments. Rule 12 and mu-corrupt also sweep every context
/// class with every R and Q table at sizes 2/2.
HarnessReport slm_harness(const std::string& rule, const ModelConfig& m, int trials,
                          std::uint64_t seed);

}  // namespace ctt
