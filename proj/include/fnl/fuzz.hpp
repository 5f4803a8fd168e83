#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fnl/calculus.hpp"
#include "fnl/random.hpp"
#include "fnl/semantics.hpp"

namespace fnl {

/// First failing case of a run, after shrinking.
struct CaseFailure {
  std::uint64_t index = 0;  ///< case number; its seed is case_seed(run seed, index)
  std::string law;
  std::string detail;
  std::string shrunk;  ///< smallest failing expression found, if any
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::map<std::string, std::size_t> law_cases;
  std::map<std::string, std::size_t> law_failures;
  std::optional<CaseFailure> first;
  double seconds = 0;  ///< not part of the deterministic content

  bool ok() const { return failures == 0; }
  /// Everything but the wall time.
  bool same_outcome(const SuiteReport& o) const;
};

struct SuiteOptions {
  std::size_t cases = 1000;
  std::uint64_t seed = 1;
  bool parallel = true;  ///< shard cases over OpenMP threads
};

/// subst, derive, soundness, closure, eval-invariance.
const std::vector<std::string>& suite_names();
bool is_suite(std::string_view name);

/// Throws std::invalid_argument for unknown suites.
SuiteReport run_suite(std::string_view name, const SuiteOptions& opt);

/// Greedy subtree deletion: replaces subexpressions by a same-sort child or
/// leaf while `still_fails` keeps holding.
Expr shrink_expr(const Signature& sig, Expr e, const std::function<bool(const Expr&)>& still_fails);

/// A checked-by-construction proof over `t` mixing tautology templates,
/// quantifier and equality axioms, axiom and premise references, modus ponens,
/// generalization and derived equality steps.
Proof random_proof(const Theory& t, const std::vector<Expr>& premises, ExprGen& gen, std::size_t steps);

/// Up to `count` formulas true in `m`, tried `tries` times.
std::vector<Expr> random_true_formulas(const Structure& m, ExprGen& gen, std::size_t count, std::size_t tries = 20);

}  // namespace fnl
