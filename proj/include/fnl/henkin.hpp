#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <tuple>
#include <vector>

#include "fnl/calculus.hpp"
#include "fnl/semantics.hpp"

namespace fnl {

/// Expressions of a sort up to a depth, with free variables drawn from a scope.
/// Binders are chosen canonically (the first enumerated variable of the sort
/// not yet in scope), so the enumeration is up to renaming of bound variables.
/// Each list is ordered by size, then canonical print.
class Enumerator {
 public:
  explicit Enumerator(const Signature& sig, std::size_t limit = 5'000'000) : sig_(sig), limit_(limit) {}

  /// Throws EnumerationTooLarge past `limit` expressions in one list.
  const std::vector<Expr>& get(const SortId& sort, std::size_t depth, const std::vector<Var>& scope = {});
  const Signature& signature() const { return sig_; }

 private:
  using Key = std::tuple<SortId, std::size_t, std::vector<Var>>;
  Signature sig_;
  std::size_t limit_;
  std::map<Key, std::vector<Expr>> memo_;
};

/// Th(M) as a decision procedure: a closed formula is provable iff M makes it
/// true, refutable otherwise. Open formulas are undecided.
Oracle theory_oracle(const Structure& m);

/// Every carrier element is the value of some closed expression of depth one
/// (a constant). Throws ElementNotNamed naming the first element without one.
void require_named(const Structure& m);

/// Norm computation over a provability oracle. The norm of a formula is
/// true or false; of any other closed expression, the first expression in the
/// enumeration (depth ≤ depth_bound) that the oracle proves equal to it.
class TermModelContext {
 public:
  TermModelContext(Signature sig, Oracle oracle, std::size_t depth_bound = 4);

  const Signature& signature() const { return sig_; }
  std::size_t depth_bound() const { return depth_bound_; }
  Verdict decide(const Expr& phi) const;

  /// Throws NoRepresentativeInBound, OracleUndecided.
  Expr norm(const Expr& e);

  /// Closed expressions of `sort` within the bound, in enumeration order.
  const std::vector<Expr>& closed(const SortId& sort);
  Enumerator& enumerator() { return enum_; }

  std::size_t oracle_calls() const { return calls_; }
  /// pgp_decompose checks performed on witness terms by build_term_structure.
  std::size_t pgp_checked = 0;

 private:
  Signature sig_;
  Oracle oracle_;
  std::size_t depth_bound_;
  Enumerator enum_;
  std::mutex mu_;
  std::unordered_map<Expr, Expr, ExprHash> cache_;
  mutable std::size_t calls_ = 0;
};

/// The term structure: carriers are the norms (named by their print; prop is
/// {0,1} for false/true), selected sets of non-prop sorts up to length `cap`
/// are the substitution maps of enumerated expressions, and operations act by
/// substitution then norm. Throws OracleInconsistent, NoRepresentativeInBound.
Structure build_term_structure(TermModelContext& ctx, std::size_t cap = 2);

/// Carrier element of a norm in a term structure.
Elem term_element(const Structure& cm, const Expr& norm);
/// The norm named by a carrier element.
Expr term_of(const Structure& cm, const SortId& sort, Elem e);

struct Agreement {
  bool agree = true;
  std::size_t cases = 0;
  std::string detail;  ///< first disagreement
};

/// Compares the table of e over x⃗ in the term structure with norm(e[x⃗←s⃗]).
Agreement check_cm_expr(TermModelContext& ctx, const Structure& cm, const Expr& e, const std::vector<Var>& xs);

/// Compares oracle(φ) = provable with cm ⊨ φ. Throws OracleUndecided.
Agreement check_ded_sat(TermModelContext& ctx, const Structure& cm, const Expr& phi);

struct SpecialConstant {
  Signature signature;  ///< input signature plus the constant
  std::string name;
  Expr axiom;           ///< ∃x φ → φ[x←c]
};

/// Throws NotSingleFree when φ has a free variable other than x.
SpecialConstant special_constant(const Signature& sig, const Expr& phi, const Var& x);

/// Name of the special constant for (φ, x): `c_` and a hash of the canonical
/// print of φ and of x.
std::string special_constant_name(const Expr& phi, const Var& x);

/// `levels` rounds of adding special constants for every formula of depth ≤
/// `depth` whose only possible free variable is v0 of a variable sort.
Theory henkin_extend(const Theory& t, std::size_t levels, std::size_t depth = 2);

/// Expands m to the signature of a Henkin-extended theory: each special
/// constant denotes the first element satisfying its formula (the first
/// element when none does). The expansion satisfies every special axiom.
Structure expand_henkin_model(const Structure& m, const Theory& extended);

/// Whether T ∪ {φ} is consistent; nullopt when undecided.
using ConsistencyOracle = std::function<std::optional<bool>(const Theory&, const Expr&)>;
ConsistencyOracle consistency_from(const Oracle& oracle);

/// Adds each candidate, or its negation when the candidate would make the
/// theory inconsistent. Throws OracleUndecided.
Theory saturate_bounded(const Theory& t, const std::vector<Expr>& candidates, const ConsistencyOracle& oracle);

/// Proof of φ[z←c] → ∀z φ from the special axiom for (¬φ, z), which must be
/// one of the theory's axioms.
Proof derive_henkin_instance(const Theory& t, const Expr& phi, const Var& z);

}  // namespace fnl

namespace fnl {

/// Counts and first disagreement of one family of term-model checks.
struct CheckTally {
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string first;

  void add(bool ok, const std::string& detail);
  bool ok() const { return failures == 0; }
};

struct TermModelOptions {
  std::size_t depth = 4;       ///< enumeration bound for closed expressions
  std::size_t prop_depth = 3;  ///< bound for formulas, capped by depth
  std::size_t open_vars = 2;   ///< open checks use v0..v{k-1} of each variable sort
  std::size_t cap = 2;
};

/// Th(m) oracle, term structure, and the checks around it: norm properties,
/// idempotence, table-versus-norm agreement on open and closed expressions, provable iff satisfied on
/// closed formulas, and restriction back to m's signature agreeing with m on
/// every enumerated closed formula. Depth 0 is vacuously fine.
struct TermModelReport {
  std::map<std::string, std::size_t> carrier_sizes;
  CheckTally norm_props, idempotence, cm_expr, ded_sat, restriction;
  std::size_t oracle_calls = 0;
  std::size_t pgp_checked = 0;
  std::optional<Structure> term_structure;

  bool ok() const {
    return norm_props.ok() && idempotence.ok() && cm_expr.ok() && ded_sat.ok() && restriction.ok();
  }
};

/// Throws ElementNotNamed, NoRepresentativeInBound, OracleInconsistent.
TermModelReport run_term_model(const Structure& m, const TermModelOptions& opt = {});

}  // namespace fnl
