#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "fnl/expr.hpp"

namespace fnl {

struct Theory {
  Signature signature;
  std::vector<Expr> axioms;
};

/// Throws SortMismatch unless every axiom is a formula over the signature.
void validate_theory(const Theory& t);

namespace just {

struct Taut {
  bool operator==(const Taut&) const = default;
};
struct ForallElim {
  Var x;
  Expr a;
  bool operator==(const ForallElim&) const = default;
};
struct ExistsIntro {
  Var x;
  Expr a;
  bool operator==(const ExistsIntro&) const = default;
};
struct ForallImpDist {
  Var x;
  bool operator==(const ForallImpDist&) const = default;
};
struct ExistsImpDist {
  Var x;
  bool operator==(const ExistsImpDist&) const = default;
};
struct EqRefl {
  bool operator==(const EqRefl&) const = default;
};
/// ∀z⃗(b1[x⃗←z⃗] = b2[y⃗←z⃗]) → op(Δ,(x⃗):b1,Γ) = op(Δ,(y⃗):b2,Γ), slot 0-based.
struct EqCongr {
  std::string op;
  std::size_t slot = 0;
  std::vector<Var> xs, ys, zs;
  Expr b1, b2;
  std::vector<Arg> delta, gamma;
  bool operator==(const EqCongr&) const = default;
};
struct Axiom {
  std::size_t index;
  bool operator==(const Axiom&) const = default;
};
struct Premise {
  std::size_t index;
  bool operator==(const Premise&) const = default;
};
struct MP {
  std::size_t from, impl;
  bool operator==(const MP&) const = default;
};
struct Gen {
  std::size_t from;
  Var x;
  bool operator==(const Gen&) const = default;
};

}  // namespace just

using Justification = std::variant<just::Taut, just::ForallElim, just::ExistsIntro, just::ForallImpDist,
                                   just::ExistsImpDist, just::EqRefl, just::EqCongr, just::Axiom,
                                   just::Premise, just::MP, just::Gen>;

std::string justification_name(const Justification& j);

struct ProofLine {
  Expr formula;
  Justification why;
};

/// Line indices inside justifications are 0-based.
struct Proof {
  Theory theory;
  std::vector<Expr> premises;
  std::vector<ProofLine> lines;

  const Expr& conclusion() const { return lines.back().formula; }
};

/// Truth table over the maximal non-connective subformulas. Throws
/// TooManyAtoms above 20 atoms.
bool is_tautology(const Expr& phi);

inline constexpr std::size_t kMaxTautAtoms = 20;

/// Distinct atoms of φ in first-occurrence order.
std::vector<Expr> taut_atoms(const Expr& phi);

/// Axiom-scheme instances (Taut, quantifier axioms, I1, I2). Rule and
/// reference justifications are not axiom instances and yield false.
bool check_axiom_instance(const Signature& sig, const Justification& j, const Expr& phi);

/// Formula of an I2 instance built from its data. Throws SideConditionViolated
/// when the data is not a legal instance.
Expr eq_congr_formula(const Signature& sig, const just::EqCongr& data);

struct CheckResult {
  bool ok = true;
  std::size_t line = 0;  ///< 0-based failing line
  std::string reason;

  explicit operator bool() const { return ok; }
};

CheckResult check_proof(const Proof& p);

/// Indices of the nonlogical axioms cited by NonlogicalAxiom lines.
std::set<std::size_t> used_axioms(const Proof& p);

/// The same proof over a theory holding exactly the used axioms, with the
/// axiom references renumbered.
Proof restrict_to_used_axioms(const Proof& p);

enum class Verdict { Provable, Refutable, Undecided };
using Oracle = std::function<Verdict(const Expr&)>;

/// not oracle(⊥). Throws OracleUndecided.
bool is_consistent_up_to(const Theory& t, const Oracle& oracle);

/// Appends lines and tracks formulas; the justification is not checked here.
class ProofBuilder {
 public:
  explicit ProofBuilder(Theory t, std::vector<Expr> premises = {});

  std::size_t add(Expr f, Justification why);
  std::size_t taut(Expr f) { return add(std::move(f), just::Taut{}); }
  /// From `from` (A) and `impl` (A → B) derive B.
  std::size_t mp(std::size_t from, std::size_t impl);
  std::size_t gen(std::size_t from, const Var& x);
  std::size_t premise(std::size_t k);
  std::size_t axiom(std::size_t k);

  /// From H → A and A → B derive H → B.
  std::size_t chain(std::size_t h_to_a, std::size_t a_to_b);
  /// From H → X derive H → ∀x X (x ∉ fv(H)).
  std::size_t gen_under(std::size_t h_to_x, const Var& x);
  /// From X derive H → X.
  std::size_t weaken(std::size_t x, const Expr& h);

  const Expr& formula(std::size_t i) const { return proof_.lines.at(i).formula; }
  std::size_t size() const { return proof_.lines.size(); }
  const Theory& theory() const { return proof_.theory; }

  Proof finish() && { return std::move(proof_); }
  const Proof& proof() const { return proof_; }

 private:
  Proof proof_;
};

/// The two sides of φ = imp(A, B); throws SourceProofInvalid otherwise.
std::pair<Expr, Expr> split_imp(const Expr& phi);

/// The expression a with target = ψ[x←a], if one exists (used to infer
/// instantiation data from file text). x itself when x is not free in ψ.
std::optional<Expr> match_instance(const Expr& psi, const Var& x, const Expr& target);

/// Reconstructs I2 data from an instance formula and the slot (0-based).
std::optional<just::EqCongr> infer_eq_congr(const Expr& phi, std::size_t slot);

}  // namespace fnl
