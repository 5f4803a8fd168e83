#pragma once

#include "fnl/calculus.hpp"

namespace fnl {

/// Proof of a=b → b=a, with `=` the calculus equality of the common sort.
Proof derive_symmetry(const Theory& t, const Expr& a, const Expr& b);

/// Proof of a=b → (b=c → a=c).
Proof derive_transitivity(const Theory& t, const Expr& a, const Expr& b, const Expr& c);

/// Proof of ∀y⃗(r=s) → e[z←r] = e[z←s]. Throws SideConditionViolated unless
/// gv(e) ∩ fv(r=s) ⊆ y⃗.
Proof derive_equality_theorem(const Theory& t, const Expr& e, const Var& z, const Expr& r, const Expr& s,
                              const std::vector<Var>& ys);

/// Proof from the premise r=s of e[z←r] = e[z←s].
Proof derive_equality_rule(const Theory& t, const Expr& e, const Var& z, const Expr& r, const Expr& s);

/// Drops the last premise φ (closed) and proves φ → ψ for the conclusion ψ.
/// Throws PremiseNotClosed or SourceProofInvalid.
Proof deduction_transform(const Proof& p);

// Building blocks appending to an existing proof; each returns the index of
// the line holding the stated formula.
std::size_t append_symmetry(ProofBuilder& b, const Expr& x, const Expr& y);
std::size_t append_transitivity(ProofBuilder& b, const Expr& x, const Expr& y, const Expr& z);
std::size_t append_equality_theorem(ProofBuilder& b, const Expr& e, const Var& z, const Expr& r, const Expr& s,
                                    const std::vector<Var>& ys);

}  // namespace fnl
