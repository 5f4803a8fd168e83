#pragma once

#include "fnl/random.hpp"
#include "fnl/semantics.hpp"

namespace fnl {

/// Full structure with carriers of 1..max_carrier elements (names e0, e1, ...).
/// Operations with small domains get explicit tables, the rest a hash seed.
Structure random_full_structure(const Signature& sig, Rng& rng, std::size_t max_carrier = 3);

/// The pure Boolean structure over the signature with sort prop only.
Structure boolean_structure();

/// Sort alpha with carriers {0,1}, constants a -> 0 and b -> 1, unary f.
Structure toy_structure();

/// A non-full structure closed under the structure laws together with a full
/// completion that agrees with it on the selected argument sets.
///
/// Sort alpha with three elements, f : (alpha)alpha swapping two of them,
/// constants naming all elements, sum : ((alpha)alpha)alpha and a binding
/// predicate Q : ((alpha)alpha)prop. M_alpha^<alpha^n> (n = 1..3) holds the
/// constants, the projections and f after a projection.
struct ClosedSample {
  Structure nonfull;
  Structure completion;
};
ClosedSample closed_nonfull_sample(Rng& rng);

/// A structure whose selected sets break exactly one structure law at the
/// returned cap.
struct Mutation {
  Structure structure;
  ClosureOptions options;
  ClosureLaw law;
};
Mutation mutated_structure(ClosureLaw law, Rng& rng);

}  // namespace fnl
