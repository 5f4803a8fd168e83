#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "fnl/calculus.hpp"
#include "fnl/expr.hpp"

namespace fnl {

/// Carrier elements are indices into the carrier's name list. M_prop is
/// {0, 1} with 0 false and 1 true.
using Elem = std::uint32_t;
using Rows = std::vector<Elem>;

struct RowsHash {
  std::size_t operator()(const Rows& r) const;
};
using TableSet = std::unordered_set<Rows, RowsHash>;

/// A total map M_σ⃗ → M_γ. Rows run over the tuples of M_σ⃗ in lexicographic
/// order with the first coordinate most significant, so fixing a prefix
/// selects a contiguous block. For σ⃗ = ⟨⟩ there is one row, the value.
struct FnTable {
  std::vector<SortId> domain;
  SortId codomain;
  Rows rows;

  Elem value() const { return rows.at(0); }
  bool operator==(const FnTable&) const = default;
};

/// Interpretation of a non-distinguished operation. Arguments are flattened:
/// slot i contributes |M_β⃗_i| elements (one for an ordinary slot). Lookup tries
/// the explicit table first, then the hash fallback when seeded.
struct OpInterp {
  std::unordered_map<Rows, Elem, RowsHash> table;
  std::optional<std::uint64_t> hash_seed;

  static OpInterp constant(Elem v);
  static OpInterp hashed(std::uint64_t seed);
};

struct SelKey {
  SortId codomain;
  std::vector<SortId> domain;
  auto operator<=>(const SelKey&) const = default;
};

class Structure {
 public:
  Signature signature;
  std::map<SortId, std::vector<std::string>> carriers;
  /// Declared selected sets M_γ^σ⃗ (σ⃗ nonempty). Undeclared pairs are full.
  std::map<SelKey, TableSet> selected;
  std::map<std::string, OpInterp, std::less<>> interp;

  std::size_t size(const SortId& s) const;
  /// |M_σ⃗|
  std::size_t tuple_count(const std::vector<SortId>& sorts) const;
  bool is_full() const { return selected.empty(); }
  bool in_selected(const SortId& codomain, const std::vector<SortId>& domain, const Rows& rows) const;

  std::optional<Elem> element(const SortId& s, std::string_view name) const;
  const std::string& element_name(const SortId& s, Elem e) const;

  /// M(op) on flattened arguments. Throws MissingInterpretation.
  Elem apply(std::string_view op, const Rows& args) const;
};

/// A structure whose selected sets are the full function spaces. `interp`
/// must cover every non-distinguished operation. Throws MissingInterpretation,
/// InterpretationOutOfCarrier, InvalidStructure.
Structure make_full_structure(const Signature& sig, std::map<SortId, std::vector<std::string>> carriers,
                              std::map<std::string, OpInterp, std::less<>> interp);

/// Checks the fixed components: carriers, prop, interpretation ranges and
/// totality of explicit tables over their (selected) domains.
void validate_structure(const Structure& s);

enum class ClosureLaw { Constant, Projection, Fixing, Composition };
std::string_view to_string(ClosureLaw law);

struct ClosureViolation {
  ClosureLaw law;
  std::string detail;
};

struct ClosureReport {
  std::vector<ClosureViolation> violations;
  std::vector<std::string> notes;  ///< undeclared pairs taken as full, skipped checks
  bool ok() const { return violations.empty(); }
  bool has(ClosureLaw law) const;
};

struct ClosureOptions {
  std::size_t cap = 2;                     ///< max |σ⃗| (and |σ⃗| + |ρ⃗| for fixing)
  std::size_t budget = 4'000'000;          ///< max enumerated cases per check
  bool stop_at_first = false;
};

ClosureReport check_closure(const Structure& s, const ClosureOptions& opt = {});

enum class EvalMode { Serial, Parallel };

/// Table of e over the perspective p, computed compositionally. Throws
/// NotInPerspective, SelectedSetMiss, MissingInterpretation.
FnTable evaluate(const Structure& s, const Expr& e, const Perspective& p, EvalMode mode = EvalMode::Serial);

/// Independent pointwise evaluator (assignment environments). Test oracle.
FnTable evaluate_reference(const Structure& s, const Expr& e, const Perspective& p);

/// Memoizing evaluator for sweeps that share subexpressions.
class Evaluator {
 public:
  explicit Evaluator(const Structure& s, EvalMode mode = EvalMode::Serial) : s_(s), mode_(mode) {}
  const FnTable& eval(const Expr& e, const Perspective& p);
  void clear() { cache_.clear(); }
  std::size_t cached() const { return cache_.size(); }

 private:
  struct Key {
    Expr e;
    std::vector<Var> vars;
    bool operator==(const Key& o) const { return e.node() == o.e.node() && vars == o.vars; }
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const;
  };
  const Structure& s_;
  EvalMode mode_;
  std::unordered_map<Key, FnTable, KeyHash> cache_;
};

/// One compositional step: the table of `e` over p from the tables of its
/// argument bodies over p ⧺ v⃗_i.
FnTable compose_node(const Structure& s, const Expr& e, const Perspective& p, const std::vector<const FnTable*>& args,
                     EvalMode mode = EvalMode::Serial);

/// Every row of φ over the covering perspective fv(φ) (sorted) is 1.
bool satisfies(const Structure& s, const Expr& phi);
bool satisfies_theory(const Structure& s, const Theory& t);

/// Drops interpretations of symbols outside `to`. Throws NotAnExtension.
Structure restrict_structure(const Structure& s, const Signature& to);

/// The covering perspective used by satisfies: fv(e) in Var order.
Perspective covering_perspective(const Expr& e);

/// All tables M_σ⃗ → M_γ (|M_γ|^|M_σ⃗| of them); throws InvalidStructure above `limit`.
std::vector<Rows> all_tables(const Structure& s, const SortId& codomain, const std::vector<SortId>& domain,
                             std::size_t limit = 1'000'000);

/// Members of M_γ^σ⃗: the declared set, or all tables when undeclared.
std::vector<Rows> selected_members(const Structure& s, const SortId& codomain, const std::vector<SortId>& domain,
                                   std::size_t limit = 1'000'000);

/// Tuple index → coordinates in M_σ⃗.
std::vector<Elem> decode_tuple(const Structure& s, const std::vector<SortId>& sorts, std::size_t index);

}  // namespace fnl
