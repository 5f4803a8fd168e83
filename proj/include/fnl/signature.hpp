#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace fnl {

/// Name of a sort. The distinguished sort of formulas is `prop` (alias `π`).
struct SortId {
  std::string name;

  SortId() = default;
  explicit SortId(std::string n) : name(std::move(n)) {}

  auto operator<=>(const SortId&) const = default;
};

inline SortId prop_sort() { return SortId{"prop"}; }

/// One argument position of an operation: the argument sort and the sorts of
/// the variables the operation binds in front of it (empty for an ordinary slot).
struct ArgSlot {
  SortId sort;
  std::vector<SortId> binders;

  bool operator==(const ArgSlot&) const = default;
};

/// The circumscription (ustype) of a symbol: result sort plus argument slots.
struct OpSignature {
  SortId result;
  std::vector<ArgSlot> args;

  std::size_t arity() const { return args.size(); }
  bool operator==(const OpSignature&) const = default;
};

struct Var {
  std::string name;
  SortId sort;

  auto operator<=>(const Var&) const = default;
};

// Names of the distinguished logical symbols.
inline constexpr std::string_view kTrue = "true";
inline constexpr std::string_view kFalse = "false";
inline constexpr std::string_view kNot = "not";
inline constexpr std::string_view kImp = "imp";
inline constexpr std::string_view kAnd = "and";
inline constexpr std::string_view kOr = "or";
inline constexpr std::string_view kIff = "iff";

std::string eq_name(const SortId& sort);
std::string forall_name(const SortId& sort);
std::string exists_name(const SortId& sort);

/// A signature S = (SRT, SOP, VSRT, VAR, sig).
///
/// Distinguished symbols are generated when sorts are added: the connectives
/// on construction, `eq_<s>` for every sort and `forall^<s>` / `exists^<s>`
/// for every variable sort. `add_op` overwrites silently, so a caller can
/// build a deliberately broken signature and have `validate_signature`
/// report it.
///
/// Variables of a variable sort s are the declared names of that sort plus
/// the enumerated family `v<n>:<s>` (n = 0, 1, ...).
class Signature {
 public:
  Signature();

  void add_sort(const SortId& sort, bool var_sort = false);
  void add_op(const std::string& name, OpSignature sig);
  void remove_op(const std::string& name);
  void add_variable(const std::string& name, const SortId& sort);

  bool has_sort(const SortId& sort) const { return sorts_.contains(sort); }
  bool is_var_sort(const SortId& sort) const { return var_sorts_.contains(sort); }

  const OpSignature* find_op(std::string_view name) const;
  std::optional<SortId> variable_sort(std::string_view name) const;
  bool is_variable(std::string_view name) const { return variable_sort(name).has_value(); }

  /// n-th member of the enumerated family VAR_sort.
  Var variable(const SortId& sort, std::size_t index) const;

  /// Looks up a sort by name, accepting `π` for `prop`. Throws UnknownSort.
  SortId resolve_sort(std::string_view name) const;

  const std::set<SortId>& sorts() const { return sorts_; }
  const std::set<SortId>& var_sorts() const { return var_sorts_; }
  const std::map<std::string, OpSignature, std::less<>>& ops() const { return ops_; }
  const std::map<std::string, SortId, std::less<>>& named_variables() const { return named_vars_; }

  /// The distinguished symbols this signature must contain, with their ustypes.
  std::map<std::string, OpSignature> distinguished() const;
  bool is_distinguished(std::string_view name) const;

  bool operator==(const Signature&) const = default;

 private:
  std::set<SortId> sorts_;
  std::set<SortId> var_sorts_;
  std::map<std::string, OpSignature, std::less<>> ops_;
  std::map<std::string, SortId, std::less<>> named_vars_;
};

/// Parses `γ | (θ1,...,θm)γ` with `θ = α | (β1,...,βr)α`. Whitespace is ignored.
OpSignature parse_ustype(const Signature& sig, std::string_view text);
std::string print_ustype(const OpSignature& op);

/// Empty result means the signature is valid; otherwise one entry per failed clause.
std::vector<std::string> validate_signature(const Signature& sig);

/// True iff `super` extends `sub`: everything but SOP/sig agrees and sig
/// restricted to SOP_sub coincides.
bool extends(const Signature& sub, const Signature& super);

}  // namespace fnl
