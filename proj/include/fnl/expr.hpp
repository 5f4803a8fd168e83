#pragma once

#include <cstddef>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "fnl/signature.hpp"

namespace fnl {

struct ExprNode;
struct Arg;

/// Immutable expression of the standardized language. Identity is literal:
/// two expressions are equal iff they agree node by node, binder names
/// included. Copies share structure.
class Expr {
 public:
  Expr() = default;

  static Expr variable(const Var& v);

  /// Builds `op(args...)`, checking every GP clause against `sig`.
  static Expr apply(const Signature& sig, std::string_view op, std::vector<Arg> args = {});

  /// Builds a node without consulting a signature. The caller guarantees GP.
  static Expr make_unchecked(std::string head, bool head_is_var, SortId sort,
                             std::vector<Arg> args);

  const std::string& head() const;
  bool head_is_var() const;
  const SortId& sort() const;
  const std::vector<Arg>& args() const;
  std::size_t arity() const;
  std::size_t size() const;   ///< node count
  std::size_t depth() const;  ///< 1 for leaves
  std::size_t hash() const;
  Var as_var() const;

  const ExprNode* node() const { return node_.get(); }
  explicit operator bool() const { return node_ != nullptr; }

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  explicit Expr(std::shared_ptr<const ExprNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const ExprNode> node_;
};

struct Arg {
  std::vector<Var> binders;
  Expr body;

  bool operator==(const Arg&) const = default;
};

struct ExprNode {
  std::string head;
  bool head_is_var = false;
  SortId sort;
  std::vector<Arg> args;
  std::size_t hash = 0;
  std::size_t size = 1;
  std::size_t depth = 1;
};

struct ExprHash {
  std::size_t operator()(const Expr& e) const { return e.hash(); }
};

/// Strict weak order: size, then canonical print.
bool size_lex_less(const Expr& a, const Expr& b);

/// A finite variable sequence; repetitions allowed, rightmost occurrence wins.
struct Perspective {
  std::vector<Var> vars;

  std::vector<SortId> sorts() const;
  Perspective extended(const std::vector<Var>& more) const;
  bool operator==(const Perspective&) const = default;
};

/// Recomputes the sort bottom-up against `sig`. Throws ForeignSignature.
SortId sort_of(const Signature& sig, const Expr& e);

bool perspectives_member(const Expr& e, const Perspective& p);

/// Membership in F_γ[u⃗].
bool in_class(const Expr& e, const Perspective& p);

struct PgpArg {
  std::vector<Var> binders;
  Expr body;
  Perspective perspective;  ///< p ⧺ binders
};

struct PgpWitness {
  std::string head;
  bool head_is_var = false;
  std::vector<PgpArg> args;
};

/// One-step decomposition of `e` relative to `p`. Throws NotInClass.
PgpWitness pgp_decompose(const Expr& e, const Perspective& p);

/// Pairwise distinct enumerated variables of the requested sorts, none in `avoid`.
std::vector<Var> fresh_vars(const Signature& sig, const std::vector<SortId>& sorts,
                            const std::set<Var>& avoid);

/// Every variable occurring anywhere in `e` (free, bound or as binder).
std::set<Var> all_vars(const Expr& e);

std::string print_expr(const Expr& e);

/// Builders for the distinguished symbols. These need no signature since
/// their ustypes are fixed; sorts of the arguments are checked.
namespace logic {

Expr top();
Expr bottom();
Expr not_(const Expr& a);
Expr imp(const Expr& a, const Expr& b);
Expr and_(const Expr& a, const Expr& b);
Expr or_(const Expr& a, const Expr& b);
Expr iff(const Expr& a, const Expr& b);
Expr forall(const Var& x, const Expr& body);
Expr exists(const Var& x, const Expr& body);
/// ∀z1 ... ∀zk body (body itself for k = 0).
Expr forall_all(const std::vector<Var>& xs, const Expr& body);
/// `a =_γ b` through the symbol eq_γ.
Expr eq(const Expr& a, const Expr& b);
/// Equality as used by the calculus: `↔` at sort prop, `=_γ` otherwise.
Expr calc_eq(const Expr& a, const Expr& b);

bool is_connective(std::string_view head);

}  // namespace logic

}  // namespace fnl
