#pragma once

#include <set>
#include <vector>

#include "fnl/expr.hpp"

namespace fnl {

std::set<Var> fv(const Expr& e);
std::set<Var> gv(const Expr& e);

bool is_closed(const Expr& e);

/// Subb(d, x, e): no free variable of d gets captured when d replaces the
/// free occurrences of x in e.
bool substitutable(const Expr& d, const Var& x, const Expr& e);

/// [x⃗ ← d⃗]. Targets may repeat; the rightmost pair for a variable wins.
struct SubstMap {
  std::vector<Var> targets;
  std::vector<Expr> replacements;

  SubstMap() = default;
  SubstMap(std::vector<Var> xs, std::vector<Expr> ds);

  void push(const Var& x, const Expr& d);
  std::size_t size() const { return targets.size(); }

  /// Concatenation this ⧺ other.
  SubstMap then(const SubstMap& other) const;
};

/// e[x⃗ ← d⃗]. Below a binder group v⃗ the map is extended by v⃗ ← v⃗, so
/// bound occurrences are never replaced. Throws SortClash on a sort mismatch.
Expr substitute(const Expr& e, const SubstMap& m);
Expr substitute(const Expr& e, const Var& x, const Expr& d);

/// Equality up to a sort-respecting bijective renaming of bound variables.
bool alpha_equiv(const Expr& a, const Expr& b);

}  // namespace fnl
