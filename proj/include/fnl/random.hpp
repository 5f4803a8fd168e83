#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "fnl/expr.hpp"

namespace fnl {

using Rng = std::mt19937_64;

/// Seed of case `index` in a run seeded with `seed` (splitmix64 of both).
std::uint64_t case_seed(std::uint64_t seed, std::uint64_t index);

struct RandomSigConfig {
  std::size_t min_sorts = 2;
  std::size_t max_sorts = 4;
  std::size_t max_ops = 5;
  std::size_t max_arity = 3;
  std::size_t max_binders = 2;
};

/// User sorts s0.. (all variable sorts), at least one constant per sort and a
/// handful of operations with random ustypes, some of them binding.
Signature random_signature(Rng& rng, const RandomSigConfig& cfg = {});

struct ExprGenConfig {
  std::size_t var_pool = 6;       ///< variables v0..v{n-1} per variable sort
  double nonleaf_bias = 0.7;      ///< chance of an m > 0 node above the leaf level
  double var_leaf_bias = 0.5;     ///< chance of a variable when one is allowed
  double reuse_bias = 0.3;        ///< chance a free leaf reuses a binder name seen earlier
  bool allow_quantifiers = true;
  bool allow_user_binders = true;
};

/// Random GP-valid expressions over a signature.
class ExprGen {
 public:
  ExprGen(const Signature& sig, Rng& rng, ExprGenConfig cfg = {});

  /// Expression of `sort` and depth at most `depth`. Free variables are drawn
  /// from `free` when given, from the whole pool otherwise.
  Expr expr(const SortId& sort, std::size_t depth, const std::optional<std::set<Var>>& free = std::nullopt);
  Expr closed(const SortId& sort, std::size_t depth) { return expr(sort, depth, std::set<Var>{}); }

  Var var(const SortId& sort);
  std::vector<Var> pool(const SortId& sort) const;
  std::vector<Var> all_pool() const;

  /// Random sequence of pool variables (repetitions allowed).
  std::vector<Var> var_seq(std::size_t len);

  Rng& rng() { return rng_; }
  const Signature& signature() const { return sig_; }
  std::size_t below(std::size_t n) { return n == 0 ? 0 : rng_() % n; }
  bool chance(double p) { return std::uniform_real_distribution<double>(0, 1)(rng_) < p; }

 private:
  Expr gen(const SortId& sort, std::size_t depth, std::vector<Var>& scope,
           const std::optional<std::set<Var>>& free);
  bool usable(const std::string& name, const OpSignature& op) const;

  const Signature& sig_;
  Rng& rng_;
  ExprGenConfig cfg_;
  std::vector<Var> recent_binders_;
};

}  // namespace fnl
