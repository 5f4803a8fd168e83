#include "fnl/random.hpp"

#include <algorithm>

namespace fnl {

std::uint64_t case_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Signature random_signature(Rng& rng, const RandomSigConfig& cfg) {
  Signature sig;
  std::size_t k = cfg.min_sorts + rng() % (cfg.max_sorts - cfg.min_sorts + 1);
  std::vector<SortId> sorts;
  for (std::size_t i = 0; i < k; ++i) {
    SortId s{"s" + std::to_string(i)};
    sig.add_sort(s, true);
    sorts.push_back(s);
  }
  for (const auto& s : sorts) {
    std::size_t nc = 1 + rng() % 2;
    for (std::size_t i = 0; i < nc; ++i) sig.add_op("c" + std::to_string(i) + "_" + s.name, OpSignature{s, {}});
  }
  std::vector<SortId> results = sorts;
  results.push_back(prop_sort());
  std::size_t nops = 1 + rng() % cfg.max_ops;
  for (std::size_t i = 0; i < nops; ++i) {
    OpSignature op{results[rng() % results.size()], {}};
    std::size_t m = 1 + rng() % cfg.max_arity;
    for (std::size_t j = 0; j < m; ++j) {
      ArgSlot slot{results[rng() % results.size()], {}};
      if (rng() % 10 < 4) {
        std::size_t r = 1 + rng() % cfg.max_binders;
        for (std::size_t b = 0; b < r; ++b) slot.binders.push_back(sorts[rng() % sorts.size()]);
      }
      op.args.push_back(slot);
    }
    sig.add_op("f" + std::to_string(i), op);
  }
  sig.add_op("P", OpSignature{prop_sort(), {ArgSlot{sorts[0], {}}}});
  return sig;
}

ExprGen::ExprGen(const Signature& sig, Rng& rng, ExprGenConfig cfg) : sig_(sig), rng_(rng), cfg_(cfg) {}

std::vector<Var> ExprGen::pool(const SortId& sort) const {
  std::vector<Var> out;
  if (!sig_.is_var_sort(sort)) return out;
  for (std::size_t i = 0; i < cfg_.var_pool; ++i) out.push_back(sig_.variable(sort, i));
  for (const auto& [name, s] : sig_.named_variables())
    if (s == sort) out.push_back(Var{name, s});
  return out;
}

std::vector<Var> ExprGen::all_pool() const {
  std::vector<Var> out;
  for (const auto& s : sig_.var_sorts()) {
    auto p = pool(s);
    out.insert(out.end(), p.begin(), p.end());
  }
  return out;
}

Var ExprGen::var(const SortId& sort) {
  auto p = pool(sort);
  return p[below(p.size())];
}

std::vector<Var> ExprGen::var_seq(std::size_t len) {
  auto p = all_pool();
  std::vector<Var> out;
  for (std::size_t i = 0; i < len; ++i) out.push_back(p[below(p.size())]);
  return out;
}

bool ExprGen::usable(const std::string& name, const OpSignature& op) const {
  bool binds = std::any_of(op.args.begin(), op.args.end(), [](const ArgSlot& s) { return !s.binders.empty(); });
  if (!binds) return true;
  bool quant = name.starts_with("forall^") || name.starts_with("exists^");
  return quant ? cfg_.allow_quantifiers : cfg_.allow_user_binders;
}

Expr ExprGen::expr(const SortId& sort, std::size_t depth, const std::optional<std::set<Var>>& free) {
  std::vector<Var> scope;
  return gen(sort, std::max<std::size_t>(depth, 1), scope, free);
}

Expr ExprGen::gen(const SortId& sort, std::size_t depth, std::vector<Var>& scope,
                  const std::optional<std::set<Var>>& free) {
  std::vector<Var> vars;
  for (const auto& v : scope)
    if (v.sort == sort) vars.push_back(v);
  if (free) {
    for (const auto& v : *free)
      if (v.sort == sort) vars.push_back(v);
  } else {
    auto p = pool(sort);
    vars.insert(vars.end(), p.begin(), p.end());
    if (!recent_binders_.empty() && chance(cfg_.reuse_bias)) {
      const Var& r = recent_binders_[below(recent_binders_.size())];
      if (r.sort == sort) return Expr::variable(r);
    }
  }

  std::vector<std::pair<const std::string*, const OpSignature*>> leaves, inner;
  for (const auto& [name, op] : sig_.ops()) {
    if (op.result != sort || !usable(name, op)) continue;
    (op.args.empty() ? leaves : inner).emplace_back(&name, &op);
  }

  if (depth > 1 && !inner.empty() && (chance(cfg_.nonleaf_bias) || (leaves.empty() && vars.empty()))) {
    auto [name, op] = inner[below(inner.size())];
    std::vector<Arg> args;
    for (const auto& slot : op->args) {
      std::vector<Var> binders;
      for (const auto& bs : slot.binders) {
        auto p = pool(bs);
        Var v;
        do {
          v = p[below(p.size())];
        } while (std::find(binders.begin(), binders.end(), v) != binders.end());
        binders.push_back(v);
      }
      scope.insert(scope.end(), binders.begin(), binders.end());
      Expr body = gen(slot.sort, depth - 1 - below(2) * (depth > 2), scope, free);
      scope.resize(scope.size() - binders.size());
      recent_binders_.insert(recent_binders_.end(), binders.begin(), binders.end());
      args.push_back(Arg{std::move(binders), std::move(body)});
    }
    return Expr::make_unchecked(*name, false, op->result, std::move(args));
  }
  if (!vars.empty() && (leaves.empty() || chance(cfg_.var_leaf_bias)))
    return Expr::variable(vars[below(vars.size())]);
  if (!leaves.empty()) {
    auto [name, op] = leaves[below(leaves.size())];
    return Expr::make_unchecked(*name, false, op->result, {});
  }
  // no leaf at all for this sort: fall back to any operation
  auto [name, op] = inner[below(inner.size())];
  std::vector<Arg> args;
  for (const auto& slot : op->args) {
    std::vector<Var> binders;
    for (std::size_t j = 0; j < slot.binders.size(); ++j) binders.push_back(sig_.variable(slot.binders[j], j));
    scope.insert(scope.end(), binders.begin(), binders.end());
    Expr body = gen(slot.sort, 1, scope, free);
    scope.resize(scope.size() - binders.size());
    args.push_back(Arg{std::move(binders), std::move(body)});
  }
  return Expr::make_unchecked(*name, false, op->result, std::move(args));
}

}  // namespace fnl
