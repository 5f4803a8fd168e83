#include "fnl/fuzz.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

#include "fnl/derive.hpp"
#include "fnl/error.hpp"
#include "fnl/samples.hpp"
#include "fnl/subst.hpp"

namespace fnl {

using namespace logic;

bool SuiteReport::same_outcome(const SuiteReport& o) const {
  auto key = [](const std::optional<CaseFailure>& f) {
    return f ? std::make_tuple(f->index, f->law, f->detail, f->shrunk) : std::make_tuple(std::uint64_t{0}, std::string{}, std::string{}, std::string{});
  };
  return suite == o.suite && seed == o.seed && cases == o.cases && failures == o.failures &&
         law_cases == o.law_cases && law_failures == o.law_failures && first.has_value() == o.first.has_value() &&
         key(first) == key(o.first);
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"subst", "derive", "soundness", "closure", "eval-invariance"};
  return names;
}

bool is_suite(std::string_view name) {
  const auto& n = suite_names();
  return std::find(n.begin(), n.end(), name) != n.end();
}

// ---------------------------------------------------------------------------
// shrinking

namespace {

void subterm_paths(const Expr& e, std::vector<std::size_t>& cur, std::vector<std::vector<std::size_t>>& out) {
  out.push_back(cur);
  for (std::size_t i = 0; i < e.arity(); ++i) {
    cur.push_back(i);
    subterm_paths(e.args()[i].body, cur, out);
    cur.pop_back();
  }
}

const Expr& at_path(const Expr& e, const std::vector<std::size_t>& path, std::size_t k = 0) {
  return k == path.size() ? e : at_path(e.args()[path[k]].body, path, k + 1);
}

Expr replace_at(const Expr& e, const std::vector<std::size_t>& path, const Expr& by, std::size_t k = 0) {
  if (k == path.size()) return by;
  std::vector<Arg> args = e.args();
  args[path[k]].body = replace_at(args[path[k]].body, path, by, k + 1);
  return Expr::make_unchecked(e.head(), e.head_is_var(), e.sort(), std::move(args));
}

}  // namespace

Expr shrink_expr(const Signature& sig, Expr e, const std::function<bool(const Expr&)>& still_fails) {
  bool progress = true;
  while (progress) {
    progress = false;
    std::vector<std::vector<std::size_t>> paths;
    std::vector<std::size_t> cur;
    subterm_paths(e, cur, paths);
    for (const auto& path : paths) {
      const Expr& sub = at_path(e, path);
      if (sub.arity() == 0) continue;
      std::vector<Expr> options;
      for (const auto& a : sub.args())
        if (a.body.sort() == sub.sort()) options.push_back(a.body);
      for (const auto& [name, op] : sig.ops())
        if (op.result == sub.sort() && op.args.empty()) {
          options.push_back(Expr::make_unchecked(name, false, op.result, {}));
          break;
        }
      for (const auto& o : options) {
        Expr cand = replace_at(e, path, o);
        bool fails = false;
        try {
          fails = still_fails(cand);
        } catch (const Error&) {
          fails = false;
        }
        if (fails) {
          e = cand;
          progress = true;
          break;
        }
      }
      if (progress) break;
    }
  }
  return e;
}

// ---------------------------------------------------------------------------
// case machinery

namespace {

struct Outcome {
  std::string law;
  std::optional<std::string> failure;
  // for shrinking the first failure
  std::optional<Signature> sig;
  std::optional<Expr> expr;
  std::function<bool(const Expr&)> still_fails;
};

using CaseFn = Outcome (*)(Rng&, std::uint64_t);

std::vector<Var> without(const std::vector<Var>& vs, const std::set<Var>& drop) {
  std::vector<Var> out;
  for (const auto& v : vs)
    if (!drop.contains(v)) out.push_back(v);
  return out;
}

std::vector<SortId> var_sorts(const Signature& sig) { return {sig.var_sorts().begin(), sig.var_sorts().end()}; }
std::vector<SortId> all_sorts(const Signature& sig) { return {sig.sorts().begin(), sig.sorts().end()}; }

std::vector<Expr> as_exprs(const std::vector<Var>& vs) {
  std::vector<Expr> out;
  for (const auto& v : vs) out.push_back(Expr::variable(v));
  return out;
}

template <class T>
std::vector<T> cat(std::vector<T> a, const std::vector<T>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

// ---------------------------------------------------------------------------
// substitution laws

enum class Law { Vacuous, Overridden, Split, SplitClosed, Single, IdentityTail, Commute };
const char* law_name(Law l) {
  switch (l) {
    case Law::Vacuous: return "vacuous";
    case Law::Overridden: return "overridden";
    case Law::Split: return "split";
    case Law::SplitClosed: return "split-closed";
    case Law::Single: return "single";
    case Law::IdentityTail: return "identity-tail";
    case Law::Commute: return "commute";
  }
  return "?";
}

struct SubstCase {
  Law law;
  Expr e;
  std::vector<Var> x, y;
  std::vector<Expr> r, s;
};

bool disjoint(const std::vector<Var>& a, const std::vector<Var>& b) {
  return std::none_of(a.begin(), a.end(), [&](const Var& v) { return std::find(b.begin(), b.end(), v) != b.end(); });
}

bool all_closed(const std::vector<Expr>& es) { return std::all_of(es.begin(), es.end(), is_closed); }

bool premise(const SubstCase& c) {
  const auto f = fv(c.e);
  switch (c.law) {
    case Law::Vacuous:
      return std::none_of(c.x.begin(), c.x.end(), [&](const Var& v) { return f.contains(v); });
    case Law::Overridden:
      return std::all_of(c.x.begin(), c.x.end(), [&](const Var& v) {
        return !f.contains(v) || std::find(c.y.begin(), c.y.end(), v) != c.y.end();
      });
    case Law::Split:
    case Law::SplitClosed: {
      if (c.law == Law::SplitClosed && !all_closed(c.r)) return false;
      const auto g = gv(c.e);
      for (const auto& r : c.r)
        for (const auto& v : fv(r))
          if (g.contains(v) || std::find(c.y.begin(), c.y.end(), v) != c.y.end()) return false;
      return true;
    }
    case Law::Single: return c.x.size() == 1;
    case Law::IdentityTail: return disjoint(c.x, c.y);
    case Law::Commute: return disjoint(c.x, c.y) && all_closed(c.r) && all_closed(c.s);
  }
  return false;
}

std::optional<std::string> violation(const SubstCase& c) {
  auto sub = [](const Expr& e, const std::vector<Var>& xs, const std::vector<Expr>& ds) {
    return substitute(e, SubstMap(xs, ds));
  };
  auto differ = [](const Expr& a, const Expr& b) -> std::optional<std::string> {
    if (a == b) return std::nullopt;
    return print_expr(a) + " != " + print_expr(b);
  };
  const Expr& e = c.e;
  switch (c.law) {
    case Law::Vacuous: return differ(sub(e, c.x, c.r), e);
    case Law::Overridden: return differ(sub(e, cat(c.x, c.y), cat(c.r, c.s)), sub(e, c.y, c.s));
    case Law::Split:
    case Law::SplitClosed:
      return differ(sub(e, cat(c.x, c.y), cat(c.r, c.s)), sub(sub(e, cat(c.x, c.y), cat(c.r, as_exprs(c.y))), c.y, c.s));
    case Law::Single: {
      const bool in_y = std::find(c.y.begin(), c.y.end(), c.x[0]) != c.y.end();
      Expr lhs = sub(e, cat(c.x, c.y), cat(c.r, as_exprs(c.y)));
      return differ(lhs, in_y ? e : sub(e, c.x, c.r));
    }
    case Law::IdentityTail: return differ(sub(e, cat(c.x, c.y), cat(c.r, as_exprs(c.y))), sub(e, c.x, c.r));
    case Law::Commute: {
      Expr both = sub(e, cat(c.x, c.y), cat(c.r, c.s));
      if (auto d = differ(both, sub(sub(e, c.x, c.r), c.y, c.s))) return d;
      return differ(both, sub(sub(e, c.y, c.s), c.x, c.r));
    }
  }
  return std::nullopt;
}

Outcome subst_case(Rng& rng, std::uint64_t index) {
  const Law law = static_cast<Law>(index % 7);
  Signature sig = random_signature(rng);
  ExprGen gen(sig, rng);
  const auto sorts = all_sorts(sig);
  const auto vsorts = var_sorts(sig);
  SubstCase c{law, gen.expr(sorts[gen.below(sorts.size())], 2 + gen.below(3)), {}, {}, {}, {}};

  const auto occurring = all_vars(c.e);
  const auto free = fv(c.e);
  const auto bound = gv(c.e);
  // prefer variables that occur in e, bound ones in particular
  auto pick = [&](const std::set<Var>& avoid) -> std::optional<Var> {
    std::vector<Var> pref;
    for (const auto& v : occurring)
      if (!avoid.contains(v)) pref.push_back(v);
    if (!pref.empty() && gen.chance(0.7)) return pref[gen.below(pref.size())];
    auto pool = without(gen.all_pool(), avoid);
    if (pool.empty()) return std::nullopt;
    return pool[gen.below(pool.size())];
  };
  auto pick_n = [&](std::size_t n, const std::set<Var>& avoid) {
    std::vector<Var> out;
    for (std::size_t i = 0; i < n; ++i)
      if (auto v = pick(avoid)) out.push_back(*v);
    return out;
  };
  auto open_for = [&](const std::vector<Var>& xs) {
    std::vector<Expr> out;
    for (const auto& v : xs) out.push_back(gen.expr(v.sort, 1 + gen.below(3)));
    return out;
  };
  auto closed_for = [&](const std::vector<Var>& xs) {
    std::vector<Expr> out;
    for (const auto& v : xs) out.push_back(gen.closed(v.sort, 1 + gen.below(3)));
    return out;
  };
  const std::size_t n1 = 1 + gen.below(3), n2 = 1 + gen.below(3);

  switch (law) {
    case Law::Vacuous:
      c.x = pick_n(n1, free);
      c.r = open_for(c.x);
      break;
    case Law::Overridden: {
      c.y = pick_n(n2, {});
      std::set<Var> avoid;
      for (const auto& v : free)
        if (std::find(c.y.begin(), c.y.end(), v) == c.y.end()) avoid.insert(v);
      c.x = pick_n(n1, avoid);
      c.r = open_for(c.x);
      c.s = open_for(c.y);
      break;
    }
    case Law::Split:
    case Law::SplitClosed: {
      c.x = pick_n(n1, {});
      c.y = pick_n(n2, {});
      if (law == Law::SplitClosed) {
        c.r = closed_for(c.x);
      } else {
        std::set<Var> allowed;
        for (const auto& v : gen.all_pool())
          if (!bound.contains(v) && std::find(c.y.begin(), c.y.end(), v) == c.y.end()) allowed.insert(v);
        for (const auto& v : c.x) c.r.push_back(gen.expr(v.sort, 1 + gen.below(3), allowed));
      }
      c.s = open_for(c.y);
      break;
    }
    case Law::Single: {
      c.x = pick_n(1, {});
      c.y = pick_n(gen.below(4), {});
      if (!c.x.empty() && gen.chance(0.5)) c.y.insert(c.y.begin() + gen.below(c.y.size() + 1), c.x[0]);
      c.r = open_for(c.x);
      break;
    }
    case Law::IdentityTail:
    case Law::Commute: {
      c.x = pick_n(n1, {});
      c.y = pick_n(n2, std::set<Var>(c.x.begin(), c.x.end()));
      c.r = law == Law::Commute ? closed_for(c.x) : open_for(c.x);
      if (law == Law::Commute) c.s = closed_for(c.y);
      break;
    }
  }

  Outcome out{law_name(law), std::nullopt, sig, c.e, {}};
  if (c.x.empty() || !premise(c)) {
    out.failure = "generator produced an instance violating the premise";
    return out;
  }
  out.failure = violation(c);
  if (out.failure) {
    out.still_fails = [c](const Expr& e) {
      SubstCase d = c;
      d.e = e;
      return premise(d) && violation(d).has_value();
    };
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// random proofs

std::vector<Expr> random_true_formulas(const Structure& m, ExprGen& gen, std::size_t count, std::size_t tries) {
  std::vector<Expr> out;
  for (std::size_t i = 0; i < tries && out.size() < count; ++i) {
    Expr phi = gen.expr(prop_sort(), 3);
    if (satisfies(m, phi)) out.push_back(phi);
  }
  return out;
}

Proof random_proof(const Theory& t, const std::vector<Expr>& premises, ExprGen& gen, std::size_t steps) {
  ProofBuilder pb(t, premises);
  const Signature& sig = t.signature;
  const auto sorts = all_sorts(sig);
  const auto vsorts = var_sorts(sig);
  auto some_line = [&]() -> std::optional<std::size_t> {
    if (pb.size() == 0) return std::nullopt;
    for (int k = 0; k < 4; ++k) {
      std::size_t i = gen.below(pb.size());
      if (pb.formula(i).size() <= 40) return i;
    }
    return std::nullopt;
  };
  auto pick = [&]() -> Expr {
    if (auto i = some_line(); i && gen.chance(0.5)) return pb.formula(*i);
    return gen.expr(prop_sort(), 1 + gen.below(3));
  };
  auto any_var = [&]() { return gen.var(vsorts[gen.below(vsorts.size())]); };
  auto avoiding = [&](const Var& x) {
    auto pool = gen.all_pool();
    return std::set<Var>(pool.begin(), pool.end()) == std::set<Var>{} ? std::set<Var>{} : [&] {
      std::set<Var> s(pool.begin(), pool.end());
      s.erase(x);
      return s;
    }();
  };
  auto distinct_vars = [&](const std::vector<SortId>& ss) {
    std::vector<Var> out;
    for (const auto& s : ss) {
      Var v;
      do {
        v = gen.var(s);
      } while (std::find(out.begin(), out.end(), v) != out.end());
      out.push_back(v);
    }
    return out;
  };

  std::size_t guard = 0;
  while (pb.size() < steps && ++guard < steps * 20) {
    switch (gen.below(13)) {
      case 0:
        if (!t.axioms.empty()) pb.axiom(gen.below(t.axioms.size()));
        break;
      case 1:
        if (!premises.empty()) pb.premise(gen.below(premises.size()));
        break;
      case 2: {
        Expr a = pick(), b = pick(), c = pick();
        switch (gen.below(6)) {
          case 0: pb.taut(imp(a, imp(b, a))); break;
          case 1: pb.taut(imp(imp(a, imp(b, c)), imp(imp(a, b), imp(a, c)))); break;
          case 2: pb.taut(imp(imp(not_(a), not_(b)), imp(b, a))); break;
          case 3: pb.taut(or_(a, not_(a))); break;
          case 4: pb.taut(imp(and_(a, b), a)); break;
          default: pb.taut(iff(a, not_(not_(a)))); break;
        }
        break;
      }
      case 3:
        if (auto i = some_line()) pb.weaken(*i, pick());
        break;
      case 4: {
        // modus ponens on an existing pair, if any
        bool done = false;
        for (std::size_t j = pb.size(); j-- > 0 && !done;) {
          const Expr& f = pb.formula(j);
          if (f.head_is_var() || f.head() != kImp) continue;
          for (std::size_t i = 0; i < pb.size(); ++i)
            if (pb.formula(i) == f.args()[0].body) {
              pb.mp(i, j);
              done = true;
              break;
            }
        }
        break;
      }
      case 5:
        if (auto i = some_line()) {
          Var x = any_var();
          std::size_t g = pb.gen(*i, x);
          if (gen.chance(0.5)) {
            const Expr body = pb.formula(*i);
            Expr a = gen.expr(x.sort, 2);
            if (!substitutable(a, x, body)) a = gen.closed(x.sort, 2);
            std::size_t inst = pb.add(imp(pb.formula(g), substitute(body, x, a)), just::ForallElim{x, a});
            pb.mp(g, inst);
          }
        }
        break;
      case 6: {
        Var x = any_var();
        Expr psi = pick();
        Expr a = gen.expr(x.sort, 2);
        if (!substitutable(a, x, psi)) a = gen.closed(x.sort, 2);
        pb.add(imp(forall(x, psi), substitute(psi, x, a)), just::ForallElim{x, a});
        break;
      }
      case 7: {
        Var x = any_var();
        Expr psi = pick();
        Expr a = gen.expr(x.sort, 2);
        if (!substitutable(a, x, psi)) a = gen.closed(x.sort, 2);
        pb.add(imp(substitute(psi, x, a), exists(x, psi)), just::ExistsIntro{x, a});
        break;
      }
      case 8: {
        Var x = any_var();
        Expr psi = gen.expr(prop_sort(), 2, avoiding(x));
        Expr chi = pick();
        pb.add(imp(forall(x, imp(psi, chi)), imp(psi, forall(x, chi))), just::ForallImpDist{x});
        break;
      }
      case 9: {
        Var x = any_var();
        Expr psi = gen.expr(prop_sort(), 2, avoiding(x));
        Expr chi = pick();
        pb.add(imp(forall(x, imp(chi, psi)), imp(exists(x, chi), psi)), just::ExistsImpDist{x});
        break;
      }
      case 10: {
        Expr a = gen.expr(sorts[gen.below(sorts.size())], 2);
        pb.add(calc_eq(a, a), just::EqRefl{});
        break;
      }
      case 11: {
        std::vector<std::pair<const std::string*, const OpSignature*>> ops;
        for (const auto& [name, op] : sig.ops())
          if (!op.args.empty()) ops.emplace_back(&name, &op);
        auto [name, op] = ops[gen.below(ops.size())];
        just::EqCongr d;
        d.op = *name;
        d.slot = gen.below(op->args.size());
        const ArgSlot& slot = op->args[d.slot];
        d.xs = distinct_vars(slot.binders);
        d.ys = distinct_vars(slot.binders);
        d.b1 = gen.expr(slot.sort, 2);
        d.b2 = gen.chance(0.3) ? d.b1 : gen.expr(slot.sort, 2);
        std::set<Var> avoid = all_vars(d.b1);
        for (const auto& v : all_vars(d.b2)) avoid.insert(v);
        avoid.insert(d.xs.begin(), d.xs.end());
        avoid.insert(d.ys.begin(), d.ys.end());
        d.zs = fresh_vars(sig, slot.binders, avoid);
        for (std::size_t k = 0; k < op->args.size(); ++k) {
          if (k == d.slot) continue;
          Arg a{distinct_vars(op->args[k].binders), gen.expr(op->args[k].sort, 2)};
          (k < d.slot ? d.delta : d.gamma).push_back(std::move(a));
        }
        try {
          Expr f = eq_congr_formula(sig, d);
          pb.add(f, d);
        } catch (const Error&) {
        }
        break;
      }
      default: {
        SortId s = sorts[gen.below(sorts.size())];
        Expr a = gen.expr(s, 2), b = gen.expr(s, 2), c = gen.expr(s, 2);
        if (gen.chance(0.5)) append_symmetry(pb, a, b);
        else append_transitivity(pb, a, b, c);
        break;
      }
    }
  }
  return std::move(pb).finish();
}

namespace {

std::string reason_of(const Proof& p, const CheckResult& r) {
  return "line " + std::to_string(r.line + 1) + " (" + justification_name(p.lines.at(r.line).why) + "): " + r.reason;
}

Outcome soundness_case(Rng& rng, std::uint64_t) {
  Signature sig = random_signature(rng);
  Structure m = random_full_structure(sig, rng, 3);
  ExprGen gen(sig, rng, ExprGenConfig{3});
  Theory t{sig, random_true_formulas(m, gen, 3)};
  Proof p = random_proof(t, {}, gen, 12 + gen.below(20));
  Outcome out{"soundness", std::nullopt, sig, std::nullopt, {}};
  if (auto r = check_proof(p); !r) {
    out.law = "checker";
    out.failure = "generated proof rejected at " + reason_of(p, r);
    return out;
  }
  if (auto r = check_proof(restrict_to_used_axioms(p)); !r) {
    out.law = "used-axioms";
    out.failure = "re-check against used axioms failed: " + r.reason;
    return out;
  }
  for (std::size_t i = 0; i < p.lines.size(); ++i)
    if (!satisfies(m, p.lines[i].formula)) {
      out.failure = "line " + std::to_string(i + 1) + " not satisfied: " + print_expr(p.lines[i].formula);
      out.expr = p.lines[i].formula;
      return out;
    }
  return out;
}

Outcome derive_case(Rng& rng, std::uint64_t index) {
  static const char* const kinds[] = {"symmetry", "transitivity", "equality-theorem", "equality-rule", "deduction"};
  const std::size_t kind = index % 5;
  Signature sig = random_signature(rng);
  ExprGen gen(sig, rng);
  const auto sorts = all_sorts(sig);
  const auto vsorts = var_sorts(sig);
  Theory t{sig, {}};
  for (std::size_t i = gen.below(3); i > 0; --i) t.axioms.push_back(gen.expr(prop_sort(), 2));
  Outcome out{kinds[kind], std::nullopt, sig, std::nullopt, {}};
  Proof p;
  const SortId s = sorts[gen.below(sorts.size())];
  switch (kind) {
    case 0: p = derive_symmetry(t, gen.expr(s, 3), gen.expr(s, 3)); break;
    case 1: p = derive_transitivity(t, gen.expr(s, 3), gen.expr(s, 3), gen.expr(s, 3)); break;
    case 2: {
      const SortId zs = vsorts[gen.below(vsorts.size())];
      Var z = gen.var(zs);
      Expr e = gen.expr(s, 4), r = gen.expr(zs, 2), q = gen.expr(zs, 2);
      std::vector<Var> ys;
      auto rs = fv(r);
      for (const auto& v : fv(q)) rs.insert(v);
      for (const auto& v : gv(e))
        if (rs.contains(v)) ys.push_back(v);
      for (std::size_t k = gen.below(2); k > 0; --k) ys.push_back(gen.var(vsorts[gen.below(vsorts.size())]));
      std::shuffle(ys.begin(), ys.end(), gen.rng());
      p = derive_equality_theorem(t, e, z, r, q, ys);
      out.expr = e;
      break;
    }
    case 3: {
      const SortId zs = vsorts[gen.below(vsorts.size())];
      Expr e = gen.expr(s, 4);
      p = derive_equality_rule(t, e, gen.var(zs), gen.expr(zs, 2), gen.expr(zs, 2));
      out.expr = e;
      break;
    }
    default: {
      std::vector<Expr> premises{gen.closed(prop_sort(), 3)};
      if (gen.chance(0.5)) premises.insert(premises.begin(), gen.closed(prop_sort(), 2));
      Proof src = random_proof(t, premises, gen, 8 + gen.below(12));
      if (auto r = check_proof(src); !r) {
        out.failure = "source proof rejected at " + reason_of(src, r);
        return out;
      }
      p = deduction_transform(src);
      if (p.conclusion() != imp(premises.back(), src.conclusion())) {
        out.failure = "deduction transform proved " + print_expr(p.conclusion());
        return out;
      }
      break;
    }
  }
  if (auto r = check_proof(p); !r) {
    out.failure = "rejected at " + reason_of(p, r);
    return out;
  }
  if (auto r = check_proof(restrict_to_used_axioms(p)); !r) {
    out.law = "used-axioms";
    out.failure = "re-check against used axioms failed: " + r.reason;
  }
  return out;
}

Outcome closure_case(Rng& rng, std::uint64_t index) {
  const std::size_t kind = index % 5;
  if (kind == 0) {
    Structure s = random_full_structure(random_signature(rng), rng, 3);
    auto r = check_closure(s);
    Outcome out{"full", std::nullopt, std::nullopt, std::nullopt, {}};
    if (!r.ok()) out.failure = std::string(to_string(r.violations[0].law)) + ": " + r.violations[0].detail;
    return out;
  }
  const auto law = static_cast<ClosureLaw>(kind - 1);
  Mutation m = mutated_structure(law, rng);
  auto r = check_closure(m.structure, m.options);
  Outcome out{"mutated-" + std::string(to_string(law)), std::nullopt, std::nullopt, std::nullopt, {}};
  if (r.ok()) {
    out.failure = "violation not reported";
  } else {
    for (const auto& v : r.violations)
      if (v.law != law) {
        out.failure = "reported " + std::string(to_string(v.law)) + ": " + v.detail;
        break;
      }
  }
  return out;
}

// Row of a table over u⃗ ⧺ w⃗ projected to u⃗.
std::size_t project_prefix(const Structure& s, const std::vector<SortId>& full, std::size_t keep, std::size_t t) {
  auto coords = decode_tuple(s, full, t);
  std::size_t idx = 0;
  for (std::size_t j = 0; j < keep; ++j) idx = idx * s.size(full[j]) + coords[j];
  return idx;
}

Outcome eval_case(Rng& rng, std::uint64_t index) {
  const std::size_t kind = index % 3;
  Outcome out{"", std::nullopt, std::nullopt, std::nullopt, {}};
  auto fail_with = [&](const std::string& what, const Structure& s, const Expr& e,
                       std::function<bool(const Expr&)> still) {
    out.failure = what + ": " + print_expr(e);
    out.sig = s.signature;
    out.expr = e;
    out.still_fails = std::move(still);
  };
  if (kind == 0) {
    out.law = "extension";
    Signature sig = random_signature(rng);
    Structure s = random_full_structure(sig, rng, 3);
    ExprGen gen(sig, rng, ExprGenConfig{3});
    const auto sorts = all_sorts(sig);
    // redraw until the perspective table stays small
    Expr e = gen.expr(sorts[gen.below(sorts.size())], 4);
    for (std::size_t d = 4; s.tuple_count(covering_perspective(e).sorts()) > 729; d = d > 1 ? d - 1 : 1)
      e = gen.expr(sorts[gen.below(sorts.size())], d);
    Perspective u = covering_perspective(e);
    std::vector<Var> w;
    for (std::size_t k = 1 + gen.below(2); k > 0; --k) {
      auto pool = without(gen.all_pool(), fv(e));
      if (!pool.empty()) w.push_back(pool[gen.below(pool.size())]);
    }
    Perspective uw = u.extended(w);
    auto check = [s, u, uw](const Expr& x) -> std::optional<std::string> {
      if (!in_class(x, u)) return std::nullopt;
      FnTable a = evaluate(s, x, u);
      FnTable b = evaluate(s, x, uw, EvalMode::Parallel);
      const auto full = uw.sorts();
      for (std::size_t t = 0; t < b.rows.size(); ++t)
        if (b.rows[t] != a.rows[project_prefix(s, full, u.vars.size(), t)]) return "extension row " + std::to_string(t);
      if (!(a == evaluate_reference(s, x, u))) return "compositional and pointwise evaluation differ";
      return std::nullopt;
    };
    if (auto d = check(e)) fail_with(*d, s, e, [check](const Expr& x) { return check(x).has_value(); });
    return out;
  }
  ClosedSample cs = closed_nonfull_sample(rng);
  ExprGen gen(cs.nonfull.signature, rng, ExprGenConfig{3});
  const SortId sort = gen.chance(0.5) ? SortId{"alpha"} : prop_sort();
  Expr e = gen.expr(sort, 4);
  for (std::size_t d = 4; covering_perspective(e).vars.size() > 3; d = d > 1 ? d - 1 : 1) e = gen.expr(sort, d);
  Perspective p = covering_perspective(e);
  if (kind == 1) {
    out.law = "completion";
    auto check = [cs, p](const Expr& x) -> std::optional<std::string> {
      if (!in_class(x, p)) return std::nullopt;
      FnTable a = evaluate(cs.nonfull, x, p);
      if (!(a == evaluate(cs.completion, x, p))) return "structure and completion differ";
      if (x.sort() != prop_sort() && !p.vars.empty() && !cs.nonfull.in_selected(x.sort(), p.sorts(), a.rows))
        return "value outside the selected set";
      return std::nullopt;
    };
    if (auto d = check(e)) fail_with(*d, cs.nonfull, e, [check](const Expr& x) { return check(x).has_value(); });
    return out;
  }
  out.law = "agreement";
  Structure other = cs.completion;
  for (auto& [name, oi] : other.interp)
    if (oi.hash_seed) oi.hash_seed = *oi.hash_seed ^ rng();
  auto check = [cs, other, p](const Expr& x) -> std::optional<std::string> {
    if (!in_class(x, p)) return std::nullopt;
    FnTable a = evaluate(cs.completion, x, p);
    if (!(a == evaluate(other, x, p))) return "structures agreeing on selected arguments differ";
    if (!(a == evaluate_reference(cs.nonfull, x, p))) return "pointwise evaluation of the non-full structure differs";
    return std::nullopt;
  };
  if (auto d = check(e)) fail_with(*d, cs.nonfull, e, [check](const Expr& x) { return check(x).has_value(); });
  return out;
}

CaseFn case_fn(std::string_view name) {
  if (name == "subst") return subst_case;
  if (name == "derive") return derive_case;
  if (name == "soundness") return soundness_case;
  if (name == "closure") return closure_case;
  if (name == "eval-invariance") return eval_case;
  throw std::invalid_argument("unknown suite " + std::string(name));
}

Outcome run_one(CaseFn fn, std::uint64_t seed, std::uint64_t index) {
  Rng rng(case_seed(seed, index));
  try {
    return fn(rng, index);
  } catch (const Error& e) {
    Outcome o;
    o.law = "exception";
    o.failure = e.what();
    return o;
  }
}

}  // namespace

SuiteReport run_suite(std::string_view name, const SuiteOptions& opt) {
  CaseFn fn = case_fn(name);
  const auto start = std::chrono::steady_clock::now();
  SuiteReport rep;
  rep.suite = std::string(name);
  rep.seed = opt.seed;
  rep.cases = opt.cases;
  std::uint64_t first_index = opt.cases;

  const long n = static_cast<long>(opt.cases);
#pragma omp parallel if (opt.parallel)
  {
    std::map<std::string, std::size_t> cases, fails;
    std::uint64_t local_first = opt.cases;
#pragma omp for schedule(dynamic, 16)
    for (long i = 0; i < n; ++i) {
      Outcome o = run_one(fn, opt.seed, static_cast<std::uint64_t>(i));
      ++cases[o.law];
      if (o.failure) {
        ++fails[o.law];
        local_first = std::min<std::uint64_t>(local_first, static_cast<std::uint64_t>(i));
      }
    }
#pragma omp critical
    {
      for (const auto& [k, v] : cases) rep.law_cases[k] += v;
      for (const auto& [k, v] : fails) rep.law_failures[k] += v;
      first_index = std::min(first_index, local_first);
    }
  }
  for (const auto& [k, v] : rep.law_failures) rep.failures += v;

  if (first_index < opt.cases) {
    Outcome o = run_one(fn, opt.seed, first_index);
    CaseFailure f{first_index, o.law, o.failure.value_or(""), ""};
    if (o.expr) {
      Expr e = *o.expr;
      if (o.sig && o.still_fails) e = shrink_expr(*o.sig, e, o.still_fails);
      f.shrunk = print_expr(e);
    }
    rep.first = std::move(f);
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace fnl
