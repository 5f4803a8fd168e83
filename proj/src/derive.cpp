#include "fnl/derive.hpp"

#include <algorithm>

#include "fnl/error.hpp"
#include "fnl/subst.hpp"

namespace fnl {

using namespace logic;

std::size_t append_symmetry(ProofBuilder& pb, const Expr& a, const Expr& b) {
  if (a.sort() != b.sort()) throw Error(ErrorKind::SortMismatch, "symmetry between different sorts");
  if (a.sort() == prop_sort()) return pb.taut(imp(iff(a, b), iff(b, a)));
  const Expr A = eq(a, b), B = eq(a, a), C = eq(b, a);
  // a=b → ((a=a) ↔ (b=a)) through the first slot of eq
  just::EqCongr d{eq_name(a.sort()), 0, {}, {}, {}, a, b, {}, {Arg{{}, a}}};
  std::size_t congr = pb.add(imp(A, iff(B, C)), d);
  std::size_t refl = pb.add(B, just::EqRefl{});
  std::size_t swap = pb.taut(imp(imp(A, iff(B, C)), imp(B, imp(A, C))));
  return pb.mp(refl, pb.mp(congr, swap));
}

std::size_t append_transitivity(ProofBuilder& pb, const Expr& a, const Expr& b, const Expr& c) {
  if (a.sort() != b.sort() || b.sort() != c.sort())
    throw Error(ErrorKind::SortMismatch, "transitivity between different sorts");
  if (a.sort() == prop_sort()) return pb.taut(imp(iff(a, b), imp(iff(b, c), iff(a, c))));
  const Expr A = eq(a, b), X = eq(a, c), Y = eq(b, c);
  just::EqCongr d{eq_name(a.sort()), 0, {}, {}, {}, a, b, {}, {Arg{{}, c}}};
  std::size_t congr = pb.add(imp(A, iff(X, Y)), d);
  std::size_t t = pb.taut(imp(imp(A, iff(X, Y)), imp(A, imp(Y, X))));
  return pb.mp(congr, t);
}

Proof derive_symmetry(const Theory& t, const Expr& a, const Expr& b) {
  ProofBuilder pb(t);
  append_symmetry(pb, a, b);
  return std::move(pb).finish();
}

Proof derive_transitivity(const Theory& t, const Expr& a, const Expr& b, const Expr& c) {
  ProofBuilder pb(t);
  append_transitivity(pb, a, b, c);
  return std::move(pb).finish();
}

// ---------------------------------------------------------------------------
// equality theorem

namespace {

struct EqThm {
  ProofBuilder& pb;
  Var z;
  Expr r, s, h;
  std::set<Var> avoid;

  // Line index of H → e[z←r] = e[z←s].
  std::size_t prove(const Expr& e) {
    if (e.arity() == 0) {
      if (e.head_is_var() && e.as_var() == z) return strip_quantifiers();
      return pb.weaken(pb.add(calc_eq(e, e), just::EqRefl{}), h);
    }
    std::vector<Expr> ps, qs;
    std::vector<std::size_t> slot_lines;  // H → ∀v⃗_i(p_i = q_i)
    for (const auto& a : e.args()) {
      SubstMap mr, ms;
      mr.push(z, r);
      ms.push(z, s);
      for (const auto& v : a.binders) {
        mr.push(v, Expr::variable(v));
        ms.push(v, Expr::variable(v));
      }
      Expr p = substitute(a.body, mr), q = substitute(a.body, ms);
      ps.push_back(p);
      qs.push_back(q);
      std::size_t line;
      if (std::find(a.binders.begin(), a.binders.end(), z) != a.binders.end()) {
        line = pb.add(calc_eq(p, q), just::EqRefl{});
        for (auto it = a.binders.rbegin(); it != a.binders.rend(); ++it) line = pb.gen(line, *it);
        line = pb.weaken(line, h);
      } else {
        line = prove(a.body);
        for (auto it = a.binders.rbegin(); it != a.binders.rend(); ++it) line = pb.gen_under(line, *it);
      }
      slot_lines.push_back(line);
    }

    // T_i = op(Q_1..Q_i, P_{i+1}..P_m); chain T_0 = T_1 = ... = T_m.
    auto t_of = [&](std::size_t i) {
      std::vector<Arg> args;
      for (std::size_t k = 0; k < e.arity(); ++k)
        args.push_back(Arg{e.args()[k].binders, k < i ? qs[k] : ps[k]});
      return Expr::make_unchecked(e.head(), false, e.sort(), std::move(args));
    };
    std::optional<std::size_t> acc;
    for (std::size_t i = 0; i < e.arity(); ++i) {
      const auto& binders = e.args()[i].binders;
      std::vector<Var> zs = fresh_vars(pb.theory().signature, sorts_of(binders), avoid);
      avoid.insert(zs.begin(), zs.end());
      std::size_t renamed = rename(slot_lines[i], binders, zs);
      just::EqCongr d;
      d.op = e.head();
      d.slot = i;
      d.xs = d.ys = binders;
      d.zs = zs;
      d.b1 = ps[i];
      d.b2 = qs[i];
      for (std::size_t k = 0; k < i; ++k) d.delta.push_back(Arg{binders_at(e, k), qs[k]});
      for (std::size_t k = i + 1; k < e.arity(); ++k) d.gamma.push_back(Arg{binders_at(e, k), ps[k]});
      Expr inst = eq_congr_formula(pb.theory().signature, d);
      std::size_t congr = pb.add(inst, d);
      std::size_t step = pb.chain(renamed, congr);  // H → T_i-1 = T_i
      if (!acc) {
        acc = step;
        continue;
      }
      // H → T_0 = T_i-1 and H → T_i-1 = T_i give H → T_0 = T_i
      Expr t0 = t_of(0), ta = t_of(i), tb = t_of(i + 1);
      std::size_t trans = append_transitivity(pb, t0, ta, tb);
      Expr A = calc_eq(t0, ta), B = calc_eq(ta, tb), C = calc_eq(t0, tb);
      std::size_t glue = pb.taut(imp(imp(h, A), imp(imp(h, B), imp(imp(A, imp(B, C)), imp(h, C)))));
      acc = pb.mp(trans, pb.mp(step, pb.mp(*acc, glue)));
    }
    return *acc;
  }

  static std::vector<Var> binders_at(const Expr& e, std::size_t k) { return e.args()[k].binders; }

  static std::vector<SortId> sorts_of(const std::vector<Var>& vs) {
    std::vector<SortId> out;
    for (const auto& v : vs) out.push_back(v.sort);
    return out;
  }

  // H = ∀y1..∀yk(r=s) → (r=s) by eliminating each quantifier with itself.
  std::size_t strip_quantifiers() {
    std::size_t line = pb.taut(imp(h, h));
    Expr cur = h;
    while (cur != calc_eq(r, s)) {
      const Arg& a = cur.args()[0];
      const Var y = a.binders[0];
      std::size_t elim = pb.add(imp(cur, a.body), just::ForallElim{y, Expr::variable(y)});
      line = pb.chain(line, elim);
      cur = a.body;
    }
    return line;
  }

  // From H → ∀v⃗ X derive H → ∀z⃗ X[v⃗←z⃗] (z⃗ fresh).
  std::size_t rename(std::size_t h_to_all, const std::vector<Var>& vs, const std::vector<Var>& zs) {
    if (vs.empty()) return h_to_all;
    auto [hh, all] = split_imp(pb.formula(h_to_all));
    std::size_t line = pb.taut(imp(all, all));
    Expr cur = all;
    for (std::size_t j = 0; j < vs.size(); ++j) {
      const Arg& a = cur.args()[0];
      Expr next = substitute(a.body, vs[j], Expr::variable(zs[j]));
      std::size_t elim = pb.add(imp(cur, next), just::ForallElim{vs[j], Expr::variable(zs[j])});
      line = pb.chain(line, elim);
      cur = next;
    }
    for (auto it = zs.rbegin(); it != zs.rend(); ++it) line = pb.gen_under(line, *it);
    return pb.chain(h_to_all, line);
  }
};

}  // namespace

std::size_t append_equality_theorem(ProofBuilder& pb, const Expr& e, const Var& z, const Expr& r, const Expr& s,
                                    const std::vector<Var>& ys) {
  if (r.sort() != z.sort || s.sort() != z.sort)
    throw Error(ErrorKind::SortMismatch, "r and s must have the sort of " + z.name);
  Expr rs = calc_eq(r, s);
  auto g = gv(e);
  for (const auto& v : fv(rs))
    if (g.contains(v) && std::find(ys.begin(), ys.end(), v) == ys.end())
      throw Error(ErrorKind::SideConditionViolated, v.name + " is bound in e, free in r=s and not quantified");
  std::set<Var> avoid = all_vars(e);
  for (const auto* x : {&r, &s}) {
    auto vs = all_vars(*x);
    avoid.insert(vs.begin(), vs.end());
  }
  avoid.insert(ys.begin(), ys.end());
  avoid.insert(z);
  EqThm th{pb, z, r, s, forall_all(ys, rs), std::move(avoid)};
  return th.prove(e);
}

Proof derive_equality_theorem(const Theory& t, const Expr& e, const Var& z, const Expr& r, const Expr& s,
                              const std::vector<Var>& ys) {
  ProofBuilder pb(t);
  append_equality_theorem(pb, e, z, r, s, ys);
  return std::move(pb).finish();
}

Proof derive_equality_rule(const Theory& t, const Expr& e, const Var& z, const Expr& r, const Expr& s) {
  Expr rs = calc_eq(r, s);
  std::vector<Var> ys;
  auto g = gv(e);
  for (const auto& v : fv(rs))
    if (g.contains(v)) ys.push_back(v);
  ProofBuilder pb(t, {rs});
  std::size_t line = pb.premise(0);
  for (auto it = ys.rbegin(); it != ys.rend(); ++it) line = pb.gen(line, *it);
  std::size_t thm = append_equality_theorem(pb, e, z, r, s, ys);
  pb.mp(line, thm);
  return std::move(pb).finish();
}

// ---------------------------------------------------------------------------

Proof deduction_transform(const Proof& p) {
  if (p.premises.empty()) throw Error(ErrorKind::SourceProofInvalid, "no premise to discharge");
  if (auto r = check_proof(p); !r)
    throw Error(ErrorKind::SourceProofInvalid, "line " + std::to_string(r.line + 1) + ": " + r.reason);
  const Expr phi = p.premises.back();
  if (!is_closed(phi)) throw Error(ErrorKind::PremiseNotClosed, print_expr(phi));
  const std::size_t dropped = p.premises.size() - 1;

  ProofBuilder pb(p.theory, std::vector<Expr>(p.premises.begin(), p.premises.end() - 1));
  std::vector<std::size_t> to;  // original line -> line of φ → χ
  for (const auto& line : p.lines) {
    const Expr& chi = line.formula;
    if (auto* pr = std::get_if<just::Premise>(&line.why); pr && pr->index == dropped) {
      to.push_back(pb.taut(imp(phi, phi)));
    } else if (auto* m = std::get_if<just::MP>(&line.why)) {
      const Expr A = p.lines[m->from].formula;
      std::size_t t = pb.taut(imp(imp(phi, imp(A, chi)), imp(imp(phi, A), imp(phi, chi))));
      to.push_back(pb.mp(to[m->from], pb.mp(to[m->impl], t)));
    } else if (auto* g = std::get_if<just::Gen>(&line.why)) {
      to.push_back(pb.gen_under(to[g->from], g->x));
    } else {
      to.push_back(pb.weaken(pb.add(chi, line.why), phi));
    }
  }
  return std::move(pb).finish();
}

}  // namespace fnl
