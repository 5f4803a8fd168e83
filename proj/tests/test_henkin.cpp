#include "doctest.h"

#include "fnl/error.hpp"
#include "fnl/henkin.hpp"
#include "fnl/parser.hpp"
#include "fnl/samples.hpp"
#include "fnl/subst.hpp"

using namespace fnl;
using namespace fnl::logic;

namespace {

const SortId kAlpha{"alpha"};

bool is_error(ErrorKind k, auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind() == k;
  }
  return false;
}

Structure two_constants() {
  Signature sig;
  sig.add_sort(kAlpha, true);
  sig.add_op("a", OpSignature{kAlpha, {}});
  sig.add_op("b", OpSignature{kAlpha, {}});
  return make_full_structure(sig, {{kAlpha, {"0", "1"}}},
                             {{"a", OpInterp::constant(0)}, {"b", OpInterp::constant(1)}});
}

}  // namespace

TEST_CASE("enumeration") {
  Structure m = toy_structure();
  Enumerator en(m.signature);
  const auto& terms = en.get(kAlpha, 3);
  // a, b, f(a), f(b), f(f(a)), f(f(b))
  CHECK(terms.size() == 6);
  CHECK(print_expr(terms.front()) == "a");
  for (std::size_t i = 1; i < terms.size(); ++i) CHECK_FALSE(size_lex_less(terms[i], terms[i - 1]));
  const auto& props = en.get(prop_sort(), 2);
  for (const auto& p : props) CHECK(is_closed(p));
  CHECK(std::find(props.begin(), props.end(), parse_expr(m.signature, "forall v0:alpha. true")) != props.end());
  Var x = m.signature.variable(kAlpha, 0);
  for (const auto& p : en.get(prop_sort(), 2, {x}))
    for (const auto& v : fv(p)) CHECK(v == x);
  Enumerator small(m.signature, 10);
  CHECK(is_error(ErrorKind::EnumerationTooLarge, [&] { small.get(prop_sort(), 3); }));
}

TEST_CASE("norms over two constants") {
  Structure m = two_constants();
  TermModelContext ctx(m.signature, theory_oracle(m), 3);
  const Signature& sig = m.signature;
  CHECK(ctx.norm(top()) == top());
  CHECK(ctx.norm(bottom()) == bottom());
  CHECK(ctx.norm(parse_expr(sig, "a = b")) == bottom());
  CHECK(ctx.norm(parse_expr(sig, "b")) == parse_expr(sig, "b"));
  Structure cm = build_term_structure(ctx);
  CHECK(cm.carriers.at(kAlpha) == std::vector<std::string>{"a", "b"});
  CHECK(cm.apply("eq_alpha", {0, 0}) == 1);
  CHECK(cm.apply("eq_alpha", {0, 1}) == 0);
  CHECK(check_closure(cm).ok());
  CHECK(is_error(ErrorKind::NotInClass, [&] { ctx.norm(Expr::variable(sig.variable(kAlpha, 0))); }));
}

TEST_CASE("toy term model") {
  Structure m = toy_structure();
  require_named(m);
  TermModelContext ctx(m.signature, theory_oracle(m), 4);
  Structure cm = build_term_structure(ctx);
  CHECK(cm.size(kAlpha) == 2);
  CHECK(ctx.pgp_checked > 0);
  CHECK(check_closure(cm).ok());

  // norm properties on closed expressions
  std::vector<Expr> closed = ctx.enumerator().get(kAlpha, 4);
  const auto& props = ctx.enumerator().get(prop_sort(), 2);
  closed.insert(closed.end(), props.begin(), props.end());
  for (const auto& e : closed) {
    Expr n = ctx.norm(e);
    CHECK(ctx.decide(calc_eq(n, e)) == Verdict::Provable);
    CHECK(ctx.norm(n) == n);
    if (e.sort() == prop_sort()) CHECK((ctx.decide(e) == Verdict::Provable) == (n == top()));
  }
  for (const auto& a : ctx.enumerator().get(kAlpha, 3))
    for (const auto& b : ctx.enumerator().get(kAlpha, 3))
      CHECK((ctx.decide(eq(a, b)) == Verdict::Provable) == (ctx.norm(a) == ctx.norm(b)));

  Var x = m.signature.variable(kAlpha, 0), y = m.signature.variable(kAlpha, 1);
  for (const auto& e : ctx.enumerator().get(prop_sort(), 2, {x, y}))
    CHECK(check_cm_expr(ctx, cm, e, {x, y}).agree);
  for (const auto& e : ctx.enumerator().get(kAlpha, 3, {x}))
    CHECK(check_cm_expr(ctx, cm, e, {x}).agree);
  for (const auto& phi : props) CHECK(check_ded_sat(ctx, cm, phi).agree);
  CHECK(check_cm_expr(ctx, cm, parse_expr(m.signature, "forall y. y = y"), {}).agree);
  FnTable id = evaluate(cm, Expr::variable(x), Perspective{{x}});
  CHECK(id.rows == Rows{0, 1});

  Structure back = restrict_structure(cm, m.signature);
  CHECK(satisfies(back, parse_expr(m.signature, "f(a) = b")));
  CHECK(satisfies(back, parse_expr(m.signature, "forall x. f(x) = b")));
}

TEST_CASE("unnamed element") {
  Signature sig;
  sig.add_sort(kAlpha, true);
  sig.add_op("a", OpSignature{kAlpha, {}});
  Structure m = make_full_structure(sig, {{kAlpha, {"0", "1"}}}, {{"a", OpInterp::constant(0)}});
  CHECK(is_error(ErrorKind::ElementNotNamed, [&] { require_named(m); }));
}

TEST_CASE("special constants") {
  Structure m = toy_structure();
  const Signature& sig = m.signature;
  Var x{"x", kAlpha};
  Expr phi = parse_expr(sig, "x = x");
  SpecialConstant sc = special_constant(sig, phi, x);
  CHECK(sc.signature.find_op(sc.name));
  Expr c = Expr::apply(sc.signature, sc.name);
  CHECK(sc.axiom == imp(exists(x, phi), eq(c, c)));
  CHECK(special_constant(sig, phi, x).name == sc.name);
  CHECK(special_constant(sc.signature, phi, x).signature == sc.signature);
  Expr closed = parse_expr(sig, "a = b");
  CHECK(special_constant(sig, closed, x).axiom == imp(exists(x, closed), closed));
  CHECK(is_error(ErrorKind::NotSingleFree, [&] { special_constant(sig, parse_expr(sig, "x = y"), x); }));
}

TEST_CASE("henkin extension") {
  Structure m = toy_structure();
  Theory t{m.signature, {parse_expr(m.signature, "f(a) = b")}};
  Theory t0 = henkin_extend(t, 0);
  CHECK(t0.signature == t.signature);
  CHECK(t0.axioms == t.axioms);
  Theory t1 = henkin_extend(t, 1);
  Enumerator en(m.signature);
  std::size_t expected = en.get(prop_sort(), 2, {m.signature.variable(kAlpha, 0)}).size();
  CHECK(t1.axioms.size() == 1 + expected);
  CHECK(extends(t.signature, t1.signature));
  Theory t2 = henkin_extend(t, 2);
  CHECK(std::equal(t1.axioms.begin(), t1.axioms.end(), t2.axioms.begin()));
  CHECK(t2.axioms.size() > t1.axioms.size());

  Structure m1 = expand_henkin_model(m, t1);
  CHECK(satisfies_theory(m1, t1));
  CHECK(restrict_structure(m1, m.signature).interp.size() == m.interp.size());

  // φ[z←c] → ∀z φ for the special constant of ¬φ
  Var z = m.signature.variable(kAlpha, 0);
  std::size_t checked = 0;
  for (const auto& phi : en.get(prop_sort(), 1, {z})) {
    Proof p = derive_henkin_instance(t1, phi, z);
    CHECK(check_proof(p));
    CHECK(satisfies(m1, p.conclusion()));
    ++checked;
  }
  Expr fx = parse_expr(m.signature, "v0:alpha = b");
  Theory t3 = henkin_extend(t, 1, 3);
  Proof p = derive_henkin_instance(t3, fx, z);
  CHECK(satisfies(expand_henkin_model(m, t3), p.conclusion()));
  CHECK(check_proof(p));
  CHECK(check_proof(restrict_to_used_axioms(p)));
  CHECK(used_axioms(p).size() == 1);
  CHECK(checked > 0);
}

TEST_CASE("term model of a Henkin expansion") {
  Structure m = toy_structure();
  Theory t1 = henkin_extend(Theory{m.signature, {}}, 1, 1);
  Structure m1 = expand_henkin_model(m, t1);
  TermModelContext ctx(m1.signature, theory_oracle(m1), 2);
  Structure cm = build_term_structure(ctx);
  for (const auto& phi : ctx.enumerator().get(prop_sort(), 2)) CHECK(check_ded_sat(ctx, cm, phi).agree);
  CHECK(satisfies_theory(cm, t1));
}

TEST_CASE("bounded saturation") {
  Structure m = toy_structure();
  Oracle o = theory_oracle(m);
  Theory t{m.signature, {}};
  Theory s1 = saturate_bounded(t, {top()}, consistency_from(o));
  CHECK(s1.axioms == std::vector<Expr>{top()});
  Expr phi = parse_expr(m.signature, "f(a) = b");
  Theory s2 = saturate_bounded(t, {phi, not_(phi)}, consistency_from(o));
  CHECK(std::count(s2.axioms.begin(), s2.axioms.end(), phi) + std::count(s2.axioms.begin(), s2.axioms.end(), not_(phi)) == 1);
  Enumerator en(m.signature);
  const auto& all = en.get(prop_sort(), 3);
  Theory s3 = saturate_bounded(t, all, consistency_from(o));
  REQUIRE(s3.axioms.size() == all.size());
  for (std::size_t i = 0; i < all.size(); ++i)
    CHECK((s3.axioms[i] == all[i]) == (evaluate(m, all[i], {}).value() == 1));
  Oracle never = [](const Expr&) { return Verdict::Undecided; };
  CHECK(is_error(ErrorKind::OracleUndecided, [&] { saturate_bounded(t, {top()}, consistency_from(never)); }));
}
