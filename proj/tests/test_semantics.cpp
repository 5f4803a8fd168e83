#include "doctest.h"

#include "fnl/error.hpp"
#include "fnl/parser.hpp"
#include "fnl/samples.hpp"
#include "fnl/subst.hpp"

using namespace fnl;
using namespace fnl::logic;

namespace {

const SortId kAlpha{"alpha"};

Structure two_element(Signature sig = {}) {
  sig.add_sort(kAlpha, true);
  for (auto v : {"x", "y", "u"}) sig.add_variable(v, kAlpha);
  sig.add_op("c", OpSignature{kAlpha, {}});
  std::map<std::string, OpInterp, std::less<>> interp;
  interp.emplace("c", OpInterp::constant(0));
  return make_full_structure(sig, {{kAlpha, {"a", "b"}}}, std::move(interp));
}

Var V(const char* n) { return Var{n, kAlpha}; }

bool is_error(ErrorKind k, auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind() == k;
  }
  return false;
}

}  // namespace

TEST_CASE("boolean structure") {
  Structure s = boolean_structure();
  CHECK(s.size(prop_sort()) == 2);
  CHECK(s.is_full());
  CHECK(evaluate(s, top(), {}).value() == 1);
  CHECK(evaluate(s, bottom(), {}).value() == 0);
  for (Elem a = 0; a < 2; ++a)
    for (Elem b = 0; b < 2; ++b) {
      CHECK(s.apply("imp", {a, b}) == (!a || b));
      CHECK(s.apply("and", {a, b}) == (a && b));
      CHECK(s.apply("or", {a, b}) == (a || b));
      CHECK(s.apply("iff", {a, b}) == (a == b));
    }
  CHECK(s.apply("not", {0}) == 1);
  CHECK(satisfies(s, top()));
  CHECK(satisfies_theory(s, Theory{}));
  CHECK_FALSE(satisfies_theory(s, Theory{Signature{}, {bottom()}}));
}

TEST_CASE("projection picks the rightmost occurrence") {
  Structure s = two_element();
  Perspective p{{V("y"), V("x")}};
  FnTable t = evaluate(s, Expr::variable(V("x")), p);
  // rows (a,a) (a,b) (b,a) (b,b)
  CHECK(t.rows == Rows{0, 1, 0, 1});
  Perspective q{{V("x"), V("y"), V("x")}};
  FnTable r = evaluate(s, Expr::variable(V("x")), q);
  for (std::size_t i = 0; i < r.rows.size(); ++i) CHECK(r.rows[i] == decode_tuple(s, q.sorts(), i)[2]);
  CHECK(evaluate_reference(s, Expr::variable(V("x")), q) == r);
}

TEST_CASE("quantifiers, equality, constants") {
  Structure s = two_element();
  const Signature& sig = s.signature;
  CHECK(evaluate(s, parse_expr(sig, "forall x. x = x"), {}).value() == 1);
  CHECK(evaluate(s, parse_expr(sig, "exists x. false"), {}).value() == 0);
  CHECK_FALSE(satisfies(s, parse_expr(sig, "exists x. false")));
  CHECK(satisfies(s, parse_expr(sig, "x = x")));
  CHECK_FALSE(satisfies(s, parse_expr(sig, "x = y")));
  CHECK(satisfies(s, parse_expr(sig, "exists y. x = y")));
  CHECK_FALSE(satisfies(s, parse_expr(sig, "forall y. x = y")));
  FnTable c = evaluate(s, parse_expr(sig, "c"), Perspective{{V("u")}});
  CHECK(c.rows == Rows{0, 0});
  CHECK(satisfies_theory(s, Theory{sig, {parse_expr(sig, "c = c")}}));
}

TEST_CASE("quantifier and equality functionals exhaustively") {
  for (std::size_t n = 1; n <= 3; ++n) {
    Signature sig;
    sig.add_sort(kAlpha, true);
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) names.push_back("e" + std::to_string(i));
    Structure s = make_full_structure(sig, {{kAlpha, names}}, {});
    for (const auto& t : all_tables(s, prop_sort(), {kAlpha})) {
      bool all = std::all_of(t.begin(), t.end(), [](Elem e) { return e == 1; });
      bool any = std::any_of(t.begin(), t.end(), [](Elem e) { return e == 1; });
      CHECK(s.apply("forall^alpha", t) == all);
      CHECK(s.apply("exists^alpha", t) == any);
    }
    for (Elem a = 0; a < n; ++a)
      for (Elem b = 0; b < n; ++b) CHECK(s.apply("eq_alpha", {a, b}) == (a == b));
  }
}

TEST_CASE("binding operation tables") {
  Signature sig;
  sig.add_sort(kAlpha, true);
  sig.add_op("mu", parse_ustype(sig, "(alpha,(alpha)prop)alpha"));
  // 2 elements times 2^2 predicate tables
  std::size_t count = 0;
  OpInterp mu;
  for (Elem a = 0; a < 2; ++a)
    for (Elem p0 = 0; p0 < 2; ++p0)
      for (Elem p1 = 0; p1 < 2; ++p1) {
        mu.table.emplace(Rows{a, p0, p1}, p1 ? 1 : a);
        ++count;
      }
  CHECK(count == 8);
  Signature full = sig;
  full.add_variable("x", kAlpha);
  full.add_variable("y", kAlpha);
  std::map<std::string, OpInterp, std::less<>> interp{{"mu", mu}};
  Structure s = make_full_structure(full, {{kAlpha, {"a", "b"}}}, interp);
  CHECK(s.apply("mu", {0, 0, 1}) == 1);
  FnTable t = evaluate(s, parse_expr(full, "mu(x, (y): x = y)"), Perspective{{V("x")}});
  CHECK(t.rows == Rows{0, 1});

  auto partial = mu;
  partial.table.erase(Rows{1, 1, 1});
  interp["mu"] = partial;
  CHECK(is_error(ErrorKind::MissingInterpretation, [&] { make_full_structure(full, {{kAlpha, {"a", "b"}}}, interp); }));
  partial.table[Rows{1, 1, 1}] = 7;
  interp["mu"] = partial;
  CHECK(is_error(ErrorKind::InterpretationOutOfCarrier, [&] { make_full_structure(full, {{kAlpha, {"a", "b"}}}, interp); }));
  interp.erase("mu");
  CHECK(is_error(ErrorKind::MissingInterpretation, [&] { make_full_structure(full, {{kAlpha, {"a", "b"}}}, interp); }));
}

TEST_CASE("evaluation errors") {
  Structure s = two_element();
  CHECK(is_error(ErrorKind::NotInPerspective,
                 [&] { evaluate(s, Expr::variable(V("x")), Perspective{{V("y")}}); }));
  Rng rng(4);
  ClosedSample cs = closed_nonfull_sample(rng);
  // a body outside M_alpha^<alpha>: sum over a two-place table is not selected
  Structure broken = cs.nonfull;
  broken.selected[SelKey{kAlpha, {kAlpha}}].clear();
  for (Elem w = 0; w < 3; ++w) broken.selected[SelKey{kAlpha, {kAlpha}}].insert(Rows(3, w));
  Signature& sig = broken.signature;
  sig.add_variable("x", kAlpha);
  Expr e = parse_expr(sig, "sum((x): x)");
  CHECK(is_error(ErrorKind::SelectedSetMiss, [&] { evaluate(broken, e, {}); }));
  CHECK(is_error(ErrorKind::SelectedSetMiss, [&] { evaluate(broken, e, {}, EvalMode::Parallel); }));
  CHECK(is_error(ErrorKind::SelectedSetMiss, [&] { evaluate_reference(broken, e, {}); }));
}

TEST_CASE("closure laws") {
  Rng rng(11);
  for (int i = 0; i < 20; ++i) {
    Signature sig = random_signature(rng);
    CHECK(check_closure(random_full_structure(sig, rng)).ok());
  }
  Structure s = two_element();
  auto& one = s.selected[SelKey{kAlpha, {kAlpha}}];
  for (const auto& t : all_tables(s, kAlpha, {kAlpha}))
    if (t != Rows{0, 1}) one.insert(t);
  auto rep = check_closure(s, ClosureOptions{1});
  CHECK(rep.has(ClosureLaw::Projection));
  CHECK(rep.violations.size() == 1);

  for (int i = 0; i < 10; ++i)
    for (auto law : {ClosureLaw::Constant, ClosureLaw::Projection, ClosureLaw::Fixing, ClosureLaw::Composition}) {
      Mutation m = mutated_structure(law, rng);
      auto r = check_closure(m.structure, m.options);
      REQUIRE_FALSE(r.ok());
      for (const auto& v : r.violations) CHECK(v.law == law);
    }
  for (int i = 0; i < 5; ++i) {
    ClosedSample cs = closed_nonfull_sample(rng);
    auto r = check_closure(cs.nonfull);
    CHECK(r.ok());
    CHECK_FALSE(r.notes.empty());
  }
}

TEST_CASE("compositional, reference and parallel evaluation agree") {
  Rng rng(99);
  for (int i = 0; i < 150; ++i) {
    Signature sig = random_signature(rng);
    Structure s = random_full_structure(sig, rng);
    ExprGen gen(sig, rng, ExprGenConfig{3});
    std::vector<SortId> sorts(sig.sorts().begin(), sig.sorts().end());
    Expr e = gen.expr(sorts[gen.below(sorts.size())], 4);
    Perspective p = covering_perspective(e);
    p = p.extended(gen.var_seq(gen.below(2)));
    if (s.tuple_count(p.sorts()) > 4096) continue;
    FnTable a = evaluate(s, e, p);
    CHECK(a == evaluate_reference(s, e, p));
    CHECK(a == evaluate(s, e, p, EvalMode::Parallel));
    Evaluator ev(s);
    CHECK(ev.eval(e, p) == a);
  }
}

TEST_CASE("closed non-full structure agrees with its completion") {
  Rng rng(5);
  for (int i = 0; i < 40; ++i) {
    ClosedSample cs = closed_nonfull_sample(rng);
    ExprGen gen(cs.nonfull.signature, rng, ExprGenConfig{3});
    for (int k = 0; k < 10; ++k) {
      SortId sort = gen.chance(0.5) ? kAlpha : prop_sort();
      Expr e = gen.expr(sort, 4);
      Perspective p = covering_perspective(e);
      if (p.vars.size() > 3) continue;
      FnTable a = evaluate(cs.nonfull, e, p);
      CHECK(a == evaluate(cs.completion, e, p));
      CHECK(a == evaluate_reference(cs.nonfull, e, p));
      if (sort == kAlpha && !p.vars.empty()) CHECK(cs.nonfull.in_selected(kAlpha, p.sorts(), a.rows));
    }
  }
}

TEST_CASE("restriction") {
  Structure s = toy_structure();
  CHECK(restrict_structure(s, s.signature).interp.size() == s.interp.size());
  Signature small = s.signature;
  small.remove_op("f");
  Structure r = restrict_structure(s, small);
  CHECK_FALSE(r.interp.contains("f"));
  Expr e = parse_expr(small, "forall x. x = a");
  CHECK(satisfies(r, e) == satisfies(s, e));
  Expr g = parse_expr(s.signature, "f(a) = b");
  CHECK(is_error(ErrorKind::ForeignSignature, [&] { sort_of(r.signature, g); }));
  CHECK(is_error(ErrorKind::NotAnExtension, [&] { restrict_structure(r, s.signature); }));
}
