#include "doctest.h"

#include "fnl/error.hpp"
#include "fnl/parser.hpp"
#include "fnl/random.hpp"
#include "fnl/subst.hpp"

using namespace fnl;

namespace {

Signature toy() {
  Signature s;
  s.add_sort(SortId{"alpha"}, true);
  s.add_sort(SortId{"nu"}, true);
  s.add_variable("x", SortId{"alpha"});
  s.add_variable("y", SortId{"alpha"});
  s.add_variable("n", SortId{"nu"});
  s.add_variable("m", SortId{"nu"});
  s.add_variable("z", SortId{"nu"});
  s.add_op("c", parse_ustype(s, "alpha"));
  s.add_op("d", parse_ustype(s, "alpha"));
  s.add_op("b", parse_ustype(s, "nu"));
  s.add_op("E", parse_ustype(s, "prop"));
  s.add_op("mu_lt", parse_ustype(s, "(nu,(nu)prop)nu"));
  s.add_op("cond", parse_ustype(s, "(prop,alpha,alpha)alpha"));
  s.add_op("PR", parse_ustype(s, "(nu,(nu,nu)nu,nu)nu"));
  s.add_op("P", parse_ustype(s, "(alpha)prop"));
  return s;
}

ErrorKind kind_of(const Signature& s, const char* text) {
  try {
    parse_expr(s, text);
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Io;
}

// Independent GP check: recompute every clause from the signature.
bool gp_ok(const Signature& s, const Expr& e) {
  if (e.head_is_var()) return e.arity() == 0 && s.variable_sort(e.head()) == e.sort();
  const OpSignature* op = s.find_op(e.head());
  if (!op || op->result != e.sort() || op->args.size() != e.arity()) return false;
  for (std::size_t i = 0; i < e.arity(); ++i) {
    const Arg& a = e.args()[i];
    if (a.body.sort() != op->args[i].sort || a.binders.size() != op->args[i].binders.size()) return false;
    for (std::size_t j = 0; j < a.binders.size(); ++j) {
      if (a.binders[j].sort != op->args[i].binders[j]) return false;
      for (std::size_t k = 0; k < j; ++k)
        if (a.binders[k] == a.binders[j]) return false;
    }
    if (!gp_ok(s, a.body)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("parse: bounded minimum") {
  Signature s = toy();
  Expr e = parse_expr(s, "mu_lt(b, (n): E)");
  CHECK(e.sort() == SortId{"nu"});
  CHECK(e.args()[1].binders == std::vector<Var>{Var{"n", SortId{"nu"}}});
}

TEST_CASE("parse: forall sugar and canonical print") {
  Signature s = toy();
  Expr e = parse_expr(s, "forall x. x = x");
  CHECK(e.head() == "forall^alpha");
  CHECK(e.args()[0].binders.size() == 1);
  CHECK(e.args()[0].body.head() == "eq_alpha");
  CHECK(print_expr(e) == "forall^alpha((x): eq_alpha(x,x))");
  CHECK(parse_expr(s, print_expr(e)) == e);
  CHECK(print_expr(parse_expr(s, "c")) == "c");
}

TEST_CASE("parse: primitive recursion and conditional") {
  Signature s = toy();
  CHECK(parse_expr(s, "PR(b,(m,z):mu_lt(m,(n):E),b)").sort() == SortId{"nu"});
  CHECK(sort_of(s, parse_expr(s, "cond(E,c,d)")) == SortId{"alpha"});
  CHECK(sort_of(s, parse_expr(s, "c = d")) == prop_sort());
  CHECK(sort_of(s, Expr::variable(Var{"x", SortId{"alpha"}})) == SortId{"alpha"});
}

TEST_CASE("parse: errors") {
  Signature s = toy();
  CHECK(kind_of(s, "P(b)") == ErrorKind::SortMismatch);
  CHECK(kind_of(s, "P(c,c)") == ErrorKind::ArityMismatch);
  CHECK(kind_of(s, "PR(b,(m,m):b,b)") == ErrorKind::DuplicateBinder);
  CHECK(kind_of(s, "Q(c)") == ErrorKind::UnknownSymbol);
  CHECK(kind_of(s, "c = b") == ErrorKind::AliasAmbiguity);
  CHECK(kind_of(s, "P(c") == ErrorKind::ParseError);
  CHECK(kind_of(s, "P(c) junk") == ErrorKind::ParseError);
}

TEST_CASE("sort_of: foreign symbols") {
  Signature s = toy();
  Signature t = s;
  t.add_op("e", parse_ustype(t, "alpha"));
  Expr e = parse_expr(t, "P(e)");
  CHECK_THROWS_AS(sort_of(s, e), Error);
}

TEST_CASE("perspectives and classes") {
  Signature s = toy();
  Var x{"x", SortId{"alpha"}}, y{"y", SortId{"alpha"}};
  Expr ex = Expr::variable(x);
  CHECK(perspectives_member(ex, Perspective{{x}}));
  CHECK_FALSE(perspectives_member(ex, Perspective{}));
  Expr q = parse_expr(s, "forall^alpha((x): eq_alpha(x,y))");
  CHECK(perspectives_member(q, Perspective{{y}}));
  CHECK_FALSE(perspectives_member(q, Perspective{}));
  CHECK(in_class(parse_expr(s, "c"), Perspective{}));
  CHECK_FALSE(in_class(parse_expr(s, "x = y"), Perspective{{x}}));
  CHECK(in_class(parse_expr(s, "P(x)"), Perspective{{x, x}}));

  auto w = pgp_decompose(parse_expr(s, "forall x. P(x)"), Perspective{});
  CHECK(w.head == "forall^alpha");
  CHECK(w.args[0].perspective == Perspective{{x}});
  CHECK(pgp_decompose(ex, Perspective{{x}}).args.empty());
  CHECK_THROWS_AS(pgp_decompose(ex, Perspective{}), Error);
}

TEST_CASE("fresh_vars") {
  Signature s = toy();
  SortId a{"alpha"};
  CHECK(fresh_vars(s, {a}, {}) == std::vector<Var>{s.variable(a, 0)});
  CHECK(fresh_vars(s, {a}, {s.variable(a, 0)}) == std::vector<Var>{s.variable(a, 1)});
  auto two = fresh_vars(s, {a, a}, {});
  CHECK(two[0] != two[1]);
}

TEST_CASE("random expressions: GP, round trip, perspective properties") {
  for (std::uint64_t k = 0; k < 200; ++k) {
    Rng rng(case_seed(11, k));
    Signature s = random_signature(rng);
    ExprGen gen(s, rng);
    std::vector<SortId> sorts(s.sorts().begin(), s.sorts().end());
    for (int i = 0; i < 50; ++i) {
      Expr e = gen.expr(sorts[gen.below(sorts.size())], 1 + gen.below(5));
      Expr back = parse_expr(s, print_expr(e));
      REQUIRE(back == e);
      CHECK(gp_ok(s, back));
      auto f = fv(e);
      std::vector<Var> cover(f.begin(), f.end());
      Perspective p{cover};
      CHECK(in_class(e, p));
      CHECK(perspectives_member(e, p.extended(gen.var_seq(gen.below(3)))));
      Perspective q{gen.var_seq(gen.below(4))};
      bool covered = std::all_of(f.begin(), f.end(), [&](const Var& v) {
        return std::find(q.vars.begin(), q.vars.end(), v) != q.vars.end();
      });
      CHECK(in_class(e, q) == covered);
    }
  }
}
