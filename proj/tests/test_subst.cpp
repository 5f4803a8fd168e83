#include "doctest.h"

#include <map>

#include "fnl/parser.hpp"
#include "fnl/random.hpp"
#include "fnl/subst.hpp"

using namespace fnl;

namespace {

Signature toy() {
  Signature s;
  s.add_sort(SortId{"alpha"}, true);
  s.add_variable("x", SortId{"alpha"});
  s.add_variable("y", SortId{"alpha"});
  s.add_op("a", OpSignature{SortId{"alpha"}, {}});
  s.add_op("b", OpSignature{SortId{"alpha"}, {}});
  s.add_op("c", OpSignature{SortId{"alpha"}, {}});
  s.add_op("P", parse_ustype(s, "(alpha)prop"));
  s.add_op("op", parse_ustype(s, "((alpha)prop,(alpha)prop)prop"));
  return s;
}

// Reference substitution: a map from variables to replacements, with bound
// variables removed from the map below their binder.
Expr filtered(const Expr& e, std::map<Var, Expr> m) {
  if (e.head_is_var()) {
    auto it = m.find(e.as_var());
    return it == m.end() ? e : it->second;
  }
  std::vector<Arg> args;
  for (const auto& a : e.args()) {
    auto inner = m;
    for (const auto& v : a.binders) inner.erase(v);
    args.push_back(Arg{a.binders, filtered(a.body, inner)});
  }
  return Expr::make_unchecked(e.head(), false, e.sort(), std::move(args));
}

// Head and binder lists at every non-leaf node.
void skeleton(const Expr& e, std::vector<std::string>& out) {
  if (e.arity() == 0) return;
  out.push_back(e.head());
  for (const auto& a : e.args()) {
    for (const auto& v : a.binders) out.push_back(v.name);
    skeleton(a.body, out);
  }
}

}  // namespace

TEST_CASE("fv and gv") {
  Signature s = toy();
  Var x{"x", SortId{"alpha"}}, y{"y", SortId{"alpha"}};
  CHECK(fv(parse_expr(s, "x")) == std::set<Var>{x});
  CHECK(gv(parse_expr(s, "x")).empty());
  Expr q = parse_expr(s, "forall x. x = y");
  CHECK(fv(q) == std::set<Var>{y});
  CHECK(gv(q) == std::set<Var>{x});
  CHECK(fv(parse_expr(s, "c")).empty());
  CHECK(gv(parse_expr(s, "op((x): true, (y): false)")) == std::set<Var>{x, y});
}

TEST_CASE("substitutable") {
  Signature s = toy();
  Var x{"x", SortId{"alpha"}};
  Expr y = parse_expr(s, "y");
  CHECK(substitutable(parse_expr(s, "c"), x, parse_expr(s, "forall y. x = y")));
  CHECK_FALSE(substitutable(y, x, parse_expr(s, "forall y. x = y")));
  CHECK(substitutable(y, x, parse_expr(s, "x")));
  CHECK(substitutable(y, x, parse_expr(s, "forall x. forall y. x = y")));
}

TEST_CASE("substitute") {
  Signature s = toy();
  Var x{"x", SortId{"alpha"}}, y{"y", SortId{"alpha"}};
  SubstMap m({x, x}, {parse_expr(s, "a"), parse_expr(s, "b")});
  CHECK(substitute(parse_expr(s, "x"), m) == parse_expr(s, "b"));
  CHECK(substitute(parse_expr(s, "forall x. x = y"), y, parse_expr(s, "c")) ==
        parse_expr(s, "forall x. x = c"));
  Expr e = parse_expr(s, "op((x): P(y), (y): P(x))");
  CHECK(substitute(e, SubstMap{}) == e);
  CHECK(substitute(e, SubstMap({x, y}, {parse_expr(s, "a"), parse_expr(s, "b")})) ==
        parse_expr(s, "op((x): P(b), (y): P(a))"));
  CHECK_THROWS(substitute(e, x, parse_expr(s, "true")));
}

TEST_CASE("alpha_equiv") {
  Signature s = toy();
  CHECK(alpha_equiv(parse_expr(s, "forall x. P(x)"), parse_expr(s, "forall y. P(y)")));
  CHECK_FALSE(alpha_equiv(parse_expr(s, "forall x. P(x)"), parse_expr(s, "forall x. P(c)")));
  CHECK_FALSE(alpha_equiv(parse_expr(s, "forall x. P(y)"), parse_expr(s, "forall y. P(y)")));
  Expr e = parse_expr(s, "op((x): P(y), (y): P(x))");
  CHECK(alpha_equiv(e, e));
}

TEST_CASE("substitution against the filtering reference") {
  for (std::uint64_t i = 0; i < 2000; ++i) {
    Rng rng(case_seed(41, i));
    Signature sig = random_signature(rng);
    ExprGen gen(sig, rng);
    std::vector<SortId> sorts(sig.sorts().begin(), sig.sorts().end());
    Expr e = gen.expr(sorts[gen.below(sorts.size())], 2 + gen.below(4));
    std::vector<Var> xs;
    std::vector<Expr> ds;
    std::map<Var, Expr> m;
    const auto vars = all_vars(e);
    for (std::size_t k = 1 + gen.below(3); k > 0; --k) {
      Var x = !vars.empty() && gen.chance(0.7) ? *std::next(vars.begin(), gen.below(vars.size())) : gen.var(gen.all_pool()[0].sort);
      Expr d = gen.expr(x.sort, 1 + gen.below(3));
      xs.push_back(x);
      ds.push_back(d);
      m.insert_or_assign(x, d);  // later pairs win
    }
    Expr got = substitute(e, SubstMap(xs, ds));
    CHECK(got == filtered(e, m));

    std::vector<std::string> before, after;
    skeleton(e, before);
    // variables replaced at leaves do not add nodes above them
    if (std::all_of(ds.begin(), ds.end(), [](const Expr& d) { return d.arity() == 0; })) {
      skeleton(got, after);
      CHECK(before == after);
    }
    const auto g = gv(got);
    for (const auto& v : gv(e)) CHECK(g.contains(v));
  }
}

TEST_CASE("closed expressions are substitutable everywhere") {
  for (std::uint64_t i = 0; i < 1000; ++i) {
    Rng rng(case_seed(43, i));
    Signature sig = random_signature(rng);
    ExprGen gen(sig, rng);
    std::vector<SortId> sorts(sig.sorts().begin(), sig.sorts().end());
    Expr e = gen.expr(sorts[gen.below(sorts.size())], 4);
    auto pool = gen.all_pool();
    Var x = pool[gen.below(pool.size())];
    CHECK(substitutable(gen.closed(x.sort, 3), x, e));
    CHECK(alpha_equiv(e, e));
  }
}

TEST_CASE("no renaming at binders") {
  // y is captured; substitutability is what rules such instances out
  Signature s = toy();
  const SortId a{"alpha"};
  Var x{"x", a}, y{"y", a};
  Expr e = parse_expr(s, "forall y. x = y");
  Expr r = Expr::variable(y);
  CHECK(substitute(e, x, r) == parse_expr(s, "forall y. y = y"));
  CHECK_FALSE(substitutable(r, x, e));
  CHECK(substitute(e, SubstMap({x, y}, {r, parse_expr(s, "c")})) == parse_expr(s, "forall y. y = y"));
}
