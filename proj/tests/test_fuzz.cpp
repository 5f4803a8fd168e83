#include "doctest.h"

#include <stdexcept>

#include "fnl/fuzz.hpp"
#include "fnl/parser.hpp"
#include "fnl/samples.hpp"

using namespace fnl;

TEST_CASE("every suite passes a short run") {
  for (const auto& name : suite_names()) {
    CAPTURE(name);
    SuiteReport r = run_suite(name, {.cases = 150, .seed = 3});
    CHECK(r.cases == 150);
    std::size_t sum = 0;
    for (const auto& [law, n] : r.law_cases) sum += n;
    CHECK(sum == 150);
    if (r.first) MESSAGE(r.first->law << ": " << r.first->detail);
    CHECK(r.ok());
  }
}

TEST_CASE("subst suite spreads cases over all laws") {
  SuiteReport r = run_suite("subst", {.cases = 70, .seed = 9});
  CHECK(r.law_cases.size() == 7);
  for (const auto& [law, n] : r.law_cases) CHECK(n == 10);
}

TEST_CASE("reports do not depend on sharding") {
  for (const auto& name : suite_names()) {
    CAPTURE(name);
    SuiteReport a = run_suite(name, {.cases = 120, .seed = 11, .parallel = true});
    SuiteReport b = run_suite(name, {.cases = 120, .seed = 11, .parallel = false});
    CHECK(a.same_outcome(b));
  }
}

TEST_CASE("unknown suite") {
  CHECK_FALSE(is_suite("nope"));
  CHECK_THROWS_AS(run_suite("nope", {}), std::invalid_argument);
}

TEST_CASE("shrinking keeps the failure and removes structure") {
  Structure m = toy_structure();
  const Signature& sig = m.signature;
  Expr e = parse_expr(sig, "and(f(f(x)) = b, or(not(a = b), f(a) = a))");
  auto has_f_of_a = [](const Expr& x) { return print_expr(x).find("f(a)") != std::string::npos; };
  REQUIRE(has_f_of_a(e));
  Expr s = shrink_expr(sig, e, has_f_of_a);
  CHECK(has_f_of_a(s));
  CHECK(s.size() < e.size());
  CHECK(print_expr(s).size() <= print_expr(e).size());
}

TEST_CASE("random proofs check and are satisfied") {
  for (std::uint64_t i = 0; i < 40; ++i) {
    Rng rng(case_seed(5, i));
    Signature sig = random_signature(rng);
    Structure m = random_full_structure(sig, rng, 3);
    ExprGen gen(sig, rng, ExprGenConfig{3});
    Theory t{sig, random_true_formulas(m, gen, 2)};
    for (const auto& a : t.axioms) CHECK(satisfies(m, a));
    Proof p = random_proof(t, {}, gen, 15);
    CHECK(p.lines.size() >= 15);
    CHECK(check_proof(p));
    for (const auto& l : p.lines) CHECK(satisfies(m, l.formula));
  }
}
