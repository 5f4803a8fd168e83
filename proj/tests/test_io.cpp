#include "doctest.h"

#include <cstdlib>

#include "fnl/derive.hpp"
#include "fnl/error.hpp"
#include "fnl/io.hpp"
#include "fnl/parser.hpp"
#include "fnl/samples.hpp"

using namespace fnl;

namespace {

std::string data(const char* name) {
  const char* dir = std::getenv("FLC_DATA");
  return std::string(dir ? dir : FNL_DATA_DIR) + "/" + name;
}

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error");
  return ErrorKind::Io;
}

std::string message_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("signature text") {
  Signature sig = parse_signature(
      "varsort alpha\nsort beta  # no variables\nop mu : (alpha,(alpha)prop)alpha\nop k : beta\nvar x : alpha\n");
  CHECK(sig.is_var_sort(SortId{"alpha"}));
  CHECK_FALSE(sig.is_var_sort(SortId{"beta"}));
  CHECK(print_ustype(*sig.find_op("mu")) == "(alpha,(alpha)prop)alpha");
  CHECK(parse_signature(write_signature(sig)) == sig);
  CHECK(kind_of([] { parse_signature("op f : (gamma)gamma\n"); }) == ErrorKind::UnknownSort);
  CHECK(message_of([] { parse_signature("varsort a\nfrobnicate\n", "s.fls"); }).find("s.fls:2:") != std::string::npos);
}

TEST_CASE("structure files") {
  Structure toy = load_structure(data("toy.fls"));
  CHECK(toy.size(SortId{"alpha"}) == 2);
  CHECK(toy.apply("f", {0}) == 1);
  Structure again = parse_structure(write_structure(toy));
  CHECK(write_structure(again) == write_structure(toy));

  Structure b = load_structure(data("binder.fls"));
  CHECK(b.apply("mu", {0, 0, 1}) == 1);
  CHECK(evaluate(b, parse_expr(b.signature, "mu(c, (x): not(x = c))"), {}).value() == 1);
  CHECK(write_structure(parse_structure(write_structure(b))) == write_structure(b));

  CHECK(load_structure(data("boolean.fls")).signature.sorts().size() == 1);

  CHECK(kind_of([] { parse_structure("varsort a\ncarrier a = p, q\nop c : a\n"); }) == ErrorKind::MissingInterpretation);
  CHECK(kind_of([] { parse_structure("varsort a\ncarrier a = p\nop c : a\ninterp c = r\n"); }) == ErrorKind::ParseError);
  CHECK(kind_of([] {
          parse_structure("varsort a\ncarrier a = p, q\nop f : (a)a\ninterp f { p -> q }\n");
        }) == ErrorKind::MissingInterpretation);
  CHECK(kind_of([] {
          parse_structure("varsort a\ncarrier a = p, q\nop g : ((a)a)a\ninterp g { {p->q} -> q }\n");
        }) == ErrorKind::ParseError);
  CHECK(message_of([] { parse_structure("varsort a\ncarrier a = p\nop c : a\n\ninterp c = z\n", "m.fls"); })
            .find("m.fls:5:") != std::string::npos);
}

TEST_CASE("random structures round-trip") {
  Rng rng(21);
  for (int i = 0; i < 40; ++i) {
    Signature sig = random_signature(rng);
    Structure s = random_full_structure(sig, rng);
    std::string text = write_structure(s);
    Structure r = parse_structure(text);
    CHECK(write_structure(r) == text);
    CHECK(r.signature == s.signature);
  }
  for (int i = 0; i < 10; ++i) {
    ClosedSample cs = closed_nonfull_sample(rng);
    Structure r = parse_structure(write_structure(cs.nonfull));
    CHECK(r.selected == cs.nonfull.selected);
    CHECK(check_closure(r).ok());
    Structure c = parse_structure(write_structure(cs.completion));
    CHECK(write_structure(c) == write_structure(cs.completion));
  }
  for (auto law : {ClosureLaw::Constant, ClosureLaw::Fixing}) {
    Mutation m = mutated_structure(law, rng);
    Structure r = parse_structure(write_structure(m.structure));
    CHECK(check_closure(r, m.options).has(law));
  }
}

TEST_CASE("theory files") {
  Theory t = load_theory(data("toy.flt"));
  CHECK(t.axioms.size() == 3);
  CHECK(parse_theory(write_theory(t)).axioms == t.axioms);
  CHECK(satisfies_theory(load_structure(data("toy.fls")), t));
  CHECK(kind_of([&] { load_theory(data("malformed.flt")); }) == ErrorKind::ParseError);
  CHECK(message_of([&] { load_theory(data("malformed.flt")); }).find("malformed.flt:3:") != std::string::npos);
  CHECK(kind_of([] { parse_theory("varsort a\nop c : a\naxiom c\n"); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { load_theory("/nonexistent/x.flt"); }) == ErrorKind::Io);
}

TEST_CASE("proof files") {
  Theory t = load_theory(data("toy.flt"));
  Proof p = load_proof(t, data("instance.flp"));
  REQUIRE(p.lines.size() == 4);
  CHECK(check_proof(p));
  CHECK(used_axioms(p) == std::set<std::size_t>{1});
  Proof q = parse_proof(t, write_proof(p));
  CHECK(write_proof(q) == write_proof(p));
  CHECK(check_proof(q));

  CheckResult bad = check_proof(load_proof(t, data("broken_mp.flp")));
  CHECK_FALSE(bad);
  CHECK(bad.line == 1);
  std::string msg = message_of([&] { load_proof(t, data("unknown.flp")); });
  CHECK(msg.find("UnknownSymbol") != std::string::npos);
  CHECK(msg.find("unknown.flp:2:") != std::string::npos);
  CHECK(kind_of([&] { parse_proof(t, "1. a = a ; eq_refl\n3. a = a ; eq_refl\n"); }) == ErrorKind::ParseError);
  CHECK(kind_of([&] { parse_proof(t, "1. a = a ; axiom 9\n"); }) == ErrorKind::ParseError);
  CHECK(kind_of([&] { parse_proof(t, "1. a = a ; mp 1 1\n"); }) == ErrorKind::ParseError);
  CHECK(kind_of([&] { parse_proof(t, "1. a = a ; wibble\n"); }) == ErrorKind::ParseError);
}

TEST_CASE("derived proofs round-trip through text") {
  Theory t = load_theory(data("toy.flt"));
  const Signature& sig = t.signature;
  Expr a = parse_expr(sig, "a"), b = parse_expr(sig, "b"), fa = parse_expr(sig, "f(a)");
  Proof sym = derive_symmetry(t, a, b);
  Proof tr = derive_transitivity(t, a, b, fa);
  for (const Proof* p : {&sym, &tr}) {
    REQUIRE(check_proof(*p));
    Proof q = parse_proof(t, write_proof(*p));
    CHECK(check_proof(q));
    CHECK(write_proof(q) == write_proof(*p));
  }
}
