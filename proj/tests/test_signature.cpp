#include "doctest.h"

#include <random>

#include "fnl/error.hpp"
#include "fnl/signature.hpp"

using namespace fnl;

namespace {

Signature alpha_sig() {
  Signature s;
  s.add_sort(SortId{"alpha"}, true);
  return s;
}

}  // namespace

TEST_CASE("parse_ustype: quantifier shape") {
  Signature s = alpha_sig();
  OpSignature op = parse_ustype(s, "((alpha)π)π");
  CHECK(op.result == prop_sort());
  REQUIRE(op.args.size() == 1);
  CHECK(op.args[0].sort == prop_sort());
  REQUIRE(op.args[0].binders.size() == 1);
  CHECK(op.args[0].binders[0] == SortId{"alpha"});
  CHECK(op == s.distinguished().at("forall^alpha"));
}

TEST_CASE("parse_ustype: bounded minimum operator") {
  Signature s;
  s.add_sort(SortId{"nu"}, true);
  OpSignature op = parse_ustype(s, "(nu,(nu)prop)nu");
  CHECK(op.result == SortId{"nu"});
  REQUIRE(op.args.size() == 2);
  CHECK(op.args[0] == ArgSlot{SortId{"nu"}, {}});
  CHECK(op.args[1] == ArgSlot{prop_sort(), {SortId{"nu"}}});
}

TEST_CASE("parse_ustype: constant and errors") {
  Signature s = alpha_sig();
  s.add_sort(SortId{"beta"}, false);
  CHECK(parse_ustype(s, "π").args.empty());
  auto kind = [&](const char* t) {
    try {
      parse_ustype(s, t);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::Io;
  };
  CHECK(kind("gamma") == ErrorKind::UnknownSort);
  CHECK(kind("(alpha") == ErrorKind::MalformedUstype);
  CHECK(kind("()alpha") == ErrorKind::MalformedUstype);
  CHECK(kind("alpha)") == ErrorKind::MalformedUstype);
  CHECK(kind("((beta)alpha)alpha") == ErrorKind::BinderSortNotInVSRT);
}

TEST_CASE("validate_signature") {
  Signature s;
  CHECK(validate_signature(s).empty());

  Signature clash = alpha_sig();
  clash.add_variable("x", SortId{"alpha"});
  clash.add_op("x", OpSignature{SortId{"alpha"}, {}});
  auto v = validate_signature(clash);
  REQUIRE(!v.empty());
  CHECK(v[0].find("VAR ∩ SOP nonempty") != std::string::npos);

  Signature bad = alpha_sig();
  bad.add_op("forall^alpha", parse_ustype(bad, "(π)π"));
  v = validate_signature(bad);
  REQUIRE(v.size() == 1);
  CHECK(v[0].find("distinguished ustype mismatch") != std::string::npos);
}

TEST_CASE("extends") {
  Signature s = alpha_sig();
  CHECK(extends(s, s));
  Signature t = s;
  t.add_op("c", OpSignature{prop_sort(), {}});
  CHECK(extends(s, t));
  CHECK_FALSE(extends(t, s));
  Signature u = s;
  u.add_op("c", OpSignature{SortId{"alpha"}, {}});
  CHECK_FALSE(extends(t, u));
}

TEST_CASE("print/parse round trip on random ustypes") {
  Signature s = alpha_sig();
  s.add_sort(SortId{"beta"}, true);
  s.add_sort(SortId{"gamma"}, false);
  std::vector<SortId> all(s.sorts().begin(), s.sorts().end());
  std::vector<SortId> vs(s.var_sorts().begin(), s.var_sorts().end());
  std::mt19937_64 rng(7);
  auto pick = [&](const std::vector<SortId>& xs) { return xs[rng() % xs.size()]; };
  for (int n = 0; n < 2000; ++n) {
    OpSignature op{pick(all), {}};
    std::size_t m = rng() % 4;
    for (std::size_t i = 0; i < m; ++i) {
      ArgSlot slot{pick(all), {}};
      std::size_t r = rng() % 3;
      for (std::size_t j = 0; j < r; ++j) slot.binders.push_back(pick(vs));
      op.args.push_back(slot);
    }
    std::string text = print_ustype(op);
    CHECK(parse_ustype(s, text) == op);
    CHECK(print_ustype(parse_ustype(s, text)) == text);
  }
}

TEST_CASE("variable family is deterministic and injective") {
  Signature s = alpha_sig();
  std::set<std::string> seen;
  for (std::size_t n = 0; n < 500; ++n) {
    Var v = s.variable(SortId{"alpha"}, n);
    CHECK(v == s.variable(SortId{"alpha"}, n));
    CHECK(seen.insert(v.name).second);
    CHECK(s.variable_sort(v.name) == SortId{"alpha"});
  }
}
