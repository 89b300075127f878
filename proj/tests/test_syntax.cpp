#include "doctest.h"
#include "hxd/random.hpp"
#include "hxd/syntax.hpp"

using namespace hxd;

namespace {

// Independent size oracle: counts constructor occurrences, Comp excluded.
int count_nodes(const NodeP& e);
int count_nodes(const PathP& a) {
  switch (a->kind) {
    case PathKind::Comp: return count_nodes(a->left) + count_nodes(a->right);
    case PathKind::Test: return 1 + count_nodes(a->cond);
    default: return 1;
  }
}
int count_nodes(const NodeP& e) {
  int n = 1;
  if (e->a) n += count_nodes(e->a);
  if (e->b) n += count_nodes(e->b);
  if (e->left) n += count_nodes(e->left);
  if (e->right) n += count_nodes(e->right);
  return n;
}

}  // namespace

TEST_CASE("parse_node frozen examples") {
  CHECK(equal(parse_node("@I p"), at("I", prop("p"))));
  CHECK(equal(parse_node("<a;b>p"), dia("a", dia("b", prop("p")))));
  NodeP t = imp(bot(), bot());
  // [a ▲ b] abbreviates ~<a ▼ b>, so the box over != holds an = comparison
  CHECK(equal(parse_node("[eps !=c eps]"),
              imp(cmp(CmpPolarity::Eq, "c", test(t), test(t)), bot())));
  CHECK(equal(parse_node("[eps =c eps]"),
              imp(cmp(CmpPolarity::Neq, "c", test(t), test(t)), bot())));
}

TEST_CASE("sugar") {
  NodeP p = prop("p"), q = prop("q");
  CHECK(equal(parse_node("true"), imp(bot(), bot())));
  CHECK(equal(parse_node("~p"), imp(p, bot())));
  CHECK(equal(parse_node("p & q"), imp(imp(p, imp(q, bot())), bot())));
  CHECK(equal(parse_node("p | q"), imp(imp(p, bot()), q)));
  CHECK(equal(parse_node("p <-> q"), conj(imp(p, q), imp(q, p))));
  CHECK(equal(parse_node("<J:>p"), at("J", p)));
  CHECK(equal(parse_node("<q?>p"), conj(q, p)));
  CHECK(equal(parse_node("[a]p"), imp(dia("a", imp(p, bot())), bot())));
  CHECK(equal(parse_node("p -> q -> p"), imp(p, imp(q, p))));
  CHECK(equal(parse_node("p | q | p"), disj(disj(p, q), p)));
  CHECK(equal(parse_node("<a =c b>"), cmp(CmpPolarity::Eq, "c", step("a"), step("b"))));
}

TEST_CASE("parse_path examples") {
  CHECK(equal(parse_path("a"), step("a")));
  CHECK(equal(parse_path("I: ; p?"), comp(go("I"), test(prop("p")))));
  CHECK(equal(parse_path("eps"), test(imp(bot(), bot()))));
  CHECK(equal(parse_path("a;b;c"), comp(step("a"), comp(step("b"), step("c")))));
  CHECK(equal(parse_path("(a;b);c"), comp(comp(step("a"), step("b")), step("c"))));
  CHECK(equal(parse_path("(p -> q)?"), test(imp(prop("p"), prop("q")))));
}

TEST_CASE("printer") {
  CHECK(print_node(at("I", bot())) == "@I false");
  CHECK(print_path(comp(step("a"), go("J"))) == "a ; J:");
  for (const char* s : {"<a =c I:>", "@I (p -> q)", "<a>(p -> <b ; q? !=d J:>)", "(p -> q) -> r"}) {
    NodeP e = parse_node(s);
    CHECK(equal(parse_node(print_node(e)), e));
  }
}

TEST_CASE("parse errors carry position") {
  try {
    parse_node("@I (p -> )");
    FAIL("no error");
  } catch (const ParseError& e) {
    CHECK(e.line == 1);
    CHECK(e.col == 10);
  }
  CHECK_THROWS_AS(parse_node("p $ q"), ParseError);
  CHECK_THROWS_AS(parse_node("<a>a"), ParseError);  // namespace clash
  CHECK_THROWS_AS(parse_node("p q"), ParseError);
  CHECK_THROWS_AS(parse_node("@_g0 p"), ParseError);
  CHECK(equal(parse_node("@_g0 p", {true}), at("_g0", prop("p"))));
}

TEST_CASE("size") {
  CHECK(size(prop("p")) == 1);
  CHECK(size(at("I", bot())) == 2);
  NodeP e = cmp(CmpPolarity::Eq, "c", comp(step("a"), go("I")), test(imp(bot(), bot())));
  CHECK(size(e) == 7);
  CHECK(count_nodes(e) == 7);
  ExprGen g(7);
  for (int k = 0; k < 300; ++k) {
    NodeP x = g.node(12);
    CHECK(int(size(x)) == count_nodes(x));
    CHECK(size(x) <= 12);
  }
}

TEST_CASE("signature_of") {
  Signature s = signature_of(at("I", prop("p")));
  CHECK(s.props == std::set<Ident>{"p"});
  CHECK(s.noms == std::set<Ident>{"I"});
  CHECK(s.mods.empty());
  Signature t = signature_of(cmp(CmpPolarity::Eq, "c", step("a"), go("J")));
  CHECK(t.noms == std::set<Ident>{"J"});
  CHECK(t.mods == std::set<Ident>{"a"});
  CHECK(t.cmps == std::set<Ident>{"c"});
  CHECK(signature_of(bot()) == Signature{});
}

TEST_CASE("flip is an involution") {
  for (auto p : {CmpPolarity::Eq, CmpPolarity::Neq}) CHECK(flip(flip(p)) == p);
  CHECK(flip(CmpPolarity::Eq) == CmpPolarity::Neq);
}

TEST_CASE("round trip on random trees") {
  ExprGen g(42);
  for (int k = 0; k < 500; ++k) {
    NodeP e = g.node(15);
    CHECK(equal(parse_node(print_node(e)), e));
    PathP a = g.path(8);
    CHECK(equal(parse_path(print_path(a)), a));
  }
}

TEST_CASE("diamond_body inverts diamond") {
  ExprGen g(3);
  for (int k = 0; k < 200; ++k) {
    PathP a = g.path(6);
    NodeP b = g.node(5);
    NodeP got = diamond_body(a, diamond(a, b));
    REQUIRE(got);
    CHECK(equal(got, b));
  }
}
