#include "doctest.h"
#include "hxd/cutelim.hpp"
#include "hxd/hilbert.hpp"
#include "oracle.hpp"

using namespace hxd;

namespace {

HilbertStep axiom(SchemaId s, Instantiation inst) {
  HilbertStep st;
  st.kind = HilbertStep::Kind::Axiom;
  st.schema = s;
  st.inst = std::move(inst);
  return st;
}

HilbertStep axiom(SchemaId s) { return axiom(s, standard_instantiation(s)); }

Sequent goal_at(const Ident& t, const NodeP& phi) { return Sequent{{}, {sat(t, phi)}}; }

// Uses MP, Nec, Name and Paste; the last formula depends on every step but 4 and 5's inputs.
const char* kMixed = R"(# mixed deduction
1. AXIOM CPL [phi=(@K <a>J & <J:;b =c b>) -> (q -> q)]
2. PASTE 1 K J
3. NEC 2 <L:>
4. AXIOM AtSelfDual [i=L, phi=<K:;a;b =c b> -> q -> q]
5. AXIOM CPL [phi=(~@L(<K:;a;b =c b> -> q -> q) <-> @L ~(<K:;a;b =c b> -> q -> q)) -> ~@L ~(<K:;a;b =c b> -> q -> q) -> @L(<K:;a;b =c b> -> q -> q)]
6. MP 4 5
7. MP 3 6
8. NAME 7 L
9. AXIOM CPL [phi=(<K:;a;b =c b> -> q -> q) -> r -> r]
10. MP 8 9
)";

bool prefixes_monotone(const HilbertProof& p) {
  bool all = true;
  for (std::size_t n = 1; n <= p.size(); ++n)
    all = all && check_hilbert(HilbertProof(p.begin(), p.begin() + n)).ok;
  return all == check_hilbert(p).ok;
}

}  // namespace

TEST_CASE("schema names round trip") {
  for (int k = 0; k < kSchemaCount; ++k) {
    auto s = static_cast<SchemaId>(k);
    CHECK(schema_from_name(schema_name(s)) == s);
  }
  CHECK_FALSE(schema_from_name("Nope"));
}

TEST_CASE("check_hilbert examples") {
  auto eq = check_hilbert({axiom(SchemaId::Equal, {{"c", Ident("c")}})});
  REQUIRE(eq.ok);
  CHECK(equal(eq.formulas[0], parse_node("<eps =c eps>")));
  auto refl = check_hilbert({axiom(SchemaId::AtRefl, {{"i", Ident("I")}})});
  REQUIRE(refl.ok);
  CHECK(equal(refl.formulas[0], parse_node("@I I")));
}

TEST_CASE("schema shapes") {
  auto f = [](const char* text) {
    auto r = check_hilbert(parse_hilbert(text));
    REQUIRE(r.ok);
    return r.formulas.back();
  };
  CHECK(equal(f("1. AXIOM AtDef [i=J, phi=p, c=c]"), parse_node("@J p <-> <J:;p? =c J:;p?>")));
  CHECK(equal(f("1. AXIOM Subpath [alpha=a, beta=b, gamma=a, c=c]"),
              parse_node("<a;b =c a> -> <a>true")));
  CHECK(equal(f("1. AXIOM CompNeutral [beta=b, gamma=a, c=c, op=!=]"),
              parse_node("<eps;b !=c a> <-> <b !=c a>")));
  CHECK(equal(f("1. AXIOM CompNeutral [alpha=a, gamma=a, c=c]"),
              parse_node("<a;eps =c a> <-> <a =c a>")));
  CHECK(equal(f("1. AXIOM Distinct [c=c]"), parse_node("~<eps !=c eps>")));
  CHECK(equal(f("1. AXIOM AtData [i=J, j=K, c=c]"), parse_node("~<J: =c K:> <-> <J: !=c K:>")));
}

TEST_CASE("check_hilbert rejections") {
  auto code = [](const char* text) {
    auto r = check_hilbert(parse_hilbert(text));
    REQUIRE_FALSE(r.ok);
    return r.issues.front().code;
  };
  using C = HilbertError::Code;
  CHECK(code("1. AXIOM CompNeutral [gamma=a, c=c]") == C::SchemaMismatch);
  CHECK(code("1. AXIOM CPL [phi=p -> q]") == C::SchemaMismatch);
  CHECK(code("1. AXIOM K [alpha=a, phi=p]") == C::SchemaMismatch);
  CHECK(code("1. AXIOM CPL [phi=p -> p]\n2. MP 1 1") == C::SchemaMismatch);
  CHECK(code("1. AXIOM CPL [phi=p -> p]\n2. MP 1 3") == C::BadIndex);
  CHECK(code("1. AXIOM AtRefl [i=I]\n2. NAME 1 I") == C::SideCondition);
  CHECK(code("1. AXIOM AtRefl [i=I]\n2. NAME 1 J") == C::SchemaMismatch);
  CHECK(code("1. AXIOM CPL [phi=(@K <a>J & <J: =c b>) -> (J -> J)]\n2. PASTE 1 K J") ==
        C::SideCondition);
  CHECK(code("1. AXIOM CPL [phi=(@K <a>K & <K: =c b>) -> q -> q]\n2. PASTE 1 K K") ==
        C::SideCondition);
  CHECK(code("1. AXIOM CPL [phi=(@K <a>J & <J: =c b>) -> q -> q]\n2. PASTE 1 J K") ==
        C::SchemaMismatch);
}

TEST_CASE("parse_hilbert errors") {
  auto code = [](const char* text) {
    try {
      parse_hilbert(text);
    } catch (const HilbertError& e) {
      return e.code;
    }
    FAIL("no error");
    return HilbertError::Code::NotChecked;
  };
  using C = HilbertError::Code;
  CHECK(code("1. AXIOM Foo") == C::Syntax);
  CHECK(code("2. AXIOM Equal [c=c]") == C::Syntax);
  CHECK(code("1. AXIOM Equal [c=c") == C::Syntax);
  CHECK(code("1. AXIOM Equal [d=c]") == C::Syntax);
  CHECK(code("1. AXIOM K [alpha=a;, phi=p, psi=q]") == C::Syntax);
  CHECK(code("1. MP 1") == C::Syntax);
  CHECK(code("1. NEC 1 a") == C::Syntax);
  CHECK(code("1. NAME 1 I J") == C::Syntax);
}

TEST_CASE("text format round trip") {
  HilbertProof p = parse_hilbert(kMixed);
  REQUIRE(p.size() == 10);
  CHECK(print_hilbert(parse_hilbert(print_hilbert(p))) == print_hilbert(p));
  auto r1 = check_hilbert(p), r2 = check_hilbert(parse_hilbert(print_hilbert(p)));
  REQUIRE(r1.ok);
  REQUIRE(r2.ok);
  for (std::size_t n = 0; n < p.size(); ++n) CHECK(equal(r1.formulas[n], r2.formulas[n]));
}

TEST_CASE("CPL recognition") {
  CHECK(is_cpl_tautology(parse_node("p -> p")));
  CHECK(is_cpl_tautology(parse_node("@I <a>p | ~@I <a>p")));
  CHECK(is_cpl_tautology(parse_node("(p -> q) -> (q -> r) -> p -> r")));
  CHECK_FALSE(is_cpl_tautology(parse_node("p -> q")));
  CHECK_FALSE(is_cpl_tautology(parse_node("<a>p -> <a>(p | q)")));  // modal atoms are opaque
}

TEST_CASE("translate examples") {
  SUBCASE("equal") {
    DerivP d = translate({axiom(SchemaId::Equal, {{"c", Ident("c")}})}, "I");
    auto r = check_derivation(d);
    CHECK(r.proved);
    CHECK(d->conclusion == goal_at("I", parse_node("<eps =c eps>")));
    CHECK(d->rule == RuleId::AtT);
    CHECK(count_rule(d, RuleId::CmpR) == 1);
    CHECK(count_rule(d, RuleId::EqT) == 1);
  }
  SUBCASE("cpl") {
    DerivP d = translate({axiom(SchemaId::CPL, {{"phi", parse_node("p -> p")}})}, "I");
    CHECK(check_derivation(d).proved);
    CHECK(d->conclusion == goal_at("I", parse_node("p -> p")));
  }
  SUBCASE("mp") {
    DerivP d = translate(parse_hilbert("1. AXIOM CPL [phi=p -> p]\n"
                                       "2. AXIOM CPL [phi=(p -> p) -> q -> q]\n"
                                       "3. MP 1 2"),
                         "I");
    auto r = check_derivation(d);
    CHECK(r.proved);
    CHECK(r.cut_count > 0);
    CHECK(d->conclusion == goal_at("I", parse_node("q -> q")));
  }
  SUBCASE("target must be fresh") {
    CHECK_THROWS_AS(translate({axiom(SchemaId::AtRefl, {{"i", Ident("I")}})}, "I"), HilbertError);
    CHECK_THROWS_AS(translate(parse_hilbert("1. AXIOM CPL [phi=p -> p]\n2. MP 1 1"), "I"),
                    HilbertError);
  }
}

TEST_CASE("every schema translates to a proved derivation") {
  for (int k = 0; k < kSchemaCount; ++k) {
    auto s = static_cast<SchemaId>(k);
    std::string name = schema_name(s);
    CAPTURE(name);
    HilbertProof p{axiom(s)};
    auto rep = check_hilbert(p);
    REQUIRE(rep.ok);
    DerivP d = translate(p, "I");
    auto r = check_derivation(d);
    CHECK(r.proved);
    CHECK(r.open_leaves == 0);
    CHECK(d->conclusion == goal_at("I", rep.formulas[0]));
    // soundness cross-check with the independent evaluator
    CHECK(oracle::valid_up_to(d->conclusion, 3));
  }
}

TEST_CASE("CompNeutral variants translate") {
  for (const char* text : {"1. AXIOM CompNeutral [alpha=a, beta=b, gamma=a, c=c, op=!=]",
                           "1. AXIOM CompNeutral [beta=b, gamma=a, c=c]",
                           "1. AXIOM CompNeutral [alpha=a, gamma=b, c=c, op=!=]"}) {
    CAPTURE(text);
    auto p = parse_hilbert(text);
    DerivP d = translate(p, "I");
    CHECK(check_derivation(d).proved);
    CHECK(oracle::valid_up_to(d->conclusion, 2));
  }
}

TEST_CASE("inverse comparisons translate") {
  for (const char* text : {"1. AXIOM CmpComm [alpha=a, beta=J:, c=c, op=!=]",
                           "1. AXIOM Agree [i=J, j=K, alpha=a, beta=a, c=c, op=!=]",
                           "1. AXIOM CmpTest [phi=p, alpha=a;a, beta=eps, c=c]",
                           "1. AXIOM Back [alpha=a, i=J, beta=a, gamma=eps, c=c, op=!=]"}) {
    CAPTURE(text);
    DerivP d = translate(parse_hilbert(text), "I");
    CHECK(check_derivation(d).proved);
    CHECK(oracle::valid_up_to(d->conclusion, 2));
  }
}

TEST_CASE("mixed deduction translates") {
  HilbertProof p = parse_hilbert(kMixed);
  auto rep = check_hilbert(p);
  REQUIRE(rep.ok);
  CHECK(prefixes_monotone(p));
  DerivP d = translate(p, "I");
  auto r = check_derivation(d);
  CHECK(r.proved);
  CHECK(d->conclusion == goal_at("I", parse_node("r -> r")));
  CHECK(count_rule(d, RuleId::CmpL) > 0);  // the Paste step is part of the translation
}

TEST_CASE("prefix monotonicity") {
  std::vector<std::string> proofs = {
      kMixed,
      "1. AXIOM CPL [phi=p -> p]\n2. MP 1 1\n3. AXIOM Equal [c=c]",
      "1. AXIOM Equal [c=c]\n2. NEC 1 <a>\n3. NAME 2 I",
      "1. AXIOM AtRefl [i=I]\n2. AXIOM AtRefl [i=J]\n3. MP 1 2",
  };
  for (const auto& text : proofs) {
    HilbertProof p = parse_hilbert(text);
    CAPTURE(text);
    CHECK(prefixes_monotone(p));
    auto r = check_hilbert(p);
    if (!r.ok) {
      // a prefix ending before the first issue is accepted
      int first = r.issues.front().step;
      CHECK(check_hilbert(HilbertProof(p.begin(), p.begin() + first)).ok == (first > 0));
    }
  }
}

TEST_CASE("translation cut-free: schemas") {
  for (int k = 0; k < kSchemaCount; ++k) {
    auto s = static_cast<SchemaId>(k);
    std::string name = schema_name(s);
    CAPTURE(name);
    DerivP d = translate({axiom(s)}, "I");
    DerivP e;
    CHECK_NOTHROW(e = eliminate_cuts(d));
    if (!e) continue;
    auto r = check_derivation(e);
    CHECK(r.proved);
    CHECK(r.cut_count == 0);
    CHECK(e->conclusion == d->conclusion);
  }
}

TEST_CASE("translation cut-free: mixed deduction") {
  DerivP d = translate(parse_hilbert(kMixed), "I");
  DerivP e;
  CHECK_NOTHROW(e = eliminate_cuts(d));
  if (e) {
    auto r = check_derivation(e);
    CHECK(r.proved);
    CHECK(r.cut_count == 0);
  }
}
