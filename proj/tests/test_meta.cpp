#include <functional>

#include "doctest.h"
#include "hxd/meta.hpp"
#include "hxd/random.hpp"
#include "oracle.hpp"

using namespace hxd;

namespace {

Sequent S(const char* t) { return parse_sequent(t); }
LabeledExpr F(const char* t) { return parse_labeled(t); }

void open_leaves(const DerivP& d, std::vector<Sequent>& out) {
  if (d->rule == RuleId::Open) out.push_back(d->conclusion);
  for (const auto& c : d->children) open_leaves(c, out);
}

struct Case {
  DerivedRuleId rule;
  const char* conclusion;
  std::vector<const char*> principal;
  const char* path = nullptr;
  std::vector<Ident> fresh = {};
  std::vector<Ident> witness = {};
  const char* cut = nullptr;
};

RuleParams params_of(const Case& c) {
  RuleParams p;
  for (const char* f : c.principal) p.principal.push_back(F(f));
  if (c.path) p.path = parse_path(c.path, {true});
  p.fresh = c.fresh;
  p.witness = c.witness;
  if (c.cut) p.cut = F(c.cut);
  return p;
}

const std::vector<Case>& cases() {
  static const std::vector<Case> cs = {
      {DerivedRuleId::AxGen, "@I (p -> <a>q) |- @I (p -> <a>q)", {"@I (p -> <a>q)"}},
      {DerivedRuleId::AxGen, "@I <a ; J: =c p?> |- @I <a ; J: =c p?>", {"@I <a ; J: =c p?>"}},
      {DerivedRuleId::AxGen, "<I !=c J> |- <I !=c J>", {"<I !=c J>"}},
      {DerivedRuleId::AxGen, "@I @J <a>K |- @I @J <a>K", {"@I @J <a>K"}},
      {DerivedRuleId::TopL, "|- @I p", {"@I true"}},
      {DerivedRuleId::NegL, "@I ~p |- @J q", {"@I ~p"}},
      {DerivedRuleId::NegR, "|- @I ~p", {"@I ~p"}},
      {DerivedRuleId::AndL, "@I (p & q) |-", {"@I (p & q)"}},
      {DerivedRuleId::AndR, "|- @I (p & q)", {"@I (p & q)"}},
      {DerivedRuleId::IffL, "@I (p <-> q) |- @J p", {"@I (p <-> q)"}},
      {DerivedRuleId::IffR, "|- @I (p <-> q)", {"@I (p <-> q)"}},
      {DerivedRuleId::MP, "|- @I q", {"@I q"}, nullptr, {}, {}, "@I p"},
      {DerivedRuleId::DiaPathL, "@I <a ; J: ; p? ; a> q |-", {"@I <a ; J: ; p? ; a> q"}, "a ; J: ; p? ; a", {"K"}},
      {DerivedRuleId::DiaPathL, "@I <(a ; a) ; p?> q |-", {"@I <(a ; a) ; p?> q"}, "(a ; a) ; p?"},
      {DerivedRuleId::DiaPathR, "@I <a ; a>J |- @I <a ; a> q", {"@I <a ; a> q"}, "a ; a", {}, {"J"}},
      {DerivedRuleId::DiaPathR, "@I <K: ; p?>J |- @I <K: ; p?> q", {"@I <K: ; p?> q"}, "K: ; p?", {}, {"J"}},
      {DerivedRuleId::S1Gen, "@I J, @I (p -> <a>q) |-", {"@I J", "@I (p -> <a>q)"}},
      {DerivedRuleId::S1Gen, "@I J, @I <a =c K:> |-", {"@I J", "@I <a =c K:>"}},
      {DerivedRuleId::S1Gen, "@I J, @I @K p |-", {"@I J", "@I @K p"}},
      {DerivedRuleId::S2Gen, "@J K, @I <a ; a>J |-", {"@J K", "@I <a ; a>J"}, "a ; a"},
      {DerivedRuleId::S2Gen, "@J K, @I <K: ; p?>J |-", {"@J K", "@I <K: ; p?>J"}, "K: ; p?"},
      {DerivedRuleId::S3Gen, "@I J, <I !=c K> |-", {"@I J", "<I !=c K>"}},
      {DerivedRuleId::S3Gen, "@I J, <I =c K> |-", {"@I J", "<I =c K>"}},
      {DerivedRuleId::AtB, "@J I |- @K p", {"@J I"}},
      {DerivedRuleId::AtCmpL, "@K <I: =c J:> |-", {"@K <I: =c J:>"}},
      {DerivedRuleId::AtCmpL, "@K <I: !=c J:> |-", {"@K <I: !=c J:>"}},
      {DerivedRuleId::AtCmpR, "|- @K <I: !=c J:>", {"@K <I: !=c J:>"}},
      {DerivedRuleId::CmpB, "<I !=c J> |-", {"<I !=c J>"}},
      {DerivedRuleId::CmpB, "<I =c J> |-", {"<I =c J>"}},
      {DerivedRuleId::BoxCmpL, "@I [a =c a], @I <a>J, @I <a>K |-", {"@I [a =c a]"}, nullptr, {}, {"J", "K"}},
      {DerivedRuleId::BoxCmpL, "@I [a !=c a], @I <a>J, @I <a>K |-", {"@I [a !=c a]"}, nullptr, {}, {"J", "K"}},
      {DerivedRuleId::BoxCmpR, "|- @I [a =c a ; a]", {"@I [a =c a ; a]"}},
      {DerivedRuleId::BoxCmpR, "|- @I [a !=c a ; a]", {"@I [a !=c a ; a]"}},
  };
  return cs;
}

bool has_eigen(DerivedRuleId r) {
  return r == DerivedRuleId::DiaPathL || r == DerivedRuleId::BoxCmpR;
}

}  // namespace

TEST_CASE("every derived rule expands to a well-formed derivation") {
  for (const auto& c : cases()) {
    CAPTURE(derived_name(c.rule));
    CAPTURE(c.conclusion);
    Sequent concl = S(c.conclusion);
    RuleParams p = params_of(c);
    auto prem = derived_premisses(c.rule, concl, p);
    DerivP d = expand_derived(c.rule, concl, p, prem);
    auto rep = check_derivation(d);
    CHECK(rep.well_formed);
    if (!rep.well_formed) MESSAGE(rep.error << " at " << path_string(rep.error_path));
    CHECK(d->conclusion == concl);
    std::vector<Sequent> leaves;
    open_leaves(d, leaves);
    for (const auto& l : leaves) {
      bool known = false;
      for (const auto& s : prem) known = known || l == s;
      CHECK(known);
    }
    CHECK(rep.proved == prem.empty());
  }
}

TEST_CASE("derived rules are sound model by model") {
  // if every premiss holds in a model so does the conclusion (rules without eigen-nominals)
  for (const auto& c : cases()) {
    if (has_eigen(c.rule)) continue;
    CAPTURE(derived_name(c.rule));
    Sequent concl = S(c.conclusion);
    auto prem = derived_premisses(c.rule, concl, params_of(c));
    Signature sig = signature_of(concl);
    for (const auto& s : prem) sig.merge(signature_of(s));
    for_each_model(sig, 2, [&](const HybridDataModel& m) {
      bool all = true;
      for (const auto& s : prem) all = all && oracle::valid_in(m, s);
      if (all) CHECK(oracle::valid_in(m, concl));
      return true;
    });
  }
}

TEST_CASE("NegR template shape") {
  Sequent c = S("|- @I ~p");
  RuleParams p;
  p.principal = {F("@I ~p")};
  DerivP d = expand_derived(DerivedRuleId::NegR, c, p, {S("@I p |-")});
  CHECK(d->rule == RuleId::ImpR);
  REQUIRE(d->children.size() == 1);
  CHECK(d->children[0]->rule == RuleId::WR);
  CHECK(d->children[0]->children[0]->rule == RuleId::Open);
  CHECK(d->children[0]->children[0]->conclusion == S("@I p |-"));
}

TEST_CASE("AtB template uses AtT, At5 and WL") {
  Sequent c = S("@J I |- @K p");
  RuleParams p;
  p.principal = {F("@J I")};
  DerivP d = expand_derived(DerivedRuleId::AtB, c, p);
  CHECK(d->rule == RuleId::AtT);
  CHECK(d->children[0]->rule == RuleId::At5);
  CHECK(count_rule(d, RuleId::WL) == 2);
  CHECK(check_derivation(d).well_formed);
}

TEST_CASE("stubs may be smaller than the premiss") {
  Sequent c = S("@I ~p |- @J q");
  RuleParams p;
  p.principal = {F("@I ~p")};
  DerivP d = expand_derived(DerivedRuleId::NegL, c, p, {S("|- @I p")});
  CHECK(check_derivation(d).well_formed);
  CHECK_THROWS_AS(expand_derived(DerivedRuleId::NegL, c, p, {S("@K p |- @I p")}), MetaError);
  CHECK_THROWS_AS(expand_derived(DerivedRuleId::NegL, c, p, {S("|- @I p"), S("|-")}), MetaError);
  RuleParams bad;
  bad.principal = {F("@I p")};
  CHECK_THROWS_AS(expand_derived(DerivedRuleId::NegL, S("@I p |-"), bad), MetaError);
}

TEST_CASE("AxGen expansion is linear in the formula size") {
  ExprGen g(17);
  for (int k = 0; k < 300; ++k) {
    LabeledExpr f = g.labeled(14);
    Sequent s{FormulaSet{f}, FormulaSet{f}};
    DerivP d = axiom_gen(s, f);
    auto rep = check_derivation(d);
    CHECK(rep.proved);
    CHECK(rep.nodes <= 4 * int(size(f)));
  }
}

TEST_CASE("invert") {
  // ImpR: from a proof of @I q |- @I(p -> q) to one of @I p, @I q |- @I q
  Sequent c = S("@I q |- @I (p -> q)");
  RuleParams ip;
  ip.principal = {F("@I (p -> q)")};
  DerivP given = make_deriv(RuleId::ImpR, c, ip,
                            {make_deriv(RuleId::Ax, S("@I p, @I q |- @I q"), {{F("@I q")}})});
  REQUIRE(check_derivation(given).proved);
  auto out = invert(RuleId::ImpR, ip, given);
  REQUIRE(out.size() == 1);
  CHECK(out[0]->conclusion == S("@I p, @I q |- @I q"));
  auto rep = check_derivation(out[0]);
  CHECK(rep.proved);
  CHECK(rep.cut_count == 1);

  // NEqL over an open leaf
  RuleParams np;
  np.principal = {F("<I !=c J>")};
  auto neq = invert(RuleId::NEqL, np, open_leaf(S("<I !=c J> |-")));
  REQUIRE(neq.size() == 1);
  CHECK(neq[0]->conclusion == S("|- <I =c J>"));
  CHECK(check_derivation(neq[0]).well_formed);

  // EqT by weakening
  RuleParams ep;
  ep.principal = {F("<I =c I>")};
  DerivP ax = make_deriv(RuleId::Ax, S("@I p |- @I p"), {{F("@I p")}});
  auto eq = invert(RuleId::EqT, ep, ax);
  REQUIRE(eq.size() == 1);
  CHECK(eq[0]->rule == RuleId::WL);
  CHECK(eq[0]->conclusion == S("<I =c I>, @I p |- @I p"));
  CHECK(check_derivation(eq[0]).proved);

  CHECK_THROWS_AS(invert(RuleId::Cut, ep, ax), MetaError);
  CHECK_THROWS_AS(invert(RuleId::ImpR, ip, ax), MetaError);
}

TEST_CASE("invert every rule over an open conclusion") {
  struct Inst {
    RuleId r;
    const char* concl;
    std::vector<const char*> principal;
    std::vector<Ident> fresh = {};
    std::vector<Ident> witness = {};
  };
  std::vector<Inst> xs = {
      {RuleId::ImpL, "@I (p -> q) |- @J r", {"@I (p -> q)"}},
      {RuleId::ImpR, "|- @I (p -> <a>q)", {"@I (p -> <a>q)"}},
      {RuleId::AtL, "@I @J p |-", {"@I @J p"}},
      {RuleId::AtR, "|- @I @J (p -> p)", {"@I @J (p -> p)"}},
      {RuleId::DiaL, "@I <a>(p -> q) |-", {"@I <a>(p -> q)"}, {"K"}},
      {RuleId::CmpL, "@I <a ; a =c I:> |-", {"@I <a ; a =c I:>"}, {"J", "K"}},
      {RuleId::NEqL, "<I !=c J> |-", {"<I !=c J>"}},
      {RuleId::NEqR, "|- <I !=c J>", {"<I !=c J>"}},
      {RuleId::AtT, "|- @I p", {"@I I"}},
      {RuleId::At5, "@I J, @I K |-", {"@I J", "@I K"}},
      {RuleId::NomFresh, "@I p |-", {"@I J"}, {"J"}},
      {RuleId::S1, "@I J, @I p |-", {"@I J", "@I p"}},
      {RuleId::S2, "@J K, @I <a>J |-", {"@J K", "@I <a>J"}},
      {RuleId::S3, "@I J, <I =c K> |-", {"@I J", "<I =c K>"}},
      {RuleId::DiaR, "@I <a>J |- @I <a>p", {"@I <a>p"}, {}, {"J"}},
      {RuleId::CmpR, "@I <a>J, @I <a>K |- @I <a =c a>", {"@I <a =c a>"}, {}, {"J", "K"}},
      {RuleId::EqT, "|-", {"<I =c I>"}},
      {RuleId::Eq5, "<I =c J>, <I =c K> |-", {"<I =c J>", "<I =c K>"}},
  };
  for (const auto& x : xs) {
    CAPTURE(rule_name(x.r));
    RuleParams p;
    for (const char* f : x.principal) p.principal.push_back(F(f));
    p.fresh = x.fresh;
    p.witness = x.witness;
    Sequent c = S(x.concl);
    auto prem = apply_rule_backward(x.r, c, p);
    auto out = invert(x.r, p, open_leaf(c));
    REQUIRE(out.size() == prem.size());
    for (std::size_t k = 0; k < out.size(); ++k) {
      CHECK(out[k]->conclusion == prem[k]);
      auto rep = check_derivation(out[k]);
      CHECK(rep.well_formed);
      if (!rep.well_formed) MESSAGE(rep.error);
      CHECK(rep.open_leaves == 1);
    }
  }
}
