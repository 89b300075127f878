#include "fixtures.hpp"

#include <cctype>
#include <filesystem>
#include <fstream>

#include "hxd/builder.hpp"
#include "hxd/hilbert.hpp"
#include "hxd/meta.hpp"
#include "hxd/proof_io.hpp"
#include "hxd/prover.hpp"

namespace hxd::tools {

namespace {

struct DerivedCase {
  const char* file;
  DerivedRuleId rule;
  const char* conclusion;
  std::vector<const char*> principal;
  const char* path = nullptr;
  std::vector<Ident> fresh = {};
  std::vector<Ident> witness = {};
  const char* cut = nullptr;
};

// Conclusions are valid so that the premisses can be discharged as well.
const std::vector<DerivedCase>& derived_cases() {
  static const std::vector<DerivedCase> cs = {
      {"ax_gen", DerivedRuleId::AxGen, "@I <a ; J: =c p?> |- @I <a ; J: =c p?>", {"@I <a ; J: =c p?>"}},
      {"top_l", DerivedRuleId::TopL, "@I p |- @I p", {"@I true"}},
      {"neg_l", DerivedRuleId::NegL, "@I ~p, @I p |-", {"@I ~p"}},
      {"neg_r", DerivedRuleId::NegR, "@I ~p |- @I ~p", {"@I ~p"}},
      {"and_l", DerivedRuleId::AndL, "@I (p & q) |- @I q", {"@I (p & q)"}},
      {"and_r", DerivedRuleId::AndR, "@I p, @I q |- @I (p & q)", {"@I (p & q)"}},
      {"iff_l", DerivedRuleId::IffL, "@I (p <-> q), @I p |- @I q", {"@I (p <-> q)"}},
      {"iff_r", DerivedRuleId::IffR, "|- @I (p <-> p)", {"@I (p <-> p)"}},
      {"mp", DerivedRuleId::MP, "@I p, @I (p -> q) |- @I q", {"@I q"}, nullptr, {}, {}, "@I p"},
      {"dia_path_l", DerivedRuleId::DiaPathL, "@I <a ; J: ; p? ; a> q |- @J <a> q",
       {"@I <a ; J: ; p? ; a> q"}, "a ; J: ; p? ; a", {"K"}},
      {"dia_path_r", DerivedRuleId::DiaPathR, "@I <a ; a>J, @J q |- @I <a ; a> q", {"@I <a ; a> q"},
       "a ; a", {}, {"J"}},
      {"s1_gen", DerivedRuleId::S1Gen, "@I J, @I (p -> <a>q) |- @J (p -> <a>q)",
       {"@I J", "@I (p -> <a>q)"}},
      {"s2_gen", DerivedRuleId::S2Gen, "@J K, @I <a ; a>J |- @I <a ; a>K", {"@J K", "@I <a ; a>J"}, "a ; a"},
      {"s3_gen", DerivedRuleId::S3Gen, "@I J, <I !=c K> |- <J !=c K>", {"@I J", "<I !=c K>"}},
      {"at_b", DerivedRuleId::AtB, "@J I |- @I J", {"@J I"}},
      {"at_cmp_l", DerivedRuleId::AtCmpL, "@K <I: =c J:> |- <I =c J>", {"@K <I: =c J:>"}},
      {"at_cmp_r", DerivedRuleId::AtCmpR, "<I !=c J> |- @K <I: !=c J:>", {"@K <I: !=c J:>"}},
      {"cmp_b", DerivedRuleId::CmpB, "<I !=c J> |- <J !=c I>", {"<I !=c J>"}},
      {"box_cmp_l", DerivedRuleId::BoxCmpL, "@I [a =c a], @I <a>J, @I <a>K |- <J =c K>",
       {"@I [a =c a]"}, nullptr, {}, {"J", "K"}},
      {"box_cmp_r", DerivedRuleId::BoxCmpR, "|- @I [a =c a], @I <a !=c a>", {"@I [a =c a]"}},
  };
  return cs;
}

struct InvCase {
  const char* file;
  RuleId rule;
  const char* conclusion;
  std::vector<const char*> principal;
  std::vector<Ident> fresh = {};
  std::vector<Ident> witness = {};
};

const std::vector<InvCase>& invert_cases() {
  static const std::vector<InvCase> cs = {
      {"imp_l", RuleId::ImpL, "@I (p -> q), @I p |- @I q", {"@I (p -> q)"}},
      {"imp_r", RuleId::ImpR, "|- @I (p -> p)", {"@I (p -> p)"}},
      {"at_t", RuleId::AtT, "@I p |- @I p", {"@I I"}},
      {"at_5", RuleId::At5, "@I J, @I K, @J p |- @K p", {"@I J", "@I K"}},
      {"nom", RuleId::NomFresh, "|- @I (p -> p)", {"@I J"}, {"J"}},
      {"s1", RuleId::S1, "@I J, @I p |- @J p", {"@I J", "@I p"}},
      {"s2", RuleId::S2, "@J K, @I <a>J |- @I <a>K", {"@J K", "@I <a>J"}},
      {"s3", RuleId::S3, "@I J, <I =c K> |- <J =c K>", {"@I J", "<I =c K>"}},
      {"at_l", RuleId::AtL, "@I @J p |- @J p", {"@I @J p"}},
      {"at_r", RuleId::AtR, "@J p |- @I @J p", {"@I @J p"}},
      {"dia_l", RuleId::DiaL, "@I <a>p |- @I <a>(p | q)", {"@I <a>p"}, {"J"}},
      {"dia_r", RuleId::DiaR, "@I <a>J, @J p |- @I <a>p", {"@I <a>p"}, {}, {"J"}},
      {"cmp_l", RuleId::CmpL, "@I <a =c a> |- @I <a>true", {"@I <a =c a>"}, {"J", "K"}},
      {"cmp_r", RuleId::CmpR, "@I <a>J, @I <a>K, <J =c K> |- @I <a =c a>", {"@I <a =c a>"}, {},
       {"J", "K"}},
      {"eq_t", RuleId::EqT, "|- <I =c I>", {"<I =c I>"}},
      {"eq_5", RuleId::Eq5, "<I =c J>, <I =c K> |- <J =c K>", {"<I =c J>", "<I =c K>"}},
      {"neq_l", RuleId::NEqL, "<I !=c J>, <I =c J> |-", {"<I !=c J>"}},
      {"neq_r", RuleId::NEqR, "|- <I !=c J>, <I =c J>", {"<I !=c J>"}},
  };
  return cs;
}

const char* const kTranslations[][2] = {
    {"mp", "1. AXIOM CPL [phi=p -> p]\n2. AXIOM CPL [phi=(p -> p) -> q -> q]\n3. MP 1 2\n"},
    {"nec", "1. AXIOM AtRefl [i=J]\n2. NEC 1 <a;b>\n"},
    {"name", "1. AXIOM CPL [phi=p -> p]\n2. NEC 1 <L:>\n3. AXIOM AtSelfDual [i=L, phi=p -> p]\n"
             "4. AXIOM CPL [phi=(~@L(p -> p) <-> @L ~(p -> p)) -> ~@L ~(p -> p) -> @L(p -> p)]\n"
             "5. MP 3 4\n6. MP 2 5\n7. NAME 6 L\n"},
    {"paste", "1. AXIOM CPL [phi=(@K <a>J & <J:;b =c b>) -> (q -> q)]\n2. PASTE 1 K J\n"},
    {"paste_step", "1. AXIOM CPL [phi=(@K <a>J & <J: !=c b>) -> (q -> q)]\n2. PASTE 1 K J\n"},
};

LabeledExpr F(const char* t) { return parse_labeled(t); }

RuleParams params(const std::vector<const char*>& principal, const std::vector<Ident>& fresh,
                  const std::vector<Ident>& witness) {
  RuleParams p;
  for (const char* f : principal) p.principal.push_back(F(f));
  p.fresh = fresh;
  p.witness = witness;
  return p;
}

// Proves a premiss outright; nullptr when the search does not succeed.
DerivP discharge(const Sequent& s) {
  auto r = prove(s);
  return r.status == ProveResult::Status::Proved ? r.proof : nullptr;
}

}  // namespace

std::vector<Fixture> fixture_corpus() {
  std::vector<Fixture> out;

  // AtR above a reflexivity step
  Sequent refl_goal = parse_sequent("|- @J @I I");
  out.push_back({"at_refl",
                 by(RuleId::AtR, refl_goal, {F("@J @I I")},
                    [](const Sequent& s) {
                      return by(RuleId::AtT, s, {F("@I I")},
                                [](const Sequent& u) { return ax_on(u, F("@I I")); });
                    }),
                 true});

  for (const auto& c : derived_cases()) {
    Sequent concl = parse_sequent(c.conclusion);
    RuleParams p = params(c.principal, c.fresh, c.witness);
    if (c.path) p.path = parse_path(c.path, {true});
    if (c.cut) p.cut = F(c.cut);
    auto prem = derived_premisses(c.rule, concl, p);
    out.push_back({std::string("derived/") + c.file, expand_derived(c.rule, concl, p, prem),
                   prem.empty()});
    if (prem.empty()) continue;
    std::vector<DerivP> kids;
    for (const auto& s : prem)
      if (DerivP k = discharge(s)) kids.push_back(k);
    if (kids.size() != prem.size()) continue;
    DerivP closed = graft(expand_derived(c.rule, concl, p, prem), kids);
    out.push_back({std::string("derived/") + c.file + "_closed", closed, true});
    if (c.rule == DerivedRuleId::MP) out.push_back({"mp_expanded", closed, true});
  }

  for (const auto& c : invert_cases()) {
    Sequent concl = parse_sequent(c.conclusion);
    DerivP given = discharge(concl);
    if (!given) continue;
    auto inv = invert(c.rule, params(c.principal, c.fresh, c.witness), given);
    for (std::size_t k = 0; k < inv.size(); ++k)
      out.push_back({std::string("invert/") + c.file + (inv.size() > 1 ? "_" + std::to_string(k) : ""),
                     inv[k], true});
  }

  for (int k = 0; k < kSchemaCount; ++k) {
    auto s = static_cast<SchemaId>(k);
    HilbertProof p(1);
    p[0].schema = s;
    p[0].inst = standard_instantiation(s);
    std::string file = schema_name(s);
    for (auto& ch : file) ch = char(std::tolower(static_cast<unsigned char>(ch)));
    out.push_back({"completeness/" + file, translate(p, "I"), true});
  }
  for (const auto& [file, text] : kTranslations)
    out.push_back({std::string("completeness/case_") + file, translate(parse_hilbert(text), "I"), true});
  return out;
}

const char* mixed_deduction() {
  return R"(# mixed deduction
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
}

int write_fixtures(const std::string& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream(std::filesystem::path(dir) / "mixed.hil") << mixed_deduction();
  int n = 0;
  for (const auto& f : fixture_corpus()) {
    std::filesystem::path path = std::filesystem::path(dir) / (f.name + ".proof");
    std::filesystem::create_directories(path.parent_path());
    save_proof_file(f.derivation, path.string());
    ++n;
  }
  return n;
}

}  // namespace hxd::tools
