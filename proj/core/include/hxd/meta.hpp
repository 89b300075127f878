// Derived rules as macros over G, and the inversion of G's rules.
#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "hxd/builder.hpp"
#include "hxd/kernel.hpp"

namespace hxd {

enum class DerivedRuleId {
  AxGen, TopL, NegL, NegR, AndL, AndR, IffL, IffR, MP, DiaPathL, DiaPathR,
  S1Gen, S2Gen, S3Gen, AtB, AtCmpL, AtCmpR, CmpB, BoxCmpL, BoxCmpR
};
constexpr int kDerivedCount = int(DerivedRuleId::BoxCmpR) + 1;

const char* derived_name(DerivedRuleId r);
std::optional<DerivedRuleId> derived_from_name(std::string_view name);

struct MetaError : std::runtime_error {
  enum class Code { ParamShape, UnexpandableStub, NotARuleInstance };
  Code code;
  MetaError(Code c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

// Parameters per derived rule (principal formulas in order; path where the formula alone is
// ambiguous):
//   AxGen [phi]            TopL [@i true]         NegL/NegR [@i ~phi]
//   AndL/AndR [@i(phi & psi)]                     IffL/IffR [@i(phi <-> psi)]
//   MP [@i psi], cut @i phi                       DiaPathL [@i<alpha>phi], path, fresh [j]
//   DiaPathR [@i<alpha>phi], path, witness [j]    S1Gen [@i j, @i phi]
//   S2Gen [@j k, @i<alpha>j], path                S3Gen [@i j, <i: ▲ k:>]
//   AtB [@i j]             AtCmpL/AtCmpR [@k <i: ▲ j:>]    CmpB [<i: ▲ j:>]
//   BoxCmpL [@i[alpha ▲ beta]], witness [j, k]    BoxCmpR [@i[alpha ▲ beta]], fresh [j, k]
// Missing fresh nominals are drawn from the reserved namespace.

// The premisses of the derived rule at this conclusion (MP splits no context).
std::vector<Sequent> derived_premisses(DerivedRuleId r, const Sequent& conclusion,
                                       const RuleParams& params);

// A G derivation of conclusion whose leaves are axioms or Open leaves labelled with the given
// stubs. Each stub must be a subset of the corresponding premiss; an empty stub list means the
// premisses themselves.
DerivP expand_derived(DerivedRuleId r, const Sequent& conclusion, const RuleParams& params,
                      const std::vector<Sequent>& stubs = {});

// Applies the derived rule backwards and derives each premiss with the matching continuation.
DerivP apply_derived(DerivedRuleId r, const Sequent& goal, const RuleParams& params,
                     const std::vector<Cont>& ks);

// Replaces Open leaves of d by the derivation in kids with the same conclusion, each used once.
DerivP graft(const DerivP& d, const std::vector<DerivP>& kids);

// One derivation per premiss of the rule instance, built from a derivation of its conclusion.
std::vector<DerivP> invert(RuleId r, const RuleParams& instance, const DerivP& given);

// Closed derivation of goal when f sits on both sides (general axiom).
DerivP axiom_gen(const Sequent& goal, const LabeledExpr& f);

}  // namespace hxd
