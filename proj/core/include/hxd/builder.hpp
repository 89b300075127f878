// Helpers for assembling derivations backwards from a goal sequent.
#pragma once

#include <functional>
#include <set>
#include <vector>

#include "hxd/kernel.hpp"

namespace hxd {

// Produces a derivation of the sequent it is handed.
using Cont = std::function<DerivP(const Sequent&)>;

// Source of reserved nominals _g0, _g1, ... that avoids every name it was told about.
class Fresh {
 public:
  Fresh() = default;
  explicit Fresh(const Sequent& s) { avoid(s); }
  void avoid(const Sequent& s);
  void avoid(const Ident& n) { taken_.insert(n); }
  void avoid(const DerivP& d);
  Ident next();

 private:
  std::set<Ident> taken_;
  int counter_ = 0;
};

RuleParams with_principal(std::vector<LabeledExpr> ps);

// Applies a kernel rule to goal and derives each premiss with the matching continuation.
DerivP by(RuleId r, const Sequent& goal, RuleParams p, const std::vector<Cont>& ks);
DerivP by(RuleId r, const Sequent& goal, std::vector<LabeledExpr> principal, const Cont& k);

// Closes goal with Ax (on f, or on any atomic shared formula) or Bot; throws KernelError otherwise.
DerivP close(const Sequent& goal);
DerivP ax_on(const Sequent& goal, const LabeledExpr& f);
DerivP open_leaf(const Sequent& goal);

// Chain of WL/WR from goal down to d's conclusion, which must be a subset of goal.
DerivP weaken_to(const Sequent& goal, const DerivP& d);
// Continuation that weakens whatever it is handed down to stub and continues there.
Cont weaken_then(Sequent stub, Cont k);

// Cut on phi: left derives goal with phi added on the right, right with phi added on the left.
DerivP cut(const Sequent& goal, const LabeledExpr& phi, const Cont& left, const Cont& right);
// Cut joining two finished derivations; the conclusion is the least one the checker admits.
DerivP cut_join(const LabeledExpr& phi, const DerivP& left, const DerivP& right);
Sequent cut_conclusion(const LabeledExpr& phi, const Sequent& left, const Sequent& right);

std::set<Ident> nominals_in(const DerivP& d);

// Replaces nominal `from` by `to` throughout d. Subtrees whose conclusion does not mention
// `from` are kept; eigen-nominals that would be captured by `to` are renamed apart first.
DerivP substitute(const DerivP& d, const Ident& from, const Ident& to, Fresh& fresh);

RuleParams rename(const RuleParams& p, const Ident& from, const Ident& to);

}  // namespace hxd
