#include "hxd/builder.hpp"

namespace hxd {

void Fresh::avoid(const Sequent& s) {
  for (const auto& n : signature_of(s).noms) taken_.insert(n);
}

void Fresh::avoid(const DerivP& d) {
  for (const auto& n : nominals_in(d)) taken_.insert(n);
}

Ident Fresh::next() {
  for (;;) {
    Ident n = "_g" + std::to_string(counter_++);
    if (taken_.insert(n).second) return n;
  }
}

RuleParams with_principal(std::vector<LabeledExpr> ps) {
  RuleParams p;
  p.principal = std::move(ps);
  return p;
}

DerivP by(RuleId r, const Sequent& goal, RuleParams p, const std::vector<Cont>& ks) {
  auto prem = apply_rule_backward(r, goal, p);
  if (prem.size() != ks.size())
    throw KernelError(KernelError::Code::ParamShape,
                      std::string(rule_name(r)) + ": continuation count mismatch");
  std::vector<DerivP> kids;
  kids.reserve(prem.size());
  for (std::size_t k = 0; k < prem.size(); ++k) kids.push_back(ks[k](prem[k]));
  return make_deriv(r, goal, std::move(p), std::move(kids));
}

DerivP by(RuleId r, const Sequent& goal, std::vector<LabeledExpr> principal, const Cont& k) {
  return by(r, goal, with_principal(std::move(principal)), std::vector<Cont>{k});
}

DerivP ax_on(const Sequent& goal, const LabeledExpr& f) {
  apply_rule_backward(RuleId::Ax, goal, with_principal({f}));
  return make_deriv(RuleId::Ax, goal, with_principal({f}));
}

DerivP close(const Sequent& goal) {
  for (const auto& f : goal.ante)
    if (is_atomic_axiom_form(f) && goal.cons.contains(f)) return ax_on(goal, f);
  for (const auto& f : goal.ante)
    if (f.is_sat() && f.body->kind == NodeKind::Bot)
      return make_deriv(RuleId::Bot, goal, with_principal({f}));
  throw KernelError(KernelError::Code::PrincipalMissing,
                    "no axiom closes '" + print_sequent(goal) + "'");
}

DerivP open_leaf(const Sequent& goal) { return make_deriv(RuleId::Open, goal); }

DerivP weaken_to(const Sequent& goal, const DerivP& d) {
  const Sequent& target = d->conclusion;
  if (!target.subset_of(goal))
    throw KernelError(KernelError::Code::Mismatch, "cannot weaken '" + print_sequent(goal) +
                                                       "' to '" + print_sequent(target) + "'");
  std::vector<std::pair<RuleId, LabeledExpr>> steps;
  for (const auto& f : goal.ante)
    if (!target.ante.contains(f)) steps.emplace_back(RuleId::WL, f);
  for (const auto& f : goal.cons)
    if (!target.cons.contains(f)) steps.emplace_back(RuleId::WR, f);
  // build bottom-up: the last weakening sits directly above d
  std::vector<Sequent> seqs{goal};
  for (const auto& [r, f] : steps) {
    Sequent s = seqs.back();
    (r == RuleId::WL ? s.ante : s.cons).erase(f);
    seqs.push_back(s);
  }
  DerivP cur = d;
  for (std::size_t k = steps.size(); k-- > 0;)
    cur = make_deriv(steps[k].first, seqs[k], with_principal({steps[k].second}), {cur});
  return cur;
}

Cont weaken_then(Sequent stub, Cont k) {
  return [stub = std::move(stub), k = std::move(k)](const Sequent& s) {
    return weaken_to(s, k(stub));
  };
}

DerivP cut(const Sequent& goal, const LabeledExpr& phi, const Cont& left, const Cont& right) {
  RuleParams p;
  p.cut = phi;
  return by(RuleId::Cut, goal, std::move(p), {left, right});
}

Sequent cut_conclusion(const LabeledExpr& phi, const Sequent& l, const Sequent& r) {
  return {l.ante.unite(r.ante.without(phi)), l.cons.without(phi).unite(r.cons)};
}

DerivP cut_join(const LabeledExpr& phi, const DerivP& left, const DerivP& right) {
  RuleParams p;
  p.cut = phi;
  return make_deriv(RuleId::Cut, cut_conclusion(phi, left->conclusion, right->conclusion),
                    std::move(p), {left, right});
}

namespace {

void gather(const DerivP& d, std::set<Ident>& out) {
  for (const auto& n : signature_of(d->conclusion).noms) out.insert(n);
  for (const auto& n : d->params.fresh) out.insert(n);
  for (const auto& n : d->params.witness) out.insert(n);
  if (d->params.cut) {
    Signature s;
    collect(*d->params.cut, s);
    out.insert(s.noms.begin(), s.noms.end());
  }
  for (const auto& c : d->children) gather(c, out);
}

}  // namespace

std::set<Ident> nominals_in(const DerivP& d) {
  std::set<Ident> out;
  gather(d, out);
  return out;
}

RuleParams rename(const RuleParams& p, const Ident& from, const Ident& to) {
  RuleParams q = p;
  for (auto& f : q.principal) f = rename(f, from, to);
  for (auto& n : q.fresh)
    if (n == from) n = to;
  for (auto& n : q.witness)
    if (n == from) n = to;
  if (q.cut) q.cut = rename(*q.cut, from, to);
  if (q.path) q.path = rename(q.path, from, to);
  return q;
}

DerivP substitute(const DerivP& d, const Ident& from, const Ident& to, Fresh& fresh) {
  if (from == to || !occurs(from, d->conclusion)) return d;
  std::vector<DerivP> kids = d->children;
  RuleParams params = d->params;
  for (auto& eigen : params.fresh) {
    if (eigen != to) continue;
    fresh.avoid(d);
    Ident other = fresh.next();
    for (auto& c : kids) c = substitute(c, eigen, other, fresh);
    eigen = other;
  }
  for (auto& c : kids) c = substitute(c, from, to, fresh);
  return make_deriv(d->rule, rename(d->conclusion, from, to), rename(params, from, to),
                    std::move(kids));
}

}  // namespace hxd
