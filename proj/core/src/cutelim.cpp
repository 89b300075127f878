#include "hxd/cutelim.hpp"

#include <algorithm>

#include "hxd/builder.hpp"

namespace hxd {

namespace {

using TreePath = std::vector<int>;

[[noreturn]] void unhandled(const std::string& msg) {
  throw CutElimError(CutElimError::Code::UnhandledCase, msg);
}

const DerivP& node_at(const DerivP& d, const TreePath& p) {
  const DerivP* cur = &d;
  for (int k : p) {
    if (k < 0 || k >= int((*cur)->children.size()))
      throw CutElimError(CutElimError::Code::NotACut, "no node at " + path_string(p));
    cur = &(*cur)->children[k];
  }
  return *cur;
}

DerivP replace_at(const DerivP& d, const TreePath& p, std::size_t depth, const DerivP& sub) {
  if (depth == p.size()) return sub;
  std::vector<DerivP> kids = d->children;
  kids[p[depth]] = replace_at(kids[p[depth]], p, depth + 1, sub);
  return make_deriv(d->rule, d->conclusion, d->params, std::move(kids));
}

CutComplexity complexity_of(const Derivation& c) {
  return {int(size(*c.params.cut)),
          derivation_height(c.children[0]) + derivation_height(c.children[1])};
}

void max_cut(const DerivP& d, std::optional<CutComplexity>& acc) {
  if (d->rule == RuleId::Cut) {
    CutComplexity c = complexity_of(*d);
    if (!acc || *acc < c) acc = c;
  }
  for (const auto& k : d->children) max_cut(k, acc);
}

// Formulas on the left that the last rule of d needs in its conclusion.
bool uses_ante(const DerivP& d, const LabeledExpr& phi) {
  const auto& P = d->params.principal;
  switch (d->rule) {
    case RuleId::Ax:
    case RuleId::Bot:
    case RuleId::ImpL:
    case RuleId::AtL:
    case RuleId::DiaL:
    case RuleId::CmpL:
    case RuleId::NEqL:
    case RuleId::At5:
    case RuleId::S1:
    case RuleId::S2:
    case RuleId::S3:
    case RuleId::Eq5:
      return std::find(P.begin(), P.end(), phi) != P.end();
    case RuleId::DiaR:
      return sat(P[0].i, dia(P[0].body->name, nom(d->params.witness[0]))) == phi;
    case RuleId::CmpR: {
      const NodeP& e = P[0].body;
      return sat(P[0].i, diamond(e->left, nom(d->params.witness[0]))) == phi ||
             sat(P[0].i, diamond(e->right, nom(d->params.witness[1]))) == phi;
    }
    default:
      return false;
  }
}

// Formulas on the right that the last rule of d needs in its conclusion.
bool uses_cons(const DerivP& d, const LabeledExpr& phi) {
  switch (d->rule) {
    case RuleId::Ax:
    case RuleId::ImpR:
    case RuleId::AtR:
    case RuleId::DiaR:
    case RuleId::CmpR:
    case RuleId::NEqR:
      return d->params.principal[0] == phi;
    default:
      return false;
  }
}

struct Reducer {
  Fresh& fr;
  std::string name;

  // Cut on phi when both sides still carry it; otherwise the side that already proves less.
  static DerivP join(const LabeledExpr& phi, const DerivP& l, const DerivP& r) {
    if (!l->conclusion.cons.contains(phi)) return l;
    if (!r->conclusion.ante.contains(phi)) return r;
    return cut_join(phi, l, r);
  }
  // Children of destructive rules may keep their principal; cut it away first.
  static DerivP strip_r(const LabeledExpr& phi, const DerivP& l, const DerivP& r1) {
    return r1->conclusion.ante.contains(phi) ? cut_join(phi, l, r1) : r1;
  }
  static DerivP strip_l(const LabeledExpr& phi, const DerivP& l1, const DerivP& r) {
    return l1->conclusion.cons.contains(phi) ? cut_join(phi, l1, r) : l1;
  }

  // Eigen-nominals of n's rule that clash with goal get new names.
  std::pair<RuleParams, std::vector<DerivP>> rename_eigen(const DerivP& n, const Sequent& goal) {
    RuleParams params = n->params;
    std::vector<DerivP> kids = n->children;
    for (auto& e : params.fresh) {
      if (!occurs(e, goal)) continue;
      Ident e2 = fr.next();
      for (auto& k : kids) k = substitute(k, e, e2, fr);
      e = e2;
    }
    return {params, kids};
  }

  // The cut moves above the last rule of one premiss; that rule is re-applied at the goal.
  DerivP permute(const Sequent& G, const LabeledExpr& phi, const DerivP& L, const DerivP& R,
                 bool right) {
    const DerivP& n = right ? R : L;
    name = std::string(right ? "permute-right:" : "permute-left:") + rule_name(n->rule);
    auto [params, kids] = rename_eigen(n, G);
    auto T = apply_rule_backward(n->rule, G, params);
    std::vector<DerivP> out;
    for (std::size_t k = 0; k < kids.size(); ++k) {
      DerivP nk = right ? (kids[k]->conclusion.ante.contains(phi) ? cut_join(phi, L, kids[k]) : kids[k])
                        : (kids[k]->conclusion.cons.contains(phi) ? cut_join(phi, kids[k], R) : kids[k]);
      Sequent goal{T[k].ante.unite(nk->conclusion.ante), T[k].cons.unite(nk->conclusion.cons)};
      out.push_back(weaken_to(goal, nk));
    }
    return make_deriv(n->rule, G, params, std::move(out));
  }

  DerivP principal(const Sequent& G, const LabeledExpr& phi, const DerivP& L, const DerivP& R) {
    RuleId lr = L->rule, rr = R->rule;
    name = std::string(rule_name(lr)) + "/" + rule_name(rr);
    const auto& ch = R->children;
    if (lr == RuleId::ImpR && rr == RuleId::ImpL) {
      LabeledExpr A = sat(phi.i, phi.body->a), B = sat(phi.i, phi.body->b);
      DerivP l1 = strip_l(phi, L->children[0], R);
      DerivP r1 = strip_r(phi, L, ch[0]), r2 = strip_r(phi, L, ch[1]);
      return weaken_to(G, join(A, r1, join(B, l1, r2)));
    }
    if (lr == RuleId::AtR && rr == RuleId::AtL) {
      LabeledExpr inner = sat(phi.body->name, phi.body->b);
      return weaken_to(G, join(inner, strip_l(phi, L->children[0], R), strip_r(phi, L, ch[0])));
    }
    if (lr == RuleId::NEqR && rr == RuleId::NEqL) {
      LabeledExpr eq = data_eq(phi.sort, phi.i, phi.j);
      return weaken_to(G, join(eq, strip_r(phi, L, ch[0]), strip_l(phi, L->children[0], R)));
    }
    if (lr == RuleId::DiaR && rr == RuleId::DiaL) {
      const Ident& j = L->params.witness[0];
      DerivP r1 = substitute(ch[0], R->params.fresh[0], j, fr);
      DerivP cut1 = strip_l(phi, L->children[0], R);
      return weaken_to(G, join(sat(j, phi.body->b), cut1, strip_r(phi, L, r1)));
    }
    if (lr == RuleId::CmpR && rr == RuleId::CmpL) {
      const Ident &j = L->params.witness[0], &k = L->params.witness[1];
      const Ident &m = R->params.fresh[0], &n = R->params.fresh[1];
      // rename through fresh names so that j = n or k = m cannot collide
      Ident m2 = fr.next(), n2 = fr.next();
      DerivP r1 = substitute(substitute(ch[0], m, m2, fr), n, n2, fr);
      r1 = substitute(substitute(r1, m2, j, fr), n2, k, fr);
      DerivP cut1 = strip_l(phi, L->children[0], R);
      LabeledExpr d = data(phi.body->pol, phi.body->name, j, k);
      return weaken_to(G, join(d, cut1, strip_r(phi, L, r1)));
    }
    if (lr == RuleId::DiaR && phi.body->kind == NodeKind::Dia && phi.body->b->kind == NodeKind::Nom &&
        (rr == RuleId::S1 || rr == RuleId::S2 || rr == RuleId::DiaR || rr == RuleId::CmpR)) {
      // phi = @i<a>k is read but kept by the right premiss: rebuild it from @j k and @i<a>j by S2
      const Ident& j = L->params.witness[0];
      LabeledExpr jk = sat(j, phi.body->b);
      LabeledExpr w = sat(phi.i, dia(phi.body->name, nom(j)));
      Sequent xg{R->conclusion.ante.without(phi).with(jk).with(w), R->conclusion.cons};
      DerivP x = by(RuleId::S2, xg, {jk, w}, [&](const Sequent& s) { return weaken_to(s, R); });
      DerivP cut1 = strip_l(phi, L->children[0], R);
      return weaken_to(G, join(jk, cut1, x));
    }
    unhandled(name + " on " + print_labeled(phi));
  }

  DerivP reduce(const DerivP& c) {
    const Sequent& G = c->conclusion;
    const LabeledExpr& phi = *c->params.cut;
    const DerivP &L = c->children[0], &R = c->children[1];
    const Sequent &Lc = L->conclusion, &Rc = R->conclusion;
    if (L->rule == RuleId::Open || R->rule == RuleId::Open)
      throw CutElimError(CutElimError::Code::OpenLeaf, "cut over an open leaf");
    if (Lc.ante.contains(phi)) {
      name = "identity-left";
      return weaken_to(G, R);
    }
    if (Rc.cons.contains(phi)) {
      name = "identity-right";
      return weaken_to(G, L);
    }
    // axioms: a leaf not on phi already closes the goal
    for (const DerivP& leaf : {L, R}) {
      if ((leaf->rule == RuleId::Ax || leaf->rule == RuleId::Bot) &&
          !(leaf->params.principal[0] == phi)) {
        name = std::string("axiom-") + (leaf == L ? "left" : "right");
        return make_deriv(leaf->rule, G, leaf->params);
      }
    }
    if (R->rule == RuleId::WL || R->rule == RuleId::WR) {
      name = "weakening-right";
      const DerivP& r1 = R->children[0];
      return weaken_to(G, r1->conclusion.ante.contains(phi) ? cut_join(phi, L, r1) : r1);
    }
    if (L->rule == RuleId::WL || L->rule == RuleId::WR) {
      name = "weakening-left";
      const DerivP& l1 = L->children[0];
      return weaken_to(G, l1->conclusion.cons.contains(phi) ? cut_join(phi, l1, R) : l1);
    }
    if (!uses_ante(R, phi)) return permute(G, phi, L, R, true);
    if (!uses_cons(L, phi)) return permute(G, phi, L, R, false);
    return principal(G, phi, L, R);
  }
};

struct Scan {
  bool has_cut = false;
  int height = 0;
};

Scan scan(const DerivP& d, TreePath& path, std::optional<std::pair<int, TreePath>>& best) {
  Scan s;
  bool kids_have_cut = false;
  for (std::size_t k = 0; k < d->children.size(); ++k) {
    path.push_back(int(k));
    Scan c = scan(d->children[k], path, best);
    path.pop_back();
    kids_have_cut = kids_have_cut || c.has_cut;
    s.height = std::max(s.height, c.height);
  }
  s.height += 1;
  s.has_cut = kids_have_cut || d->rule == RuleId::Cut;
  if (d->rule == RuleId::Cut && !kids_have_cut) {
    int h = derivation_height(d->children[0]) + derivation_height(d->children[1]);
    if (!best || h < best->first || (h == best->first && path < best->second)) best = {h, path};
  }
  return s;
}

ReduceResult reduce_with(const DerivP& d, const TreePath& p, Fresh& fr) {
  const DerivP& c = node_at(d, p);
  if (c->rule != RuleId::Cut)
    throw CutElimError(CutElimError::Code::NotACut, "no cut at " + path_string(p));
  if (count_rule(c->children[0], RuleId::Cut) || count_rule(c->children[1], RuleId::Cut))
    throw CutElimError(CutElimError::Code::NotTopmost, "cut at " + path_string(p) + " is not topmost");
  Reducer red{fr, {}};
  CutStep step;
  step.path = p;
  step.before = complexity_of(*c);
  DerivP sub;
  try {
    sub = red.reduce(c);
  } catch (const KernelError& e) {
    unhandled(red.name + ": " + e.what());
  }
  step.case_name = red.name;
  max_cut(sub, step.after);
  return {replace_at(d, p, 0, sub), step};
}

}  // namespace

CutComplexity cut_complexity(const DerivP& d, const std::vector<int>& cut_path) {
  const DerivP& c = node_at(d, cut_path);
  if (c->rule != RuleId::Cut)
    throw CutElimError(CutElimError::Code::NotACut, "no cut at " + path_string(cut_path));
  return complexity_of(*c);
}

ReduceResult reduce_cut_once(const DerivP& d, const std::vector<int>& cut_path) {
  Fresh fr;
  fr.avoid(d);
  return reduce_with(d, cut_path, fr);
}

std::optional<std::vector<int>> select_cut(const DerivP& d) {
  std::optional<std::pair<int, TreePath>> best;
  TreePath path;
  scan(d, path, best);
  if (!best) return std::nullopt;
  return best->second;
}

EliminationResult eliminate_cuts_traced(const DerivP& d, const EliminationOptions& opt) {
  Fresh fr;
  fr.avoid(d);
  EliminationResult res{d, {}};
  for (long n = 0;; ++n) {
    auto p = select_cut(res.derivation);
    if (!p) return res;
    if (n >= opt.max_steps)
      throw CutElimError(CutElimError::Code::StepBudget,
                         "no cut-free derivation after " + std::to_string(n) + " steps");
    auto r = reduce_with(res.derivation, *p, fr);
    res.derivation = r.derivation;
    res.trace.push_back(std::move(r.step));
  }
}

DerivP eliminate_cuts(const DerivP& d) { return eliminate_cuts_traced(d).derivation; }

std::string format_step(const CutStep& s) {
  std::string out = path_string(s.path) + " " + s.case_name + " (" + std::to_string(s.before.k) +
                    "," + std::to_string(s.before.h) + ") -> ";
  if (s.after)
    out += "(" + std::to_string(s.after->k) + "," + std::to_string(s.after->h) + ")";
  else
    out += "none";
  return out;
}

}  // namespace hxd
