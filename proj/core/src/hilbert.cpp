#include "hxd/hilbert.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <functional>
#include <sstream>

#include "hxd/builder.hpp"
#include "hxd/meta.hpp"

namespace hxd {

namespace {

constexpr std::array<const char*, kSchemaCount> kSchemaNames = {
    "CPL",         "AtDef",    "DiaDef", "K",        "AtK",    "AtSelfDual",
    "AtIntro",     "AtRefl",   "CompAssoc", "CompNeutral", "CompDist", "Equal",
    "CmpComm",     "EpsTrans", "Distinct", "AtData", "Subpath", "AtCmpDist",
    "CmpTest",     "Agree",    "Back",   "CmpCompDist"};

using Code = HilbertError::Code;

[[noreturn]] void fail(Code c, int step, const std::string& msg) {
  throw HilbertError(c, step, msg);
}

// ---------------------------------------------------------------- instantiations

template <class T>
const T* lookup(const Instantiation& inst, const std::string& key) {
  auto it = inst.find(key);
  if (it == inst.end()) return nullptr;
  return std::get_if<T>(&it->second);
}

struct Meta {
  SchemaId s;
  const Instantiation& inst;

  [[noreturn]] void missing(const std::string& key, const char* what) const {
    fail(Code::SchemaMismatch, -1,
         std::string(schema_name(s)) + ": meta-variable '" + key + "' must be " + what);
  }
  NodeP node(const std::string& key) const {
    auto v = lookup<NodeP>(inst, key);
    if (!v) missing(key, "a node expression");
    return *v;
  }
  PathP path(const std::string& key) const {
    auto v = lookup<PathP>(inst, key);
    if (!v) missing(key, "a path expression");
    return *v;
  }
  PathP opt_path(const std::string& key) const {
    if (!inst.contains(key)) return nullptr;
    return path(key);
  }
  Ident ident(const std::string& key) const {
    auto v = lookup<Ident>(inst, key);
    if (!v) missing(key, "an identifier");
    return *v;
  }
  CmpPolarity op() const {
    if (!inst.contains("op")) return CmpPolarity::Eq;
    Ident o = ident("op");
    if (o == "=") return CmpPolarity::Eq;
    if (o == "!=") return CmpPolarity::Neq;
    missing("op", "'=' or '!='");
  }
};

NodeP build_instance(SchemaId s, const Instantiation& inst) {
  Meta m{s, inst};
  auto C = [&](CmpPolarity pol, PathP l, PathP r) { return cmp(pol, m.ident("c"), l, r); };
  switch (s) {
    case SchemaId::CPL: return m.node("phi");
    case SchemaId::AtDef: {
      Ident i = m.ident("i");
      NodeP phi = m.node("phi");
      PathP p = comp(go(i), test(phi));
      return iff(at(i, phi), C(CmpPolarity::Eq, p, p));
    }
    case SchemaId::DiaDef: {
      PathP a = m.path("alpha");
      NodeP phi = m.node("phi");
      PathP p = comp(a, test(phi));
      return iff(diamond(a, phi), C(CmpPolarity::Eq, p, p));
    }
    case SchemaId::K: {
      PathP a = m.path("alpha");
      NodeP phi = m.node("phi"), psi = m.node("psi");
      return imp(box(a, imp(phi, psi)), imp(box(a, phi), box(a, psi)));
    }
    case SchemaId::AtK: {
      Ident i = m.ident("i");
      NodeP phi = m.node("phi"), psi = m.node("psi");
      return imp(at(i, imp(phi, psi)), imp(at(i, phi), at(i, psi)));
    }
    case SchemaId::AtSelfDual: {
      Ident i = m.ident("i");
      NodeP phi = m.node("phi");
      return iff(neg(at(i, phi)), at(i, neg(phi)));
    }
    case SchemaId::AtIntro: {
      Ident i = m.ident("i");
      NodeP phi = m.node("phi");
      return imp(nom(i), iff(phi, at(i, phi)));
    }
    case SchemaId::AtRefl: {
      Ident i = m.ident("i");
      return at(i, nom(i));
    }
    case SchemaId::CompAssoc: {
      PathP a = m.path("alpha"), b = m.path("beta"), g = m.path("gamma"), e = m.path("eta");
      return iff(C(m.op(), comp(comp(a, b), g), e), C(m.op(), comp(a, comp(b, g)), e));
    }
    case SchemaId::CompNeutral: {
      PathP a = m.opt_path("alpha"), b = m.opt_path("beta"), g = m.path("gamma");
      if (!a && !b)
        fail(Code::SchemaMismatch, -1, "CompNeutral: alpha and beta may not both be omitted");
      PathP lhs = !a ? comp(eps(), b) : !b ? comp(a, eps()) : comp(a, comp(eps(), b));
      PathP rhs = !a ? b : !b ? a : comp(a, b);
      return iff(C(m.op(), lhs, g), C(m.op(), rhs, g));
    }
    case SchemaId::CompDist: {
      PathP a = m.path("alpha"), b = m.path("beta");
      NodeP phi = m.node("phi");
      return iff(diamond(comp(a, b), phi), diamond(a, diamond(b, phi)));
    }
    case SchemaId::Equal: return C(CmpPolarity::Eq, eps(), eps());
    case SchemaId::CmpComm: {
      PathP a = m.path("alpha"), b = m.path("beta");
      return iff(C(m.op(), a, b), C(m.op(), b, a));
    }
    case SchemaId::EpsTrans: {
      PathP a = m.path("alpha"), b = m.path("beta");
      return imp(conj(C(CmpPolarity::Eq, a, eps()), C(CmpPolarity::Eq, eps(), b)),
                 C(CmpPolarity::Eq, a, b));
    }
    case SchemaId::Distinct: return neg(C(CmpPolarity::Neq, eps(), eps()));
    case SchemaId::AtData: {
      Ident i = m.ident("i"), j = m.ident("j");
      return iff(neg(C(CmpPolarity::Eq, go(i), go(j))), C(CmpPolarity::Neq, go(i), go(j)));
    }
    case SchemaId::Subpath: {
      PathP a = m.path("alpha"), b = m.path("beta"), g = m.path("gamma");
      return imp(C(m.op(), comp(a, b), g), diamond(a, top()));
    }
    case SchemaId::AtCmpDist: {
      Ident i = m.ident("i");
      PathP a = m.path("alpha"), b = m.path("beta");
      return iff(C(m.op(), comp(go(i), a), comp(go(i), b)), at(i, C(m.op(), a, b)));
    }
    case SchemaId::CmpTest: {
      NodeP phi = m.node("phi");
      PathP a = m.path("alpha"), b = m.path("beta");
      return iff(C(m.op(), comp(test(phi), a), b), conj(phi, C(m.op(), a, b)));
    }
    case SchemaId::Agree: {
      Ident i = m.ident("i"), j = m.ident("j");
      PathP a = m.path("alpha"), b = m.path("beta");
      return iff(C(m.op(), comp(go(j), comp(go(i), a)), b), C(m.op(), comp(go(i), a), b));
    }
    case SchemaId::Back: {
      Ident i = m.ident("i");
      PathP a = m.path("alpha"), b = m.path("beta"), g = m.path("gamma");
      return imp(C(m.op(), comp(a, comp(go(i), b)), g), C(m.op(), comp(go(i), b), g));
    }
    case SchemaId::CmpCompDist: {
      PathP a = m.path("alpha"), b = m.path("beta"), g = m.path("gamma");
      return imp(diamond(a, C(m.op(), b, g)), C(m.op(), comp(a, b), comp(a, g)));
    }
  }
  fail(Code::SchemaMismatch, -1, "unknown schema");
}

// ---------------------------------------------------------------- propositional layer

bool split_conj(const NodeP& e, NodeP& x, NodeP& y) {
  auto is = [](const NodeP& n, NodeKind k) { return n && n->kind == k; };
  if (!is(e, NodeKind::Imp) || !is(e->b, NodeKind::Bot) || !is(e->a, NodeKind::Imp)) return false;
  const NodeP& inner = e->a->b;
  if (!is(inner, NodeKind::Imp) || !is(inner->b, NodeKind::Bot)) return false;
  x = e->a->a;
  y = inner->a;
  return true;
}

void cpl_atoms(const NodeP& e, std::vector<std::string>& atoms) {
  if (e->kind == NodeKind::Bot) return;
  if (e->kind == NodeKind::Imp) {
    cpl_atoms(e->a, atoms);
    cpl_atoms(e->b, atoms);
    return;
  }
  std::string key = print_node(e);
  if (std::find(atoms.begin(), atoms.end(), key) == atoms.end()) atoms.push_back(key);
}

bool cpl_eval(const NodeP& e, const std::vector<std::string>& atoms, unsigned long v) {
  if (e->kind == NodeKind::Bot) return false;
  if (e->kind == NodeKind::Imp) return !cpl_eval(e->a, atoms, v) || cpl_eval(e->b, atoms, v);
  auto k = std::find(atoms.begin(), atoms.end(), print_node(e)) - atoms.begin();
  return (v >> k) & 1;
}

// Backward search with ImpL/ImpR/Ax/Bot over @-prefixed formulas; other formulas are atoms.
DerivP cpl_search(const Sequent& g) {
  for (const auto& f : g.ante)
    if (g.cons.contains(f)) return axiom_gen(g, f);
  for (const auto& f : g.ante)
    if (f.is_sat() && f.body->kind == NodeKind::Bot) return make_deriv(RuleId::Bot, g, with_principal({f}));
  for (const auto& f : g.cons)
    if (f.is_sat() && f.body->kind == NodeKind::Imp) return by(RuleId::ImpR, g, {f}, cpl_search);
  for (const auto& f : g.ante)
    if (f.is_sat() && f.body->kind == NodeKind::Imp)
      return by(RuleId::ImpL, g, with_principal({f}), {cpl_search, cpl_search});
  fail(Code::SchemaMismatch, -1, "not a propositional tautology: " + print_sequent(g));
}

// ---------------------------------------------------------------- G building blocks

struct Tx {
  Fresh& fr;

  Ident next() { return fr.next(); }

  DerivP ax(const Sequent& g, const LabeledExpr& f) { return axiom_gen(g, f); }
  Cont ax(const LabeledExpr& f) {
    return [this, f](const Sequent& s) { return ax(s, f); };
  }
  DerivP rule(RuleId r, const Sequent& g, std::vector<LabeledExpr> ps, const Cont& k) {
    return by(r, g, std::move(ps), k);
  }
  DerivP imp_l(const Sequent& g, const LabeledExpr& f, const Cont& k1, const Cont& k2) {
    return by(RuleId::ImpL, g, with_principal({f}), {k1, k2});
  }
  DerivP dia_l(const Sequent& g, const LabeledExpr& f, const Ident& m, const Cont& k) {
    RuleParams p = with_principal({f});
    p.fresh = {m};
    return by(RuleId::DiaL, g, p, {k});
  }
  DerivP cmp_l(const Sequent& g, const LabeledExpr& f, const Ident& j, const Ident& k,
               const Cont& c) {
    RuleParams p = with_principal({f});
    p.fresh = {j, k};
    return by(RuleId::CmpL, g, p, {c});
  }
  DerivP cmp_r(const Sequent& g, const LabeledExpr& f, const Ident& j, const Ident& k,
               const Cont& c) {
    RuleParams p = with_principal({f});
    p.witness = {j, k};
    return by(RuleId::CmpR, g, p, {c});
  }
  // closes ... |- @i<alpha ▲ beta> from witnesses j, k and the data atom <j: ▲ k:>
  DerivP cmp_close(const Sequent& g, const LabeledExpr& f, const Ident& j, const Ident& k) {
    const NodeP& b = f.body;
    return cmp_r(g, f, j, k, ax(data(b->pol, b->name, j, k)));
  }
  DerivP derived(DerivedRuleId r, const Sequent& g, RuleParams p, const std::vector<Cont>& ks) {
    return apply_derived(r, g, p, ks);
  }
  DerivP derived(DerivedRuleId r, const Sequent& g, std::vector<LabeledExpr> ps, const Cont& k) {
    return apply_derived(r, g, with_principal(std::move(ps)), {k});
  }
  DerivP path_l(const Sequent& g, const LabeledExpr& f, const PathP& a, const Ident& m,
                const Cont& k) {
    RuleParams p = with_principal({f});
    p.path = a;
    p.fresh = {m};
    return apply_derived(DerivedRuleId::DiaPathL, g, p, {k});
  }
  DerivP path_r(const Sequent& g, const LabeledExpr& f, const PathP& a, const Ident& w,
                const Cont& k) {
    RuleParams p = with_principal({f});
    p.path = a;
    p.witness = {w};
    return apply_derived(DerivedRuleId::DiaPathR, g, p, {k});
  }
  DerivP and_l(const Sequent& g, const LabeledExpr& f, const Cont& k) {
    return derived(DerivedRuleId::AndL, g, {f}, k);
  }
  DerivP and_r(const Sequent& g, const LabeledExpr& f, const Cont& k1, const Cont& k2) {
    return derived(DerivedRuleId::AndR, g, with_principal({f}), {k1, k2});
  }
  DerivP iff_r(const Sequent& g, const LabeledExpr& f, const Cont& k1, const Cont& k2) {
    return derived(DerivedRuleId::IffR, g, with_principal({f}), {k1, k2});
  }
  DerivP top_l(const Sequent& g, const Ident& i, const Cont& k) {
    return derived(DerivedRuleId::TopL, g, {sat(i, top())}, k);
  }
  DerivP at_t(const Sequent& g, const Ident& i, const Cont& k) {
    return by(RuleId::AtT, g, {sat(i, nom(i))}, k);
  }
  DerivP eq_t(const Sequent& g, const Ident& c, const Ident& i, const Cont& k) {
    return by(RuleId::EqT, g, {data_eq(c, i, i)}, k);
  }
  // the inverse of a left rule at f: cut on f, proving it from what the rule produced
  DerivP inv(const Sequent& g, const LabeledExpr& f, const Cont& prove, const Cont& k) {
    return hxd::cut(g, f, prove, k);
  }
  // closes a conjunction on the right from both conjuncts in the antecedent
  Cont and_ax(const LabeledExpr& f) {
    NodeP x, y;
    split_conj(f.body, x, y);
    return [this, f, x, y](const Sequent& s) {
      return and_r(s, f, ax(sat(f.i, x)), ax(sat(f.i, y)));
    };
  }
  // ... |- @i[alpha]chi becomes @i<alpha>j |- @j chi
  DerivP box_r(const Sequent& g, const LabeledExpr& f, const PathP& a, const Ident& j,
               const Cont& k) {
    NodeP d = f.body->a;  // <alpha>~chi
    NodeP chi = diamond_body(a, d)->a;
    return derived(DerivedRuleId::NegR, g, {f}, [&](const Sequent& s) {
      return path_l(s, sat(f.i, d), a, j, [&](const Sequent& u) {
        return derived(DerivedRuleId::NegL, u, {sat(j, neg(chi))}, k);
      });
    });
  }
  // @i[alpha]chi, @i<alpha>j, ... becomes @j chi, @i<alpha>j, ...
  DerivP box_l(const Sequent& g, const LabeledExpr& f, const PathP& a, const Ident& j,
               const Cont& k) {
    NodeP d = f.body->a;
    NodeP chi = diamond_body(a, d)->a;
    return derived(DerivedRuleId::NegL, g, {f}, [&](const Sequent& s) {
      return path_r(s, sat(f.i, d), a, j, [&](const Sequent& u) {
        return derived(DerivedRuleId::NegR, u, {sat(j, neg(chi))}, k);
      });
    });
  }
};

// ---------------------------------------------------------------- axiom templates

struct Axioms {
  Tx& t;
  Ident i0;  // target nominal

  LabeledExpr at0(NodeP b) const { return sat(i0, std::move(b)); }

  DerivP build(SchemaId s, const Instantiation& inst, const NodeP& phi0) {
    Meta m{s, inst};
    Sequent g0{{}, {at0(phi0)}};
    const LabeledExpr F = at0(phi0);
    switch (s) {
      case SchemaId::CPL: return cpl_search(g0);
      case SchemaId::AtDef: return at_def(g0, F, m);
      case SchemaId::DiaDef: return dia_def(g0, F, m);
      case SchemaId::K: return k_axiom(g0, F, m);
      case SchemaId::AtK: return at_k(g0, F, m);
      case SchemaId::AtSelfDual: return at_self_dual(g0, F, m);
      case SchemaId::AtIntro: return at_intro(g0, F, m);
      case SchemaId::AtRefl: {
        Ident i = m.ident("i");
        return t.rule(RuleId::AtR, g0, {F}, [&](const Sequent& s1) {
          return t.at_t(s1, i, t.ax(sat(i, nom(i))));
        });
      }
      case SchemaId::CompAssoc:
      case SchemaId::CmpComm:
      case SchemaId::CompDist: return swap_iff(g0, F, s);
      case SchemaId::CompNeutral: return comp_neutral(g0, F, m);
      case SchemaId::Equal: return equal(g0, F, m);
      case SchemaId::EpsTrans: return eps_trans(g0, F, m);
      case SchemaId::Distinct: return distinct(g0, F);
      case SchemaId::AtData: return at_data(g0, F, m);
      case SchemaId::Subpath: return subpath(g0, F, m);
      case SchemaId::AtCmpDist: return at_cmp_dist(g0, F, m);
      case SchemaId::CmpTest: return cmp_test(g0, F, m);
      case SchemaId::Agree: return agree(g0, F, m);
      case SchemaId::Back: return back(g0, F, m);
      case SchemaId::CmpCompDist: return cmp_comp_dist(g0, F, m);
    }
    fail(Code::SchemaMismatch, -1, "unknown schema");
  }

  // parts of phi <-> psi
  static std::pair<NodeP, NodeP> iff_parts(const NodeP& e) {
    NodeP x, y;
    split_conj(e, x, y);
    return {x->a, x->b};
  }

  DerivP at_def(const Sequent& g, const LabeledExpr& F, const Meta& m) {
    auto [lhs, E] = iff_parts(F.body);
    Ident i = m.ident("i");
    NodeP phi = m.node("phi");
    const Ident& c = E->name;
    return t.iff_r(
        g, F,
        [&](const Sequent& s) {
          return t.rule(RuleId::AtL, s, {at0(lhs)}, [&](const Sequent& s1) {
            return t.at_t(s1, i, [&](const Sequent& s2) {
              LabeledExpr X = sat(i, conj(phi, nom(i)));
              LabeledExpr W = at0(at(i, conj(phi, nom(i))));
              return t.inv(s2, X, t.and_ax(X), [&](const Sequent& s3) {
                return t.inv(
                    s3, W,
                    [&](const Sequent& u) { return t.rule(RuleId::AtR, u, {W}, t.ax(X)); },
                    [&](const Sequent& s4) {
                      return t.cmp_r(s4, at0(E), i, i, [&](const Sequent& s5) {
                        return t.eq_t(s5, c, i, t.ax(data_eq(c, i, i)));
                      });
                    });
              });
            });
          });
        },
        [&](const Sequent& s) {
          return t.rule(RuleId::AtR, s, {at0(lhs)}, [&](const Sequent& s1) {
            Ident k = t.next(), l = t.next();
            return t.cmp_l(s1, at0(E), k, l, [&](const Sequent& s2) {
              LabeledExpr W = at0(at(i, conj(phi, nom(k))));
              return t.rule(RuleId::AtL, s2, {W}, [&](const Sequent& s3) {
                return t.and_l(s3, sat(i, conj(phi, nom(k))), t.ax(sat(i, phi)));
              });
            });
          });
        });
  }

  DerivP dia_def(const Sequent& g, const LabeledExpr& F, const Meta& m) {
    auto [lhs, E] = iff_parts(F.body);
    PathP a = m.path("alpha");
    NodeP phi = m.node("phi");
    const Ident& c = E->name;
    return t.iff_r(
        g, F,
        [&](const Sequent& s) {
          Ident j = t.next();
          return t.path_l(s, at0(lhs), a, j, [&](const Sequent& s1) {
            return t.at_t(s1, j, [&](const Sequent& s2) {
              LabeledExpr X = sat(j, conj(phi, nom(j)));
              LabeledExpr W = at0(diamond(a, conj(phi, nom(j))));
              return t.inv(s2, X, t.and_ax(X), [&](const Sequent& s3) {
                return t.inv(
                    s3, W, [&](const Sequent& u) { return t.path_r(u, W, a, j, t.ax(X)); },
                    [&](const Sequent& s4) {
                      return t.cmp_r(s4, at0(E), j, j, [&](const Sequent& s5) {
                        return t.eq_t(s5, c, j, t.ax(data_eq(c, j, j)));
                      });
                    });
              });
            });
          });
        },
        [&](const Sequent& s) {
          Ident j = t.next(), k = t.next();
          return t.cmp_l(s, at0(E), j, k, [&](const Sequent& s1) {
            Ident n = t.next();
            return t.path_l(s1, at0(diamond(a, conj(phi, nom(j)))), a, n, [&](const Sequent& s2) {
              return t.and_l(s2, sat(n, conj(phi, nom(j))), [&](const Sequent& s3) {
                return t.path_r(s3, at0(lhs), a, n, t.ax(sat(n, phi)));
              });
            });
          });
        });
  }

  DerivP k_axiom(const Sequent& g, const LabeledExpr& F, const Meta& m) {
    PathP a = m.path("alpha");
    NodeP phi = m.node("phi"), psi = m.node("psi");
    LabeledExpr bimp = at0(box(a, imp(phi, psi))), bphi = at0(box(a, phi)), bpsi = at0(box(a, psi));
    return t.rule(RuleId::ImpR, g, {F}, [&](const Sequent& s1) {
      return t.rule(RuleId::ImpR, s1, {at0(imp(box(a, phi), box(a, psi)))}, [&](const Sequent& s2) {
        Ident j = t.next();
        return t.box_r(s2, bpsi, a, j, [&](const Sequent& s3) {
          return t.box_l(s3, bphi, a, j, [&](const Sequent& s4) {
            return t.box_l(s4, bimp, a, j, [&](const Sequent& s5) {
              return t.imp_l(s5, sat(j, imp(phi, psi)), t.ax(sat(j, phi)), t.ax(sat(j, psi)));
            });
          });
        });
      });
    });
  }

  DerivP at_k(const Sequent& g, const LabeledExpr& F, const Meta& m) {
    Ident i = m.ident("i");
    NodeP phi = m.node("phi"), psi = m.node("psi");
    return t.rule(RuleId::ImpR, g, {F}, [&](const Sequent& s1) {
      return t.rule(RuleId::AtL, s1, {at0(at(i, imp(phi, psi)))}, [&](const Sequent& s2) {
        return t.rule(RuleId::ImpR, s2, {at0(imp(at(i, phi), at(i, psi)))}, [&](const Sequent& s3) {
          return t.rule(RuleId::AtL, s3, {at0(at(i, phi))}, [&](const Sequent& s4) {
            return t.rule(RuleId::AtR, s4, {at0(at(i, psi))}, [&](const Sequent& s5) {
              return t.imp_l(s5, sat(i, imp(phi, psi)), t.ax(sat(i, phi)), t.ax(sat(i, psi)));
            });
          });
        });
      });
    });
  }

  DerivP at_self_dual(const Sequent& g, const LabeledExpr& F, const Meta& m) {
    Ident i = m.ident("i");
    NodeP phi = m.node("phi");
    LabeledExpr na = at0(neg(at(i, phi))), an = at0(at(i, neg(phi)));
    return t.iff_r(
        g, F,
        [&](const Sequent& s) {
          return t.derived(DerivedRuleId::NegL, s, {na}, [&](const Sequent& s1) {
            return t.rule(RuleId::AtR, s1, {an}, [&](const Sequent& s2) {
              return t.derived(DerivedRuleId::NegR, s2, {sat(i, neg(phi))}, [&](const Sequent& s3) {
                return t.rule(RuleId::AtR, s3, {at0(at(i, phi))}, t.ax(sat(i, phi)));
              });
            });
          });
        },
        [&](const Sequent& s) {
          return t.derived(DerivedRuleId::NegR, s, {na}, [&](const Sequent& s1) {
            return t.rule(RuleId::AtL, s1, {an}, [&](const Sequent& s2) {
              return t.derived(DerivedRuleId::NegL, s2, {sat(i, neg(phi))}, [&](const Sequent& s3) {
                return t.rule(RuleId::AtL, s3, {at0(at(i, phi))}, t.ax(sat(i, phi)));
              });
            });
          });
        });
  }

  DerivP at_intro(const Sequent& g, const LabeledExpr& F, const Meta& m) {
    Ident i = m.ident("i");
    NodeP phi = m.node("phi");
    LabeledExpr ki = at0(nom(i));
    return t.rule(RuleId::ImpR, g, {F}, [&](const Sequent& s0) {
      return t.iff_r(
          s0, at0(iff(phi, at(i, phi))),
          [&](const Sequent& s) {
            return t.rule(RuleId::AtR, s, {at0(at(i, phi))}, [&](const Sequent& s1) {
              return t.derived(DerivedRuleId::S1Gen, s1, {ki, at0(phi)}, t.ax(sat(i, phi)));
            });
          },
          [&](const Sequent& s) {
            return t.rule(RuleId::AtL, s, {at0(at(i, phi))}, [&](const Sequent& s1) {
              return t.derived(DerivedRuleId::AtB, s1, {ki}, [&](const Sequent& s2) {
                return t.derived(DerivedRuleId::S1Gen, s2, {sat(i, nom(i0)), sat(i, phi)},
                                 t.ax(at0(phi)));
              });
            });
          });
    });
  }

  // <X ▲ Y> <-> <X' ▲ Y'> where both sides name the same witnesses, possibly swapped
  DerivP swap_iff(const Sequent& g, const LabeledExpr& F, SchemaId s) {
    auto [lhs, rhs] = iff_parts(F.body);
    auto side = [&](const NodeP& from, const NodeP& to) {
      return [&, from, to](const Sequent& u) {
        if (s == SchemaId::CompDist) return t.ax(u, at0(from));
        Ident j = t.next(), k = t.next();
        return t.cmp_l(u, at0(from), j, k, [&](const Sequent& u1) {
          if (s != SchemaId::CmpComm) return t.cmp_close(u1, at0(to), j, k);
          LabeledExpr d = data(from->pol, from->name, j, k);
          return t.cmp_r(u1, at0(to), k, j, [&](const Sequent& u2) {
            return t.derived(DerivedRuleId::CmpB, u2, {d},
                             t.ax(data(from->pol, from->name, k, j)));
          });
        });
      };
    };
    return t.iff_r(g, F, side(lhs, rhs), side(rhs, lhs));
  }

  DerivP comp_neutral(const Sequent& g, const LabeledExpr& F, const Meta& m) {
    auto [lhs, rhs] = iff_parts(F.body);
    PathP a = m.opt_path("alpha"), b = m.opt_path("beta");
    // expanded: <alpha eps beta ▲ gamma> |- <alpha beta ▲ gamma>
    auto drop = [&](const Sequent& s) {
      Ident j = t.next(), k = t.next();
      return t.cmp_l(s, at0(lhs), j, k, [&, j, k](const Sequent& s1) {
        if (!a) {
          return t.and_l(s1, at0(conj(top(), diamond(b, nom(j)))), [&](const Sequent& s2) {
            return t.cmp_close(s2, at0(rhs), j, k);
          });
        }
        Ident n = t.next();
        NodeP tail = b ? conj(top(), diamond(b, nom(j))) : conj(top(), nom(j));
        return t.path_l(s1, at0(diamond(a, tail)), a, n, [&, n](const Sequent& s2) {
          return t.and_l(s2, sat(n, tail), [&](const Sequent& s3) {
            if (!b) {
              RuleParams p = with_principal({sat(n, nom(j)), at0(diamond(a, nom(n)))});
              p.path = a;
              return t.derived(DerivedRuleId::S2Gen, s3, p, {[&](const Sequent& s4) {
                                 return t.cmp_close(s4, at0(rhs), j, k);
                               }});
            }
            LabeledExpr W = at0(diamond(a, diamond(b, nom(j))));
            return t.inv(
                s3, W, [&](const Sequent& u) { return t.path_r(u, W, a, n, t.ax(sat(n, diamond(b, nom(j))))); },
                [&](const Sequent& s4) { return t.cmp_close(s4, at0(rhs), j, k); });
          });
        });
      });
    };
    // <alpha beta ▲ gamma> |- <alpha eps beta ▲ gamma>
    auto add = [&](const Sequent& s) {
      Ident j = t.next(), k = t.next();
      return t.cmp_l(s, at0(rhs), j, k, [&, j, k](const Sequent& s1) {
        if (!a) {
          LabeledExpr X = at0(conj(top(), diamond(b, nom(j))));
          return t.top_l(s1, i0, [&](const Sequent& s2) {
            return t.inv(s2, X, t.and_ax(X), [&](const Sequent& s3) {
              return t.cmp_close(s3, at0(lhs), j, k);
            });
          });
        }
        auto finish = [&](const Sequent& s2, const Ident& n, const NodeP& tail) {
          LabeledExpr X = sat(n, conj(top(), tail));
          LabeledExpr W = at0(diamond(a, conj(top(), tail)));
          return t.top_l(s2, n, [&](const Sequent& s3) {
            return t.inv(s3, X, t.and_ax(X), [&](const Sequent& s4) {
              return t.inv(
                  s4, W, [&](const Sequent& u) { return t.path_r(u, W, a, n, t.ax(X)); },
                  [&](const Sequent& s5) { return t.cmp_close(s5, at0(lhs), j, k); });
            });
          });
        };
        if (!b) {
          return t.at_t(s1, j, [&](const Sequent& s2) { return finish(s2, j, nom(j)); });
        }
        Ident n = t.next();
        return t.path_l(s1, at0(diamond(a, diamond(b, nom(j)))), a, n, [&, n](const Sequent& s2) {
          return finish(s2, n, diamond(b, nom(j)));
        });
      });
    };
    return t.iff_r(g, F, drop, add);
  }

  DerivP equal(const Sequent& g, const LabeledExpr& F, const Meta& m) {
    Ident c = m.ident("c");
    LabeledExpr X = at0(conj(top(), nom(i0)));
    return t.at_t(g, i0, [&](const Sequent& s1) {
      return t.top_l(s1, i0, [&](const Sequent& s2) {
        return t.inv(s2, X, t.and_ax(X), [&](const Sequent& s3) {
          return t.cmp_r(s3, F, i0, i0, [&](const Sequent& s4) {
            return t.eq_t(s4, c, i0, t.ax(data_eq(c, i0, i0)));
          });
        });
      });
    });
  }

  DerivP eps_trans(const Sequent& g, const LabeledExpr& F, const Meta& m) {
    Ident c = m.ident("c");
    NodeP A, B;
    split_conj(F.body->a, A, B);
    NodeP C = F.body->b;
    Ident a = t.next(), c1 = t.next(), d = t.next(), b = t.next();
    return t.rule(RuleId::ImpR, g, {F}, [&](const Sequent& s1) {
      return t.and_l(s1, at0(F.body->a), [&](const Sequent& s2) {
        return t.cmp_l(s2, at0(A), a, c1, [&](const Sequent& s3) {
          return t.cmp_l(s3, at0(B), d, b, [&](const Sequent& s4) {
            return t.and_l(s4, at0(conj(top(), nom(c1))), [&](const Sequent& s5) {
              return t.and_l(s5, at0(conj(top(), nom(d))), [&](const Sequent& s6) {
                return t.cmp_r(s6, at0(C), a, b, [&](const Sequent& s7) {
                  return t.rule(RuleId::At5, s7, {at0(nom(c1)), at0(nom(d))}, [&](const Sequent& s8) {
                    return t.derived(DerivedRuleId::CmpB, s8, {data_eq(c, a, c1)}, [&](const Sequent& s9) {
                      return t.rule(RuleId::S3, s9, {sat(c1, nom(d)), data_eq(c, c1, a)},
                                    [&](const Sequent& s10) {
                                      return t.rule(RuleId::Eq5, s10, {data_eq(c, d, a), data_eq(c, d, b)},
                                                    t.ax(data_eq(c, a, b)));
                                    });
                    });
                  });
                });
              });
            });
          });
        });
      });
    });
  }

  DerivP distinct(const Sequent& g, const LabeledExpr& F) {
    NodeP E = F.body->a;
    const Ident& c = E->name;
    Ident j = t.next(), k = t.next();
    return t.derived(DerivedRuleId::NegR, g, {F}, [&](const Sequent& s1) {
      return t.cmp_l(s1, at0(E), j, k, [&](const Sequent& s2) {
        return t.and_l(s2, at0(conj(top(), nom(j))), [&](const Sequent& s3) {
          return t.and_l(s3, at0(conj(top(), nom(k))), [&](const Sequent& s4) {
            return t.rule(RuleId::At5, s4, {at0(nom(j)), at0(nom(k))}, [&](const Sequent& s5) {
              return t.derived(DerivedRuleId::S3Gen, s5,
                               {sat(j, nom(k)), data(CmpPolarity::Neq, c, j, k)},
                               [&](const Sequent& s6) {
                                 LabeledExpr kk = data(CmpPolarity::Neq, c, k, k);
                                 return t.rule(RuleId::NEqL, s6, {kk}, [&](const Sequent& s7) {
                                   return t.eq_t(s7, c, k, t.ax(data_eq(c, k, k)));
                                 });
                               });
            });
          });
        });
      });
    });
  }

  DerivP at_data(const Sequent& g, const LabeledExpr& F, const Meta& m) {
    auto [lhs, rhs] = iff_parts(F.body);
    Ident i = m.ident("i"), j = m.ident("j"), c = m.ident("c");
    LabeledExpr eqn = at0(lhs->a), ne = at0(rhs);
    LabeledExpr deq = data_eq(c, i, j), dne = data(CmpPolarity::Neq, c, i, j);
    return t.iff_r(
        g, F,
        [&](const Sequent& s) {
          return t.derived(DerivedRuleId::NegL, s, {at0(lhs)}, [&](const Sequent& s1) {
            return t.derived(DerivedRuleId::AtCmpR, s1, {ne}, [&](const Sequent& s2) {
              return t.rule(RuleId::NEqR, s2, {dne}, [&](const Sequent& s3) {
                return t.derived(DerivedRuleId::AtCmpR, s3, {eqn}, t.ax(deq));
              });
            });
          });
        },
        [&](const Sequent& s) {
          return t.derived(DerivedRuleId::NegR, s, {at0(lhs)}, [&](const Sequent& s1) {
            return t.derived(DerivedRuleId::AtCmpL, s1, {eqn}, [&](const Sequent& s2) {
              return t.derived(DerivedRuleId::AtCmpL, s2, {ne}, [&](const Sequent& s3) {
                return t.rule(RuleId::NEqL, s3, {dne}, t.ax(deq));
              });
            });
          });
        });
  }

  DerivP subpath(const Sequent& g, const LabeledExpr& F, const Meta& m) {
    PathP a = m.path("alpha"), b = m.path("beta");
    Ident j = t.next(), k = t.next(), n = t.next();
    return t.rule(RuleId::ImpR, g, {F}, [&](const Sequent& s1) {
      return t.cmp_l(s1, at0(F.body->a), j, k, [&](const Sequent& s2) {
        return t.path_l(s2, at0(diamond(a, diamond(b, nom(j)))), a, n, [&](const Sequent& s3) {
          return t.path_r(s3, at0(F.body->b), a, n, [&](const Sequent& s4) {
            return t.top_l(s4, n, t.ax(sat(n, top())));
          });
        });
      });
    });
  }

  DerivP at_cmp_dist(const Sequent& g, const LabeledExpr& F, const Meta& m) {
    auto [lhs, rhs] = iff_parts(F.body);
    Ident i = m.ident("i");
    PathP al = m.path("alpha"), be = m.path("beta");
    LabeledExpr inner = sat(i, rhs->b);
    return t.iff_r(
        g, F,
        [&](const Sequent& s) {
          return t.rule(RuleId::AtR, s, {at0(rhs)}, [&](const Sequent& s1) {
            Ident a = t.next(), b = t.next();
            return t.cmp_l(s1, at0(lhs), a, b, [&](const Sequent& s2) {
              return t.rule(RuleId::AtL, s2, {at0(at(i, diamond(al, nom(a))))}, [&](const Sequent& s3) {
                return t.rule(RuleId::AtL, s3, {at0(at(i, diamond(be, nom(b))))}, [&](const Sequent& s4) {
                  return t.cmp_close(s4, inner, a, b);
                });
              });
            });
          });
        },
        [&](const Sequent& s) {
          return t.rule(RuleId::AtL, s, {at0(rhs)}, [&](const Sequent& s1) {
            Ident a = t.next(), b = t.next();
            return t.cmp_l(s1, inner, a, b, [&](const Sequent& s2) {
              LabeledExpr W1 = at0(at(i, diamond(al, nom(a)))), W2 = at0(at(i, diamond(be, nom(b))));
              return t.inv(
                  s2, W1,
                  [&](const Sequent& u) { return t.rule(RuleId::AtR, u, {W1}, t.ax(sat(i, diamond(al, nom(a))))); },
                  [&](const Sequent& s3) {
                    return t.inv(
                        s3, W2,
                        [&](const Sequent& u) {
                          return t.rule(RuleId::AtR, u, {W2}, t.ax(sat(i, diamond(be, nom(b)))));
                        },
                        [&](const Sequent& s4) { return t.cmp_close(s4, at0(lhs), a, b); });
                  });
            });
          });
        });
  }

  DerivP cmp_test(const Sequent& g, const LabeledExpr& F, const Meta& m) {
    auto [lhs, rhs] = iff_parts(F.body);
    NodeP phi = m.node("phi");
    PathP al = m.path("alpha");
    NodeP inner = rhs->a->b->a;  // <alpha ▲ beta>
    return t.iff_r(
        g, F,
        [&](const Sequent& s) {
          Ident j = t.next(), k = t.next();
          return t.cmp_l(s, at0(lhs), j, k, [&](const Sequent& s1) {
            return t.and_l(s1, at0(conj(phi, diamond(al, nom(j)))), [&](const Sequent& s2) {
              return t.and_r(s2, at0(rhs), t.ax(at0(phi)),
                             [&](const Sequent& s3) { return t.cmp_close(s3, at0(inner), j, k); });
            });
          });
        },
        [&](const Sequent& s) {
          return t.and_l(s, at0(rhs), [&](const Sequent& s1) {
            Ident j = t.next(), k = t.next();
            return t.cmp_l(s1, at0(inner), j, k, [&](const Sequent& s2) {
              LabeledExpr X = at0(conj(phi, diamond(al, nom(j))));
              return t.inv(s2, X, t.and_ax(X),
                           [&](const Sequent& s3) { return t.cmp_close(s3, at0(lhs), j, k); });
            });
          });
        });
  }

  DerivP agree(const Sequent& g, const LabeledExpr& F, const Meta& m) {
    auto [lhs, rhs] = iff_parts(F.body);
    Ident i = m.ident("i"), j = m.ident("j");
    PathP al = m.path("alpha");
    return t.iff_r(
        g, F,
        [&](const Sequent& s) {
          Ident a = t.next(), b = t.next();
          return t.cmp_l(s, at0(lhs), a, b, [&](const Sequent& s1) {
            NodeP ia = at(i, diamond(al, nom(a)));
            return t.rule(RuleId::AtL, s1, {at0(at(j, ia))}, [&](const Sequent& s2) {
              return t.rule(RuleId::AtL, s2, {sat(j, ia)}, [&](const Sequent& s3) {
                LabeledExpr W = at0(ia);
                return t.inv(
                    s3, W,
                    [&](const Sequent& u) { return t.rule(RuleId::AtR, u, {W}, t.ax(sat(i, ia->b))); },
                    [&](const Sequent& s4) { return t.cmp_close(s4, at0(rhs), a, b); });
              });
            });
          });
        },
        [&](const Sequent& s) {
          Ident a = t.next(), b = t.next();
          return t.cmp_l(s, at0(rhs), a, b, [&](const Sequent& s1) {
            NodeP ia = at(i, diamond(al, nom(a)));
            return t.rule(RuleId::AtL, s1, {at0(ia)}, [&](const Sequent& s2) {
              LabeledExpr W1 = sat(j, ia), W2 = at0(at(j, ia));
              return t.inv(
                  s2, W1,
                  [&](const Sequent& u) { return t.rule(RuleId::AtR, u, {W1}, t.ax(sat(i, ia->b))); },
                  [&](const Sequent& s3) {
                    return t.inv(
                        s3, W2,
                        [&](const Sequent& u) { return t.rule(RuleId::AtR, u, {W2}, t.ax(W1)); },
                        [&](const Sequent& s4) { return t.cmp_close(s4, at0(lhs), a, b); });
                  });
            });
          });
        });
  }

  DerivP back(const Sequent& g, const LabeledExpr& F, const Meta& m) {
    Ident i = m.ident("i");
    PathP al = m.path("alpha"), be = m.path("beta");
    Ident a = t.next(), b = t.next(), n = t.next();
    return t.rule(RuleId::ImpR, g, {F}, [&](const Sequent& s1) {
      return t.cmp_l(s1, at0(F.body->a), a, b, [&](const Sequent& s2) {
        NodeP ib = at(i, diamond(be, nom(a)));
        return t.path_l(s2, at0(diamond(al, ib)), al, n, [&](const Sequent& s3) {
          return t.rule(RuleId::AtL, s3, {sat(n, ib)}, [&](const Sequent& s4) {
            LabeledExpr W = at0(ib);
            return t.inv(
                s4, W,
                [&](const Sequent& u) { return t.rule(RuleId::AtR, u, {W}, t.ax(sat(i, ib->b))); },
                [&](const Sequent& s5) { return t.cmp_close(s5, at0(F.body->b), a, b); });
          });
        });
      });
    });
  }

  DerivP cmp_comp_dist(const Sequent& g, const LabeledExpr& F, const Meta& m) {
    PathP al = m.path("alpha"), be = m.path("beta"), ga = m.path("gamma");
    NodeP inner = diamond_body(al, F.body->a);  // <beta ▲ gamma>
    Ident a = t.next(), b = t.next(), c = t.next();
    return t.rule(RuleId::ImpR, g, {F}, [&](const Sequent& s1) {
      return t.path_l(s1, at0(F.body->a), al, a, [&](const Sequent& s2) {
        return t.cmp_l(s2, sat(a, inner), b, c, [&](const Sequent& s3) {
          LabeledExpr W1 = at0(diamond(al, diamond(be, nom(b))));
          LabeledExpr W2 = at0(diamond(al, diamond(ga, nom(c))));
          return t.inv(
              s3, W1,
              [&](const Sequent& u) { return t.path_r(u, W1, al, a, t.ax(sat(a, diamond(be, nom(b))))); },
              [&](const Sequent& s4) {
                return t.inv(
                    s4, W2,
                    [&](const Sequent& u) {
                      return t.path_r(u, W2, al, a, t.ax(sat(a, diamond(ga, nom(c)))));
                    },
                    [&](const Sequent& s5) { return t.cmp_close(s5, at0(F.body->b), b, c); });
              });
        });
      });
    });
  }
};

// ---------------------------------------------------------------- rules of H

bool occurs_in(const Ident& n, const NodeP& e) { return signature_of(e).noms.contains(n); }
bool occurs_in(const Ident& n, const PathP& a) { return a && signature_of(a).noms.contains(n); }

// (@i<a>j & <j:alpha ▲ beta>) -> phi, with alpha possibly absent
struct PastePremiss {
  Ident i, j, a, sort;
  CmpPolarity pol;
  PathP alpha, beta;
  NodeP phi;
};

std::optional<PastePremiss> match_paste(const NodeP& e) {
  if (e->kind != NodeKind::Imp) return std::nullopt;
  NodeP x, y;
  if (!split_conj(e->a, x, y)) return std::nullopt;
  if (x->kind != NodeKind::At || x->b->kind != NodeKind::Dia || x->b->b->kind != NodeKind::Nom)
    return std::nullopt;
  if (y->kind != NodeKind::Cmp) return std::nullopt;
  PastePremiss p{x->name, x->b->b->name, x->b->name, y->name, y->pol, nullptr, y->right, e->b};
  const PathP& l = y->left;
  if (l->kind == PathKind::Goto && l->name == p.j) return p;
  if (l->kind == PathKind::Comp && l->left->kind == PathKind::Goto && l->left->name == p.j) {
    p.alpha = l->right;
    return p;
  }
  return std::nullopt;
}

NodeP paste_conclusion(const PastePremiss& p) {
  PathP tail = p.alpha ? comp(step(p.a), p.alpha) : step(p.a);
  return imp(cmp(p.pol, p.sort, comp(go(p.i), tail), p.beta), p.phi);
}

struct Translator {
  const HilbertProof& proof;
  const std::vector<NodeP>& formulas;
  Fresh fr;
  std::map<std::pair<int, Ident>, DerivP> memo;

  Ident fresh_for(std::initializer_list<NodeP> es, const Ident& prefer) {
    bool ok = true;
    for (const auto& e : es) ok = ok && !occurs_in(prefer, e);
    return ok ? prefer : fr.next();
  }

  DerivP renamed(const DerivP& d, const Ident& from, const Ident& to) {
    if (from == to) return d;
    return substitute(d, from, to, fr);
  }

  DerivP of(int n, const Ident& t) {
    auto key = std::make_pair(n, t);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    DerivP d = build(n, t);
    memo.emplace(key, d);
    return d;
  }

  DerivP build(int n, const Ident& t) {
    const HilbertStep& st = proof[n];
    const NodeP& phi = formulas[n];
    Tx tx{fr};
    switch (st.kind) {
      case HilbertStep::Kind::Axiom: {
        Axioms ax{tx, t};
        return ax.build(st.schema, st.inst, phi);
      }
      case HilbertStep::Kind::MP: {
        const NodeP& chi = formulas[st.from];
        Ident s = fresh_for({chi}, t);
        DerivP minor = of(st.from, s), major = of(st.impl, s);
        LabeledExpr goal = sat(s, phi);
        RuleParams p = with_principal({goal});
        p.cut = sat(s, chi);
        DerivP d = apply_derived(DerivedRuleId::MP, Sequent{{}, {goal}}, p,
                                 {[&](const Sequent& u) { return weaken_to(u, minor); },
                                  [&](const Sequent& u) { return weaken_to(u, major); }});
        return renamed(d, s, t);
      }
      case HilbertStep::Kind::Nec: {
        const NodeP& chi = formulas[st.from];
        Ident j = fr.next();
        DerivP sub = renamed(of(st.from, fresh_for({chi}, j)), fresh_for({chi}, j), j);
        LabeledExpr goal = sat(t, phi);
        return tx.box_r(Sequent{{}, {goal}}, goal, st.path, j,
                        [&](const Sequent& u) { return weaken_to(u, sub); });
      }
      case HilbertStep::Kind::Name: {
        const NodeP& src = formulas[st.from];  // @i phi
        Ident s = fr.next();
        DerivP d = of(st.from, s);
        RuleParams p = with_principal({sat(s, src)});
        DerivP inner = invert(RuleId::AtR, p, d).at(0);  // |- @i phi
        return renamed(inner, st.i, t);
      }
      case HilbertStep::Kind::Paste: {
        const NodeP& src = formulas[st.from];
        Ident s = fresh_for({src}, t);
        return renamed(paste(n, s, *match_paste(src)), s, t);
      }
    }
    fail(Code::NotChecked, n, "unknown step");
  }

  DerivP paste(int n, const Ident& t, const PastePremiss& pp) {
    Tx tx{fr};
    const NodeP& src = formulas[proof[n].from];
    DerivP ih = of(proof[n].from, t);  // |- @t((@i<a>j & <j:alpha ▲ beta>) -> phi)
    NodeP concl = formulas[n];
    NodeP C = src->a;
    LabeledExpr goal = sat(t, concl), Cf = sat(t, C), Cmp = sat(t, concl->a);
    NodeP cj;
    {
      NodeP x;
      split_conj(C, x, cj);
    }
    LabeledExpr rhs = sat(t, cj);  // @t<j:alpha ▲ beta>
    RuleParams ip = with_principal({sat(t, src)});
    DerivP inv_ih = invert(RuleId::ImpR, ip, ih).at(0);  // @t C |- @t phi
    fr.avoid(ih);
    Ident b = fr.next();
    Ident a = pp.alpha ? fr.next() : pp.j;
    auto use_ih = [&](const Sequent& u) { return weaken_to(u, inv_ih); };
    LabeledExpr Ij = sat(pp.i, dia(pp.a, nom(pp.j)));
    auto left_conj = [&](const Sequent& u) {
      return tx.rule(RuleId::AtR, u, {sat(t, at(pp.i, dia(pp.a, nom(pp.j))))}, tx.ax(Ij));
    };
    return tx.rule(RuleId::ImpR, Sequent{{}, {goal}}, {goal}, [&](const Sequent& s1) {
      return tx.cmp_l(s1, Cmp, a, b, [&](const Sequent& s2) {
        NodeP body = pp.alpha ? dia(pp.a, diamond(pp.alpha, nom(a))) : dia(pp.a, nom(a));
        return tx.rule(RuleId::AtL, s2, {sat(t, at(pp.i, body))}, [&](const Sequent& s3) {
          if (!pp.alpha) {
            LabeledExpr W = sat(t, at(pp.j, nom(pp.j)));
            return tx.inv(
                s3, Cf,
                [&](const Sequent& u) {
                  return tx.and_r(u, Cf, left_conj, [&](const Sequent& v) {
                    return tx.inv(
                        v, W,
                        [&](const Sequent& w) {
                          return tx.rule(RuleId::AtR, w, {W}, [&](const Sequent& x) {
                            return tx.at_t(x, pp.j, tx.ax(sat(pp.j, nom(pp.j))));
                          });
                        },
                        [&](const Sequent& w) { return tx.cmp_close(w, rhs, pp.j, b); });
                  });
                },
                use_ih);
          }
          return tx.dia_l(s3, sat(pp.i, body), pp.j, [&](const Sequent& s4) {
            LabeledExpr W = sat(t, at(pp.j, diamond(pp.alpha, nom(a))));
            return tx.inv(
                s4, Cf,
                [&](const Sequent& u) {
                  return tx.and_r(u, Cf, left_conj, [&](const Sequent& v) {
                    return tx.inv(
                        v, W,
                        [&](const Sequent& w) {
                          return tx.rule(RuleId::AtR, w, {W},
                                         tx.ax(sat(pp.j, diamond(pp.alpha, nom(a)))));
                        },
                        [&](const Sequent& w) { return tx.cmp_close(w, rhs, a, b); });
                  });
                },
                use_ih);
          });
        });
      });
    });
  }
};

// ---------------------------------------------------------------- text format

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

bool is_key_start(std::string_view s) {
  std::size_t k = 0;
  while (k < s.size() && std::isspace(static_cast<unsigned char>(s[k]))) ++k;
  std::size_t st = k;
  while (k < s.size() && std::isalpha(static_cast<unsigned char>(s[k]))) ++k;
  if (k == st) return false;
  while (k < s.size() && std::isspace(static_cast<unsigned char>(s[k]))) ++k;
  return k < s.size() && s[k] == '=';
}

const std::set<std::string> kNodeKeys = {"phi", "psi"};
const std::set<std::string> kPathKeys = {"alpha", "beta", "gamma", "eta"};
const std::set<std::string> kIdentKeys = {"i", "j", "c", "op"};

Instantiation parse_inst(std::string_view body, int line) {
  Instantiation inst;
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (std::size_t k = 0; k < body.size(); ++k)
    if (body[k] == ',' && is_key_start(body.substr(k + 1))) {
      parts.push_back(std::string(body.substr(start, k - start)));
      start = k + 1;
    }
  if (!trim(body.substr(start)).empty()) parts.push_back(std::string(body.substr(start)));
  for (const auto& part : parts) {
    auto eq = part.find('=');
    if (eq == std::string::npos) fail(Code::Syntax, line, "expected key=value in '" + part + "'");
    std::string key = trim(std::string_view(part).substr(0, eq));
    std::string val = trim(std::string_view(part).substr(eq + 1));
    try {
      if (kNodeKeys.contains(key))
        inst[key] = parse_node(val);
      else if (kPathKeys.contains(key))
        inst[key] = parse_path(val);
      else if (kIdentKeys.contains(key))
        inst[key] = val;
      else
        fail(Code::Syntax, line, "unknown meta-variable '" + key + "'");
    } catch (const ParseError& e) {
      fail(Code::Syntax, line, "meta-variable " + key + ": " + e.what());
    }
  }
  return inst;
}

std::string print_inst(const Instantiation& inst) {
  std::string out = "[";
  bool first = true;
  for (const auto& [k, v] : inst) {
    if (!first) out += ", ";
    first = false;
    out += k + "=";
    if (auto n = std::get_if<NodeP>(&v))
      out += print_node(*n);
    else if (auto p = std::get_if<PathP>(&v))
      out += print_path(*p);
    else
      out += std::get<Ident>(v);
  }
  return out + "]";
}

}  // namespace

const char* schema_name(SchemaId s) { return kSchemaNames[static_cast<std::size_t>(s)]; }

std::optional<SchemaId> schema_from_name(std::string_view name) {
  for (int k = 0; k < kSchemaCount; ++k)
    if (name == kSchemaNames[k]) return static_cast<SchemaId>(k);
  return std::nullopt;
}

bool is_cpl_tautology(const NodeP& e) {
  std::vector<std::string> atoms;
  cpl_atoms(e, atoms);
  if (atoms.size() > 24) {
    try {
      cpl_search(Sequent{{}, {sat("_g0", e)}});
      return true;
    } catch (const HilbertError&) {
      return false;
    }
  }
  for (unsigned long v = 0; v < (1ul << atoms.size()); ++v)
    if (!cpl_eval(e, atoms, v)) return false;
  return true;
}

Instantiation standard_instantiation(SchemaId s) {
  if (s == SchemaId::CPL) return {{"phi", imp(prop("p"), prop("p"))}};
  static const std::map<SchemaId, std::vector<std::string>> keys = {
      {SchemaId::AtDef, {"i", "phi", "c"}},
      {SchemaId::DiaDef, {"alpha", "phi", "c"}},
      {SchemaId::K, {"alpha", "phi", "psi"}},
      {SchemaId::AtK, {"i", "phi", "psi"}},
      {SchemaId::AtSelfDual, {"i", "phi"}},
      {SchemaId::AtIntro, {"i", "phi"}},
      {SchemaId::AtRefl, {"i"}},
      {SchemaId::CompAssoc, {"alpha", "beta", "gamma", "eta", "c"}},
      {SchemaId::CompNeutral, {"alpha", "beta", "gamma", "c"}},
      {SchemaId::CompDist, {"alpha", "beta", "phi"}},
      {SchemaId::Equal, {"c"}},
      {SchemaId::CmpComm, {"alpha", "beta", "c"}},
      {SchemaId::EpsTrans, {"alpha", "beta", "c"}},
      {SchemaId::Distinct, {"c"}},
      {SchemaId::AtData, {"i", "j", "c"}},
      {SchemaId::Subpath, {"alpha", "beta", "gamma", "c"}},
      {SchemaId::AtCmpDist, {"i", "alpha", "beta", "c"}},
      {SchemaId::CmpTest, {"phi", "alpha", "beta", "c"}},
      {SchemaId::Agree, {"i", "j", "alpha", "beta", "c"}},
      {SchemaId::Back, {"alpha", "i", "beta", "gamma", "c"}},
      {SchemaId::CmpCompDist, {"alpha", "beta", "gamma", "c"}}};
  Instantiation inst;
  for (const auto& k : keys.at(s)) {
    if (k == "phi") inst[k] = prop("p");
    else if (k == "psi") inst[k] = prop("q");
    else if (kPathKeys.contains(k)) inst[k] = step("a");
    else if (k == "i") inst[k] = Ident("J");
    else if (k == "j") inst[k] = Ident("K");
    else inst[k] = Ident("c");
  }
  return inst;
}

NodeP schema_instance(SchemaId s, const Instantiation& inst) {
  NodeP f = build_instance(s, inst);
  if (s == SchemaId::CPL && !is_cpl_tautology(f))
    fail(Code::SchemaMismatch, -1, "CPL: '" + print_node(f) + "' is not a tautology");
  return f;
}

HilbertReport check_hilbert(const HilbertProof& proof) {
  HilbertReport rep;
  rep.formulas.assign(proof.size(), nullptr);
  auto issue = [&](int n, Code c, const std::string& msg) {
    rep.ok = false;
    rep.issues.push_back({n, c, msg});
  };
  auto earlier = [&](int n, int k) -> NodeP {
    if (k < 0 || k >= n) {
      issue(n, Code::BadIndex, "step " + std::to_string(k + 1) + " is not an earlier step");
      return nullptr;
    }
    if (!rep.formulas[k])
      issue(n, Code::BadIndex, "step " + std::to_string(k + 1) + " was not accepted");
    return rep.formulas[k];
  };
  for (int n = 0; n < int(proof.size()); ++n) {
    const HilbertStep& st = proof[n];
    switch (st.kind) {
      case HilbertStep::Kind::Axiom:
        try {
          rep.formulas[n] = schema_instance(st.schema, st.inst);
        } catch (const HilbertError& e) {
          issue(n, e.code, e.what());
        }
        break;
      case HilbertStep::Kind::MP: {
        NodeP chi = earlier(n, st.from), maj = earlier(n, st.impl);
        if (!chi || !maj) break;
        if (maj->kind != NodeKind::Imp || !equal(maj->a, chi)) {
          issue(n, Code::SchemaMismatch,
                "MP: step " + std::to_string(st.impl + 1) + " is not an implication from step " +
                    std::to_string(st.from + 1));
          break;
        }
        rep.formulas[n] = maj->b;
        break;
      }
      case HilbertStep::Kind::Nec: {
        NodeP chi = earlier(n, st.from);
        if (!chi) break;
        if (!st.path) {
          issue(n, Code::SchemaMismatch, "Nec: missing path");
          break;
        }
        rep.formulas[n] = box(st.path, chi);
        break;
      }
      case HilbertStep::Kind::Name: {
        NodeP src = earlier(n, st.from);
        if (!src) break;
        if (src->kind != NodeKind::At || src->name != st.i) {
          issue(n, Code::SchemaMismatch, "Name: step " + std::to_string(st.from + 1) +
                                             " is not of the form @" + st.i + " phi");
          break;
        }
        if (occurs_in(st.i, src->b)) {
          issue(n, Code::SideCondition, "Name: " + st.i + " occurs in " + print_node(src->b));
          break;
        }
        rep.formulas[n] = src->b;
        break;
      }
      case HilbertStep::Kind::Paste: {
        NodeP src = earlier(n, st.from);
        if (!src) break;
        auto pp = match_paste(src);
        if (!pp || pp->i != st.i || pp->j != st.j) {
          issue(n, Code::SchemaMismatch, "Paste: step " + std::to_string(st.from + 1) +
                                             " is not (@" + st.i + "<a>" + st.j + " & <" + st.j +
                                             ":alpha ▲ beta>) -> phi");
          break;
        }
        bool bad = pp->i == pp->j;
        for (const auto& n2 : {pp->i, pp->j})
          bad = bad || occurs_in(n2, pp->phi) || occurs_in(n2, pp->alpha) || occurs_in(n2, pp->beta);
        if (bad) {
          issue(n, Code::SideCondition,
                "Paste: " + st.i + " and " + st.j + " must differ and not occur in phi, alpha, beta");
          break;
        }
        rep.formulas[n] = paste_conclusion(*pp);
        break;
      }
    }
  }
  if (proof.empty()) issue(-1, Code::BadIndex, "empty proof");
  return rep;
}

DerivP translate(const HilbertProof& proof, const Ident& target) {
  HilbertReport rep = check_hilbert(proof);
  if (!rep.ok) {
    const auto& is = rep.issues.front();
    throw HilbertError(Code::NotChecked, is.step, "proof does not check: " + is.message);
  }
  const NodeP& last = rep.formulas.back();
  if (occurs_in(target, last))
    fail(Code::TargetNotFresh, int(proof.size()) - 1, target + " occurs in " + print_node(last));
  Translator tr{proof, rep.formulas, Fresh{}, {}};
  tr.fr.avoid(target);
  for (const auto& f : rep.formulas)
    for (const auto& n : signature_of(f).noms) tr.fr.avoid(n);
  for (const auto& st : proof) {
    tr.fr.avoid(st.i);
    tr.fr.avoid(st.j);
    if (st.path)
      for (const auto& n : signature_of(st.path).noms) tr.fr.avoid(n);
  }
  return tr.of(int(proof.size()) - 1, target);
}

HilbertProof parse_hilbert(std::string_view text) {
  HilbertProof proof;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = trim(raw);
    if (s.empty() || s[0] == '#') continue;
    auto dot = s.find('.');
    if (dot == std::string::npos) fail(Code::Syntax, line, "line " + std::to_string(line) + ": expected 'n.'");
    int num = 0;
    try {
      num = std::stoi(s.substr(0, dot));
    } catch (...) {
      fail(Code::Syntax, line, "line " + std::to_string(line) + ": bad step number");
    }
    if (num != int(proof.size()) + 1)
      fail(Code::Syntax, line,
           "line " + std::to_string(line) + ": expected step " + std::to_string(proof.size() + 1));
    std::istringstream ws(s.substr(dot + 1));
    std::string kw;
    ws >> kw;
    HilbertStep st;
    auto index = [&]() {
      int k = 0;
      if (!(ws >> k)) fail(Code::Syntax, line, "line " + std::to_string(line) + ": expected a step number");
      return k - 1;
    };
    auto ident = [&]() {
      std::string x;
      if (!(ws >> x)) fail(Code::Syntax, line, "line " + std::to_string(line) + ": expected a nominal");
      return x;
    };
    std::string rest;
    if (kw == "AXIOM") {
      st.kind = HilbertStep::Kind::Axiom;
      std::string name;
      ws >> name;
      auto sid = schema_from_name(name);
      if (!sid) fail(Code::Syntax, line, "line " + std::to_string(line) + ": unknown schema '" + name + "'");
      st.schema = *sid;
      std::getline(ws, rest);
      rest = trim(rest);
      if (!rest.empty()) {
        if (rest.front() != '[' || rest.back() != ']')
          fail(Code::Syntax, line, "line " + std::to_string(line) + ": expected [key=value, ...]");
        st.inst = parse_inst(std::string_view(rest).substr(1, rest.size() - 2), line);
      }
    } else if (kw == "MP") {
      st.kind = HilbertStep::Kind::MP;
      st.from = index();
      st.impl = index();
    } else if (kw == "NAME") {
      st.kind = HilbertStep::Kind::Name;
      st.from = index();
      st.i = ident();
    } else if (kw == "PASTE") {
      st.kind = HilbertStep::Kind::Paste;
      st.from = index();
      st.i = ident();
      st.j = ident();
    } else if (kw == "NEC") {
      st.kind = HilbertStep::Kind::Nec;
      st.from = index();
      std::getline(ws, rest);
      rest = trim(rest);
      if (rest.size() < 2 || rest.front() != '<' || rest.back() != '>')
        fail(Code::Syntax, line, "line " + std::to_string(line) + ": expected <path>");
      try {
        st.path = parse_path(rest.substr(1, rest.size() - 2));
      } catch (const ParseError& e) {
        fail(Code::Syntax, line, "line " + std::to_string(line) + ": " + e.what());
      }
    } else {
      fail(Code::Syntax, line, "line " + std::to_string(line) + ": unknown step kind '" + kw + "'");
    }
    if (st.kind != HilbertStep::Kind::Axiom && st.kind != HilbertStep::Kind::Nec) {
      std::string extra;
      if (ws >> extra) fail(Code::Syntax, line, "line " + std::to_string(line) + ": trailing '" + extra + "'");
    }
    proof.push_back(std::move(st));
  }
  return proof;
}

std::string print_hilbert(const HilbertProof& proof) {
  std::string out;
  for (std::size_t n = 0; n < proof.size(); ++n) {
    const HilbertStep& st = proof[n];
    out += std::to_string(n + 1) + ". ";
    switch (st.kind) {
      case HilbertStep::Kind::Axiom:
        out += std::string("AXIOM ") + schema_name(st.schema);
        if (!st.inst.empty()) out += " " + print_inst(st.inst);
        break;
      case HilbertStep::Kind::MP:
        out += "MP " + std::to_string(st.from + 1) + " " + std::to_string(st.impl + 1);
        break;
      case HilbertStep::Kind::Nec:
        out += "NEC " + std::to_string(st.from + 1) + " <" + print_path(st.path) + ">";
        break;
      case HilbertStep::Kind::Name: out += "NAME " + std::to_string(st.from + 1) + " " + st.i; break;
      case HilbertStep::Kind::Paste:
        out += "PASTE " + std::to_string(st.from + 1) + " " + st.i + " " + st.j;
        break;
    }
    out += "\n";
  }
  return out;
}

}  // namespace hxd
