#include "hxd/meta.hpp"

#include <array>

namespace hxd {

namespace {

constexpr std::array<const char*, kDerivedCount> kDerivedNames = {
    "AxGen", "TopL", "NegL", "NegR", "AndL", "AndR", "IffL", "IffR", "MP", "DiaPathL",
    "DiaPathR", "S1Gen", "S2Gen", "S3Gen", "AtB", "AtCmpL", "AtCmpR", "CmpB", "BoxCmpL",
    "BoxCmpR"};

using Code = MetaError::Code;

[[noreturn]] void fail(Code c, const std::string& msg) { throw MetaError(c, msg); }

Sequent plus_ante(Sequent s, const LabeledExpr& f) {
  s.ante.insert(f);
  return s;
}
Sequent plus_cons(Sequent s, const LabeledExpr& f) {
  s.cons.insert(f);
  return s;
}

bool is_kind(const NodeP& e, NodeKind k) { return e && e->kind == k; }
bool is_neg(const NodeP& e) { return is_kind(e, NodeKind::Imp) && is_kind(e->b, NodeKind::Bot); }
bool is_top(const NodeP& e) { return is_neg(e) && is_kind(e->a, NodeKind::Bot); }
// phi & psi is ~(phi -> ~psi)
bool is_conj(const NodeP& e) {
  return is_neg(e) && is_kind(e->a, NodeKind::Imp) && is_neg(e->a->b);
}
NodeP conj_left(const NodeP& e) { return e->a->a; }
NodeP conj_right(const NodeP& e) { return e->a->b->a; }
bool is_iff(const NodeP& e) {
  if (!is_conj(e)) return false;
  NodeP l = conj_left(e), r = conj_right(e);
  return is_kind(l, NodeKind::Imp) && is_kind(r, NodeKind::Imp) && equal(l->a, r->b) &&
         equal(l->b, r->a);
}

// Proof templates. Additive lemmas hand their continuation the goal plus the new formula.
struct Templates {
  Fresh& fr;

  DerivP ax(const Sequent& g, const LabeledExpr& f) {
    if (f.is_data()) {
      if (f.pol == CmpPolarity::Eq) return ax_on(g, f);
      LabeledExpr eq = data_eq(f.sort, f.i, f.j);
      return by(RuleId::NEqL, g, {f}, [&](const Sequent& s) {
        return by(RuleId::NEqR, s, {f}, [&](const Sequent& t) { return ax_on(t, eq); });
      });
    }
    const NodeP& b = f.body;
    switch (b->kind) {
      case NodeKind::Prop:
      case NodeKind::Nom: return ax_on(g, f);
      case NodeKind::Bot: return make_deriv(RuleId::Bot, g, with_principal({f}));
      case NodeKind::Imp:
        return by(RuleId::ImpR, g, {f}, [&](const Sequent& s) {
          return by(RuleId::ImpL, s, with_principal({f}),
                    {[&](const Sequent& t) { return ax(t, sat(f.i, b->a)); },
                     [&](const Sequent& t) { return ax(t, sat(f.i, b->b)); }});
        });
      case NodeKind::At: {
        LabeledExpr inner = sat(b->name, b->b);
        return by(RuleId::AtL, g, {f}, [&](const Sequent& s) {
          return by(RuleId::AtR, s, {f}, [&](const Sequent& t) { return ax(t, inner); });
        });
      }
      case NodeKind::Dia: {
        Ident m = fr.next();
        RuleParams l = with_principal({f});
        l.fresh = {m};
        RuleParams r = with_principal({f});
        r.witness = {m};
        return by(RuleId::DiaL, g, l, {[&](const Sequent& s) {
                    return by(RuleId::DiaR, s, r, {[&](const Sequent& t) {
                                return ax(t, sat(m, b->b));
                              }});
                  }});
      }
      case NodeKind::Cmp: {
        Ident m = fr.next(), n = fr.next();
        RuleParams l = with_principal({f});
        l.fresh = {m, n};
        RuleParams r = with_principal({f});
        r.witness = {m, n};
        return by(RuleId::CmpL, g, l, {[&](const Sequent& s) {
                    return by(RuleId::CmpR, s, r, {[&](const Sequent& t) {
                                return ax(t, data(b->pol, b->name, m, n));
                              }});
                  }});
      }
    }
    fail(Code::ParamShape, "AxGen: unknown formula");
  }

  // from @i j add @j i
  DerivP flip_at(const Sequent& g, const Ident& i, const Ident& j, const Cont& k) {
    LabeledExpr ji = sat(j, nom(i)), ii = sat(i, nom(i)), ij = sat(i, nom(j));
    if (i == j || g.ante.contains(ji)) return k(g);
    auto five = [&](const Sequent& s) {
      return by(RuleId::At5, s, {ij, ii}, weaken_then(plus_ante(g, ji), k));
    };
    if (g.ante.contains(ii)) return five(g);
    return by(RuleId::AtT, g, {ii}, five);
  }

  // from @i j and @i phi add @j phi
  DerivP s1(const Sequent& g, const Ident& i, const Ident& j, const NodeP& phi, const Cont& k) {
    LabeledExpr target = sat(j, phi);
    if (i == j || g.ante.contains(target)) return k(g);
    LabeledExpr ij = sat(i, nom(j)), iphi = sat(i, phi);
    switch (phi->kind) {
      case NodeKind::Nom: return by(RuleId::At5, g, {ij, iphi}, k);
      case NodeKind::Prop:
      case NodeKind::Bot: return by(RuleId::S1, g, {ij, iphi}, k);
      case NodeKind::Dia:
        if (phi->b->kind == NodeKind::Nom) return by(RuleId::S1, g, {ij, iphi}, k);
        break;
      default: break;
    }
    return cut(g, target, [&](const Sequent& s) { return transport(s, i, j, phi); }, k);
  }

  // closes @i j, @i phi, ... |- ..., @j phi
  DerivP transport(const Sequent& g, const Ident& i, const Ident& j, const NodeP& phi) {
    LabeledExpr src = sat(i, phi), dst = sat(j, phi);
    switch (phi->kind) {
      case NodeKind::Imp:
        return by(RuleId::ImpR, g, {dst}, [&](const Sequent& s) {
          return by(RuleId::ImpL, s, with_principal({src}),
                    {[&](const Sequent& t) {
                       return flip_at(t, i, j, [&](const Sequent& u) {
                         return s1(u, j, i, phi->a, [&](const Sequent& v) {
                           return ax(v, sat(i, phi->a));
                         });
                       });
                     },
                     [&](const Sequent& t) {
                       return s1(t, i, j, phi->b,
                                 [&](const Sequent& u) { return ax(u, sat(j, phi->b)); });
                     }});
        });
      case NodeKind::At:
        return by(RuleId::AtL, g, {src}, [&](const Sequent& s) {
          return by(RuleId::AtR, s, {dst},
                    [&](const Sequent& t) { return ax(t, sat(phi->name, phi->b)); });
        });
      case NodeKind::Dia: {
        Ident m = fr.next();
        RuleParams l = with_principal({src});
        l.fresh = {m};
        RuleParams r = with_principal({dst});
        r.witness = {m};
        return by(RuleId::DiaL, g, l, {[&](const Sequent& s) {
                    return by(RuleId::S1, s, {sat(i, nom(j)), sat(i, dia(phi->name, nom(m)))},
                              [&](const Sequent& t) {
                                return by(RuleId::DiaR, t, r, {[&](const Sequent& u) {
                                            return ax(u, sat(m, phi->b));
                                          }});
                              });
                  }});
      }
      case NodeKind::Cmp: {
        Ident m = fr.next(), n = fr.next();
        RuleParams l = with_principal({src});
        l.fresh = {m, n};
        RuleParams r = with_principal({dst});
        r.witness = {m, n};
        NodeP wl = diamond(phi->left, nom(m)), wr = diamond(phi->right, nom(n));
        return by(RuleId::CmpL, g, l, {[&](const Sequent& s) {
                    return s1(s, i, j, wl, [&](const Sequent& t) {
                      return s1(t, i, j, wr, [&](const Sequent& u) {
                        return by(RuleId::CmpR, u, r, {[&](const Sequent& v) {
                                    return ax(v, data(phi->pol, phi->name, m, n));
                                  }});
                      });
                    });
                  }});
      }
      default: return ax(g, dst);
    }
  }

  // from @j k and @i<alpha>j add @i<alpha>k
  DerivP s2(const Sequent& g, const Ident& j, const Ident& k2, const Ident& i, const PathP& alpha,
            const Cont& k) {
    LabeledExpr target = sat(i, diamond(alpha, nom(k2)));
    LabeledExpr w = sat(i, diamond(alpha, nom(j)));
    if (j == k2 || g.ante.contains(target)) return k(g);
    if (alpha->kind == PathKind::Step) return by(RuleId::S2, g, {sat(j, nom(k2)), w}, k);
    Ident m = fr.next();
    auto left = [&](const Sequent& s) {
      return dia_l(s, w, alpha, nom(j), m, [&](const Sequent& t) {
        return dia_r(t, target, alpha, nom(k2), m, [&](const Sequent& u) {
          return flip_at(u, m, j, [&](const Sequent& v) {
            return by(RuleId::At5, v, {sat(j, nom(m)), sat(j, nom(k2))},
                      [&](const Sequent& x) { return ax_on(x, sat(m, nom(k2))); });
          });
        });
      });
    };
    return cut(g, target, left, k);
  }

  // from @i j and <i: ▲ k:> add <j: ▲ k:>
  DerivP s3(const Sequent& g, const Ident& i, const Ident& j, const LabeledExpr& d, const Cont& k) {
    LabeledExpr target = data(d.pol, d.sort, j, d.j);
    if (g.ante.contains(target)) return k(g);
    if (d.pol == CmpPolarity::Eq) return by(RuleId::S3, g, {sat(i, nom(j)), d}, k);
    auto left = [&](const Sequent& s) {
      return by(RuleId::NEqR, s, {target}, [&](const Sequent& t) {
        return by(RuleId::NEqL, t, {d}, [&](const Sequent& u) {
          return flip_at(u, i, j, [&](const Sequent& v) {
            return by(RuleId::S3, v, {sat(j, nom(i)), data_eq(d.sort, j, d.j)},
                      [&](const Sequent& x) { return ax_on(x, data_eq(d.sort, i, d.j)); });
          });
        });
      });
    };
    return cut(g, target, left, k);
  }

  // from <i: ▲ j:> add <j: ▲ i:>
  DerivP cmpb(const Sequent& g, const LabeledExpr& d, const Cont& k) {
    LabeledExpr target = data(d.pol, d.sort, d.j, d.i);
    if (g.ante.contains(target)) return k(g);
    if (d.pol == CmpPolarity::Eq) {
      LabeledExpr ii = data_eq(d.sort, d.i, d.i);
      auto five = [&](const Sequent& s) {
        return by(RuleId::Eq5, s, {d, ii}, weaken_then(plus_ante(g, target), k));
      };
      if (g.ante.contains(ii)) return five(g);
      return by(RuleId::EqT, g, {ii}, five);
    }
    auto left = [&](const Sequent& s) {
      return by(RuleId::NEqR, s, {target}, [&](const Sequent& t) {
        return by(RuleId::NEqL, t, {d}, [&](const Sequent& u) {
          return cmpb(u, data_eq(d.sort, d.j, d.i),
                      [&](const Sequent& v) { return ax_on(v, data_eq(d.sort, d.i, d.j)); });
        });
      });
    };
    return cut(g, target, left, k);
  }

  // @i(phi & psi) on the left becomes @i phi, @i psi
  DerivP and_l(const Sequent& g, const LabeledExpr& p, const Cont& k) {
    const NodeP& b = p.body;
    NodeP phi = conj_left(b), psi = conj_right(b);
    Sequent stub{g.ante.without(p).with(sat(p.i, phi)).with(sat(p.i, psi)), g.cons};
    LabeledExpr inner = sat(p.i, b->a), nn = sat(p.i, b->a->b);
    return by(RuleId::ImpL, g, with_principal({p}),
              {[&](const Sequent& s) {
                 return by(RuleId::ImpR, s, {inner}, [&](const Sequent& t) {
                   return by(RuleId::ImpR, t, {nn}, weaken_then(stub, k));
                 });
               },
               [&](const Sequent& s) { return close(s); }});
  }

  // @i(phi & psi) on the right splits into @i phi and @i psi
  DerivP and_r(const Sequent& g, const LabeledExpr& p, const Cont& k1, const Cont& k2) {
    const NodeP& b = p.body;
    NodeP phi = conj_left(b), psi = conj_right(b);
    Sequent st1{g.ante, g.cons.without(p).with(sat(p.i, phi))};
    Sequent st2{g.ante, g.cons.without(p).with(sat(p.i, psi))};
    LabeledExpr inner = sat(p.i, b->a), npsi = sat(p.i, b->a->b);
    return by(RuleId::ImpR, g, {p}, [&](const Sequent& s) {
      return by(RuleId::ImpL, s, with_principal({inner}),
                {weaken_then(st1, k1), [&](const Sequent& t) {
                   return by(RuleId::ImpL, t, with_principal({npsi}),
                             {weaken_then(st2, k2), [&](const Sequent& u) { return close(u); }});
                 }});
    });
  }

  // @i<alpha>phi on the left becomes @i<alpha>j, @j phi for fresh j
  DerivP dia_l(const Sequent& g, const LabeledExpr& p, const PathP& alpha, const NodeP& phi,
               const Ident& j, const Cont& k) {
    const Ident& i = p.i;
    Sequent stub{g.ante.without(p).with(sat(i, diamond(alpha, nom(j)))).with(sat(j, phi)), g.cons};
    switch (alpha->kind) {
      case PathKind::Step: {
        RuleParams rp = with_principal({p});
        rp.fresh = {j};
        return by(RuleId::DiaL, g, rp, {weaken_then(stub, k)});
      }
      case PathKind::Goto: {
        const Ident& l = alpha->name;
        LabeledExpr w = sat(i, at(l, nom(j)));
        RuleParams nomp = with_principal({sat(l, nom(j))});
        nomp.fresh = {j};
        return by(RuleId::AtL, g, {p}, [&](const Sequent& s) {
          return by(RuleId::NomFresh, s, nomp, {[&](const Sequent& t) {
                      return s1(t, l, j, phi, [&](const Sequent& u) {
                        return cut(u, w,
                                   [&](const Sequent& v) {
                                     return by(RuleId::AtR, v, {w}, [&](const Sequent& x) {
                                       return ax_on(x, sat(l, nom(j)));
                                     });
                                   },
                                   weaken_then(stub, k));
                      });
                    }});
        });
      }
      case PathKind::Test: {
        const NodeP& psi = alpha->cond;
        LabeledExpr w = sat(i, conj(psi, nom(j)));
        RuleParams nomp = with_principal({sat(i, nom(j))});
        nomp.fresh = {j};
        return and_l(g, p, [&](const Sequent& s) {
          return by(RuleId::NomFresh, s, nomp, {[&](const Sequent& t) {
                      return s1(t, i, j, phi, [&](const Sequent& u) {
                        return cut(u, w,
                                   [&](const Sequent& v) {
                                     return and_r(
                                         v, w, [&](const Sequent& x) { return ax(x, sat(i, psi)); },
                                         [&](const Sequent& x) { return ax_on(x, sat(i, nom(j))); });
                                   },
                                   weaken_then(stub, k));
                      });
                    }});
        });
      }
      case PathKind::Comp: {
        const PathP &sigma = alpha->left, &beta = alpha->right;
        Ident m = fr.next();
        NodeP rest = diamond(beta, phi);
        LabeledExpr w = sat(i, diamond(sigma, diamond(beta, nom(j))));
        return dia_l(g, p, sigma, rest, m, [&](const Sequent& s) {
          return dia_l(s, sat(m, rest), beta, phi, j, [&](const Sequent& t) {
            return cut(t, w,
                       [&](const Sequent& u) {
                         return dia_r(u, w, sigma, diamond(beta, nom(j)), m,
                                      [&](const Sequent& v) {
                                        return ax(v, sat(m, diamond(beta, nom(j))));
                                      });
                       },
                       weaken_then(stub, k));
          });
        });
      }
    }
    fail(Code::ParamShape, "DiaPathL: unknown path");
  }

  // @i<alpha>phi on the right, with @i<alpha>j on the left, gains @j phi on the right
  DerivP dia_r(const Sequent& g, const LabeledExpr& p, const PathP& alpha, const NodeP& phi,
               const Ident& j, const Cont& k) {
    const Ident& i = p.i;
    LabeledExpr jphi = sat(j, phi);
    Sequent stub = plus_cons(g, jphi);
    if (alpha->kind == PathKind::Step) {
      RuleParams rp = with_principal({p});
      rp.witness = {j};
      return by(RuleId::DiaR, g, rp, {weaken_then(stub, k)});
    }
    auto closing = [&](const Sequent& s) -> DerivP {
      switch (alpha->kind) {
        case PathKind::Goto: {
          const Ident& l = alpha->name;
          return by(RuleId::AtL, s, {sat(i, at(l, nom(j)))}, [&](const Sequent& t) {
            return by(RuleId::AtR, t, {p}, [&](const Sequent& u) {
              return flip_at(u, l, j, [&](const Sequent& v) {
                return s1(v, j, l, phi, [&](const Sequent& x) { return ax(x, sat(l, phi)); });
              });
            });
          });
        }
        case PathKind::Test: {
          const NodeP& psi = alpha->cond;
          return and_l(s, sat(i, conj(psi, nom(j))), [&](const Sequent& t) {
            return and_r(
                t, p, [&](const Sequent& u) { return ax(u, sat(i, psi)); },
                [&](const Sequent& u) {
                  return flip_at(u, i, j, [&](const Sequent& v) {
                    return s1(v, j, i, phi, [&](const Sequent& x) { return ax(x, sat(i, phi)); });
                  });
                });
          });
        }
        default: {
          const PathP &sigma = alpha->left, &beta = alpha->right;
          Ident m = fr.next();
          LabeledExpr w = sat(i, diamond(alpha, nom(j)));
          return dia_l(s, w, sigma, diamond(beta, nom(j)), m, [&](const Sequent& t) {
            return dia_r(t, p, sigma, diamond(beta, phi), m, [&](const Sequent& u) {
              return dia_r(u, sat(m, diamond(beta, phi)), beta, phi, j,
                           [&](const Sequent& v) { return ax(v, jphi); });
            });
          });
        }
      }
    };
    return cut(g, jphi, weaken_then(stub, k), closing);
  }
};

struct Plan {
  std::vector<Sequent> stubs;
};

void need(bool ok, DerivedRuleId r, const std::string& msg) {
  if (!ok) fail(Code::ParamShape, std::string(derived_name(r)) + ": " + msg);
}

const LabeledExpr& only_principal(DerivedRuleId r, const RuleParams& p, std::size_t n = 1) {
  need(p.principal.size() == n, r, "expects " + std::to_string(n) + " principal formula(s)");
  return p.principal[0];
}

void in_ante(DerivedRuleId r, const Sequent& c, const LabeledExpr& f) {
  need(c.ante.contains(f), r, f.text + " is not in the antecedent");
}
void in_cons(DerivedRuleId r, const Sequent& c, const LabeledExpr& f) {
  need(c.cons.contains(f), r, f.text + " is not in the consequent");
}

// Resolved parameters shared by the premiss computation and the expansion.
struct Instance {
  DerivedRuleId rule;
  Sequent c;
  RuleParams p;
  LabeledExpr f;                // first principal
  NodeP phi, psi;               // components
  PathP alpha, beta;
  Ident i, j, k;
  CmpPolarity pol = CmpPolarity::Eq;
  Ident sort;
  std::vector<Sequent> prem;
};

Ident pick_fresh(const RuleParams& p, std::size_t at, Fresh& fr, DerivedRuleId r,
                 const Sequent& c) {
  if (p.fresh.size() > at) {
    need(!occurs(p.fresh[at], c), r, p.fresh[at] + " occurs in the conclusion");
    return p.fresh[at];
  }
  return fr.next();
}

Instance resolve(DerivedRuleId r, const Sequent& c, const RuleParams& p, Fresh& fr) {
  Instance in;
  in.rule = r;
  in.c = c;
  in.p = p;
  auto sat_only = [&](const LabeledExpr& f) { need(f.is_sat(), r, f.text + " is not @i phi"); };
  switch (r) {
    case DerivedRuleId::AxGen:
      in.f = only_principal(r, p);
      in_ante(r, c, in.f);
      in_cons(r, c, in.f);
      break;
    case DerivedRuleId::TopL:
      in.f = only_principal(r, p);
      sat_only(in.f);
      need(is_top(in.f.body), r, in.f.text + " is not @i true");
      in.prem = {plus_ante(c, in.f)};
      break;
    case DerivedRuleId::NegL:
    case DerivedRuleId::NegR: {
      in.f = only_principal(r, p);
      sat_only(in.f);
      need(is_neg(in.f.body), r, in.f.text + " is not a negation");
      in.phi = in.f.body->a;
      LabeledExpr x = sat(in.f.i, in.phi);
      if (r == DerivedRuleId::NegL) {
        in_ante(r, c, in.f);
        in.prem = {{c.ante.without(in.f), c.cons.with(x)}};
      } else {
        in_cons(r, c, in.f);
        in.prem = {{c.ante.with(x), c.cons.without(in.f)}};
      }
      break;
    }
    case DerivedRuleId::AndL:
    case DerivedRuleId::AndR:
    case DerivedRuleId::IffL:
    case DerivedRuleId::IffR: {
      in.f = only_principal(r, p);
      sat_only(in.f);
      bool iffr = r == DerivedRuleId::IffL || r == DerivedRuleId::IffR;
      need(iffr ? is_iff(in.f.body) : is_conj(in.f.body), r,
           in.f.text + (iffr ? " is not a biconditional" : " is not a conjunction"));
      in.phi = conj_left(in.f.body);
      in.psi = conj_right(in.f.body);
      if (iffr) {
        in.psi = in.phi->b;
        in.phi = in.phi->a;
      }
      LabeledExpr x = sat(in.f.i, in.phi), y = sat(in.f.i, in.psi);
      if (r == DerivedRuleId::AndL) {
        in_ante(r, c, in.f);
        in.prem = {{c.ante.without(in.f).with(x).with(y), c.cons}};
      } else if (r == DerivedRuleId::AndR) {
        in_cons(r, c, in.f);
        in.prem = {{c.ante, c.cons.without(in.f).with(x)}, {c.ante, c.cons.without(in.f).with(y)}};
      } else if (r == DerivedRuleId::IffL) {
        in_ante(r, c, in.f);
        in.prem = {{c.ante.without(in.f).with(x).with(y), c.cons},
                   {c.ante.without(in.f), c.cons.with(x).with(y)}};
      } else {
        in_cons(r, c, in.f);
        in.prem = {{c.ante.with(x), c.cons.without(in.f).with(y)},
                   {c.ante.with(y), c.cons.without(in.f).with(x)}};
      }
      break;
    }
    case DerivedRuleId::MP: {
      in.f = only_principal(r, p);
      sat_only(in.f);
      need(p.cut.has_value() && p.cut->is_sat() && p.cut->i == in.f.i, r,
           "expects the minor premiss @i phi as cut formula");
      in_cons(r, c, in.f);
      in.phi = p.cut->body;
      in.psi = in.f.body;
      FormulaSet rest = c.cons.without(in.f);
      in.prem = {{c.ante, rest.with(*p.cut)}, {c.ante, rest.with(sat(in.f.i, imp(in.phi, in.psi)))}};
      break;
    }
    case DerivedRuleId::DiaPathL:
    case DerivedRuleId::DiaPathR: {
      in.f = only_principal(r, p);
      sat_only(in.f);
      need(p.path != nullptr, r, "expects a path");
      in.alpha = p.path;
      in.phi = diamond_body(p.path, in.f.body);
      need(in.phi != nullptr, r, in.f.text + " is not a diamond over " + print_path(p.path));
      in.i = in.f.i;
      if (r == DerivedRuleId::DiaPathL) {
        in_ante(r, c, in.f);
        in.j = pick_fresh(p, 0, fr, r, c);
        in.prem = {{c.ante.without(in.f).with(sat(in.i, diamond(in.alpha, nom(in.j))))
                        .with(sat(in.j, in.phi)),
                    c.cons}};
      } else {
        in_cons(r, c, in.f);
        need(p.witness.size() == 1, r, "expects one witness nominal");
        in.j = p.witness[0];
        in_ante(r, c, sat(in.i, diamond(in.alpha, nom(in.j))));
        in.prem = {plus_cons(c, sat(in.j, in.phi))};
      }
      break;
    }
    case DerivedRuleId::S1Gen: {
      in.f = only_principal(r, p, 2);
      const LabeledExpr& g = p.principal[1];
      need(in.f.is_sat() && in.f.body->kind == NodeKind::Nom && g.is_sat() && g.i == in.f.i, r,
           "principals must be @i j and @i phi");
      in_ante(r, c, in.f);
      in_ante(r, c, g);
      in.i = in.f.i;
      in.j = in.f.body->name;
      in.phi = g.body;
      in.prem = {plus_ante(c, sat(in.j, in.phi))};
      break;
    }
    case DerivedRuleId::S2Gen: {
      in.f = only_principal(r, p, 2);
      const LabeledExpr& g = p.principal[1];
      need(p.path != nullptr, r, "expects a path");
      need(in.f.is_sat() && in.f.body->kind == NodeKind::Nom && g.is_sat(), r,
           "principals must be @j k and @i<alpha>j");
      in.j = in.f.i;
      in.k = in.f.body->name;
      in.i = g.i;
      in.alpha = p.path;
      NodeP body = diamond_body(p.path, g.body);
      need(body && body->kind == NodeKind::Nom && body->name == in.j, r,
           g.text + " is not @i<alpha>" + in.j);
      in_ante(r, c, in.f);
      in_ante(r, c, g);
      in.prem = {plus_ante(c, sat(in.i, diamond(in.alpha, nom(in.k))))};
      break;
    }
    case DerivedRuleId::S3Gen: {
      in.f = only_principal(r, p, 2);
      const LabeledExpr& d = p.principal[1];
      need(in.f.is_sat() && in.f.body->kind == NodeKind::Nom && d.is_data() && d.i == in.f.i, r,
           "principals must be @i j and <i: ▲ k:>");
      in_ante(r, c, in.f);
      in_ante(r, c, d);
      in.prem = {plus_ante(c, data(d.pol, d.sort, in.f.body->name, d.j))};
      break;
    }
    case DerivedRuleId::AtB:
      in.f = only_principal(r, p);
      need(in.f.is_sat() && in.f.body->kind == NodeKind::Nom, r, in.f.text + " is not @i j");
      in_ante(r, c, in.f);
      in.prem = {{c.ante.without(in.f).with(sat(in.f.body->name, nom(in.f.i))), c.cons}};
      break;
    case DerivedRuleId::AtCmpL:
    case DerivedRuleId::AtCmpR: {
      in.f = only_principal(r, p);
      const NodeP& b = in.f.body;
      need(in.f.is_sat() && b->kind == NodeKind::Cmp && b->left->kind == PathKind::Goto &&
               b->right->kind == PathKind::Goto,
           r, in.f.text + " is not @k <i: ▲ j:>");
      LabeledExpr d = data(b->pol, b->name, b->left->name, b->right->name);
      if (r == DerivedRuleId::AtCmpL) {
        in_ante(r, c, in.f);
        in.i = pick_fresh(p, 0, fr, r, c);
        in.j = pick_fresh(p, 1, fr, r, c);
        need(in.i != in.j, r, "fresh nominals must be different");
        in.prem = {{c.ante.without(in.f).with(d), c.cons}};
      } else {
        in_cons(r, c, in.f);
        in.prem = {{c.ante, c.cons.without(in.f).with(d)}};
      }
      break;
    }
    case DerivedRuleId::CmpB:
      in.f = only_principal(r, p);
      need(in.f.is_data(), r, in.f.text + " is not <i: ▲ j:>");
      in_ante(r, c, in.f);
      in.prem = {{c.ante.without(in.f).with(data(in.f.pol, in.f.sort, in.f.j, in.f.i)), c.cons}};
      break;
    case DerivedRuleId::BoxCmpL:
    case DerivedRuleId::BoxCmpR: {
      in.f = only_principal(r, p);
      sat_only(in.f);
      need(is_neg(in.f.body) && in.f.body->a->kind == NodeKind::Cmp, r,
           in.f.text + " is not @i[alpha ▲ beta]");
      const NodeP& cm = in.f.body->a;
      in.pol = flip(cm->pol);
      in.sort = cm->name;
      in.alpha = cm->left;
      in.beta = cm->right;
      in.i = in.f.i;
      if (r == DerivedRuleId::BoxCmpL) {
        in_ante(r, c, in.f);
        need(p.witness.size() == 2, r, "expects two witness nominals");
        in.j = p.witness[0];
        in.k = p.witness[1];
        in_ante(r, c, sat(in.i, diamond(in.alpha, nom(in.j))));
        in_ante(r, c, sat(in.i, diamond(in.beta, nom(in.k))));
        in.prem = {plus_ante(c, data(in.pol, in.sort, in.j, in.k))};
      } else {
        in_cons(r, c, in.f);
        in.j = pick_fresh(p, 0, fr, r, c);
        in.k = pick_fresh(p, 1, fr, r, c);
        need(in.j != in.k, r, "fresh nominals must be different");
        in.prem = {{c.ante.with(sat(in.i, diamond(in.alpha, nom(in.j))))
                        .with(sat(in.i, diamond(in.beta, nom(in.k)))),
                    c.cons.without(in.f).with(data(in.pol, in.sort, in.j, in.k))}};
      }
      break;
    }
  }
  return in;
}

DerivP build(const Instance& in, Templates& t, const std::vector<Cont>& leaf) {
  const Sequent& c = in.c;
  const LabeledExpr& f = in.f;
  auto to = [&](int n) { return weaken_then(in.prem[n], leaf[n]); };
  switch (in.rule) {
    case DerivedRuleId::AxGen: return t.ax(c, f);
    case DerivedRuleId::TopL:
      return cut(c, f,
                 [&](const Sequent& s) {
                   return by(RuleId::ImpR, s, {f}, [&](const Sequent& u) { return close(u); });
                 },
                 to(0));
    case DerivedRuleId::NegL:
      return by(RuleId::ImpL, c, with_principal({f}),
                {to(0), [&](const Sequent& s) { return close(s); }});
    case DerivedRuleId::NegR: return by(RuleId::ImpR, c, {f}, to(0));
    case DerivedRuleId::AndL: return t.and_l(c, f, to(0));
    case DerivedRuleId::AndR: return t.and_r(c, f, to(0), to(1));
    case DerivedRuleId::IffL: {
      LabeledExpr fw = sat(f.i, imp(in.phi, in.psi)), bw = sat(f.i, imp(in.psi, in.phi));
      LabeledExpr x = sat(f.i, in.phi), y = sat(f.i, in.psi);
      return t.and_l(c, f, [&](const Sequent& s) {
        return by(RuleId::ImpL, s, with_principal({fw}),
                  {[&](const Sequent& u) {
                     return by(RuleId::ImpL, u, with_principal({bw}),
                               {to(1), [&](const Sequent& v) { return t.ax(v, x); }});
                   },
                   [&](const Sequent& u) {
                     return by(RuleId::ImpL, u, with_principal({bw}),
                               {[&](const Sequent& v) { return t.ax(v, y); }, to(0)});
                   }});
      });
    }
    case DerivedRuleId::IffR: {
      LabeledExpr fw = sat(f.i, imp(in.phi, in.psi)), bw = sat(f.i, imp(in.psi, in.phi));
      return t.and_r(
          c, f, [&](const Sequent& s) { return by(RuleId::ImpR, s, {fw}, to(0)); },
          [&](const Sequent& s) { return by(RuleId::ImpR, s, {bw}, to(1)); });
    }
    case DerivedRuleId::MP: {
      LabeledExpr minor = *in.p.cut, major = sat(f.i, imp(in.phi, in.psi));
      return cut(c, minor, to(0), [&](const Sequent& s) {
        return cut(s, major, to(1), [&](const Sequent& u) {
          return by(RuleId::ImpL, u, with_principal({major}),
                    {[&](const Sequent& v) { return t.ax(v, minor); },
                     [&](const Sequent& v) { return t.ax(v, f); }});
        });
      });
    }
    case DerivedRuleId::DiaPathL: return t.dia_l(c, f, in.alpha, in.phi, in.j, to(0));
    case DerivedRuleId::DiaPathR: return t.dia_r(c, f, in.alpha, in.phi, in.j, to(0));
    case DerivedRuleId::S1Gen: return t.s1(c, in.i, in.j, in.phi, to(0));
    case DerivedRuleId::S2Gen: return t.s2(c, in.j, in.k, in.i, in.alpha, to(0));
    case DerivedRuleId::S3Gen: return t.s3(c, f.i, f.body->name, in.p.principal[1], to(0));
    case DerivedRuleId::AtB: return t.flip_at(c, f.i, f.body->name, to(0));
    case DerivedRuleId::CmpB: return t.cmpb(c, f, to(0));
    case DerivedRuleId::AtCmpL: {
      const NodeP& b = f.body;
      const Ident &x = b->left->name, &y = b->right->name, &a = in.i, &bb = in.j;
      LabeledExpr ab = data(b->pol, b->name, a, bb);
      RuleParams rp = with_principal({f});
      rp.fresh = {a, bb};
      return by(RuleId::CmpL, c, rp, {[&](const Sequent& s) {
        return by(RuleId::AtL, s, {sat(f.i, at(x, nom(a)))}, [&](const Sequent& s1) {
          return by(RuleId::AtL, s1, {sat(f.i, at(y, nom(bb)))}, [&](const Sequent& s2) {
            return t.flip_at(s2, x, a, [&](const Sequent& s3) {
              return t.s3(s3, a, x, ab, [&](const Sequent& s4) {
                LabeledExpr xb = data(b->pol, b->name, x, bb);
                return t.flip_at(s4, y, bb, [&](const Sequent& s5) {
                  return t.cmpb(s5, xb, [&](const Sequent& s6) {
                    LabeledExpr bx = data(b->pol, b->name, bb, x);
                    return t.s3(s6, bb, y, bx, [&](const Sequent& s7) {
                      return t.cmpb(s7, data(b->pol, b->name, y, x), to(0));
                    });
                  });
                });
              });
            });
          });
        });
      }});
    }
    case DerivedRuleId::AtCmpR: {
      const NodeP& b = f.body;
      const Ident &x = b->left->name, &y = b->right->name;
      LabeledExpr d = data(b->pol, b->name, x, y);
      LabeledExpr wx = sat(f.i, at(x, nom(x))), wy = sat(f.i, at(y, nom(y)));
      auto refl = [&](const Ident& n, const LabeledExpr& w) {
        return [n, w](const Sequent& s) {
          return by(RuleId::AtR, s, {w}, [&](const Sequent& u) {
            LabeledExpr nn = sat(n, nom(n));
            if (u.ante.contains(nn)) return ax_on(u, nn);
            return by(RuleId::AtT, u, {nn}, [&](const Sequent& v) { return ax_on(v, nn); });
          });
        };
      };
      RuleParams rp = with_principal({f});
      rp.witness = {x, y};
      return cut(c, d, to(0), [&](const Sequent& s) {
        return cut(s, wx, refl(x, wx), [&](const Sequent& u) {
          return cut(u, wy, refl(y, wy), [&](const Sequent& v) {
            return by(RuleId::CmpR, v, rp, {[&](const Sequent& z) { return t.ax(z, d); }});
          });
        });
      });
    }
    case DerivedRuleId::BoxCmpL: {
      LabeledExpr up = data(in.pol, in.sort, in.j, in.k), down = data(flip(in.pol), in.sort, in.j, in.k);
      LabeledExpr ne = in.pol == CmpPolarity::Neq ? up : down;
      LabeledExpr eq = data_eq(in.sort, in.j, in.k);
      RuleParams rp = with_principal({sat(in.i, f.body->a)});
      rp.witness = {in.j, in.k};
      return cut(c, up,
                 [&](const Sequent& s) {
                   return by(RuleId::ImpL, s, with_principal({f}),
                             {[&](const Sequent& u) {
                                return by(RuleId::CmpR, u, rp, {[&](const Sequent& v) {
                                            return by(RuleId::NEqR, v, {ne}, [&](const Sequent& w) {
                                              return ax_on(w, eq);
                                            });
                                          }});
                              },
                              [&](const Sequent& u) { return close(u); }});
                 },
                 to(0));
    }
    case DerivedRuleId::BoxCmpR: {
      LabeledExpr down = data(flip(in.pol), in.sort, in.j, in.k);
      LabeledExpr eq = data_eq(in.sort, in.j, in.k);
      RuleParams rp = with_principal({sat(in.i, f.body->a)});
      rp.fresh = {in.j, in.k};
      return by(RuleId::ImpR, c, {f}, [&](const Sequent& s) {
        return by(RuleId::CmpL, s, rp, {[&](const Sequent& u) {
                    if (in.pol == CmpPolarity::Eq)
                      return by(RuleId::NEqL, u, {down}, to(0));
                    LabeledExpr up = data(in.pol, in.sort, in.j, in.k);
                    return cut(u, up, to(0), [&](const Sequent& v) {
                      return by(RuleId::NEqL, v, {up}, [&](const Sequent& w) { return ax_on(w, eq); });
                    });
                  }});
      });
    }
  }
  fail(Code::ParamShape, "unknown derived rule");
}

Fresh fresh_for(const Sequent& c, const RuleParams& p, const std::vector<Sequent>& extra) {
  Fresh fr(c);
  for (const auto& s : extra) fr.avoid(s);
  for (const auto& n : p.fresh) fr.avoid(n);
  for (const auto& n : p.witness) fr.avoid(n);
  return fr;
}

}  // namespace

const char* derived_name(DerivedRuleId r) { return kDerivedNames[int(r)]; }

std::optional<DerivedRuleId> derived_from_name(std::string_view name) {
  for (int k = 0; k < kDerivedCount; ++k)
    if (name == kDerivedNames[k]) return DerivedRuleId(k);
  return std::nullopt;
}

std::vector<Sequent> derived_premisses(DerivedRuleId r, const Sequent& c, const RuleParams& p) {
  Fresh fr = fresh_for(c, p, {});
  return resolve(r, c, p, fr).prem;
}

DerivP expand_derived(DerivedRuleId r, const Sequent& c, const RuleParams& p,
                      const std::vector<Sequent>& stubs) {
  // eigen-nominals are chosen exactly as in derived_premisses so stubs can name them
  Fresh fr = fresh_for(c, p, {});
  Instance in = resolve(r, c, p, fr);
  for (const auto& s : stubs) fr.avoid(s);
  std::vector<Sequent> given = stubs.empty() ? in.prem : stubs;
  if (given.size() != in.prem.size())
    fail(Code::UnexpandableStub, std::string(derived_name(r)) + ": expected " +
                                     std::to_string(in.prem.size()) + " premiss(es), got " +
                                     std::to_string(given.size()));
  std::vector<Cont> leaf;
  for (std::size_t n = 0; n < given.size(); ++n) {
    if (!given[n].subset_of(in.prem[n]))
      fail(Code::UnexpandableStub, std::string(derived_name(r)) + ": stub '" +
                                       print_sequent(given[n]) + "' does not fit premiss '" +
                                       print_sequent(in.prem[n]) + "'");
    Sequent st = given[n];
    leaf.push_back([st](const Sequent& s) { return weaken_to(s, open_leaf(st)); });
  }
  Templates t{fr};
  try {
    return build(in, t, leaf);
  } catch (const KernelError& e) {
    fail(Code::UnexpandableStub, std::string(derived_name(r)) + ": " + e.what());
  }
}

DerivP axiom_gen(const Sequent& goal, const LabeledExpr& f) {
  Fresh fr(goal);
  Templates t{fr};
  return t.ax(goal, f);
}

namespace {

DerivP graft_into(const DerivP& d, const std::vector<DerivP>& kids, std::vector<bool>& used) {
  if (d->rule == RuleId::Open) {
    for (std::size_t k = 0; k < kids.size(); ++k)
      if (!used[k] && kids[k]->conclusion == d->conclusion) {
        used[k] = true;
        return kids[k];
      }
    return d;
  }
  std::vector<DerivP> cs;
  bool changed = false;
  for (const auto& c : d->children) {
    cs.push_back(graft_into(c, kids, used));
    changed = changed || cs.back() != c;
  }
  return changed ? make_deriv(d->rule, d->conclusion, d->params, std::move(cs)) : d;
}

}  // namespace

DerivP graft(const DerivP& d, const std::vector<DerivP>& kids) {
  std::vector<bool> used(kids.size(), false);
  return graft_into(d, kids, used);
}

DerivP apply_derived(DerivedRuleId r, const Sequent& goal, const RuleParams& params,
                     const std::vector<Cont>& ks) {
  auto prem = derived_premisses(r, goal, params);
  if (prem.size() != ks.size())
    fail(Code::ParamShape, std::string(derived_name(r)) + ": continuation count mismatch");
  std::vector<DerivP> kids;
  std::vector<Sequent> stubs;
  for (std::size_t k = 0; k < prem.size(); ++k) {
    kids.push_back(ks[k](prem[k]));
    stubs.push_back(kids.back()->conclusion);
  }
  if (prem.empty()) return expand_derived(r, goal, params);
  return graft(expand_derived(r, goal, params, stubs), kids);
}

std::vector<DerivP> invert(RuleId r, const RuleParams& p, const DerivP& given) {
  const Sequent& c = given->conclusion;
  if (r == RuleId::Cut || r == RuleId::WL || r == RuleId::WR || r == RuleId::Open)
    fail(Code::NotARuleInstance, std::string(rule_name(r)) + " is not an invertible rule of G");
  std::vector<Sequent> prem;
  try {
    prem = apply_rule_backward(r, c, p);
  } catch (const KernelError& e) {
    fail(Code::NotARuleInstance, e.what());
  }
  Fresh fr(c);
  fr.avoid(given);
  for (const auto& s : prem) fr.avoid(s);
  Templates t{fr};
  auto keep = [&](const Sequent& s) { return weaken_to(s, given); };
  std::vector<DerivP> out;
  const LabeledExpr* P = p.principal.empty() ? nullptr : &p.principal[0];
  switch (r) {
    case RuleId::Ax:
    case RuleId::Bot: return out;
    case RuleId::ImpL: {
      LabeledExpr a = sat(P->i, P->body->a), b = sat(P->i, P->body->b);
      for (int n = 0; n < 2; ++n) {
        const LabeledExpr& x = n == 0 ? a : b;
        out.push_back(cut(prem[n], *P,
                          [&](const Sequent& s) {
                            return by(RuleId::ImpR, s, {*P}, [&](const Sequent& u) { return t.ax(u, x); });
                          },
                          keep));
      }
      return out;
    }
    case RuleId::ImpR: {
      LabeledExpr a = sat(P->i, P->body->a), b = sat(P->i, P->body->b);
      out.push_back(cut(prem[0], *P, keep, [&](const Sequent& s) {
        return by(RuleId::ImpL, s, with_principal({*P}),
                  {[&](const Sequent& u) { return t.ax(u, a); },
                   [&](const Sequent& u) { return t.ax(u, b); }});
      }));
      return out;
    }
    case RuleId::AtL:
    case RuleId::AtR: {
      LabeledExpr inner = sat(P->body->name, P->body->b);
      auto prove_at = [&](const Sequent& s) {
        return by(r == RuleId::AtL ? RuleId::AtR : RuleId::AtL, s, {*P},
                  [&](const Sequent& u) { return t.ax(u, inner); });
      };
      if (r == RuleId::AtL)
        out.push_back(cut(prem[0], *P, prove_at, keep));
      else
        out.push_back(cut(prem[0], *P, keep, prove_at));
      return out;
    }
    case RuleId::DiaL: {
      RuleParams rp = with_principal({*P});
      rp.witness = {p.fresh[0]};
      out.push_back(cut(prem[0], *P,
                        [&](const Sequent& s) {
                          return by(RuleId::DiaR, s, rp, {[&](const Sequent& u) {
                                      return t.ax(u, sat(p.fresh[0], P->body->b));
                                    }});
                        },
                        keep));
      return out;
    }
    case RuleId::CmpL: {
      RuleParams rp = with_principal({*P});
      rp.witness = p.fresh;
      LabeledExpr d = data(P->body->pol, P->body->name, p.fresh[0], p.fresh[1]);
      out.push_back(cut(prem[0], *P,
                        [&](const Sequent& s) {
                          return by(RuleId::CmpR, s, rp, {[&](const Sequent& u) { return t.ax(u, d); }});
                        },
                        keep));
      return out;
    }
    case RuleId::NEqL:
    case RuleId::NEqR: {
      LabeledExpr eq = data_eq(P->sort, P->i, P->j);
      auto other = [&](const Sequent& s) {
        return by(r == RuleId::NEqL ? RuleId::NEqR : RuleId::NEqL, s, {*P},
                  [&](const Sequent& u) { return ax_on(u, eq); });
      };
      if (r == RuleId::NEqL)
        out.push_back(cut(prem[0], *P, other, keep));
      else
        out.push_back(cut(prem[0], *P, keep, other));
      return out;
    }
    default:
      // the premiss extends the conclusion: weakening suffices
      for (const auto& s : prem) out.push_back(weaken_to(s, given));
      return out;
  }
}

}  // namespace hxd
