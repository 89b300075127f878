#include "hxd/prover.hpp"

#include <set>
#include <stdexcept>

#include "hxd/builder.hpp"

namespace hxd {

namespace {

using Steps = std::vector<std::pair<RuleId, std::vector<LabeledExpr>>>;

bool nom_body(const LabeledExpr& f) { return f.is_sat() && f.body->kind == NodeKind::Nom; }

bool rel_atom(const LabeledExpr& f) {
  return f.is_sat() && f.body->kind == NodeKind::Dia && f.body->b->kind == NodeKind::Nom;
}

bool s1_body(const NodeP& b) {
  return b->kind == NodeKind::Prop || b->kind == NodeKind::Bot ||
         (b->kind == NodeKind::Dia && b->b->kind == NodeKind::Nom);
}

// Nominals reachable from i along alpha using the relational atoms of the antecedent. Tests
// are assumed to hold; the witness search proves them afterwards.
std::set<Ident> reach(const FormulaSet& ante, const Ident& i, const PathP& a) {
  switch (a->kind) {
    case PathKind::Step: {
      std::set<Ident> out;
      for (const auto& f : ante)
        if (rel_atom(f) && f.i == i && f.body->name == a->name) out.insert(f.body->b->name);
      return out;
    }
    case PathKind::Goto: return {a->name};
    case PathKind::Test: return {i};
    case PathKind::Comp: {
      std::set<Ident> out;
      for (const auto& m : reach(ante, i, a->left))
        for (const auto& n : reach(ante, m, a->right)) out.insert(n);
      return out;
    }
  }
  return {};
}

struct Search {
  Budget b;
  Fresh fr;
  long nodes = 0;
  bool hit_fresh = false, hit_depth = false;

  using Fired = std::set<std::string>;

  DerivP one(RuleId r, const Sequent& s, const RuleParams& p, int depth, int fresh_used,
             const Fired& fired) {
    Sequent prem = apply_rule_backward(r, s, p)[0];
    DerivP k = go(prem, depth + 1, fresh_used, fired);
    return k ? make_deriv(r, s, p, {k}) : nullptr;
  }

  DerivP go(const Sequent& s, int depth, int fresh_used, const Fired& fired) {
    if (++nodes > b.max_nodes) {
      hit_depth = true;
      return nullptr;
    }
    if (provable_leaf_forms(s)) return close(s);
    Steps steps = saturation_steps(s);
    if (!steps.empty()) {
      std::vector<Sequent> seqs{s};
      for (const auto& [r, P] : steps)
        seqs.push_back(apply_rule_backward(r, seqs.back(), with_principal(P))[0]);
      DerivP top = go(seqs.back(), depth, fresh_used, fired);
      if (!top) return nullptr;
      for (std::size_t k = steps.size(); k-- > 0;)
        top = make_deriv(steps[k].first, seqs[k], with_principal(steps[k].second), {top});
      return top;
    }
    if (depth >= b.max_depth) {
      hit_depth = true;
      return nullptr;
    }
    // non-branching invertible rules
    for (const auto& f : s.cons)
      if (f.is_sat() && f.body->kind == NodeKind::Imp)
        return one(RuleId::ImpR, s, with_principal({f}), depth, fresh_used, fired);
    for (const auto& f : s.ante)
      if (f.is_sat() && f.body->kind == NodeKind::At)
        return one(RuleId::AtL, s, with_principal({f}), depth, fresh_used, fired);
    for (const auto& f : s.cons)
      if (f.is_sat() && f.body->kind == NodeKind::At)
        return one(RuleId::AtR, s, with_principal({f}), depth, fresh_used, fired);
    for (const auto& f : s.ante)
      if (f.is_data() && f.pol == CmpPolarity::Neq)
        return one(RuleId::NEqL, s, with_principal({f}), depth, fresh_used, fired);
    for (const auto& f : s.cons)
      if (f.is_data() && f.pol == CmpPolarity::Neq)
        return one(RuleId::NEqR, s, with_principal({f}), depth, fresh_used, fired);
    for (const auto& f : s.ante) {
      if (!f.is_sat() || f.body->kind != NodeKind::Dia || f.body->b->kind == NodeKind::Nom)
        continue;
      if (fresh_used + 1 > b.max_fresh) {
        hit_fresh = true;
        continue;
      }
      RuleParams p = with_principal({f});
      p.fresh = {fr.next()};
      return one(RuleId::DiaL, s, p, depth, fresh_used + 1, fired);
    }
    for (const auto& f : s.ante) {
      if (!f.is_sat() || f.body->kind != NodeKind::Cmp) continue;
      if (fresh_used + 2 > b.max_fresh) {
        hit_fresh = true;
        continue;
      }
      RuleParams p = with_principal({f});
      p.fresh = {fr.next(), fr.next()};
      return one(RuleId::CmpL, s, p, depth, fresh_used + 2, fired);
    }
    // branching
    for (const auto& f : s.ante) {
      if (!f.is_sat() || f.body->kind != NodeKind::Imp) continue;
      RuleParams p = with_principal({f});
      auto prem = apply_rule_backward(RuleId::ImpL, s, p);
      DerivP l = go(prem[0], depth + 1, fresh_used, fired);
      if (!l) return nullptr;
      DerivP r = go(prem[1], depth + 1, fresh_used, fired);
      if (!r) return nullptr;
      return make_deriv(RuleId::ImpL, s, p, {l, r});
    }
    if (DerivP d = witnesses(s, depth, fresh_used, fired)) return d;
    if (DerivP d = witness_cuts(s, depth, fresh_used, fired)) return d;
    return nullptr;
  }

  // DiaR and CmpR against every witness already in the antecedent, as one chain.
  DerivP witnesses(const Sequent& s, int depth, int fresh_used, const Fired& fired) {
    Fired f2 = fired;
    std::vector<std::pair<Sequent, RuleParams>> chain;
    std::vector<RuleId> rules;
    Sequent cur = s;
    auto push = [&](RuleId r, RuleParams p, const std::string& key) {
      if (!f2.insert(key).second) return;
      Sequent next = apply_rule_backward(r, cur, p)[0];
      if (next == cur) return;
      chain.emplace_back(cur, std::move(p));
      rules.push_back(r);
      cur = std::move(next);
    };
    for (const auto& f : s.cons) {
      if (!f.is_sat()) continue;
      if (f.body->kind == NodeKind::Dia) {
        for (const auto& g : s.ante) {
          if (!rel_atom(g) || g.i != f.i || g.body->name != f.body->name) continue;
          RuleParams p = with_principal({f});
          p.witness = {g.body->b->name};
          push(RuleId::DiaR, std::move(p), f.text + "|" + g.body->b->name);
        }
      } else if (f.body->kind == NodeKind::Cmp) {
        const NodeP& e = f.body;
        for (const auto& j : signature_of(s).noms) {
          if (!s.ante.contains(sat(f.i, diamond(e->left, nom(j))))) continue;
          for (const auto& k : signature_of(s).noms) {
            if (!s.ante.contains(sat(f.i, diamond(e->right, nom(k))))) continue;
            RuleParams p = with_principal({f});
            p.witness = {j, k};
            push(RuleId::CmpR, std::move(p), f.text + "|" + j + "|" + k);
          }
        }
      }
    }
    if (chain.empty()) return nullptr;
    DerivP top = go(cur, depth + 1, fresh_used, f2);
    if (!top) return nullptr;
    for (std::size_t k = chain.size(); k-- > 0;)
      top = make_deriv(rules[k], chain[k].first, chain[k].second, {top});
    return top;
  }

  // CmpR over compound paths: cut in the witness formulas @i<alpha>j and @i<beta>k for
  // candidates reachable in the antecedent, proving each one separately.
  DerivP witness_cuts(const Sequent& s, int depth, int fresh_used, const Fired& fired) {
    for (const auto& f : s.cons) {
      if (!f.is_sat() || f.body->kind != NodeKind::Cmp) continue;
      const NodeP& e = f.body;
      for (const auto& j : reach(s.ante, f.i, e->left)) {
        for (const auto& k : reach(s.ante, f.i, e->right)) {
          std::string key = f.text + "|" + j + "|" + k;
          if (fired.count(key)) continue;
          Fired f2 = fired;
          f2.insert(key);
          LabeledExpr w1 = sat(f.i, diamond(e->left, nom(j)));
          LabeledExpr w2 = sat(f.i, diamond(e->right, nom(k)));
          Sequent s1{s.ante.with(w1), s.cons};
          Sequent s2{s1.ante.with(w2), s.cons};
          RuleParams p = with_principal({f});
          p.witness = {j, k};
          Sequent top_s = apply_rule_backward(RuleId::CmpR, s2, p)[0];
          if (top_s == s2) continue;
          DerivP p1, p2;
          if (!s.ante.contains(w1)) {
            p1 = go(Sequent{s.ante, s.cons.with(w1)}, depth + 1, fresh_used, f2);
            if (!p1) continue;
          }
          if (!s1.ante.contains(w2)) {
            p2 = go(Sequent{s1.ante, s1.cons.with(w2)}, depth + 1, fresh_used, f2);
            if (!p2) continue;
          }
          DerivP top = go(top_s, depth + 1, fresh_used, f2);
          if (!top) continue;
          DerivP d = make_deriv(RuleId::CmpR, s2, p, {top});
          if (p2) d = cut_join(w2, p2, d);
          if (p1) d = cut_join(w1, p1, d);
          return d;
        }
      }
    }
    return nullptr;
  }
};

}  // namespace

const char* status_name(ProveResult::Status s) {
  switch (s) {
    case ProveResult::Status::Proved: return "proved";
    case ProveResult::Status::Refuted: return "refuted";
    case ProveResult::Status::Unknown: return "unknown";
  }
  return "?";
}

Steps saturation_steps(const Sequent& s0) {
  Sequent s = s0;
  Steps steps;
  auto add = [&](RuleId r, std::vector<LabeledExpr> P, const LabeledExpr& nf) {
    if (s.ante.contains(nf)) return false;
    s.ante.insert(nf);
    steps.emplace_back(r, std::move(P));
    return true;
  };
  Signature sig = signature_of(s0);
  for (const auto& n : sig.noms) add(RuleId::AtT, {sat(n, nom(n))}, sat(n, nom(n)));
  for (const auto& c : sig.cmps)
    for (const auto& n : sig.noms) add(RuleId::EqT, {data_eq(c, n, n)}, data_eq(c, n, n));
  for (bool changed = true; changed;) {
    changed = false;
    std::vector<LabeledExpr> items = s.ante.items();
    for (const auto& f : items) {
      for (const auto& g : items) {
        if (nom_body(f)) {
          const Ident& j = f.body->name;
          if (nom_body(g) && g.i == f.i)
            changed |= add(RuleId::At5, {f, g}, sat(j, nom(g.body->name)));
          if (g.is_sat() && g.i == f.i && s1_body(g.body))
            changed |= add(RuleId::S1, {f, g}, sat(j, g.body));
          if (rel_atom(g) && g.body->b->name == f.i)
            changed |= add(RuleId::S2, {f, g}, sat(g.i, dia(g.body->name, nom(j))));
          if (g.is_data() && g.pol == CmpPolarity::Eq && g.i == f.i)
            changed |= add(RuleId::S3, {f, g}, data_eq(g.sort, j, g.j));
        }
        if (f.is_data() && g.is_data() && f.pol == CmpPolarity::Eq && g.pol == CmpPolarity::Eq &&
            f.i == g.i && f.sort == g.sort)
          changed |= add(RuleId::Eq5, {f, g}, data_eq(f.sort, f.j, g.j));
      }
    }
  }
  return steps;
}

Sequent saturate(const Sequent& s) {
  Sequent out = s;
  for (const auto& [r, P] : saturation_steps(s))
    out = apply_rule_backward(r, out, with_principal(P))[0];
  return out;
}

ProveResult prove(const Sequent& s, const Budget& b) {
  Search search{b, Fresh(s)};
  ProveResult res;
  if (DerivP d = search.go(s, 0, 0, {})) {
    CheckReport rep = check_derivation(d);
    if (!rep.proved) throw std::logic_error("prover produced an unchecked derivation: " + rep.error);
    res.status = ProveResult::Status::Proved;
    res.proof = d;
    return res;
  }
  if (auto m = find_countermodel(s, b.model_bound)) {
    res.status = ProveResult::Status::Refuted;
    res.model = std::move(m);
    return res;
  }
  res.reason = search.hit_fresh ? "fresh" : search.hit_depth ? "depth" : "model_bound";
  return res;
}

}  // namespace hxd
