#include "hxd/kernel.hpp"

#include <algorithm>

#include "parse_impl.hpp"

namespace hxd {

// formulas

NodeP LabeledExpr::as_node() const {
  if (is_sat()) return at(i, body);
  return cmp(pol, sort, go(i), go(j));
}

LabeledExpr sat(Ident i, NodeP body) {
  LabeledExpr f;
  f.kind = LabeledExpr::Kind::Sat;
  f.i = std::move(i);
  f.body = std::move(body);
  f.text = print_node(at(f.i, f.body));
  return f;
}

LabeledExpr data(CmpPolarity pol, Ident sort, Ident i, Ident j) {
  LabeledExpr f;
  f.kind = LabeledExpr::Kind::DataCmp;
  f.pol = pol;
  f.sort = std::move(sort);
  f.i = std::move(i);
  f.j = std::move(j);
  f.text = "<" + f.i + ": " + (pol == CmpPolarity::Eq ? "=" : "!=") + f.sort + " " + f.j + ":>";
  return f;
}

std::size_t size(const LabeledExpr& f) { return f.is_sat() ? 1 + size(f.body) : 3; }

void collect(const LabeledExpr& f, Signature& sig) {
  if (f.is_sat()) {
    sig.noms.insert(f.i);
    collect(f.body, sig);
  } else {
    sig.noms.insert(f.i);
    sig.noms.insert(f.j);
    sig.cmps.insert(f.sort);
  }
}

LabeledExpr rename(const LabeledExpr& f, const Ident& from, const Ident& to) {
  auto r = [&](const Ident& x) { return x == from ? to : x; };
  if (f.is_sat()) {
    NodeP b = rename(f.body, from, to);
    if (b == f.body && f.i != from) return f;
    return sat(r(f.i), b);
  }
  if (f.i != from && f.j != from) return f;
  return data(f.pol, f.sort, r(f.i), r(f.j));
}

// formula sets

FormulaSet::FormulaSet(std::initializer_list<LabeledExpr> xs) : FormulaSet(std::vector(xs)) {}

FormulaSet::FormulaSet(std::vector<LabeledExpr> xs) : xs_(std::move(xs)) {
  std::sort(xs_.begin(), xs_.end());
  xs_.erase(std::unique(xs_.begin(), xs_.end()), xs_.end());
}

bool FormulaSet::contains(const LabeledExpr& f) const {
  return std::binary_search(xs_.begin(), xs_.end(), f);
}

void FormulaSet::insert(const LabeledExpr& f) {
  auto it = std::lower_bound(xs_.begin(), xs_.end(), f);
  if (it == xs_.end() || !(*it == f)) xs_.insert(it, f);
}

void FormulaSet::erase(const LabeledExpr& f) {
  auto it = std::lower_bound(xs_.begin(), xs_.end(), f);
  if (it != xs_.end() && *it == f) xs_.erase(it);
}

FormulaSet FormulaSet::with(const LabeledExpr& f) const {
  FormulaSet s = *this;
  s.insert(f);
  return s;
}

FormulaSet FormulaSet::without(const LabeledExpr& f) const {
  FormulaSet s = *this;
  s.erase(f);
  return s;
}

bool FormulaSet::subset_of(const FormulaSet& o) const {
  return std::includes(o.xs_.begin(), o.xs_.end(), xs_.begin(), xs_.end());
}

FormulaSet FormulaSet::unite(const FormulaSet& o) const {
  FormulaSet s;
  std::set_union(xs_.begin(), xs_.end(), o.xs_.begin(), o.xs_.end(), std::back_inserter(s.xs_));
  return s;
}

FormulaSet FormulaSet::minus(const FormulaSet& o) const {
  FormulaSet s;
  std::set_difference(xs_.begin(), xs_.end(), o.xs_.begin(), o.xs_.end(),
                      std::back_inserter(s.xs_));
  return s;
}

Signature signature_of(const Sequent& s) {
  Signature sig;
  for (const auto& f : s.ante) collect(f, sig);
  for (const auto& f : s.cons) collect(f, sig);
  return sig;
}

Sequent rename(const Sequent& s, const Ident& from, const Ident& to) {
  std::vector<LabeledExpr> a, c;
  for (const auto& f : s.ante) a.push_back(rename(f, from, to));
  for (const auto& f : s.cons) c.push_back(rename(f, from, to));
  return {FormulaSet(std::move(a)), FormulaSet(std::move(c))};
}

bool occurs(const Ident& nominal, const Sequent& s) {
  return signature_of(s).noms.count(nominal) > 0;
}

std::string print_labeled(const LabeledExpr& f) { return f.text; }

std::string print_sequent(const Sequent& s) {
  std::string out;
  bool first = true;
  for (const auto& f : s.ante) {
    out += first ? "" : ", ";
    out += f.text;
    first = false;
  }
  out += first ? "|-" : " |-";
  first = true;
  for (const auto& f : s.cons) {
    out += first ? " " : ", ";
    out += f.text;
    first = false;
  }
  return out;
}

namespace {

LabeledExpr labeled(detail::Parser& p) {
  using detail::Tok;
  // shorthand <I =c J>
  if (p.at(Tok::Lt) && p.peek(1).kind == Tok::Ident && detail::is_nominal_text(p.peek(1).text) &&
      (p.peek(2).kind == Tok::Eq || p.peek(2).kind == Tok::Neq) && p.peek(3).kind == Tok::Ident &&
      p.peek(4).kind == Tok::Ident && detail::is_nominal_text(p.peek(4).text) &&
      p.peek(5).kind == Tok::Gt) {
    p.accept(Tok::Lt);
    Ident i = p.expect_nominal().text;
    CmpPolarity pol = p.accept(Tok::Eq) ? CmpPolarity::Eq : (p.accept(Tok::Neq), CmpPolarity::Neq);
    p.declare(p.peek(), detail::Parser::Ns::Cmp);
    Ident c = p.expect(Tok::Ident).text;
    Ident j = p.expect_nominal().text;
    p.expect(Tok::Gt);
    return data(pol, c, i, j);
  }
  const detail::Token start = p.peek();
  NodeP e = p.node();
  if (e->kind == NodeKind::At) return sat(e->name, e->b);
  if (e->kind == NodeKind::Cmp && e->left->kind == PathKind::Goto &&
      e->right->kind == PathKind::Goto)
    return data(e->pol, e->name, e->left->name, e->right->name);
  p.fail(start, "sequent member must be @N phi or <N: =c M:>");
}

}  // namespace

LabeledExpr parse_labeled(std::string_view text, ParseOptions opt) {
  detail::Parser p(text, opt);
  LabeledExpr f = labeled(p);
  p.expect_end();
  return f;
}

Sequent parse_sequent(std::string_view text, ParseOptions opt) {
  using detail::Tok;
  detail::Parser p(text, opt);
  std::vector<LabeledExpr> a, c;
  if (!p.at(Tok::Turnstile)) {
    a.push_back(labeled(p));
    while (p.accept(Tok::Comma)) a.push_back(labeled(p));
  }
  p.expect(Tok::Turnstile);
  if (!p.at(Tok::End)) {
    c.push_back(labeled(p));
    while (p.accept(Tok::Comma)) c.push_back(labeled(p));
  }
  p.expect_end();
  return {FormulaSet(std::move(a)), FormulaSet(std::move(c))};
}

// rules

namespace {

constexpr const char* kRuleNames[] = {
    "Ax", "Bot", "ImpL", "ImpR", "AtT", "At5", "Nom", "S1", "S2", "S3", "AtL", "AtR",
    "DiaL", "DiaR", "CmpL", "CmpR", "EqT", "Eq5", "NEqL", "NEqR", "Cut", "WL", "WR", "Open"};

using Code = KernelError::Code;

[[noreturn]] void err(Code c, RuleId r, const std::string& msg) {
  throw KernelError(c, std::string(rule_name(r)) + ": " + msg);
}

void shape(bool ok, RuleId r, const std::string& msg) {
  if (!ok) err(Code::ParamShape, r, msg);
}

void side(bool ok, RuleId r, const std::string& msg) {
  if (!ok) err(Code::SideConditionViolated, r, msg);
}

void in(const FormulaSet& s, const LabeledExpr& f, RuleId r, const char* where) {
  if (!s.contains(f)) err(Code::PrincipalMissing, r, f.text + " not in " + where);
}

bool is_nom_body(const LabeledExpr& f) { return f.is_sat() && f.body->kind == NodeKind::Nom; }

}  // namespace

const char* rule_name(RuleId r) { return kRuleNames[int(r)]; }

std::optional<RuleId> rule_from_name(std::string_view name) {
  if (name == "NomFresh") return RuleId::NomFresh;
  for (int k = 0; k < kRuleCount; ++k)
    if (name == kRuleNames[k]) return RuleId(k);
  return std::nullopt;
}

int premiss_count(RuleId r) {
  switch (r) {
    case RuleId::Ax:
    case RuleId::Bot:
    case RuleId::Open: return 0;
    case RuleId::ImpL:
    case RuleId::Cut: return 2;
    default: return 1;
  }
}

bool is_atomic_axiom_form(const LabeledExpr& f) {
  if (f.is_data()) return f.pol == CmpPolarity::Eq;
  return f.body->kind == NodeKind::Prop || f.body->kind == NodeKind::Nom;
}

std::vector<Sequent> apply_rule_backward(RuleId r, const Sequent& c, const RuleParams& p) {
  const auto& P = p.principal;
  auto need = [&](std::size_t n) {
    shape(P.size() == n, r, "expects " + std::to_string(n) + " principal formula(s)");
  };
  auto no_fresh = [&] {
    shape(p.fresh.empty(), r, "takes no fresh nominals");
  };
  Sequent s = c;
  switch (r) {
    case RuleId::Ax:
      need(1);
      side(is_atomic_axiom_form(P[0]), r, P[0].text + " is not of the form @ip, @ij or <i:=c j:>");
      in(c.ante, P[0], r, "antecedent");
      in(c.cons, P[0], r, "consequent");
      return {};
    case RuleId::Bot:
      need(1);
      side(P[0].is_sat() && P[0].body->kind == NodeKind::Bot, r, P[0].text + " is not @i false");
      in(c.ante, P[0], r, "antecedent");
      return {};
    case RuleId::Open:
      return {};
    case RuleId::ImpL: {
      need(1);
      side(P[0].is_sat() && P[0].body->kind == NodeKind::Imp, r, P[0].text + " is not an implication");
      in(c.ante, P[0], r, "antecedent");
      Sequent l{c.ante.without(P[0]), c.cons.with(sat(P[0].i, P[0].body->a))};
      Sequent rr{c.ante.without(P[0]).with(sat(P[0].i, P[0].body->b)), c.cons};
      return {l, rr};
    }
    case RuleId::ImpR:
      need(1);
      side(P[0].is_sat() && P[0].body->kind == NodeKind::Imp, r, P[0].text + " is not an implication");
      in(c.cons, P[0], r, "consequent");
      s.ante.insert(sat(P[0].i, P[0].body->a));
      s.cons.erase(P[0]);
      s.cons.insert(sat(P[0].i, P[0].body->b));
      return {s};
    case RuleId::AtT:
      need(1);
      side(is_nom_body(P[0]) && P[0].body->name == P[0].i, r, P[0].text + " is not of the form @i i");
      s.ante.insert(P[0]);
      return {s};
    case RuleId::At5:
      need(2);
      side(is_nom_body(P[0]) && is_nom_body(P[1]) && P[0].i == P[1].i, r,
           "principals must be @i j and @i k");
      in(c.ante, P[0], r, "antecedent");
      in(c.ante, P[1], r, "antecedent");
      s.ante.insert(sat(P[0].body->name, nom(P[1].body->name)));
      return {s};
    case RuleId::NomFresh:
      need(1);
      shape(p.fresh.size() == 1, r, "expects one fresh nominal");
      side(is_nom_body(P[0]) && P[0].body->name == p.fresh[0], r, "principal must be @i j with j fresh");
      side(!occurs(p.fresh[0], c), r, p.fresh[0] + " occurs in the conclusion");
      s.ante.insert(P[0]);
      return {s};
    case RuleId::S1: {
      need(2);
      no_fresh();
      side(is_nom_body(P[0]) && P[1].is_sat() && P[0].i == P[1].i, r,
           "principals must be @i j and @i phi");
      const NodeP& phi = P[1].body;
      side(phi->kind == NodeKind::Prop || phi->kind == NodeKind::Bot ||
               (phi->kind == NodeKind::Dia && phi->b->kind == NodeKind::Nom),
           r, P[1].text + ": phi must be p, false or <a>k");
      in(c.ante, P[0], r, "antecedent");
      in(c.ante, P[1], r, "antecedent");
      s.ante.insert(sat(P[0].body->name, phi));
      return {s};
    }
    case RuleId::S2:
      need(2);
      side(is_nom_body(P[0]) && P[1].is_sat() && P[1].body->kind == NodeKind::Dia &&
               P[1].body->b->kind == NodeKind::Nom && P[1].body->b->name == P[0].i,
           r, "principals must be @j k and @i<a>j");
      in(c.ante, P[0], r, "antecedent");
      in(c.ante, P[1], r, "antecedent");
      s.ante.insert(sat(P[1].i, dia(P[1].body->name, nom(P[0].body->name))));
      return {s};
    case RuleId::S3:
      need(2);
      side(is_nom_body(P[0]) && P[1].is_data() && P[1].pol == CmpPolarity::Eq &&
               P[1].i == P[0].i,
           r, "principals must be @i j and <i: =c k:>");
      in(c.ante, P[0], r, "antecedent");
      in(c.ante, P[1], r, "antecedent");
      s.ante.insert(data_eq(P[1].sort, P[0].body->name, P[1].j));
      return {s};
    case RuleId::AtL:
    case RuleId::AtR: {
      need(1);
      side(P[0].is_sat() && P[0].body->kind == NodeKind::At, r, P[0].text + " is not @j @i phi");
      LabeledExpr inner = sat(P[0].body->name, P[0].body->b);
      FormulaSet& side_set = r == RuleId::AtL ? s.ante : s.cons;
      in(side_set, P[0], r, r == RuleId::AtL ? "antecedent" : "consequent");
      side_set.erase(P[0]);
      side_set.insert(inner);
      return {s};
    }
    case RuleId::DiaL: {
      need(1);
      shape(p.fresh.size() == 1, r, "expects one fresh nominal");
      side(P[0].is_sat() && P[0].body->kind == NodeKind::Dia, r, P[0].text + " is not @i<a>phi");
      in(c.ante, P[0], r, "antecedent");
      const Ident& j = p.fresh[0];
      side(!occurs(j, c), r, j + " occurs in the conclusion");
      s.ante.erase(P[0]);
      s.ante.insert(sat(P[0].i, dia(P[0].body->name, nom(j))));
      s.ante.insert(sat(j, P[0].body->b));
      return {s};
    }
    case RuleId::DiaR: {
      need(1);
      shape(p.witness.size() == 1, r, "expects one witness nominal");
      side(P[0].is_sat() && P[0].body->kind == NodeKind::Dia, r, P[0].text + " is not @i<a>phi");
      in(c.cons, P[0], r, "consequent");
      const Ident& j = p.witness[0];
      in(c.ante, sat(P[0].i, dia(P[0].body->name, nom(j))), r, "antecedent");
      s.cons.insert(sat(j, P[0].body->b));
      return {s};
    }
    case RuleId::CmpL: {
      need(1);
      shape(p.fresh.size() == 2, r, "expects two fresh nominals");
      side(P[0].is_sat() && P[0].body->kind == NodeKind::Cmp, r, P[0].text + " is not @i<a ▲ b>");
      in(c.ante, P[0], r, "antecedent");
      const Ident &j = p.fresh[0], &k = p.fresh[1];
      side(j != k, r, "fresh nominals must be different");
      side(!occurs(j, c) && !occurs(k, c), r, "fresh nominal occurs in the conclusion");
      const NodeP& e = P[0].body;
      s.ante.erase(P[0]);
      s.ante.insert(sat(P[0].i, diamond(e->left, nom(j))));
      s.ante.insert(sat(P[0].i, diamond(e->right, nom(k))));
      s.ante.insert(data(e->pol, e->name, j, k));
      return {s};
    }
    case RuleId::CmpR: {
      need(1);
      shape(p.witness.size() == 2, r, "expects two witness nominals");
      side(P[0].is_sat() && P[0].body->kind == NodeKind::Cmp, r, P[0].text + " is not @i<a ▲ b>");
      in(c.cons, P[0], r, "consequent");
      const NodeP& e = P[0].body;
      const Ident &j = p.witness[0], &k = p.witness[1];
      in(c.ante, sat(P[0].i, diamond(e->left, nom(j))), r, "antecedent");
      in(c.ante, sat(P[0].i, diamond(e->right, nom(k))), r, "antecedent");
      s.cons.insert(data(e->pol, e->name, j, k));
      return {s};
    }
    case RuleId::EqT:
      need(1);
      side(P[0].is_data() && P[0].pol == CmpPolarity::Eq && P[0].i == P[0].j, r,
           P[0].text + " is not <i: =c i:>");
      s.ante.insert(P[0]);
      return {s};
    case RuleId::Eq5:
      need(2);
      side(P[0].is_data() && P[1].is_data() && P[0].pol == CmpPolarity::Eq &&
               P[1].pol == CmpPolarity::Eq && P[0].i == P[1].i && P[0].sort == P[1].sort,
           r, "principals must be <i: =c j:> and <i: =c k:>");
      in(c.ante, P[0], r, "antecedent");
      in(c.ante, P[1], r, "antecedent");
      s.ante.insert(data_eq(P[0].sort, P[0].j, P[1].j));
      return {s};
    case RuleId::NEqL:
    case RuleId::NEqR: {
      need(1);
      side(P[0].is_data() && P[0].pol == CmpPolarity::Neq, r, P[0].text + " is not <i: !=c j:>");
      LabeledExpr eq = data_eq(P[0].sort, P[0].i, P[0].j);
      if (r == RuleId::NEqL) {
        in(c.ante, P[0], r, "antecedent");
        s.ante.erase(P[0]);
        s.cons.insert(eq);
      } else {
        in(c.cons, P[0], r, "consequent");
        s.cons.erase(P[0]);
        s.ante.insert(eq);
      }
      return {s};
    }
    case RuleId::Cut: {
      shape(p.cut.has_value(), r, "missing cut formula");
      Sequent l{c.ante, c.cons.with(*p.cut)};
      Sequent rr{c.ante.with(*p.cut), c.cons};
      return {l, rr};
    }
    case RuleId::WL:
      need(1);
      in(c.ante, P[0], r, "antecedent");
      s.ante.erase(P[0]);
      return {s};
    case RuleId::WR:
      need(1);
      in(c.cons, P[0], r, "consequent");
      s.cons.erase(P[0]);
      return {s};
  }
  err(Code::ParamShape, r, "unknown rule");
}

std::optional<RuleId> provable_leaf_forms(const Sequent& s) {
  for (const auto& f : s.ante)
    if (is_atomic_axiom_form(f) && s.cons.contains(f)) return RuleId::Ax;
  for (const auto& f : s.ante)
    if (f.is_sat() && f.body->kind == NodeKind::Bot) return RuleId::Bot;
  return std::nullopt;
}

DerivP make_deriv(RuleId rule, Sequent conclusion, RuleParams params, std::vector<DerivP> children) {
  return std::make_shared<const Derivation>(
      Derivation{std::move(conclusion), rule, std::move(params), std::move(children)});
}

// checking

namespace {

struct Checker {
  CheckReport rep;

  bool fail(const std::vector<int>& path, const std::string& msg) {
    rep.well_formed = false;
    rep.proved = false;
    rep.error_path = path;
    rep.error = msg;
    return false;
  }

  static bool between(const FormulaSet& lo, const FormulaSet& x, const FormulaSet& hi) {
    return lo.subset_of(x) && x.subset_of(hi);
  }

  bool check_cut(const Derivation& d, std::vector<int>& path) {
    if (!d.params.cut) return fail(path, "Cut: missing cut formula");
    const LabeledExpr& phi = *d.params.cut;
    const Sequent& L = d.children[0]->conclusion;
    const Sequent& R = d.children[1]->conclusion;
    if (!L.cons.contains(phi)) return fail(path, "Cut: left premiss lacks " + phi.text + " on the right");
    if (!R.ante.contains(phi)) return fail(path, "Cut: right premiss lacks " + phi.text + " on the left");
    const Sequent& C = d.conclusion;
    FormulaSet ante_lo = L.ante.unite(R.ante.without(phi)), ante_hi = L.ante.unite(R.ante);
    FormulaSet cons_lo = L.cons.without(phi).unite(R.cons), cons_hi = L.cons.unite(R.cons);
    if (!between(ante_lo, C.ante, ante_hi) || !between(cons_lo, C.cons, cons_hi))
      return fail(path, "Cut: conclusion is not the union of the premiss contexts");
    return true;
  }

  bool walk(const DerivP& dp, std::vector<int>& path) {
    const Derivation& d = *dp;
    ++rep.nodes;
    if (int(d.children.size()) != premiss_count(d.rule))
      return fail(path, std::string(rule_name(d.rule)) + ": expected " +
                            std::to_string(premiss_count(d.rule)) + " premiss(es), found " +
                            std::to_string(d.children.size()));
    if (d.rule == RuleId::Cut) {
      ++rep.cut_count;
      if (!check_cut(d, path)) return false;
    } else {
      if (d.rule == RuleId::WL || d.rule == RuleId::WR) rep.uses_weakening = true;
      if (d.rule == RuleId::Open) {
        ++rep.open_leaves;
        rep.proved = false;
      }
      std::vector<Sequent> prem;
      try {
        prem = apply_rule_backward(d.rule, d.conclusion, d.params);
      } catch (const KernelError& e) {
        return fail(path, e.what());
      }
      for (std::size_t k = 0; k < prem.size(); ++k) {
        const Sequent& got = d.children[k]->conclusion;
        if (!between(prem[k].ante, got.ante, prem[k].ante.unite(d.conclusion.ante)) ||
            !between(prem[k].cons, got.cons, prem[k].cons.unite(d.conclusion.cons)))
          return fail(path, std::string(rule_name(d.rule)) + ": premiss " + std::to_string(k) +
                                " is '" + print_sequent(got) + "', expected '" +
                                print_sequent(prem[k]) + "'");
      }
    }
    for (std::size_t k = 0; k < d.children.size(); ++k) {
      path.push_back(int(k));
      bool ok = walk(d.children[k], path);
      path.pop_back();
      if (!ok) return false;
    }
    return true;
  }
};

}  // namespace

CheckReport check_derivation(const DerivP& d) {
  Checker c;
  std::vector<int> path;
  c.walk(d, path);
  return c.rep;
}

std::string path_string(const std::vector<int>& path) {
  if (path.empty()) return "root";
  std::string s;
  for (std::size_t k = 0; k < path.size(); ++k) s += (k ? "." : "") + std::to_string(path[k]);
  return s;
}

int derivation_height(const DerivP& d) {
  int h = 0;
  for (const auto& c : d->children) h = std::max(h, derivation_height(c));
  return 1 + h;
}

int count_rule(const DerivP& d, RuleId r) {
  int n = d->rule == r;
  for (const auto& c : d->children) n += count_rule(c, r);
  return n;
}

}  // namespace hxd
