#include "hxd/syntax.hpp"

#include <cctype>

namespace hxd {

namespace {

NodeP mk(Node n) { return std::make_shared<const Node>(std::move(n)); }
PathP mk(Path p) { return std::make_shared<const Path>(std::move(p)); }

const NodeP& bot_singleton() {
  static const NodeP b = mk(Node{NodeKind::Bot, {}, {}, {}, {}, {}});
  return b;
}

}  // namespace

NodeP prop(Ident p) { return mk(Node{NodeKind::Prop, std::move(p), {}, {}, {}, {}}); }
NodeP nom(Ident i) { return mk(Node{NodeKind::Nom, std::move(i), {}, {}, {}, {}}); }
NodeP bot() { return bot_singleton(); }
NodeP imp(NodeP a, NodeP b) {
  return mk(Node{NodeKind::Imp, {}, std::move(a), std::move(b), {}, {}});
}
NodeP at(Ident i, NodeP body) {
  return mk(Node{NodeKind::At, std::move(i), {}, std::move(body), {}, {}});
}
NodeP dia(Ident a, NodeP body) {
  return mk(Node{NodeKind::Dia, std::move(a), {}, std::move(body), {}, {}});
}
NodeP cmp(CmpPolarity pol, Ident sort, PathP l, PathP r) {
  return mk(Node{NodeKind::Cmp, std::move(sort), {}, {}, std::move(l), std::move(r), pol});
}

PathP step(Ident a) { return mk(Path{PathKind::Step, std::move(a), {}, {}, {}}); }
PathP go(Ident i) { return mk(Path{PathKind::Goto, std::move(i), {}, {}, {}}); }
PathP test(NodeP cond) { return mk(Path{PathKind::Test, {}, std::move(cond), {}, {}}); }
PathP comp(PathP l, PathP r) {
  return mk(Path{PathKind::Comp, {}, {}, std::move(l), std::move(r)});
}

NodeP top() { return imp(bot(), bot()); }
NodeP neg(NodeP x) { return imp(std::move(x), bot()); }
NodeP conj(NodeP x, NodeP y) { return neg(imp(std::move(x), neg(std::move(y)))); }
NodeP disj(NodeP x, NodeP y) { return imp(neg(std::move(x)), std::move(y)); }
NodeP iff(NodeP x, NodeP y) { return conj(imp(x, y), imp(y, x)); }

NodeP diamond(const PathP& alpha, NodeP body) {
  switch (alpha->kind) {
    case PathKind::Step: return dia(alpha->name, std::move(body));
    case PathKind::Goto: return at(alpha->name, std::move(body));
    case PathKind::Test: return conj(alpha->cond, std::move(body));
    case PathKind::Comp: return diamond(alpha->left, diamond(alpha->right, std::move(body)));
  }
  return nullptr;
}

NodeP box(const PathP& alpha, NodeP body) { return neg(diamond(alpha, neg(std::move(body)))); }

NodeP box_cmp(CmpPolarity pol, Ident sort, PathP l, PathP r) {
  return neg(cmp(flip(pol), std::move(sort), std::move(l), std::move(r)));
}

PathP eps() { return test(top()); }

NodeP diamond_body(const PathP& alpha, const NodeP& e) {
  if (!e) return nullptr;
  switch (alpha->kind) {
    case PathKind::Step:
      return e->kind == NodeKind::Dia && e->name == alpha->name ? e->b : nullptr;
    case PathKind::Goto:
      return e->kind == NodeKind::At && e->name == alpha->name ? e->b : nullptr;
    case PathKind::Test: {
      // (cond -> (body -> false)) -> false
      if (e->kind != NodeKind::Imp || e->b->kind != NodeKind::Bot) return nullptr;
      const NodeP& inner = e->a;
      if (inner->kind != NodeKind::Imp || !equal(inner->a, alpha->cond)) return nullptr;
      const NodeP& nb = inner->b;
      if (nb->kind != NodeKind::Imp || nb->b->kind != NodeKind::Bot) return nullptr;
      return nb->a;
    }
    case PathKind::Comp: {
      NodeP mid = diamond_body(alpha->left, e);
      return mid ? diamond_body(alpha->right, mid) : nullptr;
    }
  }
  return nullptr;
}

bool equal(const Node& x, const Node& y) {
  if (&x == &y) return true;
  if (x.kind != y.kind) return false;
  switch (x.kind) {
    case NodeKind::Prop:
    case NodeKind::Nom: return x.name == y.name;
    case NodeKind::Bot: return true;
    case NodeKind::Imp: return equal(x.a, y.a) && equal(x.b, y.b);
    case NodeKind::At:
    case NodeKind::Dia: return x.name == y.name && equal(x.b, y.b);
    case NodeKind::Cmp:
      return x.pol == y.pol && x.name == y.name && equal(x.left, y.left) &&
             equal(x.right, y.right);
  }
  return false;
}

bool equal(const Path& x, const Path& y) {
  if (&x == &y) return true;
  if (x.kind != y.kind) return false;
  switch (x.kind) {
    case PathKind::Step:
    case PathKind::Goto: return x.name == y.name;
    case PathKind::Test: return equal(x.cond, y.cond);
    case PathKind::Comp: return equal(x.left, y.left) && equal(x.right, y.right);
  }
  return false;
}

std::size_t size(const NodeP& e) {
  switch (e->kind) {
    case NodeKind::Prop:
    case NodeKind::Nom:
    case NodeKind::Bot: return 1;
    case NodeKind::Imp: return 1 + size(e->a) + size(e->b);
    case NodeKind::At:
    case NodeKind::Dia: return 1 + size(e->b);
    case NodeKind::Cmp: return 1 + size(e->left) + size(e->right);
  }
  return 1;
}

std::size_t size(const PathP& a) {
  switch (a->kind) {
    case PathKind::Step:
    case PathKind::Goto: return 1;
    case PathKind::Test: return 1 + size(a->cond);
    case PathKind::Comp: return size(a->left) + size(a->right);
  }
  return 1;
}

void Signature::merge(const Signature& o) {
  props.insert(o.props.begin(), o.props.end());
  noms.insert(o.noms.begin(), o.noms.end());
  mods.insert(o.mods.begin(), o.mods.end());
  cmps.insert(o.cmps.begin(), o.cmps.end());
}

bool Signature::disjoint() const {
  const std::set<Ident>* sets[] = {&props, &noms, &mods, &cmps};
  for (int x = 0; x < 4; ++x)
    for (int y = x + 1; y < 4; ++y)
      for (const auto& s : *sets[x])
        if (sets[y]->count(s)) return false;
  return true;
}

void collect(const NodeP& e, Signature& sig) {
  switch (e->kind) {
    case NodeKind::Prop: sig.props.insert(e->name); break;
    case NodeKind::Nom: sig.noms.insert(e->name); break;
    case NodeKind::Bot: break;
    case NodeKind::Imp: collect(e->a, sig); collect(e->b, sig); break;
    case NodeKind::At: sig.noms.insert(e->name); collect(e->b, sig); break;
    case NodeKind::Dia: sig.mods.insert(e->name); collect(e->b, sig); break;
    case NodeKind::Cmp:
      sig.cmps.insert(e->name);
      collect(e->left, sig);
      collect(e->right, sig);
      break;
  }
}

void collect(const PathP& a, Signature& sig) {
  switch (a->kind) {
    case PathKind::Step: sig.mods.insert(a->name); break;
    case PathKind::Goto: sig.noms.insert(a->name); break;
    case PathKind::Test: collect(a->cond, sig); break;
    case PathKind::Comp: collect(a->left, sig); collect(a->right, sig); break;
  }
}

Signature signature_of(const NodeP& e) {
  Signature s;
  collect(e, s);
  return s;
}

Signature signature_of(const PathP& a) {
  Signature s;
  collect(a, s);
  return s;
}

NodeP rename(const NodeP& e, const Ident& from, const Ident& to) {
  switch (e->kind) {
    case NodeKind::Prop:
    case NodeKind::Bot: return e;
    case NodeKind::Nom: return e->name == from ? nom(to) : e;
    case NodeKind::Imp: {
      NodeP a = rename(e->a, from, to), b = rename(e->b, from, to);
      return a == e->a && b == e->b ? e : imp(a, b);
    }
    case NodeKind::At: {
      NodeP b = rename(e->b, from, to);
      if (b == e->b && e->name != from) return e;
      return at(e->name == from ? to : e->name, b);
    }
    case NodeKind::Dia: {
      NodeP b = rename(e->b, from, to);
      return b == e->b ? e : dia(e->name, b);
    }
    case NodeKind::Cmp: {
      PathP l = rename(e->left, from, to), r = rename(e->right, from, to);
      return l == e->left && r == e->right ? e : cmp(e->pol, e->name, l, r);
    }
  }
  return e;
}

PathP rename(const PathP& a, const Ident& from, const Ident& to) {
  switch (a->kind) {
    case PathKind::Step: return a;
    case PathKind::Goto: return a->name == from ? go(to) : a;
    case PathKind::Test: {
      NodeP c = rename(a->cond, from, to);
      return c == a->cond ? a : test(c);
    }
    case PathKind::Comp: {
      PathP l = rename(a->left, from, to), r = rename(a->right, from, to);
      return l == a->left && r == a->right ? a : comp(l, r);
    }
  }
  return a;
}

bool is_reserved(std::string_view id) {
  if (id.size() < 3 || id[0] != '_' || id[1] != 'g') return false;
  for (std::size_t k = 2; k < id.size(); ++k)
    if (!std::isdigit(static_cast<unsigned char>(id[k]))) return false;
  return true;
}

// printing

namespace {

void print(const NodeP& e, std::string& out, bool tight);
void print(const PathP& a, std::string& out);

void print_seg(const PathP& a, std::string& out) {
  if (a->kind == PathKind::Comp) {
    out += '(';
    print(a, out);
    out += ')';
  } else {
    print(a, out);
  }
}

void print(const PathP& a, std::string& out) {
  switch (a->kind) {
    case PathKind::Step: out += a->name; break;
    case PathKind::Goto: out += a->name; out += ':'; break;
    case PathKind::Test: print(a->cond, out, true); out += '?'; break;
    case PathKind::Comp:
      print_seg(a->left, out);
      out += " ; ";
      print(a->right, out);
      break;
  }
}

// tight: the expression sits in an operand position that binds tighter than ->
void print(const NodeP& e, std::string& out, bool tight) {
  switch (e->kind) {
    case NodeKind::Prop:
    case NodeKind::Nom: out += e->name; break;
    case NodeKind::Bot: out += "false"; break;
    case NodeKind::Imp:
      if (tight) out += '(';
      print(e->a, out, true);
      out += " -> ";
      print(e->b, out, false);
      if (tight) out += ')';
      break;
    case NodeKind::At:
      out += '@';
      out += e->name;
      out += ' ';
      print(e->b, out, true);
      break;
    case NodeKind::Dia:
      out += '<';
      out += e->name;
      out += '>';
      print(e->b, out, true);
      break;
    case NodeKind::Cmp:
      out += '<';
      print(e->left, out);
      out += e->pol == CmpPolarity::Eq ? " =" : " !=";
      out += e->name;
      out += ' ';
      print(e->right, out);
      out += '>';
      break;
  }
}

}  // namespace

std::string print_node(const NodeP& e) {
  std::string out;
  print(e, out, false);
  return out;
}

std::string print_path(const PathP& a) {
  std::string out;
  print(a, out);
  return out;
}

ParseError::ParseError(int l, int c, const std::string& msg)
    : std::runtime_error(std::to_string(l) + ":" + std::to_string(c) + ": " + msg), line(l), col(c) {}

}  // namespace hxd
