// Expression trees for HXPath_D node and path expressions.
#pragma once

#include <cstddef>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hxd {

using Ident = std::string;

enum class CmpPolarity { Eq, Neq };

inline CmpPolarity flip(CmpPolarity p) {
  return p == CmpPolarity::Eq ? CmpPolarity::Neq : CmpPolarity::Eq;
}

enum class NodeKind { Prop, Nom, Bot, Imp, At, Dia, Cmp };
enum class PathKind { Step, Goto, Test, Comp };

struct Node;
struct Path;
using NodeP = std::shared_ptr<const Node>;
using PathP = std::shared_ptr<const Path>;

struct Node {
  NodeKind kind;
  // Prop/Nom symbol, At nominal, Dia modality, Cmp sort.
  Ident name;
  // Imp: a -> b.  At, Dia: body in b.
  NodeP a, b;
  // Cmp operands.
  PathP left, right;
  CmpPolarity pol = CmpPolarity::Eq;
};

struct Path {
  PathKind kind;
  Ident name;   // Step modality or Goto nominal
  NodeP cond;   // Test
  PathP left, right;  // Comp
};

// core constructors
NodeP prop(Ident p);
NodeP nom(Ident i);
NodeP bot();
NodeP imp(NodeP a, NodeP b);
NodeP at(Ident i, NodeP body);
NodeP dia(Ident a, NodeP body);
NodeP cmp(CmpPolarity pol, Ident sort, PathP l, PathP r);

PathP step(Ident a);
PathP go(Ident i);
PathP test(NodeP cond);
PathP comp(PathP l, PathP r);

// abbreviations, expanded into core trees
NodeP top();
NodeP neg(NodeP x);
NodeP conj(NodeP x, NodeP y);
NodeP disj(NodeP x, NodeP y);
NodeP iff(NodeP x, NodeP y);
NodeP diamond(const PathP& alpha, NodeP body);  // <alpha>phi
NodeP box(const PathP& alpha, NodeP body);      // [alpha]phi
NodeP box_cmp(CmpPolarity pol, Ident sort, PathP l, PathP r);  // [l ▲ r]
PathP eps();

bool equal(const Node& x, const Node& y);
bool equal(const Path& x, const Path& y);
inline bool equal(const NodeP& x, const NodeP& y) { return x == y || equal(*x, *y); }
inline bool equal(const PathP& x, const PathP& y) { return x == y || equal(*x, *y); }

std::size_t size(const NodeP& e);
std::size_t size(const PathP& a);

struct Signature {
  std::set<Ident> props, noms, mods, cmps;
  void merge(const Signature& o);
  bool disjoint() const;
  bool operator==(const Signature&) const = default;
};

void collect(const NodeP& e, Signature& sig);
void collect(const PathP& a, Signature& sig);
Signature signature_of(const NodeP& e);
Signature signature_of(const PathP& a);

std::string print_node(const NodeP& e);
std::string print_path(const PathP& a);

// Peel the body back out of diamond(alpha, body); null if e has a different shape.
NodeP diamond_body(const PathP& alpha, const NodeP& e);

// Nominal renaming (total: At index, Nom, Goto).
NodeP rename(const NodeP& e, const Ident& from, const Ident& to);
PathP rename(const PathP& a, const Ident& from, const Ident& to);

bool is_reserved(std::string_view id);  // _g0, _g1, ...

struct ParseError : std::runtime_error {
  int line, col;
  ParseError(int line, int col, const std::string& msg);
};

struct ParseOptions {
  bool allow_reserved = false;
};

NodeP parse_node(std::string_view text, ParseOptions opt = {});
PathP parse_path(std::string_view text, ParseOptions opt = {});

}  // namespace hxd
