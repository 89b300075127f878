// Direct per-point reading of the satisfaction clauses, kept separate from the
// bitset evaluator in the library.
#pragma once

#include "hxd/kernel.hpp"
#include "hxd/semantics.hpp"

namespace oracle {

using namespace hxd;

inline bool sat_at(const HybridDataModel& m, int n, const NodeP& e);

inline bool path_at(const HybridDataModel& m, int n, int n2, const PathP& a) {
  switch (a->kind) {
    case PathKind::Step: return m.has_edge(a->name, n, n2);
    case PathKind::Goto: return m.assign.at(a->name) == n2;
    case PathKind::Test: return n == n2 && sat_at(m, n, a->cond);
    case PathKind::Comp:
      for (int x = 0; x < m.n_nodes; ++x)
        if (path_at(m, n, x, a->left) && path_at(m, x, n2, a->right)) return true;
      return false;
  }
  return false;
}

inline bool sat_at(const HybridDataModel& m, int n, const NodeP& e) {
  switch (e->kind) {
    case NodeKind::Prop: return (m.val.at(e->name) >> n) & 1;
    case NodeKind::Nom: return m.assign.at(e->name) == n;
    case NodeKind::Bot: return false;
    case NodeKind::Imp: return !sat_at(m, n, e->a) || sat_at(m, n, e->b);
    case NodeKind::At: return sat_at(m, m.assign.at(e->name), e->b);
    case NodeKind::Dia:
      for (int x = 0; x < m.n_nodes; ++x)
        if (m.has_edge(e->name, n, x) && sat_at(m, x, e->b)) return true;
      return false;
    case NodeKind::Cmp: {
      const auto& blk = m.cmp.at(e->name);
      for (int x = 0; x < m.n_nodes; ++x)
        for (int y = 0; y < m.n_nodes; ++y)
          if (path_at(m, n, x, e->left) && path_at(m, n, y, e->right) &&
              ((blk[x] == blk[y]) == (e->pol == CmpPolarity::Eq)))
            return true;
      return false;
    }
  }
  return false;
}

inline bool member_holds(const HybridDataModel& m, const LabeledExpr& f) {
  if (f.is_sat()) return sat_at(m, m.assign.at(f.i), f.body);
  const auto& blk = m.cmp.at(f.sort);
  return (blk[m.assign.at(f.i)] == blk[m.assign.at(f.j)]) == (f.pol == CmpPolarity::Eq);
}

inline bool valid_in(const HybridDataModel& m, const Sequent& s) {
  bool all = true;
  for (const auto& f : s.ante) all = all && member_holds(m, f);
  if (!all) return true;
  for (const auto& f : s.cons)
    if (member_holds(m, f)) return true;
  return false;
}

// Validity over every model with carrier <= max_n.
inline bool valid_up_to(const Sequent& s, int max_n) {
  bool ok = true;
  for_each_model(signature_of(s), max_n, [&](const HybridDataModel& m) {
    ok = valid_in(m, s);
    return ok;
  });
  return ok;
}

}  // namespace oracle
