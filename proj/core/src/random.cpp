#include "hxd/random.hpp"

namespace hxd {

NodeP ExprGen::node(int max_size) {
  if (max_size <= 1 || uniform(0, 4) == 0) {
    switch (uniform(0, 2)) {
      case 0: return prop(pick(syms_.props));
      case 1: return nom(pick(syms_.noms));
      default: return bot();
    }
  }
  int k = uniform(0, 3);
  if (max_size < 3 && (k == 0 || k == 3)) k = 1 + uniform(0, 1);
  switch (k) {
    case 0: {
      int left = uniform(1, max_size - 2);
      return imp(node(left), node(max_size - 1 - left));
    }
    case 1: return at(pick(syms_.noms), node(max_size - 1));
    case 2: return dia(pick(syms_.mods), node(max_size - 1));
    default: {
      int left = uniform(1, max_size - 2);
      CmpPolarity pol = coin() ? CmpPolarity::Eq : CmpPolarity::Neq;
      return cmp(pol, pick(syms_.cmps), path(left), path(max_size - 1 - left));
    }
  }
}

PathP ExprGen::path(int max_size) {
  if (max_size <= 1 || uniform(0, 2) == 0)
    return coin() ? step(pick(syms_.mods)) : go(pick(syms_.noms));
  if (coin()) return test(node(max_size - 1));
  int left = uniform(1, max_size - 1);
  return comp(path(left), path(max_size - left));
}

LabeledExpr ExprGen::labeled(int max_size) {
  if (max_size >= 3 && uniform(0, 4) == 0)
    return data(coin() ? CmpPolarity::Eq : CmpPolarity::Neq, pick(syms_.cmps), pick(syms_.noms),
                pick(syms_.noms));
  return sat(pick(syms_.noms), node(std::max(1, max_size - 1)));
}

Sequent ExprGen::sequent(int max_size) {
  std::vector<LabeledExpr> a, c;
  int budget = max_size;
  int members = uniform(1, 3);
  for (int k = 0; k < members && budget >= 2; ++k) {
    int sz = k + 1 == members ? budget : uniform(2, std::max(2, budget - 2 * (members - k - 1)));
    sz = std::min(sz, budget);
    LabeledExpr f = labeled(sz);
    budget -= int(size(f));
    (coin() ? a : c).push_back(f);
  }
  if (c.empty() && a.empty()) c.push_back(labeled(2));
  return {FormulaSet(std::move(a)), FormulaSet(std::move(c))};
}

}  // namespace hxd
