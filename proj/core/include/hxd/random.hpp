// Seeded random generation of expressions and sequents for property tests.
#pragma once

#include <random>
#include <vector>

#include "hxd/kernel.hpp"

namespace hxd {

struct GenSymbols {
  std::vector<Ident> props{"p", "q"};
  std::vector<Ident> noms{"I", "J", "K"};
  std::vector<Ident> mods{"a"};
  std::vector<Ident> cmps{"c"};
};

class ExprGen {
 public:
  ExprGen(std::uint64_t seed, GenSymbols syms = {}) : rng_(seed), syms_(std::move(syms)) {}

  // Core trees with size at most max_size (and at least 1).
  NodeP node(int max_size);
  PathP path(int max_size);
  LabeledExpr labeled(int max_size);
  // Sequent whose total member size is at most max_size.
  Sequent sequent(int max_size);

  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin() { return uniform(0, 1) == 1; }
  std::mt19937_64& rng() { return rng_; }
  const GenSymbols& symbols() const { return syms_; }

 private:
  const Ident& pick(const std::vector<Ident>& v) { return v[uniform(0, int(v.size()) - 1)]; }
  std::mt19937_64 rng_;
  GenSymbols syms_;
};

}  // namespace hxd
