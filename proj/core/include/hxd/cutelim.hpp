// Cut elimination for G by the (size, cut height) induction.
#pragma once

#include <compare>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hxd/kernel.hpp"

namespace hxd {

struct CutComplexity {
  int k = 0;  // size of the cut formula
  int h = 0;  // sum of the premiss heights
  auto operator<=>(const CutComplexity&) const = default;
};

struct CutElimError : std::runtime_error {
  enum class Code { NotACut, NotTopmost, UnhandledCase, StepBudget, OpenLeaf };
  Code code;
  CutElimError(Code c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

CutComplexity cut_complexity(const DerivP& d, const std::vector<int>& cut_path);

// One reduction of a cut as recorded in the trace. `after` is the largest complexity among the
// cuts the reduction introduced, measured when they were built; absent when none remain.
struct CutStep {
  std::vector<int> path;
  std::string case_name;
  CutComplexity before;
  std::optional<CutComplexity> after;
  bool decreased() const { return !after || *after < before; }
};

struct ReduceResult {
  DerivP derivation;
  CutStep step;
};

// Rewrites the topmost cut at cut_path; the end-sequent is unchanged.
ReduceResult reduce_cut_once(const DerivP& d, const std::vector<int>& cut_path);

// Topmost cut of minimal cut height, leftmost first; absent for cut-free derivations.
std::optional<std::vector<int>> select_cut(const DerivP& d);

struct EliminationOptions {
  long max_steps = 200000;
};

struct EliminationResult {
  DerivP derivation;
  std::vector<CutStep> trace;
};

EliminationResult eliminate_cuts_traced(const DerivP& d, const EliminationOptions& opt = {});
DerivP eliminate_cuts(const DerivP& d);

std::string format_step(const CutStep& s);

}  // namespace hxd
