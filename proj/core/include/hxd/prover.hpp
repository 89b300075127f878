// Bounded backward proof search in G with a finite-model refuter as fallback.
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hxd/kernel.hpp"
#include "hxd/semantics.hpp"

namespace hxd {

struct Budget {
  int max_fresh = 4;    // nominals introduced by DiaL/CmpL along one branch
  int max_depth = 64;   // rule applications along one branch, saturation excluded
  int model_bound = 3;  // carrier size for the countermodel search
  long max_nodes = 200000;  // total search effort per call
};

struct ProveResult {
  enum class Status { Proved, Refuted, Unknown };
  Status status = Status::Unknown;
  DerivP proof;                          // Proved
  std::optional<HybridDataModel> model;  // Refuted
  std::string reason;                    // Unknown: "fresh", "depth" or "model_bound"
};

const char* status_name(ProveResult::Status s);

// Forward closure steps (@T, @5, S1, S2, S3, EqT, Eq5) in the order they apply.
std::vector<std::pair<RuleId, std::vector<LabeledExpr>>> saturation_steps(const Sequent& s);
Sequent saturate(const Sequent& s);

ProveResult prove(const Sequent& s, const Budget& b = {});

}  // namespace hxd
