// Sequents, the rules of G and the derivation checker.
#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hxd/syntax.hpp"

namespace hxd {

struct LabeledExpr {
  enum class Kind { Sat, DataCmp } kind = Kind::Sat;
  Ident i, j;          // Sat: label i.  DataCmp: <i: ▲ j:>
  Ident sort;          // DataCmp
  CmpPolarity pol = CmpPolarity::Eq;
  NodeP body;          // Sat
  std::string text;    // canonical printed form, also the ordering key

  bool is_sat() const { return kind == Kind::Sat; }
  bool is_data() const { return kind == Kind::DataCmp; }
  NodeP as_node() const;  // @_i body, or <i: ▲ j:>
  bool operator==(const LabeledExpr& o) const { return text == o.text; }
  auto operator<=>(const LabeledExpr& o) const { return text <=> o.text; }
};

LabeledExpr sat(Ident i, NodeP body);
LabeledExpr data(CmpPolarity pol, Ident sort, Ident i, Ident j);
inline LabeledExpr data_eq(Ident sort, Ident i, Ident j) {
  return data(CmpPolarity::Eq, std::move(sort), std::move(i), std::move(j));
}

std::size_t size(const LabeledExpr& f);
void collect(const LabeledExpr& f, Signature& sig);
LabeledExpr rename(const LabeledExpr& f, const Ident& from, const Ident& to);

// Sorted, duplicate-free list.
class FormulaSet {
 public:
  FormulaSet() = default;
  FormulaSet(std::initializer_list<LabeledExpr> xs);
  explicit FormulaSet(std::vector<LabeledExpr> xs);

  bool contains(const LabeledExpr& f) const;
  void insert(const LabeledExpr& f);
  void erase(const LabeledExpr& f);
  FormulaSet with(const LabeledExpr& f) const;
  FormulaSet without(const LabeledExpr& f) const;
  bool subset_of(const FormulaSet& o) const;
  FormulaSet unite(const FormulaSet& o) const;
  FormulaSet minus(const FormulaSet& o) const;

  std::size_t size() const { return xs_.size(); }
  bool empty() const { return xs_.empty(); }
  auto begin() const { return xs_.begin(); }
  auto end() const { return xs_.end(); }
  const std::vector<LabeledExpr>& items() const { return xs_; }
  bool operator==(const FormulaSet& o) const = default;

 private:
  std::vector<LabeledExpr> xs_;
};

struct Sequent {
  FormulaSet ante, cons;
  bool operator==(const Sequent&) const = default;
  bool subset_of(const Sequent& o) const {
    return ante.subset_of(o.ante) && cons.subset_of(o.cons);
  }
};

Signature signature_of(const Sequent& s);
Sequent rename(const Sequent& s, const Ident& from, const Ident& to);
bool occurs(const Ident& nominal, const Sequent& s);

std::string print_labeled(const LabeledExpr& f);
std::string print_sequent(const Sequent& s);
LabeledExpr parse_labeled(std::string_view text, ParseOptions opt = {true});
Sequent parse_sequent(std::string_view text, ParseOptions opt = {true});

enum class RuleId {
  Ax, Bot, ImpL, ImpR, AtT, At5, NomFresh, S1, S2, S3, AtL, AtR, DiaL, DiaR,
  CmpL, CmpR, EqT, Eq5, NEqL, NEqR, Cut, WL, WR,
  Open  // unproved leaf standing for a premiss of a derived rule
};
constexpr int kRuleCount = int(RuleId::Open) + 1;

const char* rule_name(RuleId r);
std::optional<RuleId> rule_from_name(std::string_view name);

struct RuleParams {
  std::vector<LabeledExpr> principal;
  std::vector<Ident> fresh;
  std::optional<LabeledExpr> cut;
  std::vector<Ident> witness;  // DiaR: [j]; CmpR: [j, k]
  PathP path;                  // derived path rules only
};

struct Derivation;
using DerivP = std::shared_ptr<const Derivation>;

struct Derivation {
  Sequent conclusion;
  RuleId rule;
  RuleParams params;
  std::vector<DerivP> children;
};

DerivP make_deriv(RuleId rule, Sequent conclusion, RuleParams params = {},
                  std::vector<DerivP> children = {});

struct KernelError : std::runtime_error {
  enum class Code { PrincipalMissing, SideConditionViolated, ParamShape, Mismatch };
  Code code;
  KernelError(Code c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

int premiss_count(RuleId r);
std::vector<Sequent> apply_rule_backward(RuleId rule, const Sequent& conclusion,
                                         const RuleParams& params);

std::optional<RuleId> provable_leaf_forms(const Sequent& s);
bool is_atomic_axiom_form(const LabeledExpr& f);

struct CheckReport {
  bool well_formed = true;
  bool proved = true;
  int cut_count = 0;
  bool uses_weakening = false;
  int open_leaves = 0;
  int nodes = 0;
  std::vector<int> error_path;
  std::string error;
};

CheckReport check_derivation(const DerivP& d);
std::string path_string(const std::vector<int>& path);

int derivation_height(const DerivP& d);
int count_rule(const DerivP& d, RuleId r);

}  // namespace hxd
