// The axiom system H: deduction checking and translation of H deductions into G derivations.
#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hxd/kernel.hpp"

namespace hxd {

enum class SchemaId {
  CPL, AtDef, DiaDef, K, AtK, AtSelfDual, AtIntro, AtRefl, CompAssoc, CompNeutral, CompDist,
  Equal, CmpComm, EpsTrans, Distinct, AtData, Subpath, AtCmpDist, CmpTest, Agree, Back,
  CmpCompDist
};
constexpr int kSchemaCount = int(SchemaId::CmpCompDist) + 1;

const char* schema_name(SchemaId s);
std::optional<SchemaId> schema_from_name(std::string_view name);

// Value of a meta-variable: a node expression, a path, or an identifier (nominal, sort,
// modality, or the comparison polarity "=" / "!=").
using MetaValue = std::variant<NodeP, PathP, Ident>;
using Instantiation = std::map<std::string, MetaValue>;

// Meta-variables per schema (c is a comparison sort, op is "=" or "!=" and defaults to "="):
//   CPL phi                 AtDef i phi c           DiaDef alpha phi c      K alpha phi psi
//   AtK i phi psi           AtSelfDual i phi        AtIntro i phi           AtRefl i
//   CompAssoc alpha beta gamma eta c op             CompNeutral [alpha] [beta] gamma c op
//   CompDist alpha beta phi Equal c                 CmpComm alpha beta c op
//   EpsTrans alpha beta c   Distinct c              AtData i j c
//   Subpath alpha beta gamma c op                   AtCmpDist i alpha beta c op
//   CmpTest phi alpha beta c op                     Agree i j alpha beta c op
//   Back alpha i beta gamma c op                    CmpCompDist alpha beta gamma c op
struct HilbertStep {
  enum class Kind { Axiom, MP, Nec, Name, Paste } kind = Kind::Axiom;
  SchemaId schema = SchemaId::CPL;  // Axiom
  Instantiation inst;               // Axiom
  int from = 0;                     // MP: minor premiss; Nec, Name, Paste: premiss
  int impl = 0;                     // MP: major premiss
  PathP path;                       // Nec
  Ident i, j;                       // Name: i.  Paste: i, j
};
using HilbertProof = std::vector<HilbertStep>;  // step indices are 0-based

struct HilbertError : std::runtime_error {
  enum class Code { Syntax, SchemaMismatch, SideCondition, BadIndex, NotChecked, TargetNotFresh };
  Code code;
  int step;  // 0-based, -1 when not tied to a step
  HilbertError(Code c, int s, const std::string& msg)
      : std::runtime_error(msg), code(c), step(s) {}
};

struct HilbertReport {
  bool ok = true;
  std::vector<NodeP> formulas;  // proved formula per step, null where the step failed
  struct Issue {
    int step;
    HilbertError::Code code;
    std::string message;
  };
  std::vector<Issue> issues;
};

// The formula an axiom instance denotes; throws HilbertError(SchemaMismatch) when the
// instantiation lacks or mistypes a meta-variable, or a CPL instance is not a tautology.
NodeP schema_instance(SchemaId s, const Instantiation& inst);

bool is_cpl_tautology(const NodeP& e);

// Instantiation with phi = p, psi = q, every path the single step a, i = J, j = K, sort c
// (CPL uses p -> p; CompNeutral keeps both alpha and beta).
Instantiation standard_instantiation(SchemaId s);

HilbertReport check_hilbert(const HilbertProof& proof);

// A G derivation of |- @target phi for the last formula phi of the proof.
DerivP translate(const HilbertProof& proof, const Ident& target);

// Text format, one step per line and numbered from 1:
//   1. AXIOM Equal [c=c]     2. MP 1 3     3. NAME 2 I     4. PASTE 3 I J     5. NEC 4 <a>
// Blank lines and lines starting with '#' are ignored.
HilbertProof parse_hilbert(std::string_view text);
std::string print_hilbert(const HilbertProof& proof);

}  // namespace hxd
