// Proof files: a JSON tree of rule applications. Nodes named "D:<rule>" are derived rules; they
// are expanded into core rules on load, with their children grafted onto the premiss leaves.
#pragma once

#include <stdexcept>
#include <string>

#include "hxd/kernel.hpp"

namespace hxd {

struct ProofFormatError : std::runtime_error {
  std::string where;  // JSON pointer of the offending node, or "line:col" for syntax errors
  ProofFormatError(std::string where, const std::string& msg)
      : std::runtime_error(where + ": " + msg), where(std::move(where)) {}
};

DerivP load_proof(const std::string& json_text);
DerivP load_proof_file(const std::string& path);

// Stable, pretty-printed JSON of a core derivation.
std::string save_proof(const DerivP& d);
void save_proof_file(const DerivP& d, const std::string& path);

}  // namespace hxd
