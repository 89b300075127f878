// The fixture corpus: derived-rule expansions, inversions and translated axiom instances.
#pragma once

#include <string>
#include <vector>

#include "hxd/kernel.hpp"

namespace hxd::tools {

struct Fixture {
  std::string name;  // relative path without extension, e.g. "derived/and_r"
  DerivP derivation;
  bool closed;       // expected to be proved (no Open leaves)
};

// Builds the corpus in a fixed order; the same call always yields the same trees.
std::vector<Fixture> fixture_corpus();

// Writes <dir>/<name>.proof for every fixture and returns the number written.
int write_fixtures(const std::string& dir);

// Ten-step deduction using MP, Nec, Name and Paste over axiom instances.
const char* mixed_deduction();

}  // namespace hxd::tools
