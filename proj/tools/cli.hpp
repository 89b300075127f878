// Command-line front end; run() is the whole program so tests can call it in-process.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hxd::tools {

// Exit codes: 0 positive, 1 negative (refuted, check failed), 2 inconclusive, 3 input error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hxd::tools
