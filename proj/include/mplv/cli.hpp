#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mplv {

// Exit codes: verify/direct 0 holds, 1 violated, 2 undecided; 3 on any error.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int cli_main(int argc, char** argv);

}  // namespace mplv
