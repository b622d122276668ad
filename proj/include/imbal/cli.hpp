#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace imbal {

/// Entry point behind the `imbal` executable. args[0] is the program name.
/// Returns 0 on success, 1 on usage errors, 2 on runtime failures.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace imbal
