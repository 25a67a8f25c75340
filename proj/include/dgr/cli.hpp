#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dgr {

/// Entry point of the `dgr` command. `args` excludes the program name.
/// Returns 0 on success, 1 on runtime failure and 2 on usage errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dgr
