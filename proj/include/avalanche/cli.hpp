#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace avalanche {

/// Entry point behind the `avalanche` tool. `args` excludes the program name.
/// Returns 0 on success, 2 for argument errors (usage goes to `err`), 3 when
/// a resource guard trips or an output file cannot be written.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace avalanche
