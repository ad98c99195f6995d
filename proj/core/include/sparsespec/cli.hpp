#pragma once

#include <string>
#include <vector>

namespace sparsespec {

/// Command-line entry point. Subcommands: simulate, sample, reconstruct,
/// bench, version. Returns 0 on success, 1 on usage errors, 2 on data
/// errors. args excludes the program name.
int cli_main(const std::vector<std::string>& args);

} // namespace sparsespec
