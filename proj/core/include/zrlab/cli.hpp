#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace zrlab {

/// Command-line entry point:
///
///   zrlab <simulate|conserve|inflate|c2probe|decohere|growth>
///         [--config FILE] [--set section.key=value]... [--out DIR] [--quiet]
///
/// FILE is a config file or a run manifest written by an earlier run.
/// Returns 0 on pass, 2 on an inconclusive verdict, 1 on failure or error.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace zrlab
