#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace wavemap::cli {

/// Parses the arguments (without the program name), resolves the configuration
/// (flags > --config file > defaults) and runs the command.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wavemap::cli
