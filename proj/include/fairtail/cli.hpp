#ifndef FAIRTAIL_CLI_HPP_
#define FAIRTAIL_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace fairtail::cli {

/// Runs one subcommand (audit | stats | groups | synth) with argv-style
/// arguments, program name excluded. Returns the process exit code:
/// 0 success, 1 usage or validation error, 2 data error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fairtail::cli

#endif  // FAIRTAIL_CLI_HPP_
