#ifndef SSFLOW_CLI_HPP
#define SSFLOW_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace ssflow
{

enum ExitCode : int {
    exit_ok = 0,
    exit_usage = 1,
    exit_verification = 2,
};

// Runs one subcommand. `args` excludes the program name. Reports go to `out`, diagnostics and
// error JSON to `err`.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace ssflow

#endif
