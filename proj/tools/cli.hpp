#ifndef SPRONY_TOOLS_CLI_HPP
#define SPRONY_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "sprony/numeric.hpp"

namespace sprony::cli
{

enum ExitCode : int
{
    Success              = 0,
    ValidationFailure    = 2,
    MathematicalFailure  = 3,
};

/// Runs one subcommand. `args` excludes the program name. Results go to
/// files (and a short summary to `out`); failures become a one-line JSON
/// object on `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "a:b:n" -> n log-spaced values from a to b inclusive; otherwise a comma
/// separated list.
std::vector<Real> parse_epsilons(const std::string& text);

} // namespace sprony::cli

#endif // SPRONY_TOOLS_CLI_HPP
