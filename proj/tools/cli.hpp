#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hypecurve::cli {

/// Process exit codes; stable across releases.
enum ExitCode : int {
    exit_ok = 0,
    exit_input_error = 2,  ///< unreadable/invalid input files, unwritable outputs
    exit_fit_failure = 3,  ///< DegenerateFit or UnconvergedFit
    exit_usage = 4,        ///< flag parsing or validation
};

/// Runs one CLI invocation; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hypecurve::cli
