#pragma once

namespace membranes::cli {

/// Process exit statuses of the runner.
enum ExitStatus : int {
    kOk = 0,
    kFailure = 1,
    kParseError = 2,
    kInfeasible = 3,
    kNotConverged = 4,
};

/// Entry point of the `membranes` executable:
///
///   membranes <solve|iterate|demo|verify|refine> [--config PATH] [--out DIR]
///             [--n N] [--tol TOL]
///
/// `verify` returns the number of failed audits instead of the table above.
/// Logging goes to stderr at the level named by MEMBRANE_LOG (quiet, info, debug).
int run(int argc, const char* const* argv);

}  // namespace membranes::cli
