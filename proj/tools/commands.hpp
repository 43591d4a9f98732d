#pragma once

#include "nsfd_epi/config.hpp"

#include <exception>
#include <ostream>
#include <string>

namespace nsfd_epi::cli {

enum ExitCode : int {
    kSuccess = 0,
    kVerificationFailed = 1,
    kConfigError = 2,
    kRuntimeError = 3,
};

// Each command writes its report to `out` (or to config.out when set) and
// throws ConfigError / domain errors; `run_guarded` maps those to exit codes.
void cmd_equilibria(const RunConfig& config, std::ostream& out);
void cmd_stability(const RunConfig& config, std::ostream& out);
void cmd_simulate(const RunConfig& config, std::ostream& out);
void cmd_portrait(const RunConfig& config, std::ostream& out);
void cmd_sweep(const RunConfig& config, std::ostream& out);

struct VerifyOptions {
    bool list_only = false;
    double tol_eq = 1e-3;
    std::string fixture_dir; ///< empty: built-in criteria only
};

/// Returns kSuccess iff every criterion and fixture passes.
int cmd_verify(const VerifyOptions& options, std::ostream& out);

template <typename Fn>
int run_guarded(Fn&& fn, std::ostream& err)
{
    try {
        return fn();
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kRuntimeError;
    }
}

} // namespace nsfd_epi::cli
