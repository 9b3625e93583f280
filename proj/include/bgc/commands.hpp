#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "bgc/config.hpp"
#include "bgc/grid.hpp"

namespace bgc {

enum ExitStatus : int { kExitOk = 0, kExitInvalid = 1, kExitOracleFailure = 2 };

inline const std::vector<std::string>& command_names()
{
    static const std::vector<std::string> names = {"evolve",  "moments", "purity",
                                                   "entropy", "compare", "oracle-check"};
    return names;
}

struct CommandOptions {
    std::string out_dir = ".";
    /// evolve only: propagate the sampled partial transform in evolve.general_input
    bool general = false;
};

/// Runs one command and writes its files into out_dir. Errors propagate as
/// exceptions; oracle failures are reported through the return value.
int run_command(const std::string& cmd, const RunConfig& cfg, const CommandOptions& opt,
                std::ostream& log);

/// Same, but catches every error, writes a JSON error report to err and
/// maps it to an exit status.
int run_command_checked(const std::string& cmd, const RunConfig& cfg, const CommandOptions& opt,
                        std::ostream& log, std::ostream& err);

/// JSON error report {"error": kind, "message": text}.
std::string error_report(const std::string& kind, const std::string& message);

/// Exact W(t,p,q) of a state at one point by adaptive quadrature over eta.
cplx wigner_point(const ChannelSpec& spec, const StateSum& state, double t, const Vec2& x);

} // namespace bgc
