#ifndef TUMORDDE_COMMANDS_HPP
#define TUMORDDE_COMMANDS_HPP

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tumordde/config.hpp"

namespace tumordde::cli {

struct CommandResult {
    int exit_code = 0;
    std::string text;     // human-readable report
    nlohmann::json json;  // machine-readable form of the same content
    std::vector<std::string> files_written;
};

/// Equilibria, admissibility, stability bound, q2 window, root-scan summary.
CommandResult cmd_analyze(const RunConfig& cfg);

/// Certified Hopf points for the configured kernel case. Exit 3 when no
/// crossing exists (structured output either way).
CommandResult cmd_hopf(const RunConfig& cfg);

/// Center-manifold quantities at a certified Hopf point (computed inline or
/// supplied via omega/tau_crit overrides).
CommandResult cmd_normalform(const RunConfig& cfg);

/// Runs the configured integrator and writes trajectory CSV + SVG plots.
CommandResult cmd_simulate(const RunConfig& cfg);

/// The three reproduction scenarios with the printed-value discrepancy
/// report; always exits 0 (the report is the deliverable).
CommandResult cmd_reproduce_paper(const RunConfig& cfg);

} // namespace tumordde::cli

#endif
