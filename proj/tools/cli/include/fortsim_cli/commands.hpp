#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "fortsim_cli/config.hpp"

namespace fortsim::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitRuntime = 1,
    kExitConfig = 2,
    kExitFitNotConverged = 3,
};

// Runs a named command and writes its files into out_dir (created if
// missing). Summary lines go to `out`, diagnostics to `err`. Returns one of
// ExitCode; a fit that fails to converge still writes its dataset.
int run_command(const std::string& command, const RunConfig& cfg,
                const std::filesystem::path& out_dir, std::ostream& out, std::ostream& err);

// Headline numbers with the inputs behind each.
std::string headline_report(const RunConfig& cfg);

// Restores the command and config echoed in a dataset header.
struct ReplaySource {
    std::string command;
    RunConfig config;
};
ReplaySource read_replay_header(const std::filesystem::path& csv);

}  // namespace fortsim::cli
