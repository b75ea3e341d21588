#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fortsim_cli/commands.hpp"
#include "fortsim_cli/config.hpp"

using namespace fortsim::cli;

namespace {

void print_keys(std::ostream& out) {
    const RunConfig defaults;
    for (const auto& k : config_keys()) {
        out << k.name << " = " << defaults.get(k.name) << "    # " << k.description << '\n';
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulate and fit Raman Rabi, crosstalk and Ramsey experiments on a "
                 "two-site optical trap array."};
    app.set_version_flag("--version", "fortsim 0.3.0");

    std::string command;
    std::string config_path;
    std::string seed;
    std::string noise;
    std::string out_dir = ".";
    std::string replay;
    std::vector<std::string> assignments;
    bool list_keys = false;

    app.add_option("command", command, "Experiment or report to run")
        ->check(CLI::IsMember(command_names()));
    app.add_option("--config", config_path, "Flat key = value config file");
    app.add_option("--seed", seed, "Master seed (u64), overrides the config");
    app.add_option("--noise", noise, "Shot noise on|off, overrides the config")
        ->check(CLI::IsMember({"on", "off"}));
    app.add_option("--out", out_dir, "Output directory");
    app.add_option("--set", assignments, "key=value override, repeatable")->take_all();
    app.add_option("--replay", replay,
                   "Rerun the command and config echoed in a dataset CSV header");
    app.add_flag("--list-keys", list_keys, "Print every config key with its default");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    if (list_keys) {
        print_keys(std::cout);
        return kExitOk;
    }

    RunConfig cfg;
    try {
        if (!replay.empty()) {
            ReplaySource src = read_replay_header(replay);
            if (command.empty()) command = src.command;
            cfg = std::move(src.config);
        }
        if (!config_path.empty()) cfg.apply(read_config_file(config_path));
        for (const auto& a : assignments) cfg.apply_assignment(a);
        if (!seed.empty()) cfg.set("seed", seed);
        if (!noise.empty()) cfg.set("noise", noise);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    if (command.empty()) {
        std::cerr << "error: no command given (see --help)\n";
        return kExitConfig;
    }
    return run_command(command, cfg, out_dir, std::cout, std::cerr);
}
