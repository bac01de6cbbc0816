// navier_lab: command-line front end for the split fourth-order solvers.
//
//   navier_lab <command> [--config FILE] [--<key> VALUE ...]
//
// Commands: solve factor navier equiv homogenize optimize nosol.
// Every config key is also accepted as a flag; flags override the file.

#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "navier/cli.hpp"
#include "navier/io.hpp"

namespace {

struct Sub {
    CLI::App* app;
    navier::cli::Command command;
    std::string config;
    std::map<std::string, std::string> flags;
};

}  // namespace

int main(int argc, char** argv) {
    using navier::cli::Command;
    CLI::App app{"Split fourth-order (Navier) plate problems, relaxed Dirichlet problems and relaxed shape optimization"};
    app.require_subcommand(1);

    const std::pair<Command, const char*> commands[] = {
        {Command::Solve, "relaxed second-order solve A u + mu u = f"},
        {Command::Factor, "split a quartic symbol into two quadratic factors"},
        {Command::Navier, "fourth-order solve B A u = f with u = A u = 0 on the boundary"},
        {Command::Equiv, "check the weak (ii) formulation against the split solution"},
        {Command::Homogenize, "perforated-domain sequence and fitted relaxed weight"},
        {Command::Optimize, "projected-gradient relaxed shape optimization"},
        {Command::Nosol, "non-attainment demonstration: classical probes vs relaxed optimum"},
    };

    std::vector<Sub> subs;
    subs.reserve(std::size(commands));
    for (const auto& [cmd, help] : commands) {
        subs.push_back({nullptr, cmd, {}, {}});
        Sub& s = subs.back();
        s.app = app.add_subcommand(std::string(navier::cli::command_name(cmd)), help);
        s.app->add_option("--config,-c", s.config, "key=value config file");
        for (const auto& key : navier::cli::known_keys()) {
            s.app->add_option("--" + key, s.flags[key], "overrides '" + key + "' from the config file");
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    for (Sub& s : subs) {
        if (!s.app->parsed()) continue;
        navier::cli::Overrides overrides;
        for (const auto& [key, value] : s.flags) {
            if (s.app->count("--" + key) > 0) overrides.emplace_back(key, value);
        }
        try {
            const std::string text = s.config.empty() ? std::string() : navier::read_file(s.config);
            const auto cfg = navier::cli::parse_config(text, s.command, overrides);
            return navier::cli::run(cfg, std::cout, std::cerr);
        } catch (const navier::cli::ConfigError& e) {
            for (const auto& m : e.messages()) std::cerr << "config error: " << m << "\n";
            return 2;
        } catch (const navier::Error& e) {
            std::cerr << "config error: " << e.what() << "\n";
            return 2;
        }
    }
    return 2;
}
