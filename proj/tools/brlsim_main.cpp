#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "brlsim/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"brlsim: CES Fisher market dynamics under best-response with lookahead"};
    app.require_subcommand(1);

    struct Args {
        std::string config;
        std::string output;
        bool verbose = false;
    };

    const std::pair<const char*, const char*> commands[] = {
        {"equilibrium", "Solve for the market equilibrium and cross-check it"},
        {"simulate", "Run price dynamics and export the trajectory"},
        {"contraction", "Estimate contraction ratios for configured updates"},
        {"generate", "Write a seeded random market file"},
    };

    std::string chosen;
    Args args;
    for (const auto& [name, description] : commands) {
        auto* sub = app.add_subcommand(name, description);
        sub->add_option("config", args.config, "experiment config file (JSON)")
            ->required()
            ->check(CLI::ExistingFile);
        sub->add_option("-o,--output", args.output, "override the primary output path");
        sub->add_flag("-v,--verbose", args.verbose, "chatty progress output");
        sub->callback([&chosen, name = std::string(name)] { chosen = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : brlsim::exit_codes::kConfig;
    }

    return brlsim::dispatch(chosen, args.config, args.output, args.verbose, std::cout,
                            std::cerr);
}
