// dickelab CLI: evolve | sweep | energetics | validate, driven by JSON configs.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dickelab/runner.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string output_path;
    std::string format;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "JSON config file")->required();
    cmd->add_option("--set", args.overrides,
                    "override a config value by dotted path (model.g=0.05); repeatable");
    cmd->add_option("--output", args.output_path, "write the artifact to this file");
    cmd->add_option("--format", args.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
}

int thread_count_from_env() {
    const char* value = std::getenv("DICKELAB_THREADS");
    if (!value) return 1;
    const int n = std::atoi(value);
    return n > 0 ? n : 1;
}

int run_command(dickelab::Command expected, const CommonArgs& args) {
    dickelab::RunConfig config;
    try {
        config = dickelab::load_config(args.config_path, args.overrides);
    } catch (const dickelab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return dickelab::kExitConfigError;
    }
    if (config.command != expected) {
        std::cerr << "config error: command: config declares '"
                  << dickelab::command_name(config.command) << "' but the '"
                  << dickelab::command_name(expected) << "' subcommand was invoked\n";
        return dickelab::kExitConfigError;
    }
    if (!args.output_path.empty()) config.output.path = args.output_path;
    if (args.format == "csv") config.output.format = dickelab::OutputFormat::csv;
    if (args.format == "json") config.output.format = dickelab::OutputFormat::json;
    if (config.sweep) config.sweep->max_threads = thread_count_from_env();
    return dickelab::run_config(config, std::cout, std::cerr);
}

int validate_command(const CommonArgs& args) {
    std::vector<dickelab::Violation> violations;
    try {
        violations = dickelab::validate_config_file(args.config_path, args.overrides);
    } catch (const dickelab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return dickelab::kExitConfigError;
    }
    if (violations.empty()) {
        std::cout << "ok: " << args.config_path << "\n";
        return dickelab::kExitOk;
    }
    for (const auto& v : violations) {
        std::cout << (v.path.empty() ? std::string("<root>") : v.path) << ": " << v.message
                  << "\n";
    }
    return dickelab::kExitConfigError;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dicke-family model laboratory: evolution, scaling sweeps, energy calculators"};
    app.require_subcommand(1);

    CommonArgs evolve_args, sweep_args, energetics_args, validate_args;
    CLI::App* evolve = app.add_subcommand("evolve", "propagate a model and record observables");
    add_common(evolve, evolve_args);
    CLI::App* sweep = app.add_subcommand("sweep", "sweep ensemble size and fit the scaling law");
    add_common(sweep, sweep_args);
    CLI::App* energetics =
        app.add_subcommand("energetics", "evaluate an energy/power-density calculator");
    add_common(energetics, energetics_args);
    CLI::App* validate = app.add_subcommand("validate", "schema-check a config without running");
    add_common(validate, validate_args);

    CLI11_PARSE(app, argc, argv);

    if (evolve->parsed()) return run_command(dickelab::Command::evolve, evolve_args);
    if (sweep->parsed()) return run_command(dickelab::Command::sweep, sweep_args);
    if (energetics->parsed()) return run_command(dickelab::Command::energetics, energetics_args);
    if (validate->parsed()) return validate_command(validate_args);
    return dickelab::kExitConfigError;
}
