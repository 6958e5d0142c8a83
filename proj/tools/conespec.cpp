#include <CLI11.hpp>

#include <iostream>

#include "conespec/cli.hpp"

using namespace conespec;

int main(int argc, char** argv) {
    CLI::App app{"conespec: cone operator spectral studies"};
    app.require_subcommand(1);
    std::string config;
    RunOptions opt;
    app.add_option("--config", config, "flat key = value config file");
    app.add_option("--out", opt.out_dir, "output directory");
    app.add_flag("--svg", opt.svg, "also write fit plots");
    app.add_option("--seed", opt.seed, "seed for randomized inputs");
    app.add_option("--tolerance-profile", opt.tolerance_profile, "strict or default")
        ->check(CLI::IsMember({"strict", "default"}));
    for (const char* s : {"spectrum", "heat", "resolvent", "zeta", "index", "verify"}) app.add_subcommand(s)->fallthrough();
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : ExitValidation;
    }
    const std::string sub = app.get_subcommands().front()->get_name();
    if (config.empty()) {
        std::cerr << "--config is required\n";
        return ExitValidation;
    }
    try {
        return run(sub, Config::load(config), opt, std::cerr);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return ExitValidation;
    } catch (const PoleError& e) {
        std::cerr << "pole error: " << e.what() << " at " << e.z() << "\n";
        return ExitRuntime;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << " (estimate " << e.estimate() << ")\n";
        return ExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return ExitRuntime;
    }
}
