// Command-line front end: thermistor solve|verify-tube|identities|sweep

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "thermistor/cli.hpp"

namespace {

void add_common(CLI::App* cmd, thermistor::cli::Options& opt) {
    cmd->add_option("--config", opt.config, "Run configuration file");
    cmd->add_option("--out", opt.out_dir, "Output directory")->capture_default_str();
    cmd->add_option("--grid-n", opt.grid_n, "Override the number of grid nodes")->check(CLI::PositiveNumber);
    cmd->add_option("--alpha", opt.alphas, "Order override (identities: comma separated list)")->delimiter(',');
}

}  // namespace

int main(int argc, char** argv) {
    namespace cli = thermistor::cli;

    CLI::App app{"Nonlocal conformable thermistor solver"};
    app.require_subcommand(1);
    cli::Options opt;

    auto* solve = app.add_subcommand("solve", "Verify the tube, solve by Picard iteration, write solution.csv");
    auto* verify = app.add_subcommand("verify-tube", "Check the tube-solution conditions");
    auto* identities = app.add_subcommand("identities", "Refinement study of the conformable identities");
    auto* sweep = app.add_subcommand("sweep", "Solve over the [sweep] lambda/alpha lattice, write sweep.csv");
    for (auto* cmd : {solve, verify, identities, sweep}) add_common(cmd, opt);
    identities->add_option("--grid-sizes", opt.grid_sizes, "Comma separated node counts")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return cli::kError;
    }

    if (solve->parsed()) return cli::cmd_solve(opt, std::cout, std::cerr);
    if (verify->parsed()) return cli::cmd_verify_tube(opt, std::cout, std::cerr);
    if (identities->parsed()) return cli::cmd_identities(opt, std::cout, std::cerr);
    return cli::cmd_sweep(opt, std::cout, std::cerr);
}
