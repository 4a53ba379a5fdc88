#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "obl/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"obstacle_lab: singular obstacle-problem laboratory"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    double tolerance = -1.0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "path to a JSON experiment config")->required();
        sub->add_option("--out", out_dir, "output directory (overrides config)");
        sub->add_option("--tolerance", tolerance, "exponent tolerance (overrides config)");
    };

    CLI::App* solve = app.add_subcommand("solve", "minimize the energy and write the solution");
    CLI::App* exponents =
        app.add_subcommand("exponents", "solve, then fit the growth exponent at the free boundary");
    CLI::App* sweep = app.add_subcommand("sweep", "run every cell of the parameter grid");
    CLI::App* check =
        app.add_subcommand("check-energy", "verify structural bounds and convexity of the density");
    for (CLI::App* sub : {solve, exponents, sweep, check}) add_common(sub);

    CLI11_PARSE(app, argc, argv);

    obl::ExperimentConfig cfg;
    try {
        cfg = obl::ExperimentConfig::load(config_path);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    if (tolerance > 0.0) cfg.analysis.tolerance = tolerance;

    try {
        if (solve->parsed()) return obl::cmd_solve(cfg, std::cout);
        if (exponents->parsed()) return obl::cmd_exponents(cfg, std::cout);
        if (sweep->parsed()) return obl::cmd_sweep(cfg, std::cout);
        if (check->parsed()) return obl::cmd_check_energy(cfg, std::cout);
    } catch (const obl::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
