#include "semisep/runner.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Fredholm determinants of semi-separable kernels: batch sweeps"};

    std::string config_path;
    std::string output_override;
    int jobs_override = 0;
    int grid_override = 0;
    double tol_override = 0.0;
    bool oracle = false;

    app.add_option("--config", config_path, "run configuration file")->required();
    app.add_option("--jobs", jobs_override, "worker pool size");
    app.add_option("--grid-n", grid_override, "grid size override");
    app.add_option("--tolerance", tol_override, "route tolerance override");
    app.add_flag("--oracle", oracle, "enable the Nystrom oracle column");
    app.add_option("--output", output_override, "CSV output path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        auto cfg = semisep::cli::RunConfig::parse_file(config_path);
        if (jobs_override > 0) cfg.jobs = jobs_override;
        if (grid_override > 0) cfg.grid_n = grid_override;
        if (tol_override > 0.0) cfg.tolerance_route = tol_override;
        if (oracle) cfg.oracle = true;
        if (!output_override.empty()) cfg.output = output_override;

        const auto outcome = semisep::cli::run(cfg);
        if (cfg.output.empty()) std::cout << outcome.csv;
        return outcome.exit_code;
    } catch (const semisep::cli::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
