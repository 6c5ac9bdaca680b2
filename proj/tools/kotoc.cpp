#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kotoc/cli/config.hpp"
#include "kotoc/cli/runner.hpp"
#include "kotoc/error.hpp"
#include "kotoc/parallel.hpp"

namespace {

kotoc::cli::ExperimentConfig load(const std::string& path, const std::vector<std::string>& overrides,
                                  const std::string& output) {
    auto cfg = kotoc::cli::load_config(path);
    for (const auto& o : overrides) kotoc::cli::apply_override(cfg, o);
    if (!output.empty()) kotoc::cli::apply_override(cfg, "output=" + output);
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Kicked Ising OTOC experiments"};
    app.set_version_flag("--version", kotoc::cli::version());
    app.require_subcommand(1);

    std::string path;
    std::vector<std::string> overrides;
    std::string output;
    int threads = 0;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("config", path, "Config file (key = value text, or a summary.json)")
            ->required()
            ->check(CLI::ExistingFile);
        sub->add_option("-s,--set", overrides, "Override a field, e.g. --set n_max=40");
        sub->add_option("-o,--output", output, "Output directory");
        sub->add_option("-j,--threads", threads, "Worker threads (default: KOTOC_THREADS or all cores)");
    };
    auto* run = app.add_subcommand("run", "Run one experiment");
    auto* sweep = app.add_subcommand("sweep", "Run every point of the config's [grid]");
    auto* check = app.add_subcommand("validate", "Parse and check a config without running it");
    add_common(run);
    add_common(sweep);
    add_common(check);

    CLI11_PARSE(app, argc, argv);

    try {
        const auto cfg = load(path, overrides, output);
        const int workers = threads > 0 ? threads : kotoc::worker_count();
        if (check->parsed()) {
            kotoc::cli::validate_config(cfg);
            for (const auto& point : kotoc::cli::expand_grid(cfg)) kotoc::cli::validate_config(point);
            std::cout << "ok: " << kotoc::cli::to_string(cfg.experiment);
            if (!cfg.grid.empty()) std::cout << " (" << kotoc::cli::expand_grid(cfg).size() << " grid points)";
            std::cout << "\n";
            return 0;
        }
        if (run->parsed()) {
            const auto outcome = kotoc::cli::run_experiment(cfg, workers);
            std::cout << "wrote " << outcome.directory.string() << "\n";
            return 0;
        }
        const auto outcome = kotoc::cli::run_sweep(cfg, workers);
        if (outcome.points == 0) {
            std::cout << "empty grid: nothing to run\n";
            return 0;
        }
        std::cout << "ran " << outcome.points << " points, " << outcome.failures << " failed; index "
                  << outcome.index.string() << "\n";
        return 0;
    } catch (const kotoc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
