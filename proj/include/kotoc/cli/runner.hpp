#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "kotoc/cli/config.hpp"

namespace kotoc::cli {

std::string version();

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

struct RunOutcome {
    std::filesystem::path directory;
    nlohmann::ordered_json summary;
};

/// Runs one experiment and writes its files under cfg.output. Throws on failure.
/// Every file except the runtime field of summary.json is a deterministic function of
/// the config, independent of `workers`.
RunOutcome run_experiment(const ExperimentConfig& cfg, int workers);

struct SweepOutcome {
    std::size_t points = 0;
    std::size_t failures = 0;
    std::filesystem::path index;  ///< empty when the grid has no points
};

/// Runs every grid point into cfg.output/point-NNNN and writes cfg.output/index.csv.
/// Failed points are recorded in the index; the sweep itself continues.
SweepOutcome run_sweep(const ExperimentConfig& cfg, int workers);

}  // namespace kotoc::cli
