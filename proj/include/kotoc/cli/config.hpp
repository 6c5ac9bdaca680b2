#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "kotoc/core.hpp"
#include "kotoc/fitting.hpp"

namespace kotoc::cli {

enum class Experiment { OtocSbo, OtocRbo, Opee, Nnsd, CueCheck, GueCheck };
enum class BackendChoice { Auto, Dense, Stochastic };
enum class SectorChoice { Even, Odd, Both };

std::string to_string(Experiment e);
std::string to_string(BackendChoice b);
std::string to_string(SectorChoice s);

/// A fit request: skipped, default window, or an explicit [lo, hi].
struct FitRequest {
    enum class Mode { Off, Auto, Window } mode = Mode::Auto;
    FitWindow window{0, 0};
    bool operator==(const FitRequest& o) const {
        return mode == o.mode && (mode != Mode::Window || (window.lo == o.window.lo && window.hi == o.window.hi));
    }
};

struct GridAxis {
    std::string key;
    std::vector<std::string> values;  ///< raw value text, parsed per point
    bool operator==(const GridAxis&) const = default;
};

struct ExperimentConfig {
    Experiment experiment = Experiment::OtocSbo;
    SpinChainParams params{};
    BackendChoice backend = BackendChoice::Auto;
    int n_max = 30;
    int n_samples = 10;
    int n_pairs = 50;
    std::uint64_t seed = 1;
    SectorChoice sector = SectorChoice::Both;
    int bins = 25;
    double s_max = 4.0;
    int dim = 8;  ///< matrix dimension for gue-check
    FitRequest power_law{};
    FitRequest saturation{};
    FitConfig fit{};
    std::string output = "out";
    std::vector<GridAxis> grid;
    /// Where each field was set ("file:line"), for error messages. Not part of equality.
    std::map<std::string, std::string> origin;

    /// True when the stochastic OTOC path will be used.
    bool stochastic() const;
};

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);

/// Evaluates arithmetic like "3*pi/18" or "pi/4 - pi/50".
double evaluate_expression(std::string_view text);

/// Parses `key = value` lines, `# comments`, and `[fit]` / `[grid]` sections.
/// `source` prefixes error messages as source:line.
ExperimentConfig parse_config(std::string_view text, const std::string& source = "<config>");

/// Reads a config file; a file whose first non-blank character is '{' is read as a
/// summary.json and its "config" object is used.
ExperimentConfig load_config(const std::filesystem::path& path);

/// Applies one `key=value` assignment (as from a command-line override).
void apply_override(ExperimentConfig& cfg, std::string_view assignment);

/// Semantic checks across fields; throws ConfigError naming the field.
void validate_config(const ExperimentConfig& cfg);

nlohmann::ordered_json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const nlohmann::ordered_json& j, const std::string& source = "<json>");

/// One config per grid point, in row-major order over the axes as declared.
/// An empty grid, or an axis with no values, yields no points.
std::vector<ExperimentConfig> expand_grid(const ExperimentConfig& cfg);

}  // namespace kotoc::cli
