#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kotoc/otoc.hpp"

namespace kotoc {

enum class FitKind { PowerLaw, ExpSaturation };

std::string to_string(FitKind kind);

/// Inclusive range of kick indices.
struct FitWindow {
    int lo;
    int hi;
};

/// Thresholds that select default fit windows on C(n)/C(inf).
struct FitConfig {
    /// Power law runs over [n0, n*]: n0 the first kick n >= 1 with C/C_inf above
    /// numerical_zero, n* the first kick with C/C_inf >= prescrambling_threshold.
    double prescrambling_threshold = 0.1;
    double numerical_zero = 1e-12;
    /// Saturation fits start at the first kick with C/C_inf >= this value ...
    double saturation_entry = 0.2;
    /// ... and stop before 1 - C/C_inf falls to max(noise_multiplier * stderr, noise_floor).
    double noise_floor = 1e-3;
    double noise_multiplier = 3.0;
    /// A saturation window that ends above 1 + overshoot_tolerance is not a saturation.
    double overshoot_tolerance = 0.1;
    /// Kick at which C/C_inf first reaches this value is reported as the scrambling time.
    double scrambling_threshold = 0.1;
};

struct FitResult {
    FitKind kind;
    double exponent_or_rate;  ///< b for PowerLaw, mu for ExpSaturation
    double prefactor;
    FitWindow window;
    double r_squared;
    std::vector<double> residuals;  ///< in the log space of the fit
};

/// Least squares on (log n, log C/C_inf): C/C_inf ~ prefactor * n^b.
FitResult fit_power_law(const OtocSeries& series, std::optional<FitWindow> window = std::nullopt,
                        const FitConfig& config = {});

/// Least squares on (n, log(1 - C/C_inf)): 1 - C/C_inf ~ prefactor * exp(-mu n).
FitResult fit_exp_saturation(const OtocSeries& series,
                             std::optional<FitWindow> window = std::nullopt,
                             const FitConfig& config = {});

/// First kick with C/C_inf >= threshold, if any.
std::optional<int> first_crossing(const OtocSeries& series, double threshold);

/// Ordinary least-squares line y = intercept + slope x.
struct LineFit {
    double slope;
    double intercept;
    double r_squared;
    std::vector<double> residuals;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace kotoc
