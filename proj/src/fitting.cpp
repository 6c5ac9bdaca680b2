#include "kotoc/fitting.hpp"

#include <algorithm>
#include <cmath>

#include "kotoc/error.hpp"

namespace kotoc {

std::string to_string(FitKind kind) {
    return kind == FitKind::PowerLaw ? "power-law" : "exp-saturation";
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw FitError("line fit needs matching x, y with >= 2 points");
    const double m = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= m;
    my /= m;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx <= 0.0) throw FitError("degenerate abscissae in line fit");
    LineFit out;
    out.slope = sxy / sxx;
    out.intercept = my - out.slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (out.intercept + out.slope * x[i]);
        out.residuals.push_back(r);
        ss_res += r * r;
    }
    out.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
    return out;
}

std::optional<int> first_crossing(const OtocSeries& series, double threshold) {
    const auto x = series.normalized();
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] >= threshold) return series.n[i];
    }
    return std::nullopt;
}

namespace {

constexpr std::size_t kMinPoints = 4;

std::size_t index_of(const OtocSeries& series, int n) {
    const auto it = std::find(series.n.begin(), series.n.end(), n);
    if (it == series.n.end()) throw FitError("kick " + std::to_string(n) + " not in series");
    return static_cast<std::size_t>(it - series.n.begin());
}

void check_window(const FitWindow& w) {
    if (w.hi < w.lo || static_cast<std::size_t>(w.hi - w.lo + 1) < kMinPoints) {
        throw FitError("fit window [" + std::to_string(w.lo) + ", " + std::to_string(w.hi) +
                       "] has fewer than 4 points");
    }
}

}  // namespace

FitResult fit_power_law(const OtocSeries& series, std::optional<FitWindow> window,
                        const FitConfig& config) {
    if (series.n.empty()) throw FitError("empty series");
    if (!window) {
        const auto x = series.normalized();
        std::size_t lo = 0;
        while (lo < x.size() && (series.n[lo] < 1 || !(x[lo] > config.numerical_zero))) ++lo;
        if (lo == x.size()) throw FitError("series stays at zero; no growth to fit");
        const auto cross = first_crossing(series, config.prescrambling_threshold);
        window = FitWindow{series.n[lo], cross ? std::max(*cross, series.n[lo]) : series.n.back()};
    }
    check_window(*window);
    if (window->lo < 1) throw FitError("power-law window must start at n >= 1");
    const auto x = series.normalized();
    std::vector<double> lx;
    std::vector<double> ly;
    for (int n = window->lo; n <= window->hi; ++n) {
        const double v = x[index_of(series, n)];
        if (!(v > 0.0)) throw FitError("non-positive C/C_inf at n=" + std::to_string(n));
        lx.push_back(std::log(static_cast<double>(n)));
        ly.push_back(std::log(v));
    }
    const LineFit line = fit_line(lx, ly);
    return {FitKind::PowerLaw, line.slope, std::exp(line.intercept), *window, line.r_squared,
            line.residuals};
}

FitResult fit_exp_saturation(const OtocSeries& series, std::optional<FitWindow> window,
                             const FitConfig& config) {
    if (series.n.empty()) throw FitError("empty series");
    const auto x = series.normalized();
    const auto se = series.normalized_std_error();
    if (!window) {
        std::size_t lo = 0;
        while (lo < x.size() && x[lo] < config.saturation_entry) ++lo;
        if (lo == x.size()) throw FitError("series never reaches the saturation entry threshold");
        std::size_t end = lo;
        auto floor_at = [&](std::size_t i) {
            return std::max(config.noise_floor, se.empty() ? 0.0 : config.noise_multiplier * se[i]);
        };
        while (end < x.size() && 1.0 - x[end] > floor_at(end)) ++end;
        if (end == x.size()) throw FitError("series does not reach its saturation value");
        if (x[end] > 1.0 + config.overshoot_tolerance) {
            throw FitError("series overshoots its saturation value instead of saturating");
        }
        if (end == lo) throw FitError("empty saturation window");
        window = FitWindow{series.n[lo], series.n[end - 1]};
    }
    check_window(*window);
    std::vector<double> nx;
    std::vector<double> ly;
    for (int n = window->lo; n <= window->hi; ++n) {
        const double gap = 1.0 - x[index_of(series, n)];
        if (!(gap > 0.0)) throw FitError("C/C_inf >= 1 inside saturation window at n=" + std::to_string(n));
        nx.push_back(static_cast<double>(n));
        ly.push_back(std::log(gap));
    }
    const LineFit line = fit_line(nx, ly);
    return {FitKind::ExpSaturation, -line.slope, std::exp(line.intercept), *window, line.r_squared,
            line.residuals};
}

}  // namespace kotoc
