#include "kotoc/cli/runner.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "kotoc/ensembles.hpp"
#include "kotoc/error.hpp"
#include "kotoc/floquet.hpp"
#include "kotoc/opee.hpp"
#include "kotoc/otoc.hpp"
#include "kotoc/parallel.hpp"
#include "kotoc/spectral.hpp"

namespace kotoc::cli {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

std::string version() { return "0.1.0"; }

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

namespace {

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
    if (!out) throw Error("write failed for " + path.string());
}

// Non-finite values have no JSON representation; they are written as null.
Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json fit_json(const FitResult& f) {
    Json j;
    j["kind"] = to_string(f.kind);
    j[f.kind == FitKind::PowerLaw ? "b" : "mu"] = number(f.exponent_or_rate);
    j["prefactor"] = number(f.prefactor);
    j["window"] = {f.window.lo, f.window.hi};
    j["r_squared"] = number(f.r_squared);
    Json res = Json::array();
    for (double r : f.residuals) res.push_back(number(r));
    j["residuals"] = res;
    return j;
}

Json run_fit(const FitRequest& request, const std::function<FitResult(std::optional<FitWindow>)>& fit) {
    if (request.mode == FitRequest::Mode::Off) return nullptr;
    try {
        return fit_json(fit(request.mode == FitRequest::Mode::Window ? std::optional(request.window)
                                                                     : std::nullopt));
    } catch (const FitError& e) {
        return Json{{"error", e.what()}};
    }
}

std::string series_csv(const OtocSeries& s) {
    std::string out = "n,c2,c4,c,c_norm,stderr\n";
    const auto norm = s.normalized();
    for (std::size_t i = 0; i < s.n.size(); ++i) {
        out += std::to_string(s.n[i]) + "," + format_double(s.c2[i]) + "," + format_double(s.c4[i]) +
               "," + format_double(s.c[i]) + "," + format_double(norm[i]) + ",";
        if (!s.std_error.empty()) out += format_double(s.std_error[i]);
        out += "\n";
    }
    return out;
}

Json otoc_results(const ExperimentConfig& cfg, const OtocSeries& s) {
    Json r;
    r["backend"] = s.meta.backend;
    r["w_kind"] = s.meta.w_kind;
    r["v_kind"] = s.meta.v_kind;
    r["c_inf"] = number(s.c_inf);
    r["samples"] = s.meta.samples;
    r["max_imag_residual"] = number(s.meta.max_imag_residual);
    r["max_raw_imag"] = number(s.meta.max_raw_imag);
    Json fits;
    fits["power_law"] = run_fit(cfg.power_law, [&](auto w) { return fit_power_law(s, w, cfg.fit); });
    fits["saturation"] = run_fit(cfg.saturation, [&](auto w) { return fit_exp_saturation(s, w, cfg.fit); });
    r["fits"] = fits;
    const auto t = first_crossing(s, cfg.fit.scrambling_threshold);
    r["scrambling_time"] = t ? Json(*t) : Json(nullptr);
    return r;
}

Json run_otoc_sbo(const ExperimentConfig& cfg, const fs::path& dir, int workers) {
    const Propagator prop = build_matrix_free(cfg.params);
    const Observable w = build_block_observable(cfg.params, Side::A);
    const Observable v = build_block_observable(cfg.params, Side::B);
    OtocSeries s = cfg.stochastic()
                       ? otoc_stochastic(prop, w, v, cfg.n_max, cfg.n_samples, cfg.seed, workers)
                       : otoc_dense(prop, w, v, cfg.n_max, ExactMethod::Heisenberg);
    write_file(dir / "series.csv", series_csv(s));
    return otoc_results(cfg, s);
}

Json run_otoc_rbo(const ExperimentConfig& cfg, const fs::path& dir, int workers) {
    const Propagator prop = build_matrix_free(cfg.params);
    RboOptions options;
    options.backend = cfg.stochastic() ? RboBackend::Stochastic : RboBackend::Dense;
    options.states_per_pair = cfg.n_samples;
    options.workers = workers;
    OtocSeries s = averaged_rbo_otoc(prop, cfg.n_max, cfg.n_pairs, cfg.seed, options);
    write_file(dir / "series.csv", series_csv(s));
    Json r = otoc_results(cfg, s);
    r["pairs"] = cfg.n_pairs;
    r["states_per_pair"] = options.backend == RboBackend::Stochastic ? cfg.n_samples : 0;
    return r;
}

Json run_opee(const ExperimentConfig& cfg, const fs::path& dir) {
    const Propagator prop = build_dense(cfg.params);
    const OpeeSeries s = opee_series(prop, cfg.n_max);
    std::string csv = "n,e_l,purity\n";
    double peak = 0.0;
    for (std::size_t i = 0; i < s.n.size(); ++i) {
        csv += std::to_string(s.n[i]) + "," + format_double(s.e_l[i]) + "," + format_double(s.purity[i]) + "\n";
        peak = std::max(peak, s.e_l[i]);
    }
    write_file(dir / "opee.csv", csv);
    Json r;
    r["max_e_l"] = number(peak);
    r["e_l_bound"] = number(1.0 - std::ldexp(1.0, -cfg.params.n_sites));
    r["final_e_l"] = number(s.e_l.back());
    return r;
}

Json run_nnsd(const ExperimentConfig& cfg, const fs::path& dir, int workers) {
    const Propagator prop = build_matrix_free(cfg.params);
    validate(cfg.params, kDenseCap);
    auto [even, odd] = build_sectors(cfg.params.n_sites);
    std::vector<const SymmetrySector*> sectors;
    if (cfg.sector != SectorChoice::Odd) sectors.push_back(&even);
    if (cfg.sector != SectorChoice::Even) sectors.push_back(&odd);
    std::vector<SpacingEnsemble> ensembles(sectors.size());
    // Sector diagonalizations are independent; the block builders run single-threaded inside.
    parallel_for(
        sectors.size(),
        [&](std::size_t k) {
            ensembles[k] = unfold_spacings(sector_quasienergies(prop, *sectors[k]), sectors[k]->dim(),
                                           sectors[k]->parity);
        },
        workers);
    std::string spacings = "sector,s\n";
    std::string hist = "sector,bin_lo,bin_hi,density\n";
    Json per_sector = Json::object();
    for (const auto& e : ensembles) {
        const std::string name = to_string(e.parity);
        for (double s : e.spacings) spacings += name + "," + format_double(s) + "\n";
        const NnsdSummary summary = nnsd_compare(e, cfg.bins, cfg.s_max);
        for (std::size_t b = 0; b < summary.density.size(); ++b) {
            hist += name + "," + format_double(summary.bin_edges[b]) + "," +
                    format_double(summary.bin_edges[b + 1]) + "," + format_double(summary.density[b]) + "\n";
        }
        per_sector[name] = {{"dim", e.phases.size()},
                            {"ks_wigner", number(summary.ks_wigner)},
                            {"ks_poisson", number(summary.ks_poisson)},
                            {"degenerate_fraction", number(summary.degenerate_fraction)},
                            {"verdict", to_string(summary.verdict)}};
    }
    write_file(dir / "spacings.csv", spacings);
    write_file(dir / "nnsd.csv", hist);
    Json r;
    r["sectors"] = per_sector;
    const std::string primary = per_sector.contains("even") ? "even" : "odd";
    r["primary_sector"] = primary;
    r["verdict"] = per_sector[primary]["verdict"];
    return r;
}

Json run_cue_check(const ExperimentConfig& cfg) {
    const Observable w = build_block_observable(cfg.params, Side::A);
    const Observable v = build_block_observable(cfg.params, Side::B);
    const CueSaturation exact = cue_saturation_oracle(w, v);
    const CueMonteCarlo mc = cue_monte_carlo(w, v, cfg.n_samples, cfg.seed);
    auto z = [](double mean, double se, double target) {
        return se > 0.0 ? std::abs(mean - target) / se : (mean == target ? 0.0 : INFINITY);
    };
    const double n = cfg.params.n_sites;
    const double d = std::ldexp(1.0, cfg.params.n_sites);
    Json r;
    r["closed_form"] = {{"c2", exact.c2_bar}, {"c4", exact.c4_bar}, {"c", exact.c_bar}};
    r["monte_carlo"] = {{"unitaries", mc.samples},
                        {"c2", mc.c2_mean}, {"c2_se", mc.c2_se},
                        {"c4", mc.c4_mean}, {"c4_se", mc.c4_se},
                        {"c", mc.c_mean},   {"c_se", mc.c_se}};
    r["z_scores"] = {{"c2", number(z(mc.c2_mean, mc.c2_se, exact.c2_bar))},
                     {"c4", number(z(mc.c4_mean, mc.c4_se, exact.c4_bar))},
                     {"c", number(z(mc.c_mean, mc.c_se, exact.c_bar))}};
    r["four_over_n_squared"] = 4.0 / (n * n);
    r["finite_size_factor"] = d * d / (d * d - 1.0);
    return r;
}

Json run_gue_check(const ExperimentConfig& cfg) {
    const GueMoment m = gue_second_moment(cfg.dim, cfg.n_samples, cfg.seed);
    const double d = cfg.dim;
    const CMatrix target = d * CMatrix::Identity(cfg.dim, cfg.dim);
    double worst_z = 0.0;
    for (Eigen::Index j = 0; j < m.mean_square.cols(); ++j) {
        for (Eigen::Index i = 0; i < m.mean_square.rows(); ++i) {
            const double dev = std::abs(m.mean_square(i, j) - target(i, j));
            const double se = m.std_error(i, j);
            worst_z = std::max(worst_z, se > 0.0 ? dev / se : (dev == 0.0 ? 0.0 : INFINITY));
        }
    }
    Json r;
    r["samples"] = m.samples;
    r["frobenius_deviation"] = number((m.mean_square - target).norm());
    r["max_entry_z"] = number(worst_z);
    return r;
}

}  // namespace

RunOutcome run_experiment(const ExperimentConfig& cfg, int workers) {
    validate_config(cfg);
    if (!cfg.grid.empty()) throw ConfigError("config declares a [grid]; use the sweep command");
    const fs::path dir = cfg.output;
    fs::create_directories(dir);
    const auto start = std::chrono::steady_clock::now();
    Json results;
    switch (cfg.experiment) {
        case Experiment::OtocSbo: results = run_otoc_sbo(cfg, dir, workers); break;
        case Experiment::OtocRbo: results = run_otoc_rbo(cfg, dir, workers); break;
        case Experiment::Opee: results = run_opee(cfg, dir); break;
        case Experiment::Nnsd: results = run_nnsd(cfg, dir, workers); break;
        case Experiment::CueCheck: results = run_cue_check(cfg); break;
        case Experiment::GueCheck: results = run_gue_check(cfg); break;
    }
    const double runtime =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    Json summary;
    summary["version"] = version();
    summary["seed"] = cfg.seed;
    summary["config"] = config_to_json(cfg);
    summary["results"] = results;
    summary["runtime_seconds"] = runtime;
    write_file(dir / "summary.json", summary.dump(2) + "\n");
    return {dir, summary};
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c == '\n' ? ' ' : c;
    }
    return out + "\"";
}

std::string json_cell(const Json& j) {
    if (j.is_null()) return "";
    if (j.is_number_float()) return format_double(j.get<double>());
    return j.dump();
}

}  // namespace

SweepOutcome run_sweep(const ExperimentConfig& cfg, int workers) {
    const std::vector<ExperimentConfig> points = expand_grid(cfg);
    SweepOutcome outcome;
    if (points.empty()) return outcome;

    struct PointResult {
        bool ok = false;
        std::string error;
        Json results;
    };
    std::vector<PointResult> results(points.size());
    const int outer = std::max(1, std::min<int>(workers, static_cast<int>(points.size())));
    const int inner = std::max(1, workers / outer);
    std::vector<ExperimentConfig> runs = points;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "point-%04zu", i);
        runs[i].output = (fs::path(cfg.output) / name).string();
    }
    parallel_for(
        runs.size(),
        [&](std::size_t i) {
            try {
                results[i].results = run_experiment(runs[i], inner).summary["results"];
                results[i].ok = true;
            } catch (const std::exception& e) {
                results[i].error = e.what();
            }
        },
        outer);

    std::string index = "point,status,output";
    for (const auto& axis : cfg.grid) index += "," + axis.key;
    index += ",b,mu,scrambling_time,verdict,error\n";
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const auto& r = results[i];
        index += std::to_string(i) + "," + (r.ok ? "ok" : "failed") + "," +
                 csv_field(fs::path(runs[i].output).filename().string());
        const Json point_cfg = config_to_json(points[i]);
        for (const auto& axis : cfg.grid) {
            const auto dot = axis.key.find('.');
            const Json& v = dot == std::string::npos ? point_cfg[axis.key]
                                                     : point_cfg[axis.key.substr(0, dot)][axis.key.substr(dot + 1)];
            index += "," + csv_field(v.is_string() ? v.get<std::string>() : json_cell(v));
        }
        auto lookup = [&](std::initializer_list<const char*> path) -> std::string {
            const Json* node = &r.results;
            for (const char* key : path) {
                if (!node->is_object() || !node->contains(key)) return "";
                node = &(*node)[key];
            }
            return node->is_string() ? node->get<std::string>() : json_cell(*node);
        };
        index += "," + lookup({"fits", "power_law", "b"}) + "," + lookup({"fits", "saturation", "mu"}) + "," +
                 lookup({"scrambling_time"}) + "," + lookup({"verdict"}) + "," + csv_field(r.error) + "\n";
        if (!r.ok) ++outcome.failures;
    }
    fs::create_directories(cfg.output);
    outcome.points = runs.size();
    outcome.index = fs::path(cfg.output) / "index.csv";
    write_file(outcome.index, index);
    return outcome;
}

}  // namespace kotoc::cli
