#include "kotoc/cli/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>

#include "kotoc/error.hpp"

namespace kotoc::cli {

std::string to_string(Experiment e) {
    switch (e) {
        case Experiment::OtocSbo: return "otoc-sbo";
        case Experiment::OtocRbo: return "otoc-rbo";
        case Experiment::Opee: return "opee";
        case Experiment::Nnsd: return "nnsd";
        case Experiment::CueCheck: return "cue-check";
        case Experiment::GueCheck: return "gue-check";
    }
    return "unknown";
}

std::string to_string(BackendChoice b) {
    switch (b) {
        case BackendChoice::Auto: return "auto";
        case BackendChoice::Dense: return "dense";
        case BackendChoice::Stochastic: return "stochastic";
    }
    return "unknown";
}

std::string to_string(SectorChoice s) {
    switch (s) {
        case SectorChoice::Even: return "even";
        case SectorChoice::Odd: return "odd";
        case SectorChoice::Both: return "both";
    }
    return "unknown";
}

bool ExperimentConfig::stochastic() const {
    if (backend == BackendChoice::Auto) return params.n_sites > kDenseCap;
    return backend == BackendChoice::Stochastic;
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
    auto fit_eq = [](const FitConfig& x, const FitConfig& y) {
        return x.prescrambling_threshold == y.prescrambling_threshold &&
               x.numerical_zero == y.numerical_zero && x.saturation_entry == y.saturation_entry &&
               x.noise_floor == y.noise_floor && x.noise_multiplier == y.noise_multiplier &&
               x.overshoot_tolerance == y.overshoot_tolerance &&
               x.scrambling_threshold == y.scrambling_threshold;
    };
    return a.experiment == b.experiment && a.params == b.params && a.backend == b.backend &&
           a.n_max == b.n_max && a.n_samples == b.n_samples && a.n_pairs == b.n_pairs &&
           a.seed == b.seed && a.sector == b.sector && a.bins == b.bins && a.s_max == b.s_max &&
           a.dim == b.dim && a.power_law == b.power_law && a.saturation == b.saturation &&
           fit_eq(a.fit, b.fit) && a.output == b.output && a.grid == b.grid;
}

// ---------------------------------------------------------------------------
// Expressions

namespace {

class ExprParser {
public:
    explicit ExprParser(std::string_view text) : text_(text) {}

    double parse() {
        const double v = sum();
        skip();
        if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        if (!std::isfinite(v)) fail("result is not finite");
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw ConfigError("bad expression '" + std::string(text_) + "': " + what);
    }

    void skip() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    double sum() {
        double v = product();
        for (;;) {
            if (eat('+')) v += product();
            else if (eat('-')) v -= product();
            else return v;
        }
    }

    double product() {
        double v = unary();
        for (;;) {
            if (eat('*')) v *= unary();
            else if (eat('/')) v /= unary();
            else return v;
        }
    }

    double unary() {
        if (eat('-')) return -unary();
        if (eat('+')) return unary();
        return atom();
    }

    double atom() {
        skip();
        if (eat('(')) {
            const double v = sum();
            if (!eat(')')) fail("missing ')'");
            return v;
        }
        if (text_.substr(pos_, 2) == "pi") {
            pos_ += 2;
            return std::numbers::pi;
        }
        const char* begin = text_.data() + pos_;
        const char* end = text_.data() + text_.size();
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(begin, end, v);
        if (ec != std::errc() || ptr == begin) fail("expected a number");
        pos_ += static_cast<std::size_t>(ptr - begin);
        return v;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

std::string trim(std::string_view s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

[[noreturn]] void field_error(const std::string& where, const std::string& key,
                              const std::string& what) {
    throw ConfigError((where.empty() ? std::string() : where + ": ") + "field '" + key + "': " + what);
}

double parse_real(const std::string& text) {
    const double v = evaluate_expression(text);
    if (!std::isfinite(v)) throw ConfigError("value '" + text + "' is not finite");
    return v;
}

long long parse_integer(const std::string& text) {
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw ConfigError("expected an integer, got '" + text + "'");
    }
    return v;
}

int parse_int(const std::string& text) {
    const long long v = parse_integer(text);
    if (v < INT32_MIN || v > INT32_MAX) throw ConfigError("integer '" + text + "' out of range");
    return static_cast<int>(v);
}

std::uint64_t parse_seed(const std::string& text) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw ConfigError("expected a non-negative integer, got '" + text + "'");
    }
    return v;
}

FitRequest parse_fit_request(const std::string& text) {
    FitRequest r;
    if (text == "auto") return r;
    if (text == "off" || text == "none") {
        r.mode = FitRequest::Mode::Off;
        return r;
    }
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw ConfigError("expected 'auto', 'off' or 'lo:hi', got '" + text + "'");
    }
    r.mode = FitRequest::Mode::Window;
    r.window.lo = parse_int(trim(std::string_view(text).substr(0, colon)));
    r.window.hi = parse_int(trim(std::string_view(text).substr(colon + 1)));
    return r;
}

std::string fit_request_text(const FitRequest& r) {
    switch (r.mode) {
        case FitRequest::Mode::Off: return "off";
        case FitRequest::Mode::Auto: return "auto";
        case FitRequest::Mode::Window:
            return std::to_string(r.window.lo) + ":" + std::to_string(r.window.hi);
    }
    return "auto";
}

template <typename Enum>
Enum parse_enum(const std::string& text, std::initializer_list<Enum> options) {
    std::string allowed;
    for (Enum e : options) {
        if (to_string(e) == text) return e;
        allowed += (allowed.empty() ? "" : ", ") + to_string(e);
    }
    throw ConfigError("unknown value '" + text + "' (expected one of: " + allowed + ")");
}

using Setter = std::function<void(ExperimentConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"experiment",
         [](ExperimentConfig& c, const std::string& v) {
             c.experiment = parse_enum(v, {Experiment::OtocSbo, Experiment::OtocRbo, Experiment::Opee,
                                           Experiment::Nnsd, Experiment::CueCheck, Experiment::GueCheck});
         }},
        {"n_sites", [](ExperimentConfig& c, const std::string& v) { c.params.n_sites = parse_int(v); }},
        {"j_x", [](ExperimentConfig& c, const std::string& v) { c.params.j_x = parse_real(v); }},
        {"h_x", [](ExperimentConfig& c, const std::string& v) { c.params.h_x = parse_real(v); }},
        {"h_z", [](ExperimentConfig& c, const std::string& v) { c.params.h_z = parse_real(v); }},
        {"tau", [](ExperimentConfig& c, const std::string& v) { c.params.tau = parse_real(v); }},
        {"backend",
         [](ExperimentConfig& c, const std::string& v) {
             c.backend = parse_enum(v, {BackendChoice::Auto, BackendChoice::Dense, BackendChoice::Stochastic});
         }},
        {"n_max", [](ExperimentConfig& c, const std::string& v) { c.n_max = parse_int(v); }},
        {"n_samples", [](ExperimentConfig& c, const std::string& v) { c.n_samples = parse_int(v); }},
        {"n_pairs", [](ExperimentConfig& c, const std::string& v) { c.n_pairs = parse_int(v); }},
        {"seed", [](ExperimentConfig& c, const std::string& v) { c.seed = parse_seed(v); }},
        {"sector",
         [](ExperimentConfig& c, const std::string& v) {
             c.sector = parse_enum(v, {SectorChoice::Even, SectorChoice::Odd, SectorChoice::Both});
         }},
        {"bins", [](ExperimentConfig& c, const std::string& v) { c.bins = parse_int(v); }},
        {"s_max", [](ExperimentConfig& c, const std::string& v) { c.s_max = parse_real(v); }},
        {"dim", [](ExperimentConfig& c, const std::string& v) { c.dim = parse_int(v); }},
        {"output", [](ExperimentConfig& c, const std::string& v) { c.output = v; }},
        {"fit.power_law", [](ExperimentConfig& c, const std::string& v) { c.power_law = parse_fit_request(v); }},
        {"fit.saturation", [](ExperimentConfig& c, const std::string& v) { c.saturation = parse_fit_request(v); }},
        {"fit.prescrambling_threshold",
         [](ExperimentConfig& c, const std::string& v) { c.fit.prescrambling_threshold = parse_real(v); }},
        {"fit.numerical_zero",
         [](ExperimentConfig& c, const std::string& v) { c.fit.numerical_zero = parse_real(v); }},
        {"fit.saturation_entry",
         [](ExperimentConfig& c, const std::string& v) { c.fit.saturation_entry = parse_real(v); }},
        {"fit.noise_floor", [](ExperimentConfig& c, const std::string& v) { c.fit.noise_floor = parse_real(v); }},
        {"fit.noise_multiplier",
         [](ExperimentConfig& c, const std::string& v) { c.fit.noise_multiplier = parse_real(v); }},
        {"fit.overshoot_tolerance",
         [](ExperimentConfig& c, const std::string& v) { c.fit.overshoot_tolerance = parse_real(v); }},
        {"fit.scrambling_threshold",
         [](ExperimentConfig& c, const std::string& v) { c.fit.scrambling_threshold = parse_real(v); }},
    };
    return table;
}

void set_field(ExperimentConfig& cfg, const std::string& key, const std::string& value,
               const std::string& where) {
    const auto& table = setters();
    const auto it = table.find(key);
    if (it == table.end()) field_error(where, key, "unknown field");
    if (value.empty()) field_error(where, key, "missing value");
    try {
        it->second(cfg, value);
    } catch (const ConfigError& e) {
        field_error(where, key, e.what());
    }
    cfg.origin[key] = where;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    if (trim(text).empty()) return out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
    return out;
}

std::string number_text(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

}  // namespace

double evaluate_expression(std::string_view text) { return ExprParser(text).parse(); }

ExperimentConfig parse_config(std::string_view text, const std::string& source) {
    ExperimentConfig cfg;
    std::string section;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string where = source + ":" + std::to_string(line_no);
        std::string line = raw;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(where + ": unterminated section header");
            section = trim(std::string_view(line).substr(1, line.size() - 2));
            if (section != "fit" && section != "grid") {
                throw ConfigError(where + ": unknown section '" + section + "'");
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        if (key.empty()) throw ConfigError(where + ": missing key");
        if (section == "grid") {
            const auto& table = setters();
            if (!table.count(key)) field_error(where, "grid." + key, "unknown field");
            for (const auto& axis : cfg.grid) {
                if (axis.key == key) field_error(where, "grid." + key, "axis declared twice");
            }
            GridAxis axis{key, split_list(value)};
            for (const auto& v : axis.values) {
                ExperimentConfig probe;
                set_field(probe, key, v, where);
            }
            cfg.grid.push_back(std::move(axis));
            cfg.origin["grid." + key] = where;
            continue;
        }
        const std::string full = section == "fit" ? "fit." + key : key;
        if (cfg.origin.count(full)) field_error(where, full, "set twice (first at " + cfg.origin[full] + ")");
        set_field(cfg, full, value, where);
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path.string() + ": cannot open config");
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        nlohmann::ordered_json j;
        try {
            j = nlohmann::ordered_json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(path.string() + ": invalid JSON: " + e.what());
        }
        return config_from_json(j.contains("config") ? j.at("config") : j, path.string());
    }
    return parse_config(text, path.string());
}

void apply_override(ExperimentConfig& cfg, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos) {
        throw ConfigError("override '" + std::string(assignment) + "': expected key=value");
    }
    const std::string key = trim(assignment.substr(0, eq));
    set_field(cfg, key, trim(assignment.substr(eq + 1)), "override");
}

void validate_config(const ExperimentConfig& cfg) {
    auto fail = [&](const std::string& key, const std::string& what) {
        const auto it = cfg.origin.find(key);
        field_error(it == cfg.origin.end() ? std::string() : it->second, key, what);
    };
    const int n = cfg.params.n_sites;
    if (n < 2 || n % 2 != 0) fail("n_sites", "must be even and >= 2, got " + std::to_string(n));
    if (n > kMatrixFreeCap) fail("n_sites", "exceeds the cap of " + std::to_string(kMatrixFreeCap));
    if (!(cfg.params.tau > 0.0)) fail("tau", "must be positive");
    if (cfg.n_max < 0) fail("n_max", "must be non-negative");
    if (cfg.n_samples < 1) fail("n_samples", "must be at least 1");
    if (cfg.n_pairs < 1) fail("n_pairs", "must be at least 1");
    if (cfg.bins < 1) fail("bins", "must be at least 1");
    if (!(cfg.s_max > 0.0)) fail("s_max", "must be positive");
    if (cfg.output.empty()) fail("output", "must not be empty");
    for (const auto* key : {"fit.power_law", "fit.saturation"}) {
        const FitRequest& r = std::string(key) == "fit.power_law" ? cfg.power_law : cfg.saturation;
        if (r.mode == FitRequest::Mode::Window && (r.window.lo < 0 || r.window.hi < r.window.lo)) {
            fail(key, "window must satisfy 0 <= lo <= hi");
        }
        if (r.mode == FitRequest::Mode::Window && r.window.hi > cfg.n_max) {
            fail(key, "window ends beyond n_max");
        }
    }
    const bool dense_needed = cfg.experiment == Experiment::Opee || cfg.experiment == Experiment::Nnsd ||
                              ((cfg.experiment == Experiment::OtocSbo || cfg.experiment == Experiment::OtocRbo) &&
                               !cfg.stochastic());
    if (dense_needed && n > kDenseCap) {
        fail(cfg.origin.count("backend") ? "backend" : "n_sites",
             "dense computation requires n_sites <= " + std::to_string(kDenseCap));
    }
    switch (cfg.experiment) {
        case Experiment::Nnsd:
            if (n < 6) fail("n_sites", "nnsd needs n_sites >= 6 for 10 levels per sector");
            break;
        case Experiment::CueCheck:
            if (n > 8) fail("n_sites", "cue-check is limited to n_sites <= 8");
            if (cfg.n_samples < 2) fail("n_samples", "cue-check needs at least 2 samples");
            break;
        case Experiment::GueCheck:
            if (cfg.dim < 1 || cfg.dim > 1024) fail("dim", "must be in [1, 1024]");
            if (cfg.n_samples < 2) fail("n_samples", "gue-check needs at least 2 samples");
            break;
        default: break;
    }
}

nlohmann::ordered_json config_to_json(const ExperimentConfig& cfg) {
    nlohmann::ordered_json j;
    j["experiment"] = to_string(cfg.experiment);
    j["n_sites"] = cfg.params.n_sites;
    j["j_x"] = cfg.params.j_x;
    j["h_x"] = cfg.params.h_x;
    j["h_z"] = cfg.params.h_z;
    j["tau"] = cfg.params.tau;
    j["backend"] = to_string(cfg.backend);
    j["n_max"] = cfg.n_max;
    j["n_samples"] = cfg.n_samples;
    j["n_pairs"] = cfg.n_pairs;
    j["seed"] = cfg.seed;
    j["sector"] = to_string(cfg.sector);
    j["bins"] = cfg.bins;
    j["s_max"] = cfg.s_max;
    j["dim"] = cfg.dim;
    j["output"] = cfg.output;
    nlohmann::ordered_json fit;
    fit["power_law"] = fit_request_text(cfg.power_law);
    fit["saturation"] = fit_request_text(cfg.saturation);
    fit["prescrambling_threshold"] = cfg.fit.prescrambling_threshold;
    fit["numerical_zero"] = cfg.fit.numerical_zero;
    fit["saturation_entry"] = cfg.fit.saturation_entry;
    fit["noise_floor"] = cfg.fit.noise_floor;
    fit["noise_multiplier"] = cfg.fit.noise_multiplier;
    fit["overshoot_tolerance"] = cfg.fit.overshoot_tolerance;
    fit["scrambling_threshold"] = cfg.fit.scrambling_threshold;
    j["fit"] = fit;
    if (!cfg.grid.empty()) {
        nlohmann::ordered_json grid = nlohmann::ordered_json::array();
        for (const auto& axis : cfg.grid) grid.push_back({{"key", axis.key}, {"values", axis.values}});
        j["grid"] = grid;
    }
    return j;
}

ExperimentConfig config_from_json(const nlohmann::ordered_json& j, const std::string& source) {
    if (!j.is_object()) throw ConfigError(source + ": config must be a JSON object");
    ExperimentConfig cfg;
    auto value_text = [&](const std::string& key, const nlohmann::ordered_json& v) -> std::string {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
        if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
        if (v.is_number_float()) return number_text(v.get<double>());
        field_error(source, key, "expected a string or number");
    };
    for (const auto& [key, value] : j.items()) {
        if (key == "fit") {
            if (!value.is_object()) field_error(source, "fit", "expected an object");
            for (const auto& [k, v] : value.items()) {
                set_field(cfg, "fit." + k, value_text("fit." + k, v), source);
            }
        } else if (key == "grid") {
            if (!value.is_array()) field_error(source, "grid", "expected an array of axes");
            for (const auto& axis : value) {
                if (!axis.is_object() || !axis.contains("key") || !axis.contains("values") ||
                    !axis.at("values").is_array()) {
                    field_error(source, "grid", "each axis needs 'key' and 'values'");
                }
                GridAxis a{axis.at("key").get<std::string>(), {}};
                if (!setters().count(a.key)) field_error(source, "grid." + a.key, "unknown field");
                for (const auto& v : axis.at("values")) a.values.push_back(value_text("grid." + a.key, v));
                cfg.grid.push_back(std::move(a));
            }
        } else {
            set_field(cfg, key, value_text(key, value), source);
        }
    }
    return cfg;
}

std::vector<ExperimentConfig> expand_grid(const ExperimentConfig& cfg) {
    std::vector<ExperimentConfig> points;
    if (cfg.grid.empty()) return points;
    for (const auto& axis : cfg.grid) {
        if (axis.values.empty()) return points;
    }
    ExperimentConfig base = cfg;
    base.grid.clear();
    std::vector<std::size_t> idx(cfg.grid.size(), 0);
    for (;;) {
        ExperimentConfig point = base;
        for (std::size_t a = 0; a < cfg.grid.size(); ++a) {
            const auto& axis = cfg.grid[a];
            const auto origin = cfg.origin.count("grid." + axis.key) ? cfg.origin.at("grid." + axis.key) : "grid";
            set_field(point, axis.key, axis.values[idx[a]], origin);
        }
        points.push_back(std::move(point));
        std::size_t a = cfg.grid.size();
        while (a > 0) {
            --a;
            if (++idx[a] < cfg.grid[a].values.size()) break;
            idx[a] = 0;
            if (a == 0) return points;
        }
    }
}

}  // namespace kotoc::cli
