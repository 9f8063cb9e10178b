#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "risnoma/channel.hpp"
#include "risnoma/errors.hpp"
#include "risnoma/params.hpp"
#include "risnoma/simulator.hpp"

namespace risnoma::harness {

enum class Axis { snr_dbm, L, lambda_b, r_c, alpha_t, threshold };
enum class Metric { coverage_t, coverage_c, rate_t, rate_c };

inline const char* to_string(Axis a) {
    switch (a) {
    case Axis::snr_dbm: return "snr_dbm";
    case Axis::L: return "L";
    case Axis::lambda_b: return "lambda_b";
    case Axis::r_c: return "r_c";
    case Axis::alpha_t: return "alpha_t";
    case Axis::threshold: return "threshold";
    }
    return "?";
}

inline const char* to_string(Metric m) {
    switch (m) {
    case Metric::coverage_t: return "coverage_t";
    case Metric::coverage_c: return "coverage_c";
    case Metric::rate_t: return "rate_t";
    case Metric::rate_c: return "rate_c";
    }
    return "?";
}

inline constexpr long kMinSimulatedTrials = 10000;

struct SweepSpec {
    Axis axis = Axis::snr_dbm;
    std::vector<double> grid;
    std::vector<sim::Scenario> scenarios{sim::Scenario::ris_noma};
    std::vector<sim::Backend> backends{sim::Backend::analytic};
    std::vector<Metric> metrics{Metric::coverage_t};
    long n_trials = 100000;
    std::uint64_t master_seed = 1;

    bool simulated() const {
        return std::find(backends.begin(), backends.end(), sim::Backend::simulated) != backends.end();
    }

    void validate() const {
        if (grid.empty()) throw ConfigError("sweep grid is empty", 0, "sweep.grid");
        bool inc = true, dec = true;
        for (std::size_t i = 1; i < grid.size(); ++i) {
            inc = inc && grid[i] > grid[i - 1];
            dec = dec && grid[i] < grid[i - 1];
        }
        if (!inc && !dec) throw ConfigError("sweep grid must be strictly monotone", 0, "sweep.grid");
        if (scenarios.empty()) throw ConfigError("sweep scenario set is empty", 0, "sweep.scenarios");
        if (backends.empty()) throw ConfigError("sweep backend set is empty", 0, "sweep.backends");
        if (metrics.empty()) throw ConfigError("sweep metric set is empty", 0, "sweep.metrics");
        if (simulated() && n_trials < kMinSimulatedTrials)
            throw ConfigError("n_trials must be >= 10000 for simulated backends", 0, "sweep.n_trials");
    }
};

// Parameter changes applied on top of the base config: (section.key, value).
using Overrides = std::vector<std::pair<std::string, std::string>>;

struct Series {
    std::string name;
    Overrides overrides;
    SweepSpec spec;
};

// Quantities entered in dB units; converted to linear only when resolved.
struct UnitInputs {
    double P_b_dbm = 10.0;
    double noise_dbm = std::numeric_limits<double>::quiet_NaN(); // NaN: thermal floor from f_c and noise figure
    double noise_figure_db = 10.0;
    double C_db = -30.0;
    bool sim_radius_set = false;
};

struct ValidateSettings {
    long n_trials = 200000;
    std::uint64_t master_seed = 1;
};

struct Config {
    SystemParameters params;
    Thresholds thresholds;
    sim::OmaThreshold oma = sim::OmaThreshold::rate_equivalent;
    UnitInputs units;
    std::vector<Series> series;
    ValidateSettings validation;
};

inline double thermal_noise_dbm(double f_c_hz, double noise_figure_db) {
    return -170.0 + 10.0 * std::log10(f_c_hz) + noise_figure_db;
}

// Derives linear quantities from the unit inputs and checks every invariant.
inline void resolve(Config& c) {
    auto& p = c.params;
    p.power.P_b = dbm_to_watt(c.units.P_b_dbm);
    const double noise = std::isnan(c.units.noise_dbm) ? thermal_noise_dbm(p.channel.f_c, c.units.noise_figure_db)
                                                       : c.units.noise_dbm;
    p.power.sigma2 = dbm_to_watt(noise);
    p.channel.C = db_to_linear(c.units.C_db);
    p.channel.k = 2.0 * std::numbers::pi * p.channel.f_c / kSpeedOfLight;
    if (!c.units.sim_radius_set && p.spatial.lambda_b > 0.0) p.spatial.sim_radius = default_sim_radius(p.spatial.lambda_b);
    try {
        p.validate();
        c.thresholds.validate(p.power);
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
}

namespace detail {

inline double parse_double(const std::string& key, const std::string& v, int line) {
    double out = 0.0;
    const char* b = v.data();
    const char* e = v.data() + v.size();
    const auto r = std::from_chars(b, e, out);
    if (r.ec != std::errc() || r.ptr != e) throw ConfigError("not a number: '" + v + "'", line, key);
    return out;
}

inline long parse_long(const std::string& key, const std::string& v, int line) {
    long out = 0;
    const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
    if (r.ec != std::errc() || r.ptr != v.data() + v.size()) throw ConfigError("not an integer: '" + v + "'", line, key);
    return out;
}

inline bool parse_bool(const std::string& key, const std::string& v, int line) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError("not a boolean: '" + v + "'", line, key);
}

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

template <class E>
E parse_enum(const std::string& key, const std::string& v, int line, std::initializer_list<std::pair<const char*, E>> table) {
    for (const auto& [name, value] : table)
        if (v == name) return value;
    std::string allowed;
    for (const auto& [name, value] : table) allowed += (allowed.empty() ? "" : "|") + std::string(name);
    throw ConfigError("unknown value '" + v + "' (expected " + allowed + ")", line, key);
}

inline sim::Scenario parse_scenario(const std::string& key, const std::string& v, int line) {
    return parse_enum<sim::Scenario>(key, v, line,
                                     {{"ris_noma", sim::Scenario::ris_noma},
                                      {"ris_oma", sim::Scenario::ris_oma},
                                      {"conventional_noma", sim::Scenario::conventional_noma}});
}

inline sim::Backend parse_backend(const std::string& key, const std::string& v, int line) {
    return parse_enum<sim::Backend>(key, v, line, {{"analytic", sim::Backend::analytic}, {"simulated", sim::Backend::simulated}});
}

inline Metric parse_metric(const std::string& key, const std::string& v, int line) {
    return parse_enum<Metric>(key, v, line,
                              {{"coverage_t", Metric::coverage_t},
                               {"coverage_c", Metric::coverage_c},
                               {"rate_t", Metric::rate_t},
                               {"rate_c", Metric::rate_c}});
}

inline Axis parse_axis(const std::string& key, const std::string& v, int line) {
    return parse_enum<Axis>(key, v, line,
                            {{"snr_dbm", Axis::snr_dbm},
                             {"L", Axis::L},
                             {"lambda_b", Axis::lambda_b},
                             {"r_c", Axis::r_c},
                             {"alpha_t", Axis::alpha_t},
                             {"threshold", Axis::threshold}});
}

template <class T, class F>
std::vector<T> parse_list(const std::string& key, const std::string& v, int line, F each) {
    std::vector<T> out;
    for (const auto& item : split_list(v)) out.push_back(each(key, item, line));
    return out;
}

} // namespace detail

// Sets one `section.key` in the config. Throws ConfigError for unknown keys.
inline void apply_key(Config& c, const std::string& section, const std::string& key, const std::string& raw, int line = 0) {
    using namespace detail;
    const std::string v = trim(raw);
    const std::string full = section + "." + key;
    auto num = [&] { return parse_double(full, v, line); };
    auto integer = [&] { return parse_long(full, v, line); };
    auto& sp = c.params.spatial;
    auto& ch = c.params.channel;
    auto& pw = c.params.power;
    auto& th = c.thresholds;
    auto& o = c.params.options;

    if (section == "spatial") {
        if (key == "lambda_b_per_m2") return void(sp.lambda_b = num());
        if (key == "lambda_u_per_m2") return void(sp.lambda_u = num());
        if (key == "R_L_m") return void(sp.R_L = num());
        if (key == "r_c_m") return void(sp.r_c = num());
        if (key == "sim_radius_m") {
            sp.sim_radius = num();
            c.units.sim_radius_set = true;
            return;
        }
    } else if (section == "channel") {
        if (key == "L_m") return void(ch.L = num());
        if (key == "alpha_t") return void(ch.alpha_t = num());
        if (key == "alpha_c") return void(ch.alpha_c = num());
        if (key == "alpha_rf") return void(ch.alpha_rf = num());
        if (key == "C_db") return void(c.units.C_db = num());
        if (key == "f_c_hz") return void(ch.f_c = num());
        if (key == "rho_a") return void(ch.rho_a = num());
        if (key == "rho_t") return void(ch.rho_t = num());
        if (key == "m_t") return void(ch.m_t = static_cast<int>(integer()));
        if (key == "m_c") return void(ch.m_c = static_cast<int>(integer()));
        if (key == "phi_0_rad") return void(ch.phi_0 = num());
    } else if (section == "power") {
        if (key == "a_c") return void(pw.a_c = num());
        if (key == "a_t") return void(pw.a_t = num());
        if (key == "P_b_dbm") return void(c.units.P_b_dbm = num());
        if (key == "noise_dbm") return void(c.units.noise_dbm = num());
        if (key == "noise_figure_db") return void(c.units.noise_figure_db = num());
    } else if (section == "thresholds") {
        if (key == "gamma_sic_th") return void(th.gamma_sic_th = num());
        if (key == "gamma_t_th") return void(th.gamma_t_th = num());
        if (key == "gamma_c_th") return void(th.gamma_c_th = num());
    } else if (section == "model") {
        if (key == "sic_channel")
            return void(o.sic_channel = parse_enum<SicChannel>(full, v, line, {{"paper", SicChannel::paper}, {"physical", SicChannel::physical}}));
        if (key == "connected_intra_channel")
            return void(o.connected_intra = parse_enum<ConnectedIntraChannel>(
                            full, v, line, {{"physical", ConnectedIntraChannel::physical}, {"paper", ConnectedIntraChannel::paper}}));
        if (key == "ris_intercept")
            return void(o.intercept = parse_enum<InterceptModel>(
                            full, v, line, {{"paper_formula", InterceptModel::paper_formula}, {"angle_average", InterceptModel::angle_average}}));
        if (key == "far_field_tail") return void(o.far_field_tail = parse_bool(full, v, line));
        if (key == "oma_threshold")
            return void(c.oma = parse_enum<sim::OmaThreshold>(
                            full, v, line, {{"rate_equivalent", sim::OmaThreshold::rate_equivalent}, {"raw", sim::OmaThreshold::raw}}));
    } else if (section == "sweep") {
        if (c.series.empty()) c.series.push_back(Series{"main", {}, {}});
        SweepSpec& s = c.series.front().spec;
        if (key == "axis") return void(s.axis = parse_axis(full, v, line));
        if (key == "grid") return void(s.grid = parse_list<double>(full, v, line, parse_double));
        if (key == "scenarios") return void(s.scenarios = parse_list<sim::Scenario>(full, v, line, parse_scenario));
        if (key == "backends") return void(s.backends = parse_list<sim::Backend>(full, v, line, parse_backend));
        if (key == "metrics") return void(s.metrics = parse_list<Metric>(full, v, line, parse_metric));
        if (key == "n_trials") return void(s.n_trials = integer());
        if (key == "master_seed") return void(s.master_seed = static_cast<std::uint64_t>(integer()));
    } else if (section == "validate") {
        if (key == "n_trials") return void(c.validation.n_trials = integer());
        if (key == "master_seed") return void(c.validation.master_seed = static_cast<std::uint64_t>(integer()));
    } else {
        throw ConfigError("unknown section [" + section + "]", line, section);
    }
    throw ConfigError("unknown key '" + key + "' in [" + section + "]", line, full);
}

inline void apply_overrides(Config& c, const Overrides& ov) {
    for (const auto& [path, value] : ov) {
        const auto dot = path.find('.');
        if (dot == std::string::npos) throw ConfigError("override must be section.key: " + path, 0, path);
        apply_key(c, path.substr(0, dot), path.substr(dot + 1), value);
    }
    resolve(c);
}

// Line of `key` inside `[section]`, or 0 if not found.
inline int locate_key(const std::string& text, const std::string& section, const std::string& key) {
    std::istringstream is(text);
    std::string line, current;
    int n = 0;
    while (std::getline(is, line)) {
        ++n;
        const std::string t = detail::trim(line);
        if (t.empty() || t[0] == ';' || t[0] == '#') continue;
        if (t.front() == '[' && t.back() == ']') {
            current = detail::trim(t.substr(1, t.size() - 2));
            continue;
        }
        const auto eq = t.find('=');
        if (current == section && eq != std::string::npos && detail::trim(t.substr(0, eq)) == key) return n;
    }
    return 0;
}

inline Config parse_config(const std::string& text) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    std::istringstream is(text);
    try {
        pt::ini_parser::read_ini(is, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError("config parse error: " + e.message(), static_cast<int>(e.line()));
    }
    Config c;
    for (const auto& [section, body] : tree) {
        if (body.empty() && !body.data().empty())
            throw ConfigError("key '" + section + "' outside a section", locate_key(text, "", section), section);
        for (const auto& [key, node] : body) apply_key(c, section, key, node.data(), locate_key(text, section, key));
    }
    resolve(c);
    for (const auto& s : c.series) s.spec.validate();
    return c;
}

inline Config load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw NotFoundError("config file not found: " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

// ------------------------------------------------------------------ presets

inline Config default_config() {
    Config c;
    resolve(c);
    return c;
}

inline std::vector<double> linear_grid(double lo, double hi, int n) {
    std::vector<double> g;
    for (int i = 0; i < n; ++i) g.push_back(lo + (hi - lo) * i / (n - 1));
    return g;
}

// Shortest text that parses back to the same double.
inline std::string round_trip_text(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

inline std::string lambda_text(double spacing_m) {
    return round_trip_text(1.0 / (spacing_m * spacing_m * std::numbers::pi));
}

// Sweep presets, one per standard figure.
inline std::vector<Series> sweep_preset(const std::string& name) {
    using sim::Backend;
    using sim::Scenario;
    const std::vector<double> snr = linear_grid(0.0, 15.0, 7);
    const std::vector<Backend> both{Backend::analytic, Backend::simulated};
    std::vector<Series> out;
    if (name == "fig3") {
        for (double d : {300.0, 600.0}) {
            SweepSpec s{Axis::snr_dbm, snr, {Scenario::ris_noma}, both, {Metric::coverage_t, Metric::coverage_c}, 100000, 1};
            out.push_back({"lambda_1/(" + std::to_string(static_cast<int>(d)) + "^2 pi)",
                           {{"spatial.lambda_b_per_m2", lambda_text(d)}}, s});
        }
    } else if (name == "fig4") {
        SweepSpec s{Axis::snr_dbm, snr,
                    {Scenario::ris_noma, Scenario::ris_oma, Scenario::conventional_noma},
                    both, {Metric::coverage_t, Metric::coverage_c}, 100000, 1};
        out.push_back({"scenarios", {}, s});
    } else if (name == "fig5") {
        for (double L : {0.75, 1.5, 3.0}) {
            SweepSpec s{Axis::snr_dbm, snr, {Scenario::ris_noma}, {Backend::analytic}, {Metric::coverage_t}, 100000, 1};
            std::ostringstream n;
            n << "L=" << L;
            out.push_back({n.str(), {{"channel.L_m", round_trip_text(L)}}, s});
        }
        for (double a : {2.5, 3.0, 4.0}) {
            SweepSpec s{Axis::snr_dbm, snr, {Scenario::ris_noma}, {Backend::analytic}, {Metric::coverage_t}, 100000, 1};
            std::ostringstream n;
            n << "alpha_t=" << a;
            out.push_back({n.str(), {{"channel.alpha_t", round_trip_text(a)}}, s});
        }
    } else if (name == "fig6") {
        for (double a : {2.5, 3.0, 4.0}) {
            SweepSpec s{Axis::L, linear_grid(0.5, 5.0, 10), {Scenario::ris_noma}, {Backend::analytic}, {Metric::coverage_t}, 100000, 1};
            std::ostringstream n;
            n << "alpha_t=" << a;
            out.push_back({n.str(), {{"channel.alpha_t", round_trip_text(a)}}, s});
        }
    } else if (name == "fig7") {
        for (double d : {200.0, 400.0, 600.0}) {
            SweepSpec s{Axis::snr_dbm, snr, {Scenario::ris_noma}, both, {Metric::rate_t}, 100000, 1};
            out.push_back({"lambda_1/(" + std::to_string(static_cast<int>(d)) + "^2 pi)",
                           {{"spatial.lambda_b_per_m2", lambda_text(d)}}, s});
        }
    } else if (name == "fig8") {
        for (double r : {50.0, 75.0, 100.0}) {
            SweepSpec s{Axis::snr_dbm, snr, {Scenario::ris_noma}, both, {Metric::rate_c}, 100000, 1};
            out.push_back({"r_c=" + std::to_string(static_cast<int>(r)), {{"spatial.r_c_m", round_trip_text(r)}}, s});
        }
    } else {
        throw NotFoundError("unknown preset: " + name);
    }
    return out;
}

inline const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names{"paper-defaults", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8"};
    return names;
}

// "paper-defaults" is the parameter preset; the figure presets are sweep sets.
inline Config config_preset(const std::string& name) {
    Config c = default_config();
    if (name == "paper-defaults") return c;
    c.series = sweep_preset(name);
    return c;
}

} // namespace risnoma::harness
