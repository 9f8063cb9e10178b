#pragma once

#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "risnoma/analytics.hpp"
#include "risnoma/errors.hpp"
#include "risnoma/harness/config.hpp"
#include "risnoma/simulator.hpp"

namespace risnoma::harness {

inline constexpr const char* kCsvHeader =
    "series,scenario,backend,metric,axis,axis_value,estimate,half_width,n_trials,seed,status";

// Nine significant digits, locale independent.
inline std::string format_value(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 9);
    return std::string(buf, r.ptr);
}

struct PointResult {
    std::string series;
    sim::Scenario scenario = sim::Scenario::ris_noma;
    sim::Backend backend = sim::Backend::analytic;
    Metric metric = Metric::coverage_t;
    Axis axis = Axis::snr_dbm;
    double axis_value = 0.0;
    std::optional<double> estimate;
    std::optional<double> half_width;
    std::optional<long> n_trials;
    std::optional<std::uint64_t> seed;
    std::string status = "ok";
    std::string note; // emitted as a comment row when non-empty
};

inline PointResult make_point(const std::string& series, sim::Scenario sc, sim::Backend b, Metric m, Axis axis, double x) {
    PointResult r;
    r.series = series;
    r.scenario = sc;
    r.backend = b;
    r.metric = m;
    r.axis = axis;
    r.axis_value = x;
    return r;
}

inline std::string csv_row(const PointResult& r) {
    std::string s = r.series;
    s += ',';
    s += sim::to_string(r.scenario);
    s += ',';
    s += sim::to_string(r.backend);
    s += ',';
    s += to_string(r.metric);
    s += ',';
    s += to_string(r.axis);
    s += ',' + format_value(r.axis_value);
    s += ',' + (r.estimate ? format_value(*r.estimate) : std::string());
    s += ',' + (r.half_width ? format_value(*r.half_width) : std::string());
    s += ',' + (r.n_trials ? std::to_string(*r.n_trials) : std::string());
    s += ',' + (r.seed ? std::to_string(*r.seed) : std::string());
    s += ',' + r.status;
    return s;
}

// Config with one axis coordinate applied.
inline Config at_axis(const Config& base, Axis axis, double value) {
    Config c = base;
    const std::string v = round_trip_text(value);
    switch (axis) {
    case Axis::snr_dbm: apply_key(c, "power", "P_b_dbm", v); break;
    case Axis::L: apply_key(c, "channel", "L_m", v); break;
    case Axis::lambda_b: apply_key(c, "spatial", "lambda_b_per_m2", v); break;
    case Axis::r_c: apply_key(c, "spatial", "r_c_m", v); break;
    case Axis::alpha_t: apply_key(c, "channel", "alpha_t", v); break;
    case Axis::threshold:
        apply_key(c, "thresholds", "gamma_sic_th", v);
        apply_key(c, "thresholds", "gamma_t_th", v);
        apply_key(c, "thresholds", "gamma_c_th", v);
        break;
    }
    resolve(c);
    return c;
}

// Chebyshev order used for the connected-user rate closed form.
inline constexpr int kConnectedRateOrder = 200;

inline analytics::AnalyticResult analytic_metric(const SystemParameters& p, const Thresholds& th, Metric m) {
    switch (m) {
    case Metric::coverage_t: return analytics::coverage_typical(p, th);
    case Metric::coverage_c: return analytics::coverage_connected(p, th);
    case Metric::rate_t: return analytics::ergodic_typical(p, th);
    case Metric::rate_c: return analytics::ergodic_connected(p, th, kConnectedRateOrder);
    }
    return {};
}

inline std::string diag_note(const analytics::Diagnostics& d) {
    std::string n;
    if (d.quad_unconverged > 0) n += "quad_unconverged=" + std::to_string(d.quad_unconverged) + " ";
    if (d.clamp_events > 0) n += "clamped_from=" + format_value(d.pre_clamp) + " ";
    if (!d.note.empty()) n += d.note;
    return n;
}

inline PointResult evaluate_analytic(const Config& c, const std::string& series, sim::Scenario sc, Metric m, Axis axis,
                                     double x) {
    PointResult r = make_point(series, sc, sim::Backend::analytic, m, axis, x);
    if (sc != sim::Scenario::ris_noma) {
        r.status = "unsupported";
        return r;
    }
    try {
        const analytics::AnalyticResult a = analytic_metric(c.params, c.thresholds, m);
        r.estimate = a.value;
        if (a.diag.infeasible) r.status = "infeasible";
        else if (a.diag.degenerate) r.status = "degenerate";
        else if (a.diag.quad_unconverged > 0) r.status = "unconverged";
        r.note = diag_note(a.diag);
    } catch (const Error& e) {
        r.status = "error";
        r.note = e.what();
    }
    return r;
}

inline sim::MetricResult simulated_metric(const sim::BatchResult& b, std::size_t s, std::size_t p, Metric m) {
    switch (m) {
    case Metric::coverage_t: return b.coverage_t(s, p);
    case Metric::coverage_c: return b.coverage_c(s, p);
    case Metric::rate_t: return b.rate_t(s, p);
    case Metric::rate_c: return b.rate_c(s, p);
    }
    return {};
}

inline int sweep_threads(int requested) { return requested > 0 ? requested : sim::thread_count_from_env(); }

// Runs `f(i)` for i in [0, n) on up to `threads` workers.
template <class F>
void parallel_for(std::size_t n, int threads, F&& f) {
    const int t = std::max(1, std::min<int>(threads, static_cast<int>(n)));
    if (t == 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int k = 0; k < t; ++k)
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) f(i);
        });
    for (auto& th : pool) th.join();
}

struct SweepOptions {
    int threads = 0;     // 0: RISNOMA_THREADS or hardware concurrency
    bool timing = false; // wall-clock comment rows (breaks byte-identical output)
};

// Evaluates one series; rows come back in grid x scenario x backend x metric order.
inline std::vector<PointResult> run_series(const Config& base, const Series& series, const SweepOptions& opt) {
    const SweepSpec& spec = series.spec;
    spec.validate();
    Config cfg = base;
    apply_overrides(cfg, series.overrides);
    const std::size_t ng = spec.grid.size();
    const std::size_t nsc = spec.scenarios.size();
    const std::size_t nb = spec.backends.size();
    const std::size_t nm = spec.metrics.size();
    std::vector<PointResult> rows(ng * nsc * nb * nm);
    auto idx = [&](std::size_t g, std::size_t s, std::size_t b, std::size_t m) { return ((g * nsc + s) * nb + b) * nm + m; };
    const int threads = sweep_threads(opt.threads);

    std::vector<std::optional<Config>> point_cfg(ng);
    std::vector<std::string> point_err(ng);
    for (std::size_t g = 0; g < ng; ++g) {
        try {
            point_cfg[g] = at_axis(cfg, spec.axis, spec.grid[g]);
        } catch (const Error& e) {
            point_err[g] = e.what();
        }
    }
    auto fail_point = [&](std::size_t g, std::size_t s, std::size_t b, std::size_t m, const std::string& msg) {
        PointResult r = make_point(series.name, spec.scenarios[s], spec.backends[b], spec.metrics[m], spec.axis, spec.grid[g]);
        r.status = "error";
        r.note = msg;
        rows[idx(g, s, b, m)] = r;
    };

    for (std::size_t b = 0; b < nb; ++b) {
        if (spec.backends[b] == sim::Backend::analytic) {
            parallel_for(ng, threads, [&](std::size_t g) {
                for (std::size_t s = 0; s < nsc; ++s)
                    for (std::size_t m = 0; m < nm; ++m) {
                        if (!point_cfg[g]) {
                            fail_point(g, s, b, m, point_err[g]);
                            continue;
                        }
                        rows[idx(g, s, b, m)] =
                            evaluate_analytic(*point_cfg[g], series.name, spec.scenarios[s], spec.metrics[m], spec.axis, spec.grid[g]);
                    }
            });
            continue;
        }
        // Simulated: along the power axis every grid point shares the same drops.
        auto record = [&](const sim::BatchResult& br, std::size_t g, std::size_t power_index) {
            for (std::size_t s = 0; s < nsc; ++s)
                for (std::size_t m = 0; m < nm; ++m) {
                    const sim::MetricResult mr = simulated_metric(br, s, power_index, spec.metrics[m]);
                    PointResult r = make_point(series.name, spec.scenarios[s], sim::Backend::simulated, spec.metrics[m], spec.axis, spec.grid[g]);
                    r.estimate = mr.estimate;
                    r.half_width = mr.half_width_95;
                    r.n_trials = mr.n_trials;
                    r.seed = spec.master_seed;
                    if (mr.resamples > 0) r.note = "empty_bs_resamples=" + std::to_string(mr.resamples);
                    rows[idx(g, s, b, m)] = r;
                }
        };
        auto batch_spec = [&](std::vector<double> powers) {
            sim::BatchSpec bs;
            bs.scenarios = spec.scenarios;
            bs.powers_w = std::move(powers);
            bs.n_trials = spec.n_trials;
            bs.master_seed = spec.master_seed;
            bs.threads = threads;
            bs.oma = cfg.oma;
            return bs;
        };
        if (spec.axis == Axis::snr_dbm) {
            std::vector<double> powers;
            std::vector<std::size_t> ok;
            for (std::size_t g = 0; g < ng; ++g) {
                if (point_cfg[g]) {
                    powers.push_back(point_cfg[g]->params.power.P_b);
                    ok.push_back(g);
                }
            }
            try {
                if (!ok.empty()) {
                    const sim::BatchResult br = sim::run_batch(cfg.params, cfg.thresholds, batch_spec(powers));
                    for (std::size_t k = 0; k < ok.size(); ++k) record(br, ok[k], k);
                }
            } catch (const Error& e) {
                for (std::size_t g : ok)
                    for (std::size_t s = 0; s < nsc; ++s)
                        for (std::size_t m = 0; m < nm; ++m) fail_point(g, s, b, m, e.what());
            }
            for (std::size_t g = 0; g < ng; ++g)
                if (!point_cfg[g])
                    for (std::size_t s = 0; s < nsc; ++s)
                        for (std::size_t m = 0; m < nm; ++m) fail_point(g, s, b, m, point_err[g]);
        } else {
            for (std::size_t g = 0; g < ng; ++g) {
                try {
                    if (!point_cfg[g]) throw ConfigError(point_err[g]);
                    const Config& pc = *point_cfg[g];
                    const sim::BatchResult br = sim::run_batch(pc.params, pc.thresholds, batch_spec({pc.params.power.P_b}));
                    record(br, g, 0);
                } catch (const Error& e) {
                    for (std::size_t s = 0; s < nsc; ++s)
                        for (std::size_t m = 0; m < nm; ++m) fail_point(g, s, b, m, e.what());
                }
            }
        }
    }
    return rows;
}

inline void write_rows(std::string& out, const std::vector<PointResult>& rows) {
    for (const auto& r : rows) out += csv_row(r) + '\n';
    for (const auto& r : rows)
        if (!r.note.empty())
            out += "# note series=" + r.series + " scenario=" + sim::to_string(r.scenario) + " backend=" +
                   sim::to_string(r.backend) + " metric=" + to_string(r.metric) + " axis_value=" + format_value(r.axis_value) +
                   ": " + r.note + '\n';
}

// Runs every series of the config and returns the CSV document.
inline std::string run_sweep(const Config& cfg, const SweepOptions& opt = {}) {
    if (cfg.series.empty()) throw ConfigError("no sweep defined (add a [sweep] section or use --preset)");
    std::string out = std::string(kCsvHeader) + '\n';
    for (const auto& s : cfg.series) {
        const auto t0 = std::chrono::steady_clock::now();
        write_rows(out, run_series(cfg, s, opt));
        if (opt.timing) {
            const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            out += "# timing series=" + s.name + " seconds=" + format_value(sec) + '\n';
        }
    }
    return out;
}

} // namespace risnoma::harness
