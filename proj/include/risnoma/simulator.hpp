#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "risnoma/channel.hpp"
#include "risnoma/errors.hpp"
#include "risnoma/geometry.hpp"
#include "risnoma/params.hpp"
#include "risnoma/rng.hpp"
#include "risnoma/specfun.hpp"

namespace risnoma::sim {

enum class Scenario { ris_noma, ris_oma, conventional_noma };
enum class Backend { analytic, simulated };
// How the OMA coverage threshold relates to the NOMA one: `rate_equivalent`
// requires the halved rate to meet the same target, `raw` compares the SINR directly.
enum class OmaThreshold { rate_equivalent, raw };

inline const char* to_string(Scenario s) {
    switch (s) {
    case Scenario::ris_noma: return "ris_noma";
    case Scenario::ris_oma: return "ris_oma";
    case Scenario::conventional_noma: return "conventional_noma";
    }
    return "?";
}

inline const char* to_string(Backend b) { return b == Backend::analytic ? "analytic" : "simulated"; }

struct TrialOutcome {
    double gamma_sic = 0.0;
    double gamma_t = 0.0;
    double gamma_c = 0.0;
    bool covered_t = false;
    bool covered_c = false;
    double rate_t = 0.0;
    double rate_c = 0.0;
};

struct MetricResult {
    double estimate = 0.0;
    double half_width_95 = 0.0;
    long n_trials = 0;
    Backend backend = Backend::simulated;
    Scenario scenario = Scenario::ris_noma;
    long resamples = 0;
};

inline double oma_threshold(double th, OmaThreshold mode) {
    return mode == OmaThreshold::rate_equivalent ? (1.0 + th) * (1.0 + th) - 1.0 : th;
}

// Outcome of one drop for one scenario at the power level in `pa`.
inline TrialOutcome evaluate_gains(const LinkGains& g, const PowerAllocation& pa, const Thresholds& th, Scenario sc,
                                   OmaThreshold oma = OmaThreshold::rate_equivalent) {
    TrialOutcome o;
    if (sc == Scenario::ris_oma) {
        PowerAllocation full = pa;
        full.a_c = 1.0;
        full.a_t = 1.0;
        const SinrTriple s = sinr_from_gains(g.typ_signal, g.typ_intf, 0.0, g.con_signal, 0.0, g.con_intf, full);
        o.gamma_sic = std::numeric_limits<double>::quiet_NaN();
        o.gamma_t = s.t.value;
        o.gamma_c = s.c.value;
        o.covered_t = o.gamma_t > oma_threshold(th.gamma_t_th, oma);
        o.covered_c = o.gamma_c > oma_threshold(th.gamma_c_th, oma);
        o.rate_t = 0.5 * std::log2(1.0 + o.gamma_t);
        o.rate_c = 0.5 * std::log2(1.0 + o.gamma_c);
        return o;
    }
    const SinrTriple s =
        sc == Scenario::ris_noma
            ? sinr_from_gains(g, pa)
            : sinr_from_gains(g.dir_signal, g.dir_intf, g.dir_sic_signal, g.con_signal, g.con_intra, g.con_intf, pa);
    o.gamma_sic = s.sic.value;
    o.gamma_t = s.t.value;
    o.gamma_c = s.c.value;
    const bool sic_ok = o.gamma_sic > th.gamma_sic_th;
    o.covered_t = sic_ok && o.gamma_t > th.gamma_t_th;
    o.covered_c = o.gamma_c > th.gamma_c_th;
    o.rate_t = sic_ok ? std::log2(1.0 + o.gamma_t) : 0.0;
    o.rate_c = std::log2(1.0 + o.gamma_c);
    return o;
}

// Reusable per-thread buffers for drawing trials.
struct TrialWorkspace {
    NetworkRealization real;
    LinkFading fading;
};

// One network drop plus fading, reduced to unit-power link gains.
inline LinkGains sample_trial_gains(const SystemParameters& p, std::uint64_t trial_seed, TrialWorkspace& ws) {
    Rng rng(trial_seed);
    sample_realization(p.spatial, rng, ws.real);
    sample_link_fading(ws.real.bs_points.size(), p.channel, rng, ws.fading);
    return link_gains(ws.real, p.channel, p.options, ws.fading);
}

inline TrialOutcome run_trial(const SystemParameters& p, const Thresholds& th, Scenario sc, std::uint64_t trial_index,
                              std::uint64_t master_seed, OmaThreshold oma = OmaThreshold::rate_equivalent) {
    TrialWorkspace ws;
    const LinkGains g = sample_trial_gains(p, derive_seed(master_seed, trial_index), ws);
    return evaluate_gains(g, p.power, th, sc, oma);
}

// ------------------------------------------------------------ aggregation

struct Accumulator {
    long n = 0;
    long covered_t = 0;
    long covered_c = 0;
    double sum_rt = 0.0;
    double sum_rt2 = 0.0;
    double sum_rc = 0.0;
    double sum_rc2 = 0.0;

    void add(const TrialOutcome& o) {
        ++n;
        covered_t += o.covered_t;
        covered_c += o.covered_c;
        sum_rt += o.rate_t;
        sum_rt2 += o.rate_t * o.rate_t;
        sum_rc += o.rate_c;
        sum_rc2 += o.rate_c * o.rate_c;
    }
};

// Merges block accumulators in block order with compensated sums, so the
// result does not depend on how blocks were scheduled.
inline Accumulator merge_in_order(const std::vector<Accumulator>& blocks) {
    Accumulator out;
    specfun::KahanSum a, b, c, d;
    for (const auto& blk : blocks) {
        out.n += blk.n;
        out.covered_t += blk.covered_t;
        out.covered_c += blk.covered_c;
        a.add(blk.sum_rt);
        b.add(blk.sum_rt2);
        c.add(blk.sum_rc);
        d.add(blk.sum_rc2);
    }
    out.sum_rt = a.value();
    out.sum_rt2 = b.value();
    out.sum_rc = c.value();
    out.sum_rc2 = d.value();
    return out;
}

inline MetricResult proportion_result(long hits, long n) {
    MetricResult r;
    r.n_trials = n;
    if (n == 0) return r;
    const double p = static_cast<double>(hits) / n;
    r.estimate = p;
    r.half_width_95 = 1.96 * std::sqrt(p * (1.0 - p) / n);
    return r;
}

inline MetricResult mean_result(double sum, double sum2, long n) {
    MetricResult r;
    r.n_trials = n;
    if (n == 0) return r;
    const double mean = sum / n;
    const double var = n > 1 ? std::max(0.0, (sum2 - n * mean * mean) / (n - 1)) : 0.0;
    r.estimate = mean;
    r.half_width_95 = 1.96 * std::sqrt(var / n);
    return r;
}

inline int thread_count_from_env() {
    if (const char* v = std::getenv("RISNOMA_THREADS")) {
        const int n = std::atoi(v);
        if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

struct BatchSpec {
    std::vector<Scenario> scenarios;
    std::vector<double> powers_w; // P_b values evaluated on every drop
    long n_trials = 0;
    std::uint64_t master_seed = 1;
    int threads = 0; // 0: RISNOMA_THREADS or hardware concurrency
    OmaThreshold oma = OmaThreshold::rate_equivalent;
};

struct BatchResult {
    BatchSpec spec;
    std::vector<Accumulator> acc; // index: scenario * powers + power
    long resamples = 0;

    const Accumulator& at(std::size_t scenario, std::size_t power) const {
        return acc.at(scenario * spec.powers_w.size() + power);
    }
    MetricResult coverage_t(std::size_t s, std::size_t p) const { return tag(proportion_result(at(s, p).covered_t, at(s, p).n), s); }
    MetricResult coverage_c(std::size_t s, std::size_t p) const { return tag(proportion_result(at(s, p).covered_c, at(s, p).n), s); }
    MetricResult rate_t(std::size_t s, std::size_t p) const {
        const auto& a = at(s, p);
        return tag(mean_result(a.sum_rt, a.sum_rt2, a.n), s);
    }
    MetricResult rate_c(std::size_t s, std::size_t p) const {
        const auto& a = at(s, p);
        return tag(mean_result(a.sum_rc, a.sum_rc2, a.n), s);
    }

private:
    MetricResult tag(MetricResult r, std::size_t s) const {
        r.backend = Backend::simulated;
        r.scenario = spec.scenarios.at(s);
        r.resamples = resamples;
        return r;
    }
};

inline constexpr long kBlockSize = 1024;

// Monte Carlo over n_trials drops; every drop is evaluated for all
// scenarios and power levels. Deterministic for any thread count.
inline BatchResult run_batch(const SystemParameters& p, const Thresholds& th, const BatchSpec& spec) {
    if (spec.n_trials < 1) throw DomainError("run_batch: n_trials must be >= 1");
    if (spec.scenarios.empty() || spec.powers_w.empty()) throw DomainError("run_batch: empty scenario or power set");
    p.validate_for_simulation();
    const std::size_t ns = spec.scenarios.size();
    const std::size_t np = spec.powers_w.size();
    const long n_blocks = (spec.n_trials + kBlockSize - 1) / kBlockSize;
    std::vector<std::vector<Accumulator>> block_acc(n_blocks, std::vector<Accumulator>(ns * np));
    std::vector<long> block_resamples(n_blocks, 0);
    std::atomic<long> next{0};

    auto worker = [&]() {
        TrialWorkspace ws;
        PowerAllocation pa = p.power;
        for (;;) {
            const long b = next.fetch_add(1);
            if (b >= n_blocks) break;
            auto& acc = block_acc[b];
            const long lo = b * kBlockSize;
            const long hi = std::min(spec.n_trials, lo + kBlockSize);
            for (long i = lo; i < hi; ++i) {
                const LinkGains g = sample_trial_gains(p, derive_seed(spec.master_seed, static_cast<std::uint64_t>(i)), ws);
                block_resamples[b] += ws.real.resamples;
                for (std::size_t k = 0; k < np; ++k) {
                    pa.P_b = spec.powers_w[k];
                    for (std::size_t s = 0; s < ns; ++s)
                        acc[s * np + k].add(evaluate_gains(g, pa, th, spec.scenarios[s], spec.oma));
                }
            }
        }
    };

    const int threads = std::max(1, std::min<int>(spec.threads > 0 ? spec.threads : thread_count_from_env(), n_blocks));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    BatchResult res;
    res.spec = spec;
    res.acc.resize(ns * np);
    for (std::size_t j = 0; j < ns * np; ++j) {
        std::vector<Accumulator> col;
        col.reserve(n_blocks);
        for (long b = 0; b < n_blocks; ++b) col.push_back(block_acc[b][j]);
        res.acc[j] = merge_in_order(col);
    }
    for (long r : block_resamples) res.resamples += r;
    return res;
}

inline std::pair<MetricResult, MetricResult> estimate_coverage(const SystemParameters& p, const Thresholds& th,
                                                               Scenario sc, long n_trials, std::uint64_t master_seed) {
    BatchSpec spec{{sc}, {p.power.P_b}, n_trials, master_seed};
    const BatchResult r = run_batch(p, th, spec);
    return {r.coverage_t(0, 0), r.coverage_c(0, 0)};
}

inline std::pair<MetricResult, MetricResult> estimate_ergodic(const SystemParameters& p, const Thresholds& th,
                                                              Scenario sc, long n_trials, std::uint64_t master_seed) {
    BatchSpec spec{{sc}, {p.power.P_b}, n_trials, master_seed};
    const BatchResult r = run_batch(p, th, spec);
    return {r.rate_t(0, 0), r.rate_c(0, 0)};
}

} // namespace risnoma::sim
