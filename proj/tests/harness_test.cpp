#include "risnoma/harness/config.hpp"
#include "risnoma/harness/sweep.hpp"
#include "risnoma/harness/validate.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <gtest/gtest.h>

namespace risnoma::harness {
namespace {

int error_line(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.line();
    }
    return -1;
}

std::string error_field(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.field();
    }
    return "";
}

TEST(Config, DefaultsResolve) {
    const Config c = config_preset("paper-defaults");
    const auto& p = c.params;
    EXPECT_DOUBLE_EQ(p.spatial.lambda_b, 1.0 / (300.0 * 300.0 * std::numbers::pi));
    EXPECT_DOUBLE_EQ(p.spatial.R_L, 25.0);
    EXPECT_DOUBLE_EQ(p.spatial.r_c, 50.0);
    EXPECT_DOUBLE_EQ(p.spatial.sim_radius, 9000.0);
    EXPECT_DOUBLE_EQ(p.channel.L, 0.75);
    EXPECT_DOUBLE_EQ(p.channel.alpha_t, 2.4);
    EXPECT_DOUBLE_EQ(p.channel.alpha_c, 4.0);
    EXPECT_DOUBLE_EQ(p.channel.C, 1e-3);
    EXPECT_EQ(p.channel.m_t, 4);
    EXPECT_DOUBLE_EQ(p.power.a_c, 0.6);
    EXPECT_DOUBLE_EQ(p.power.a_t, 0.4);
    EXPECT_DOUBLE_EQ(p.power.P_b, 0.01);
    // thermal floor at 10 MHz with a 10 dB noise figure: -90 dBm
    EXPECT_NEAR(p.power.sigma2, 1e-12, 1e-24);
    EXPECT_DOUBLE_EQ(c.thresholds.gamma_t_th, 0.01);
    EXPECT_TRUE(c.series.empty());
}

TEST(Config, ParsesSectionsAndUnits) {
    const Config c = parse_config("[power]\nP_b_dbm = 20\nnoise_dbm = -100\n[channel]\nC_db = -20\nf_c_hz = 3e8\n"
                                  "[spatial]\nlambda_b_per_m2 = 1e-6\n[model]\nris_intercept = angle_average\n");
    EXPECT_DOUBLE_EQ(c.params.power.P_b, 0.1);
    EXPECT_NEAR(c.params.power.sigma2, 1e-13, 1e-25);
    EXPECT_NEAR(c.params.channel.C, 1e-2, 1e-15);
    EXPECT_NEAR(c.params.channel.k, 2.0 * std::numbers::pi, 1e-12);
    EXPECT_NEAR(c.params.spatial.sim_radius, 30.0 / std::sqrt(std::numbers::pi * 1e-6), 1e-6);
    EXPECT_EQ(c.params.options.intercept, InterceptModel::angle_average);
}

TEST(Config, ErrorsCarryLineAndField) {
    EXPECT_EQ(error_line("[channel]\nL_m = 1\nbogus = 2\n"), 3);
    EXPECT_EQ(error_field("[channel]\nL_m = 1\nbogus = 2\n"), "channel.bogus");
    EXPECT_EQ(error_line("; comment\n\n[power]\nP_b_dbm = ten\n"), 4);
    EXPECT_EQ(error_line("[model]\nsic_channel = guess\n"), 2);
    EXPECT_EQ(error_field("[nowhere]\nx = 1\n"), "nowhere");
    EXPECT_EQ(error_line("[power\n"), 1);
}

TEST(Config, RejectsInvertedPowerSplit) {
    try {
        parse_config("[power]\na_c = 0.4\na_t = 0.6\n");
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("a_c > a_t"), std::string::npos);
    }
}

TEST(Config, SweepValidation) {
    EXPECT_EQ(error_field("[sweep]\ngrid =\n"), "sweep.grid");
    EXPECT_EQ(error_field("[sweep]\ngrid = 0, 5, 3\n"), "sweep.grid");
    EXPECT_EQ(error_field("[sweep]\ngrid = 0, 5\nscenarios =\n"), "sweep.scenarios");
    EXPECT_EQ(error_field("[sweep]\ngrid = 0, 5\nbackends = simulated\nn_trials = 100\n"), "sweep.n_trials");
    EXPECT_NO_THROW(parse_config("[sweep]\ngrid = 15, 10, 5\n"));
}

TEST(Config, MissingFile) {
    EXPECT_THROW(load_config("/nonexistent/risnoma.ini"), NotFoundError);
    EXPECT_THROW(config_preset("fig99"), NotFoundError);
}

TEST(Config, PresetsAreWellFormed) {
    for (const auto& name : preset_names()) {
        const Config c = config_preset(name);
        for (const auto& s : c.series) {
            EXPECT_NO_THROW(s.spec.validate()) << name << " " << s.name;
            Config copy = c;
            EXPECT_NO_THROW(apply_overrides(copy, s.overrides)) << name << " " << s.name;
        }
    }
    EXPECT_EQ(config_preset("fig3").series.size(), 2u);
    EXPECT_EQ(config_preset("fig5").series.size(), 6u);
}

constexpr const char* kTinySweep = "[sweep]\naxis = snr_dbm\ngrid = 0, 10\nscenarios = ris_noma\nbackends = analytic\n"
                                   "metrics = coverage_t, coverage_c, rate_c\n";

constexpr const char* kTinySweepCsv =
    "series,scenario,backend,metric,axis,axis_value,estimate,half_width,n_trials,seed,status\n"
    "main,ris_noma,analytic,coverage_t,snr_dbm,0,0.293843699,,,,ok\n"
    "main,ris_noma,analytic,coverage_c,snr_dbm,0,0.999095993,,,,ok\n"
    "main,ris_noma,analytic,rate_c,snr_dbm,0,0.136733561,,,,ok\n"
    "main,ris_noma,analytic,coverage_t,snr_dbm,10,0.730559335,,,,ok\n"
    "main,ris_noma,analytic,coverage_c,snr_dbm,10,0.9999998,,,,ok\n"
    "main,ris_noma,analytic,rate_c,snr_dbm,10,0.649978334,,,,ok\n";

TEST(Sweep, GoldenAnalyticCsv) {
    const Config c = parse_config(kTinySweep);
    EXPECT_EQ(run_sweep(c, SweepOptions{1, false}), kTinySweepCsv);
    EXPECT_EQ(run_sweep(c, SweepOptions{3, false}), kTinySweepCsv);
}

TEST(Sweep, NoSeriesIsAnError) { EXPECT_THROW(run_sweep(default_config()), ConfigError); }

TEST(Sweep, InvalidGridPointBecomesErrorRow) {
    Config c = parse_config("[sweep]\naxis = threshold\ngrid = 0.1, 2\n");
    const std::string out = run_sweep(c, SweepOptions{1, false});
    EXPECT_NE(out.find("threshold,0.1,"), std::string::npos);
    EXPECT_NE(out.find("threshold,2,,,,,error"), std::string::npos);
    EXPECT_NE(out.find("# note series=main"), std::string::npos);
}

TEST(Sweep, SimulatedRowsDeterministicAcrossThreads) {
    Config c = parse_config("[sweep]\ngrid = 0, 10\nbackends = simulated\nscenarios = ris_noma, ris_oma\n"
                            "metrics = coverage_t, rate_c\nn_trials = 10000\nmaster_seed = 3\n");
    const std::string a = run_sweep(c, SweepOptions{1, false});
    EXPECT_EQ(a, run_sweep(c, SweepOptions{4, false}));
    EXPECT_NE(a.find(",10000,3,ok"), std::string::npos);
}

TEST(Sweep, LengthPresetIsMonotone) {
    Config c = config_preset("fig6");
    c.series.resize(1);
    const auto rows = run_series(c, c.series.front(), SweepOptions{1, false});
    ASSERT_EQ(rows.size(), 10u);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        ASSERT_TRUE(rows[i].estimate.has_value());
        EXPECT_GE(*rows[i].estimate, *rows[i - 1].estimate) << rows[i].axis_value;
    }
}

TEST(Sweep, FormatValueIsShortAndExact) {
    EXPECT_EQ(format_value(0.1), "0.1");
    EXPECT_EQ(format_value(1e-12), "1e-12");
    EXPECT_EQ(format_value(123456789.0), "123456789");
    EXPECT_EQ(round_trip_text(1.0 / 3.0), "0.3333333333333333");
}

TEST(Validate, StrictProfileAssertsAlpha2ClosedForm) {
    ValidateOptions opt;
    opt.criteria = {5};
    opt.determinism = false;
    const Report relaxed = run_validation(default_config(), opt);
    opt.profile = Profile::strict;
    const Report strict = run_validation(default_config(), opt);
    bool reported = false, failed = false;
    for (const auto* c : relaxed.of(5))
        if (c->name.find("alpha2 coverage") != std::string::npos) reported = reported || c->status == "reported";
    for (const auto* c : strict.of(5))
        if (c->name.find("alpha2 coverage") != std::string::npos) failed = failed || !c->ok();
    EXPECT_TRUE(reported);
    EXPECT_TRUE(failed);
    EXPECT_FALSE(strict.criterion_ok(5));
}

TEST(Validate, SmallRunsAreFlaggedUnderpowered) {
    ValidateOptions opt;
    opt.criteria = {2};
    opt.n_trials = 1000;
    opt.determinism = false;
    const Report r = run_validation(default_config(), opt);
    ASSERT_FALSE(r.checks.empty());
    for (const auto& c : r.checks) {
        EXPECT_EQ(c.status, "underpowered") << c.name;
        EXPECT_FALSE(c.asserted);
    }
    const std::string csv = report_csv(r);
    EXPECT_EQ(csv.rfind(kReportHeader, 0), 0u);
    EXPECT_NE(csv.find("# overall="), std::string::npos);
}

TEST(Validate, ProfileNames) {
    EXPECT_EQ(parse_profile("default"), Profile::default_profile);
    EXPECT_EQ(parse_profile("strict"), Profile::strict);
    EXPECT_THROW(parse_profile("lenient"), ConfigError);
}

} // namespace
} // namespace risnoma::harness
