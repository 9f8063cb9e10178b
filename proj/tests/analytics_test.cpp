#include "risnoma/analytics.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include "test_support.hpp"

namespace risnoma {
namespace {

using analytics::Diagnostics;
using boost::math::quadrature::gauss_kronrod;
using test::relative_error;

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

SystemParameters rayleigh() {
    SystemParameters s;
    s.channel.m_t = s.channel.m_c = 1;
    return s;
}

// Rayleigh PGFL factor from its radial integral 1 + 2 int_1^inf s t^-a / (1 + s t^-a) t dt,
// with v = t^(2-a) to remove the slow tail.
double rayleigh_factor(double alpha, double s) {
    const double e = alpha / (alpha - 2.0);
    auto f = [&](double v) { return s / (1.0 + s * std::pow(v, e)); };
    return 1.0 + 2.0 / (alpha - 2.0) * gauss_kronrod<double, 61>::integrate(f, 0.0, 1.0, 15, 1e-14);
}

// Rayleigh typical-user coverage as a plain double integral over the BS-RIS
// distance x and the RIS-user distance y.
double rayleigh_typical_oracle(const SystemParameters& s, double ups) {
    const double K = ris_intercept(s.channel, s.options.intercept);
    const double b1 = ups * s.power.sigma2 / (s.power.P_b * K);
    const double lam = s.spatial.lambda_b;
    const double F = rayleigh_factor(s.channel.alpha_t, s.channel.rho_t * ups);
    const double R = s.spatial.R_L;
    const double a = s.channel.alpha_t;
    auto outer = [&](double x) {
        auto inner = [&](double y) { return 2.0 * y / (R * R) * std::exp(-b1 * std::pow(x * y, a)); };
        const double e = gauss_kronrod<double, 31>::integrate(inner, 0.0, R, 15, 1e-12);
        return 2.0 * kPi * lam * x * std::exp(-kPi * lam * F * x * x) * e;
    };
    return gauss_kronrod<double, 61>::integrate(outer, 0.0, kInf, 15, 1e-11);
}

TEST(InterferenceFactor, MatchesRadialIntegral) {
    Diagnostics d;
    for (double alpha : {2.4, 3.0, 4.0})
        for (double s : {0.01, 1.0, 30.0})
            EXPECT_LT(relative_error(analytics::interference_factor(alpha, 1, s, d), rayleigh_factor(alpha, s)), 1e-9)
                << alpha << " " << s;
    EXPECT_EQ(analytics::interference_factor(2.4, 4, 0.0, d), 1.0);
}

TEST(Laplace, UnitAtOriginAndVoidNetwork) {
    SystemParameters s;
    EXPECT_EQ(analytics::laplace_connected(0.0, s), 1.0);
    EXPECT_EQ(analytics::laplace_typical_ris(0.0, 100.0, 10.0, s), 1.0);
    s.spatial.lambda_b = 1e-30;
    EXPECT_NEAR(analytics::laplace_connected(1e12, s), 1.0, 1e-15);
    EXPECT_NEAR(analytics::laplace_typical_ris(1e12, 100.0, 10.0, s), 1.0, 1e-15);
}

TEST(Laplace, MonotoneAndLogConvex) {
    const SystemParameters s;
    const double unit = 1.0 / (s.power.P_b * s.channel.C * std::pow(s.spatial.r_c, -s.channel.alpha_c));
    double prev = 1.0;
    for (int i = -3; i <= 3; ++i) {
        const double x = unit * std::pow(10.0, i);
        const double l0 = std::log(analytics::laplace_connected(0.5 * x, s));
        const double l1 = std::log(analytics::laplace_connected(x, s));
        const double l2 = std::log(analytics::laplace_connected(1.5 * x, s));
        EXPECT_LT(std::exp(l1), prev);
        EXPECT_GE(l0 + l2 - 2.0 * l1, -1e-12);
        prev = std::exp(l1);
    }
    EXPECT_THROW(analytics::laplace_connected(-1.0, s), DomainError);
    EXPECT_THROW(analytics::laplace_typical_ris(1.0, 0.0, 1.0, s), DomainError);
}

TEST(CoverageTypical, MatchesDoubleIntegralRayleigh) {
    for (double rho : {0.0, 0.5, 1.0})
        for (double g : {0.01, 0.1, 1.0}) {
            SystemParameters s = rayleigh();
            s.channel.rho_t = rho;
            Thresholds th;
            th.gamma_t_th = g;
            const double ups = analytics::upsilon(th, s.power);
            EXPECT_LT(relative_error(analytics::coverage_typical(s, th).value, rayleigh_typical_oracle(s, ups)), 1e-7)
                << rho << " " << g;
        }
}

TEST(CoverageTypical, MonotoneInThresholdsAndNoise) {
    const SystemParameters s;
    double prev = 1.0;
    for (double g : {1e-3, 1e-2, 0.1, 1.0, 10.0}) {
        Thresholds th;
        th.gamma_t_th = g;
        const double v = analytics::coverage_typical(s, th).value;
        EXPECT_LE(v, prev) << g;
        prev = v;
    }
    prev = 1.0;
    for (double n2 : {1e-15, 1e-13, 1e-12, 1e-11, 1e-10}) {
        SystemParameters q = s;
        q.power.sigma2 = n2;
        const double v = analytics::coverage_typical(q, Thresholds{}).value;
        EXPECT_LE(v, prev) << n2;
        prev = v;
    }
}

TEST(CoverageTypical, InfeasibleSic) {
    const SystemParameters s;
    Thresholds th;
    th.gamma_sic_th = s.power.a_c / s.power.a_t;
    const auto r = analytics::coverage_typical(s, th);
    EXPECT_TRUE(r.diag.infeasible);
    EXPECT_EQ(r.value, 0.0);
}

TEST(CoverageConnected, MatchesClosedFormRayleigh) {
    SystemParameters s = rayleigh();
    for (double g : {0.01, 0.3, 1.0}) {
        Thresholds th;
        th.gamma_c_th = g;
        const double den = s.power.a_c - s.power.a_t * g;
        const double r_c = s.spatial.r_c;
        const double want = std::exp(-kPi * s.spatial.lambda_b * r_c * r_c * (rayleigh_factor(4.0, g / den) - 1.0) -
                                     g * s.power.sigma2 * std::pow(r_c, 4.0) / (den * s.power.P_b * s.channel.C));
        EXPECT_LT(relative_error(analytics::coverage_connected(s, th).value, want), 1e-9) << g;
    }
}

TEST(CoverageConnected, Properties) {
    const SystemParameters base;
    double prev = 1.0;
    for (double lam_scale : {0.1, 1.0, 10.0}) {
        SystemParameters s = base;
        s.spatial.lambda_b *= lam_scale;
        const double v = analytics::coverage_connected(s, Thresholds{}).value;
        EXPECT_LE(v, prev);
        prev = v;
    }
    Thresholds zero;
    zero.gamma_c_th = 0.0;
    EXPECT_NEAR(analytics::coverage_connected(base, zero).value, 1.0, 1e-12);
    SystemParameters far = base;
    far.spatial.r_c *= 2.0;
    EXPECT_LT(analytics::coverage_connected(far, Thresholds{}).value,
              analytics::coverage_connected(base, Thresholds{}).value);
    Thresholds over;
    over.gamma_c_th = base.power.a_c / base.power.a_t;
    EXPECT_TRUE(analytics::coverage_connected(base, over).diag.infeasible);
}

TEST(Alpha4, ChebyshevOrderConverged) {
    SystemParameters s;
    s.channel.alpha_t = 4.0;
    const Thresholds th;
    const auto a = analytics::coverage_typical_alpha4(s, th, 200, false);
    const auto b = analytics::coverage_typical_alpha4(s, th, 400, true);
    EXPECT_LE(std::abs(a.value - b.value), 1e-6);
    EXPECT_LE(b.relative_gap, 1e-3);
    SystemParameters wrong;
    EXPECT_THROW(analytics::coverage_typical_alpha4(wrong, th, 200), DomainError);
}

TEST(AsymptoticL, NoiselessValueIsLimit) {
    SystemParameters s;
    s.power.sigma2 = 0.0;
    const auto r = analytics::coverage_typical_asymptotic_L(s, Thresholds{});
    EXPECT_EQ(r.value, r.upper_limit);
    EXPECT_NEAR(analytics::coverage_typical(s, Thresholds{}).value, r.upper_limit, 1e-7);
}

TEST(AsymptoticL, LimitIndependentOfLengthAndNoise) {
    SystemParameters s;
    const double ref = analytics::coverage_typical_asymptotic_L(s, Thresholds{}).upper_limit;
    for (double L : {0.1, 10.0, 1e3}) {
        SystemParameters q = s;
        q.channel.L = L;
        q.power.sigma2 = 1e-9;
        EXPECT_LT(relative_error(analytics::coverage_typical_asymptotic_L(q, Thresholds{}).upper_limit, ref), 1e-12);
    }
    // coverage approaches the limit from below as the surface grows
    double prev = 0.0;
    for (double L : {1.0, 10.0, 100.0, 1000.0}) {
        SystemParameters q = s;
        q.channel.L = L;
        const double v = analytics::coverage_typical(q, Thresholds{}).value;
        EXPECT_GE(v, prev);
        EXPECT_LE(v, ref + 1e-9);
        prev = v;
    }
    EXPECT_LT(ref - prev, 1e-3);
}

TEST(ErgodicTypical, EqualsIntegratedCoverage) {
    const SystemParameters s;
    const Thresholds th;
    const double z0 = s.power.a_t * analytics::upsilon1(th, s.power);
    auto cov = [&](double z) {
        Thresholds q = th;
        q.gamma_t_th = z;
        return analytics::coverage_typical(s, q).value;
    };
    // coverage is flat at the SIC-limited value below z0
    auto f = [&](double z) { return cov(std::max(z, z0)) / (1.0 + z); };
    const double want = (gauss_kronrod<double, 31>::integrate(f, 0.0, z0, 10, 1e-10) +
                         gauss_kronrod<double, 61>::integrate(f, z0, kInf, 15, 1e-9)) /
                        std::numbers::ln2;
    EXPECT_LT(relative_error(analytics::ergodic_typical(s, th).value, want), 1e-3);
}

TEST(ErgodicConnected, ChebyshevAgreesWithPanels) {
    const SystemParameters s;
    const double cheb = analytics::ergodic_connected(s, Thresholds{}, 400).value;
    EXPECT_LT(relative_error(cheb, analytics::ergodic_connected_integral(s).value), 1e-4);
}

TEST(ErgodicConnected, Properties) {
    const SystemParameters base;
    double prev = kInf;
    for (double r_c : {50.0, 100.0, 200.0}) {
        SystemParameters s = base;
        s.spatial.r_c = r_c;
        const double v = analytics::ergodic_connected(s, Thresholds{}, 200).value;
        EXPECT_LT(v, prev) << r_c;
        prev = v;
    }
    // the rate is capped by log2(1 + a_c/a_t)
    EXPECT_LT(analytics::ergodic_connected(base, Thresholds{}, 200).value, std::log2(1.0 + base.power.a_c / base.power.a_t));
    SystemParameters skewed = base;
    skewed.power.a_t = 0.2;
    skewed.power.a_c = 0.8;
    EXPECT_GT(analytics::ergodic_connected(skewed, Thresholds{}, 200).value,
              analytics::ergodic_connected(base, Thresholds{}, 200).value);
    SystemParameters zero = base;
    zero.power.a_t = 0.0;
    zero.power.a_c = 1.0;
    EXPECT_EQ(analytics::ergodic_typical(zero, Thresholds{}).value, 0.0);
}

TEST(Slope, FitTopDecade) {
    const std::vector<double> grid = {1, 3, 10, 30, 100, 300};
    EXPECT_EQ(analytics::fit_slope_top_decade(grid, std::vector<double>(6, 2.5)), 0.0);
    std::vector<double> lin;
    for (double L : grid) lin.push_back(0.7 * std::log10(L) + 1.0);
    EXPECT_NEAR(analytics::fit_slope_top_decade(grid, lin), 0.7, 1e-12);
    std::vector<double> sat;
    for (double L : grid) sat.push_back(3.0 - 2.0 / (L * L));
    EXPECT_LT(std::abs(analytics::fit_slope_top_decade(grid, sat)), 0.01);
    EXPECT_THROW(analytics::fit_slope_top_decade({1, 2}, {1.0}), DomainError);
}

TEST(Slope, ErgodicRateSaturatesInLength) {
    const SystemParameters s;
    const double slope = analytics::ergodic_slope_L(s, Thresholds{}, {1, 3, 10, 30, 100, 300});
    EXPECT_LE(std::abs(slope), 0.05);
    EXPECT_THROW(analytics::ergodic_slope_L(s, Thresholds{}, {1, 2, 3, 4}), DomainError);
    EXPECT_THROW(analytics::ergodic_slope_L(s, Thresholds{}, {1, 30, 10, 300}), DomainError);
}

TEST(Alpha2, PoleAndVoidLimit) {
    SystemParameters s;
    s.channel.alpha_t = 2.0;
    const auto pole = analytics::coverage_typical_alpha2(s, Thresholds{});
    EXPECT_TRUE(pole.diag.degenerate);
    s.channel.rho_t = 0.0;
    s.spatial.lambda_b = 1e-12;
    const auto sparse = analytics::coverage_typical_alpha2(s, Thresholds{});
    EXPECT_FALSE(sparse.diag.degenerate);
    EXPECT_LT(std::abs(sparse.closed_form), 1e-6);
}

TEST(Alpha2, SingleTermWhenRayleigh) {
    SystemParameters s = rayleigh();
    s.channel.alpha_t = 2.0;
    s.channel.rho_t = 0.0;
    const Thresholds th;
    const double ups = analytics::upsilon(th, s.power);
    const double K = ris_intercept(s.channel, s.options.intercept);
    const double b1 = ups * s.power.sigma2 / (s.power.P_b * K);
    const double lam = s.spatial.lambda_b;
    const double R = s.spatial.R_L;
    const double want = kPi * lam / 2.0 * (b1 * R * R + 2.0 * kPi * lam);
    EXPECT_LT(relative_error(analytics::coverage_typical_alpha2(s, th).closed_form, want), 1e-12);
}

} // namespace
} // namespace risnoma
