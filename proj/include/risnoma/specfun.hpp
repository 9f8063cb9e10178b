#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "risnoma/errors.hpp"

namespace risnoma::specfun {

struct QuadratureRule {
    int order = 0;
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Gauss-Chebyshev rule of the first kind: nodes cos((2i-1)pi/2K), weights pi/K.
inline QuadratureRule chebyshev_gauss(int order) {
    if (order < 1) throw DomainError("chebyshev_gauss: order must be >= 1");
    QuadratureRule r;
    r.order = order;
    r.nodes.resize(order);
    r.weights.assign(order, std::numbers::pi / order);
    for (int i = 1; i <= order; ++i) {
        double v = std::cos((2.0 * i - 1.0) * std::numbers::pi / (2.0 * order));
        // cos(pi/2) is not exactly zero in floating point
        if (2 * i - 1 == order) v = 0.0;
        r.nodes[i - 1] = v;
    }
    return r;
}

// Neumaier compensated accumulator.
class KahanSum {
public:
    void add(double v) {
        double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// Sums in descending magnitude with compensation.
inline double stable_sum(std::vector<double> terms) {
    std::sort(terms.begin(), terms.end(), [](double a, double b) { return std::abs(a) > std::abs(b); });
    KahanSum s;
    for (double t : terms) s.add(t);
    return s.value();
}

inline double log_factorial(int n) {
    if (n < 0) throw DomainError("log_factorial: negative argument");
    return std::lgamma(static_cast<double>(n) + 1.0);
}

inline double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    return std::round(std::exp(log_factorial(n) - log_factorial(k) - log_factorial(n - k)));
}

inline double alzer_eta(int m) {
    if (m < 1) throw DomainError("alzer_eta: m must be >= 1");
    return m * std::exp(-log_factorial(m) / m);
}

inline double gamma_cdf_alzer_approx(double x, int m) {
    if (!(x >= 0.0)) throw DomainError("gamma_cdf_alzer_approx: x must be >= 0");
    return std::pow(-std::expm1(-x * alzer_eta(m)), m);
}

// ---------------------------------------------------------------- erfc

namespace detail {

inline constexpr double kInvSqrtPi = 0.56418958354775628695;

// erf(x) = 2/sqrt(pi) exp(-x^2) sum 2^n x^(2n+1) / (2n+1)!!, all terms positive.
inline double erf_series(double x) {
    double term = x;
    double sum = x;
    const double x2 = x * x;
    for (int n = 0; n < 500; ++n) {
        term *= 2.0 * x2 / (2.0 * n + 3.0);
        sum += term;
        if (term < 1e-17 * sum) break;
    }
    return 2.0 * kInvSqrtPi * std::exp(-x2) * sum;
}

// exp(x^2) erfc(x) for x >= 2 by continued fraction (modified Lentz).
inline double erfcx_cf(double x) {
    const double tiny = 1e-300;
    double f = x;
    double C = f;
    double D = 0.0;
    for (int n = 1; n < 5000; ++n) {
        const double a = 0.5 * n;
        D = x + a * D;
        if (D == 0.0) D = tiny;
        C = x + a / C;
        if (C == 0.0) C = tiny;
        D = 1.0 / D;
        const double delta = C * D;
        f *= delta;
        if (std::abs(delta - 1.0) < 1e-16) return kInvSqrtPi / f;
    }
    throw NumericFailure("erfcx continued fraction did not converge", kInvSqrtPi / f, 5000);
}

} // namespace detail

inline double erfc(double x) {
    if (std::isnan(x)) return x;
    if (x < 0.0) return 2.0 - erfc(-x);
    if (x < 2.0) return 1.0 - detail::erf_series(x);
    if (x > 27.3) return 0.0;
    return std::exp(-x * x) * detail::erfcx_cf(x);
}

// Scaled complement exp(x^2) erfc(x); finite for large positive x.
inline double erfcx(double x) {
    if (std::isnan(x)) return x;
    if (x < 0.0) return 2.0 * std::exp(x * x) - erfcx(-x);
    if (x < 2.0) return std::exp(x * x) * (1.0 - detail::erf_series(x));
    if (x > 1e8) return detail::kInvSqrtPi / x;
    return detail::erfcx_cf(x);
}

// ---------------------------------------------------------------- 2F1

enum class Hyp2f1Route { trivial, terminating, series, pfaff, reciprocal };

struct Hyp2f1Eval {
    double value = 1.0;
    long terms = 0;
    Hyp2f1Route route = Hyp2f1Route::trivial;
};

namespace detail {

inline constexpr long kMaxTerms = 100000;

inline bool is_nonpositive_integer(double v) {
    return v <= 0.0 && std::abs(v - std::round(v)) < 1e-12;
}

// Plain power series, |z| < 1.
inline Hyp2f1Eval hyp2f1_series(double a, double b, double c, double z) {
    KahanSum sum;
    double term = 1.0;
    sum.add(term);
    long k = 0;
    int quiet = 0;
    while (k < kMaxTerms) {
        const double ratio = (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
        term *= ratio;
        ++k;
        sum.add(term);
        if (term == 0.0) break;
        if (std::abs(term) < 1e-16 * std::abs(sum.value()) && std::abs(ratio) < 1.0) {
            if (++quiet >= 2) break;
        } else {
            quiet = 0;
        }
    }
    if (k >= kMaxTerms) throw NumericFailure("gauss_2f1: series did not converge", sum.value(), k);
    return {sum.value(), k + 1, Hyp2f1Route::series};
}

// Pfaff: (1-z)^(-b) 2F1(c-a, b; c; z/(z-1)), argument mapped into [0,1).
inline Hyp2f1Eval hyp2f1_pfaff(double a, double b, double c, double z) {
    const double w = z / (z - 1.0);
    Hyp2f1Eval inner = hyp2f1_series(c - a, b, c, w);
    return {std::pow(1.0 - z, -b) * inner.value, inner.terms, Hyp2f1Route::pfaff};
}

// Connection formula in 1/z for z < -1 (requires b - a non-integer).
inline Hyp2f1Eval hyp2f1_reciprocal(double a, double b, double c, double z) {
    const double mz = -z;
    const double iz = 1.0 / z;
    auto gamma_ratio = [](double num1, double num2, double den1, double den2) {
        // Gamma(num1)Gamma(num2)/(Gamma(den1)Gamma(den2)); reciprocal gamma at poles is zero
        auto rg = [](double v) { return is_nonpositive_integer(v) ? 0.0 : 1.0 / std::tgamma(v); };
        return std::tgamma(num1) * std::tgamma(num2) * rg(den1) * rg(den2);
    };
    Hyp2f1Eval s1{1.0, 1, Hyp2f1Route::trivial};
    Hyp2f1Eval s2{1.0, 1, Hyp2f1Route::trivial};
    const double g1 = gamma_ratio(c, b - a, b, c - a);
    const double g2 = gamma_ratio(c, a - b, a, c - b);
    if (g1 != 0.0 && !is_nonpositive_integer(1.0 - c + a)) s1 = hyp2f1_series(a, 1.0 - c + a, 1.0 - b + a, iz);
    if (g2 != 0.0 && !is_nonpositive_integer(1.0 - c + b)) s2 = hyp2f1_series(b, 1.0 - c + b, 1.0 - a + b, iz);
    const double v = g1 * std::pow(mz, -a) * s1.value + g2 * std::pow(mz, -b) * s2.value;
    return {v, s1.terms + s2.terms, Hyp2f1Route::reciprocal};
}

inline Hyp2f1Eval hyp2f1_terminating(double a, double b, double c, double z) {
    const double n = is_nonpositive_integer(a) ? -std::round(a) : -std::round(b);
    KahanSum sum;
    double term = 1.0;
    sum.add(term);
    for (long k = 0; k < static_cast<long>(n); ++k) {
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
        sum.add(term);
    }
    return {sum.value(), static_cast<long>(n) + 1, Hyp2f1Route::terminating};
}

} // namespace detail

inline constexpr double kPfaffLimit = -8.0;

// Gauss hypergeometric function on the ray z <= 0, with the evaluation route.
inline Hyp2f1Eval gauss_2f1_eval(double a, double b, double c, double z) {
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) || !std::isfinite(z))
        throw DomainError("gauss_2f1: non-finite argument");
    if (detail::is_nonpositive_integer(c)) throw DomainError("gauss_2f1: c is a non-positive integer");
    if (z > 0.0) throw DomainError("gauss_2f1: only z <= 0 is supported");
    if (z == 0.0 || a == 0.0 || b == 0.0) return {1.0, 0, Hyp2f1Route::trivial};
    if (detail::is_nonpositive_integer(a) || detail::is_nonpositive_integer(b))
        return detail::hyp2f1_terminating(a, b, c, z);
    if (z >= -0.5) return detail::hyp2f1_series(a, b, c, z);
    const double ba = b - a;
    const bool integer_gap = std::abs(ba - std::round(ba)) < 1e-12;
    if (z >= kPfaffLimit || integer_gap) return detail::hyp2f1_pfaff(a, b, c, z);
    return detail::hyp2f1_reciprocal(a, b, c, z);
}

inline double gauss_2f1(double a, double b, double c, double z) {
    return gauss_2f1_eval(a, b, c, z).value;
}

} // namespace risnoma::specfun
