#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "risnoma/channel.hpp"
#include "risnoma/detail/quadrature.hpp"
#include "risnoma/errors.hpp"
#include "risnoma/params.hpp"
#include "risnoma/specfun.hpp"

namespace risnoma::analytics {

struct Diagnostics {
    int quad_panels_max = 0;
    int quad_unconverged = 0;
    long hyp2f1_terms_max = 0;
    int clamp_events = 0;
    double pre_clamp = std::numeric_limits<double>::quiet_NaN();
    bool infeasible = false;
    bool degenerate = false;
    std::string note;

    void quad(const detail::QuadResult& q) {
        quad_panels_max = std::max(quad_panels_max, q.panels);
        if (!q.converged) ++quad_unconverged;
    }
    void merge(const Diagnostics& o) {
        quad_panels_max = std::max(quad_panels_max, o.quad_panels_max);
        quad_unconverged += o.quad_unconverged;
        hyp2f1_terms_max = std::max(hyp2f1_terms_max, o.hyp2f1_terms_max);
        clamp_events += o.clamp_events;
        infeasible = infeasible || o.infeasible;
        degenerate = degenerate || o.degenerate;
        if (!o.note.empty()) note += (note.empty() ? "" : "; ") + o.note;
    }
};

struct AnalyticResult {
    double value = 0.0;
    Diagnostics diag;
};

inline constexpr double kInnerTol = 1e-10;
inline constexpr double kOuterTol = 1e-8;

// Clamp a probability to [0,1]; excursions beyond [-0.02, 1.02] are an error
// when `strict` (they indicate a defect, not quadrature noise).
inline double clamp_probability(double pre, Diagnostics& d, bool strict) {
    d.pre_clamp = pre;
    if (pre >= 0.0 && pre <= 1.0) return pre;
    ++d.clamp_events;
    if (strict && (pre < -0.02 || pre > 1.02))
        throw NumericFailure("probability excursion outside [-0.02, 1.02]", pre, 0);
    return std::clamp(pre, 0.0, 1.0);
}

// ------------------------------------------------------------ coefficients

inline double upsilon1(const Thresholds& th, const PowerAllocation& pa) {
    const double den = pa.a_c - th.gamma_sic_th * pa.a_t;
    if (!(den > 0.0)) return std::numeric_limits<double>::infinity();
    return th.gamma_sic_th / den;
}

inline double upsilon(const Thresholds& th, const PowerAllocation& pa) {
    const double u1 = upsilon1(th, pa);
    const double u2 = pa.a_t > 0.0 ? th.gamma_t_th / pa.a_t : std::numeric_limits<double>::infinity();
    return std::max(u1, u2);
}

inline double upsilon2(const PowerAllocation& pa) { return pa.a_c / pa.a_t; }

// 2F1(-2/alpha, m; 1-2/alpha; -s): PGFL factor of a PPP shot noise with
// Gamma(m, 1/m) fading. Equal to 1 when s = 0 (no interference).
inline double interference_factor(double alpha, int m, double s, Diagnostics& d) {
    if (s == 0.0) return 1.0;
    const double a = -2.0 / alpha;
    const auto e = specfun::gauss_2f1_eval(a, m, 1.0 + a, -s);
    d.hyp2f1_terms_max = std::max(d.hyp2f1_terms_max, e.terms);
    return e.value;
}

// Per-n coefficients of the typical-user coverage kernel
//   x exp(-beta1 (x y)^alpha_t - beta2 x^2).
struct TypicalTerms {
    std::vector<double> coeff;
    std::vector<double> beta1;
    std::vector<double> beta2;
};

inline TypicalTerms typical_terms(const SystemParameters& s, double ups, Diagnostics& d) {
    const auto& ch = s.channel;
    const int m = ch.m_t;
    const double eta = specfun::alzer_eta(m);
    const double K = ris_intercept(ch, s.options.intercept);
    const double lam = s.spatial.lambda_b;
    TypicalTerms t;
    for (int n = 1; n <= m; ++n) {
        t.coeff.push_back(((n % 2) ? 1.0 : -1.0) * specfun::binomial(m, n));
        t.beta1.push_back(n * eta * ups * s.power.sigma2 / (s.power.P_b * K));
        const double arg = ch.rho_t * n * eta * ups / m;
        t.beta2.push_back(std::numbers::pi * lam * interference_factor(ch.alpha_t, m, arg, d));
    }
    return t;
}

// Laplace transforms ----------------------------------------------------

inline double laplace_connected(double s, const SystemParameters& sys) {
    if (!(s >= 0.0)) throw DomainError("laplace_connected: s must be >= 0");
    const auto& ch = sys.channel;
    const double r_c = sys.spatial.r_c;
    const double s1 = std::numbers::pi * sys.spatial.lambda_b * r_c * r_c;
    const double s2 = sys.power.P_b * ch.C / (ch.m_t * std::pow(r_c, ch.alpha_c));
    Diagnostics d;
    return std::exp(-s1 * (interference_factor(ch.alpha_c, ch.m_t, s2 * s, d) - 1.0));
}

inline double laplace_typical_ris(double s, double r_br0, double r_ru0, const SystemParameters& sys) {
    if (!(s >= 0.0)) throw DomainError("laplace_typical_ris: s must be >= 0");
    if (!(r_br0 > 0.0 && r_ru0 > 0.0)) throw DomainError("laplace_typical_ris: distances must be > 0");
    const auto& ch = sys.channel;
    const double K = ris_intercept(ch, sys.options.intercept);
    const double s3 = std::numbers::pi * sys.spatial.lambda_b * r_br0 * r_br0;
    const double s4 = sys.power.P_b * K / (ch.m_t * std::pow(r_ru0 * r_br0, ch.alpha_t));
    Diagnostics d;
    return std::exp(-s3 * (interference_factor(ch.alpha_t, ch.m_t, ch.rho_t * s * s4, d) - 1.0));
}

// Typical-user coverage -------------------------------------------------

namespace detail_ {

// E[exp(-t (y/R)^alpha)] for y with density 2y/R^2 on [0, R].
inline double ris_distance_average(double t, double alpha) {
    if (t < 1e-12) return 1.0 - 2.0 * t / (alpha + 2.0);
    const double a = 2.0 / alpha;
    return a * std::pow(t, -a) * boost::math::tgamma_lower(a, t);
}

inline double typical_integral(const SystemParameters& s, const TypicalTerms& t, Diagnostics& d) {
    const double R = s.spatial.R_L;
    const double alpha = s.channel.alpha_t;
    const double lam = s.spatial.lambda_b;
    const double Ra = std::pow(R, alpha);
    std::vector<double> parts;
    for (std::size_t k = 0; k < t.coeff.size(); ++k) {
        const double b1 = t.beta1[k];
        const double b2 = t.beta2[k];
        if (!std::isfinite(b2)) {
            parts.push_back(0.0);
            continue;
        }
        auto f = [&](double x) {
            const double g = std::exp(-b2 * x * x);
            return g == 0.0 ? 0.0 : x * g * ris_distance_average(b1 * Ra * std::pow(x, alpha), alpha);
        };
        // geometric mean of the two decay lengths
        const double scale = 1.0 / std::sqrt(std::sqrt(b2) * (std::sqrt(b2) + std::pow(b1 * Ra, 1.0 / alpha)));
        const auto q = detail::integrate_semi_infinite(f, 0.0, scale, kInnerTol, 0.0, 64, 64);
        d.quad(q);
        parts.push_back(t.coeff[k] * 2.0 * std::numbers::pi * lam * q.value);
    }
    return specfun::stable_sum(parts);
}

} // namespace detail_

// Unclamped typical-user coverage for a given effective threshold Upsilon.
inline double coverage_typical_at(const SystemParameters& s, double ups, Diagnostics& d) {
    if (!std::isfinite(ups)) return 0.0;
    return detail_::typical_integral(s, typical_terms(s, ups, d), d);
}

inline AnalyticResult coverage_typical(const SystemParameters& s, const Thresholds& th) {
    AnalyticResult r;
    const double ups = upsilon(th, s.power);
    if (!std::isfinite(ups)) {
        r.diag.infeasible = true;
        r.diag.note = "SIC infeasible: a_c <= gamma_sic_th a_t";
        r.diag.pre_clamp = 0.0;
        return r;
    }
    r.value = clamp_probability(coverage_typical_at(s, ups, r.diag), r.diag, true);
    return r;
}

struct Alpha2Report {
    double closed_form = 0.0;        // closed form as written
    double reference_integral = 0.0; // general coverage integral at alpha_t = 2
    double gap = 0.0;
    Diagnostics diag;
};

inline void require_alpha(const SystemParameters& s, double alpha, const char* who) {
    if (std::abs(s.channel.alpha_t - alpha) > 1e-12)
        throw DomainError(std::string(who) + ": requires alpha_t = " + std::to_string(alpha));
}

inline Alpha2Report coverage_typical_alpha2(const SystemParameters& s, const Thresholds& th) {
    require_alpha(s, 2.0, "coverage_typical_alpha2");
    Alpha2Report rep;
    const double ups = upsilon(th, s.power);
    if (!std::isfinite(ups)) {
        rep.diag.infeasible = true;
        return rep;
    }
    TypicalTerms t;
    try {
        t = typical_terms(s, ups, rep.diag);
    } catch (const DomainError&) {
        // 2F1(-1, m; 0; -s) has a pole: interference factor diverges.
        rep.diag.degenerate = true;
        rep.diag.note = "alpha_t = 2 with rho_t > 0: interference factor has a pole";
        rep.closed_form = std::numeric_limits<double>::infinity();
        rep.reference_integral = 0.0;
        rep.gap = std::numeric_limits<double>::infinity();
        return rep;
    }
    const double R = s.spatial.R_L;
    const double lam = s.spatial.lambda_b;
    std::vector<double> parts;
    for (std::size_t k = 0; k < t.coeff.size(); ++k)
        parts.push_back(t.coeff[k] * (t.beta1[k] * R * R + 2.0 * t.beta2[k]));
    rep.closed_form = std::numbers::pi * lam / 2.0 * specfun::stable_sum(parts);
    rep.reference_integral = detail_::typical_integral(s, t, rep.diag);
    rep.gap = rep.closed_form - rep.reference_integral;
    return rep;
}

namespace detail_ {

// Chebyshev-Gauss evaluation of the alpha_t = 4 coverage for one Upsilon.
inline double alpha4_sum(const SystemParameters& s, const TypicalTerms& t, const specfun::QuadratureRule& rule) {
    const double R = s.spatial.R_L;
    const double lam = s.spatial.lambda_b;
    const double pi32 = std::pow(std::numbers::pi, 1.5);
    std::vector<double> parts;
    for (std::size_t k = 0; k < t.coeff.size(); ++k) {
        const double b1 = t.beta1[k];
        const double b2 = t.beta2[k];
        double acc = 0.0;
        if (!std::isfinite(b2)) {
            parts.push_back(0.0);
            continue;
        }
        for (int i = 0; i < rule.order; ++i) {
            const double w = rule.nodes[i];
            const double xi = 0.5 * R * (w + 1.0);
            const double jac = rule.weights[i] * std::sqrt(1.0 - w * w);
            double g;
            if (b1 > 0.0) {
                const double sb1 = std::sqrt(b1);
                g = pi32 * lam / (2.0 * R * sb1 * xi) * specfun::erfcx(b2 / (2.0 * sb1 * xi * xi));
            } else {
                // beta1 -> 0 limit of the same expression
                g = std::numbers::pi * lam * xi / (R * b2);
            }
            acc += jac * g;
        }
        parts.push_back(t.coeff[k] * acc);
    }
    return specfun::stable_sum(parts);
}

} // namespace detail_

struct Alpha4Report {
    double value = 0.0;              // Chebyshev-Gauss closed form (clamped)
    double reference_integral = 0.0; // general coverage integral at alpha_t = 4
    double relative_gap = 0.0;
    Diagnostics diag;
};

inline Alpha4Report coverage_typical_alpha4(const SystemParameters& s, const Thresholds& th, int K,
                                            bool with_reference = true) {
    require_alpha(s, 4.0, "coverage_typical_alpha4");
    Alpha4Report rep;
    const double ups = upsilon(th, s.power);
    if (!std::isfinite(ups)) {
        rep.diag.infeasible = true;
        return rep;
    }
    const TypicalTerms t = typical_terms(s, ups, rep.diag);
    const auto rule = specfun::chebyshev_gauss(K);
    rep.value = clamp_probability(detail_::alpha4_sum(s, t, rule), rep.diag, true);
    if (with_reference) {
        rep.reference_integral = detail_::typical_integral(s, t, rep.diag);
        rep.relative_gap = std::abs(rep.value - rep.reference_integral) / std::abs(rep.reference_integral);
    }
    return rep;
}

struct AsymptoticL {
    double value = 0.0;       // two-term large-L expansion
    double upper_limit = 0.0; // L -> infinity limit
    Diagnostics diag;
};

inline AsymptoticL coverage_typical_asymptotic_L(const SystemParameters& s, const Thresholds& th) {
    AsymptoticL r;
    const double ups = upsilon(th, s.power);
    if (!std::isfinite(ups)) {
        r.diag.infeasible = true;
        return r;
    }
    const TypicalTerms t = typical_terms(s, ups, r.diag);
    const double lam = s.spatial.lambda_b;
    const double R = s.spatial.R_L;
    const double a = s.channel.alpha_t;
    std::vector<double> lim, corr;
    for (std::size_t k = 0; k < t.coeff.size(); ++k) {
        lim.push_back(t.coeff[k] * std::numbers::pi * lam / t.beta2[k]);
        corr.push_back(t.coeff[k] * t.beta1[k] / std::pow(t.beta2[k], (a + 2.0) / 2.0));
    }
    const double limit = specfun::stable_sum(lim);
    const double second = 2.0 * std::numbers::pi * lam * std::pow(R, a) / (2.0 + a) * std::tgamma((a + 2.0) / 2.0) *
                          specfun::stable_sum(corr);
    Diagnostics dv, dl;
    r.value = clamp_probability(limit - second, dv, false);
    r.upper_limit = clamp_probability(limit, dl, false);
    r.diag.pre_clamp = limit - second;
    r.diag.clamp_events = dv.clamp_events + dl.clamp_events;
    return r;
}

// Connected-user coverage -------------------------------------------------

inline double coverage_connected_at(const SystemParameters& s, double gamma, Diagnostics& d) {
    const auto& ch = s.channel;
    const auto& pa = s.power;
    const double den = pa.a_c - pa.a_t * gamma;
    if (!(den > 0.0)) return 0.0;
    const int m = ch.m_c;
    const double eta = specfun::alzer_eta(m);
    const double r_c = s.spatial.r_c;
    const double lam = s.spatial.lambda_b;
    std::vector<double> parts;
    for (int n = 1; n <= m; ++n) {
        const double coeff = ((n % 2) ? 1.0 : -1.0) * specfun::binomial(m, n);
        const double arg = n * eta * gamma / (ch.m_t * den);
        const double mu1 = std::numbers::pi * lam * (interference_factor(ch.alpha_c, ch.m_t, arg, d) - 1.0);
        const double mu2 = n * eta * gamma * pa.sigma2 / (den * pa.P_b * ch.C);
        parts.push_back(coeff * std::exp(-mu1 * r_c * r_c - mu2 * std::pow(r_c, ch.alpha_c)));
    }
    return specfun::stable_sum(parts);
}

inline AnalyticResult coverage_connected(const SystemParameters& s, const Thresholds& th) {
    AnalyticResult r;
    if (!(s.power.a_c - s.power.a_t * th.gamma_c_th > 0.0)) {
        r.diag.infeasible = true;
        r.diag.note = "gamma_c_th >= a_c/a_t";
        r.diag.pre_clamp = 0.0;
        return r;
    }
    r.value = clamp_probability(coverage_connected_at(s, th.gamma_c_th, r.diag), r.diag, true);
    return r;
}

// Ergodic rates -------------------------------------------------------------

inline AnalyticResult ergodic_typical(const SystemParameters& s, const Thresholds& th) {
    AnalyticResult r;
    const double u1 = upsilon1(th, s.power);
    if (!std::isfinite(u1)) {
        r.diag.infeasible = true;
        r.diag.note = "SIC infeasible";
        return r;
    }
    const double a_t = s.power.a_t;
    if (!(a_t > 0.0)) return r;
    const double z0 = a_t * u1;
    double first = 0.0;
    if (z0 > 0.0) first = std::clamp(coverage_typical_at(s, u1, r.diag), 0.0, 1.0) * std::log1p(z0);
    auto f = [&](double z) { return std::clamp(coverage_typical_at(s, z / a_t, r.diag), 0.0, 1.0) / (1.0 + z); };
    double second = 0.0;
    double v0 = z0;
    if (z0 < 1.0) {
        const auto q = detail::integrate_panels(f, z0, 1.0, kOuterTol, 1e-12, 64, 64);
        r.diag.quad(q);
        second += q.value;
        v0 = 1.0;
    }
    // tail decays like a power of z: integrate in log z
    const double lv0 = std::log(v0);
    auto g = [&](double v) {
        const double z = std::exp(v);
        if (!std::isfinite(z)) return 0.0;
        const double fz = f(z);
        return fz == 0.0 ? 0.0 : fz * z;
    };
    const auto q = detail::integrate_semi_infinite(g, lv0, 3.0, kOuterTol, 1e-12, 64, 64);
    r.diag.quad(q);
    second += q.value;
    r.value = (first + second) / std::numbers::ln2;
    return r;
}

// Alpha-2 rate closed form as written (Chebyshev orders J, V).
struct ErgodicAlpha2Report {
    double closed_form = 0.0;
    double reference_integral = 0.0;
    double gap = 0.0;
    Diagnostics diag;
};

inline ErgodicAlpha2Report ergodic_typical_alpha2(const SystemParameters& s, const Thresholds& th, int J, int V,
                                                  bool with_reference = true) {
    require_alpha(s, 2.0, "ergodic_typical_alpha2");
    ErgodicAlpha2Report rep;
    const double u1 = upsilon1(th, s.power);
    if (!std::isfinite(u1)) {
        rep.diag.infeasible = true;
        return rep;
    }
    const double a_t = s.power.a_t;
    const double z0 = a_t * u1;
    const double R = s.spatial.R_L;
    const double lam = s.spatial.lambda_b;
    const int m = s.channel.m_t;
    try {
        const auto rj = specfun::chebyshev_gauss(J);
        const auto rv = specfun::chebyshev_gauss(V);
        const TypicalTerms t1 = typical_terms(s, u1, rep.diag);
        std::vector<double> parts;
        for (int n = 1; n <= m; ++n) {
            const std::size_t k = n - 1;
            double sj = 0.0;
            for (int j = 0; j < J; ++j) {
                const double w = rj.nodes[j];
                const double xi = 0.5 * z0 * (w + 1.0);
                sj += rj.weights[j] * std::sqrt(1.0 - w * w) * z0 * (t1.beta1[k] * R * R + 2.0 * t1.beta2[k]) /
                      (2.0 * (1.0 + xi));
            }
            double sv = 0.0;
            for (int v = 0; v < V; ++v) {
                const double w = rv.nodes[v];
                const double xi = 2.0 * z0 / (w + 1.0);
                const TypicalTerms tv = typical_terms(s, xi / a_t, rep.diag);
                sv += rv.weights[v] * std::sqrt(1.0 - w * w) * 2.0 * z0 * (tv.beta1[k] * R * R + 2.0 * tv.beta2[k]) /
                      ((w + 1.0) * (w + 1.0) * (1.0 + xi));
            }
            parts.push_back(t1.coeff[k] * (sj + sv));
        }
        rep.closed_form = std::numbers::pi * lam / (2.0 * std::numbers::ln2) * specfun::stable_sum(parts);
    } catch (const DomainError&) {
        rep.diag.degenerate = true;
        rep.diag.note = "alpha_t = 2 with rho_t > 0: interference factor has a pole";
        rep.closed_form = std::numeric_limits<double>::infinity();
        rep.reference_integral = 0.0;
        rep.gap = std::numeric_limits<double>::infinity();
        return rep;
    }
    if (with_reference) {
        const auto ref = ergodic_typical(s, th);
        rep.reference_integral = ref.value;
        rep.diag.merge(ref.diag);
    }
    rep.gap = rep.closed_form - rep.reference_integral;
    return rep;
}

struct ErgodicAlpha4Report {
    double value = 0.0;
    double reference_integral = 0.0;
    double relative_gap = 0.0;
    Diagnostics diag;
};

inline ErgodicAlpha4Report ergodic_typical_alpha4(const SystemParameters& s, const Thresholds& th, int K, int J,
                                                  int V, bool with_reference = true) {
    require_alpha(s, 4.0, "ergodic_typical_alpha4");
    ErgodicAlpha4Report rep;
    const double u1 = upsilon1(th, s.power);
    if (!std::isfinite(u1)) {
        rep.diag.infeasible = true;
        return rep;
    }
    const double a_t = s.power.a_t;
    const double z0 = a_t * u1;
    const auto rk = specfun::chebyshev_gauss(K);
    const auto rj = specfun::chebyshev_gauss(J);
    const auto rv = specfun::chebyshev_gauss(V);
    // first segment: coverage frozen at Upsilon_1, times integral of 1/(1+z) on [0, z0]
    double seg1 = 0.0;
    if (z0 > 0.0) {
        double sj = 0.0;
        for (int j = 0; j < J; ++j) {
            const double w = rj.nodes[j];
            sj += rj.weights[j] * std::sqrt(1.0 - w * w) / (1.0 + 0.5 * z0 * (w + 1.0));
        }
        seg1 = detail_::alpha4_sum(s, typical_terms(s, u1, rep.diag), rk) * 0.5 * z0 * sj;
    }
    // second segment: z = 2 z0/(w+1) maps (-1, 1] onto [z0, inf)
    double seg2 = 0.0;
    if (z0 > 0.0) {
        for (int v = 0; v < V; ++v) {
            const double w = rv.nodes[v];
            const double xi = 2.0 * z0 / (w + 1.0);
            const double p = detail_::alpha4_sum(s, typical_terms(s, xi / a_t, rep.diag), rk);
            seg2 += rv.weights[v] * std::sqrt(1.0 - w * w) * 2.0 * z0 / ((w + 1.0) * (w + 1.0) * (1.0 + xi)) * p;
        }
    } else {
        rep.diag.note = "gamma_sic_th = 0: substitution undefined, value set to 0";
    }
    rep.value = (seg1 + seg2) / std::numbers::ln2;
    if (with_reference) {
        const auto ref = ergodic_typical(s, th);
        rep.reference_integral = ref.value;
        rep.diag.merge(ref.diag);
        rep.relative_gap = std::abs(rep.value - ref.value) / std::abs(ref.value);
    }
    return rep;
}

inline AnalyticResult ergodic_connected(const SystemParameters& s, const Thresholds& /*th*/, int W) {
    AnalyticResult r;
    const double u2 = upsilon2(s.power);
    const auto rule = specfun::chebyshev_gauss(W);
    double acc = 0.0;
    for (int w = 0; w < W; ++w) {
        const double node = rule.nodes[w];
        const double xi = 0.5 * u2 * (node + 1.0);
        const double p = coverage_connected_at(s, xi, r.diag);
        acc += rule.weights[w] * std::sqrt(1.0 - node * node) * u2 / (2.0 * (1.0 + xi)) * p;
    }
    r.value = acc / std::numbers::ln2;
    return r;
}

// Same quantity by adaptive panels, used as an internal cross-check.
inline AnalyticResult ergodic_connected_integral(const SystemParameters& s) {
    AnalyticResult r;
    const double u2 = upsilon2(s.power);
    auto f = [&](double z) { return coverage_connected_at(s, z, r.diag) / (1.0 + z); };
    const auto q = detail::integrate_panels(f, 0.0, u2, 1e-10, 0.0, 64, 256);
    r.diag.quad(q);
    r.value = q.value / std::numbers::ln2;
    return r;
}

// Least-squares slope of `values` against log10(L) using points in the top
// decade of the grid.
inline double fit_slope_top_decade(const std::vector<double>& L_grid, const std::vector<double>& values) {
    if (L_grid.size() != values.size() || L_grid.size() < 2) throw DomainError("fit_slope: size mismatch");
    const double lmax = L_grid.back();
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < L_grid.size(); ++i) {
        if (L_grid[i] >= lmax / 10.0 * (1.0 - 1e-12)) {
            xs.push_back(std::log10(L_grid[i]));
            ys.push_back(values[i]);
        }
    }
    if (xs.size() < 2) throw DomainError("fit_slope: need two points in the top decade");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= xs.size();
    my /= ys.size();
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    return sxy / sxx;
}

inline double ergodic_slope_L(const SystemParameters& s, const Thresholds& th, const std::vector<double>& L_grid) {
    if (L_grid.size() < 4) throw DomainError("ergodic_slope_L: need >= 4 grid points");
    for (std::size_t i = 1; i < L_grid.size(); ++i)
        if (!(L_grid[i] > L_grid[i - 1])) throw DomainError("ergodic_slope_L: grid must be increasing");
    if (!(L_grid.back() / L_grid.front() >= 100.0 * (1.0 - 1e-12)))
        throw DomainError("ergodic_slope_L: grid must span two decades");
    std::vector<double> vals;
    for (double L : L_grid) {
        SystemParameters p = s;
        p.channel.L = L;
        vals.push_back(ergodic_typical(p, th).value);
    }
    return fit_slope_top_decade(L_grid, vals);
}

} // namespace risnoma::analytics
