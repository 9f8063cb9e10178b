#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "risnoma/detail/quadrature.hpp"
#include "risnoma/errors.hpp"
#include "risnoma/geometry.hpp"
#include "risnoma/rng.hpp"

namespace risnoma {

inline constexpr double kSpeedOfLight = 3.0e8;

inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watt_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

struct ChannelParams {
    double L = 0.75;
    double alpha_t = 2.4;
    double alpha_c = 4.0;
    double alpha_rf = 4.0;
    double C = 1e-3;
    double f_c = 1e7;
    double rho_a = 0.5;
    double rho_t = 1.0;
    int m_t = 4;
    int m_c = 4;
    double k = 2.0 * std::numbers::pi * 1e7 / kSpeedOfLight;
    double phi_0 = 0.0;

    void validate() const {
        if (!(L > 0.0)) throw DomainError("L must be > 0");
        if (!(alpha_t > 1.0)) throw DomainError("alpha_t must be > 1");
        if (!(alpha_c > 2.0)) throw DomainError("alpha_c must be > 2");
        if (!(alpha_rf > 2.0)) throw DomainError("alpha_rf must be > 2");
        if (!(C > 0.0)) throw DomainError("C must be > 0");
        if (!(f_c > 0.0)) throw DomainError("f_c must be > 0");
        if (!(rho_a > 0.0 && rho_a < 1.0)) throw DomainError("rho_a must lie in (0, 1)");
        if (!(rho_t >= 0.0 && rho_t <= 1.0)) throw DomainError("rho_t must lie in [0, 1]");
        if (m_t < 1 || m_c < 1) throw DomainError("m_t and m_c must be >= 1");
        if (!(k > 0.0)) throw DomainError("k must be > 0");
    }
};

struct PowerAllocation {
    double a_c = 0.6;
    double a_t = 0.4;
    double P_b = dbm_to_watt(10.0);
    double sigma2 = 1e-12;

    void validate() const {
        if (!(a_t > 0.0)) throw DomainError("a_t > 0 required");
        if (!(a_c > a_t)) throw DomainError("a_c > a_t required");
        if (std::abs(a_c + a_t - 1.0) > 1e-9) throw DomainError("a_c + a_t = 1 required");
        if (!(P_b > 0.0)) throw DomainError("P_b must be > 0");
        if (!(sigma2 >= 0.0)) throw DomainError("sigma2 must be >= 0");
    }
};

// Channel through which the typical user sees the connected user's SIC signal.
enum class SicChannel { paper, physical };
// Channel carrying the typical user's share to the connected user.
enum class ConnectedIntraChannel { physical, paper };
enum class InterceptModel { paper_formula, angle_average };

struct ModelOptions {
    SicChannel sic_channel = SicChannel::paper;
    ConnectedIntraChannel connected_intra = ConnectedIntraChannel::physical;
    InterceptModel intercept = InterceptModel::paper_formula;
    bool far_field_tail = true;
};

// ----------------------------------------------------------- path loss laws

inline double c_rf(double f_c) {
    const double v = kSpeedOfLight / (4.0 * std::numbers::pi * f_c);
    return v * v;
}

inline double path_loss_rf(double d, const ChannelParams& p) {
    if (!(d > 0.0)) throw DomainError("path_loss_rf: distance must be > 0");
    return c_rf(p.f_c) * std::pow(d, -p.alpha_rf);
}

inline double path_loss_direct(double d, const ChannelParams& p) {
    if (!(d > 0.0)) throw DomainError("path_loss_direct: distance must be > 0");
    return p.C * std::pow(d, -p.alpha_c);
}

inline double ris_intercept_formula(const ChannelParams& p) {
    const double r = p.rho_a;
    if (!(r > 0.0 && r < 1.0)) throw DomainError("ris_intercept: rho_a outside (0, 1)");
    const double den = 4.0 * r - 12.0 * r * r + r * r * r;
    if (std::abs(den) < 1e-9)
        throw DomainError("ris_intercept: rho_a is a root of the closed-form denominator; use the angle_average model");
    const double pi = std::numbers::pi;
    return p.L * p.L / (16.0 * pi * pi * pi) * (pi + std::sin(2.0 * r * pi) / den);
}

// E[(L/4pi)^2 (cos(rho_a theta) + cos((1-rho_a) theta))^2], theta uniform on (0, pi).
inline double ris_intercept_angle_average(const ChannelParams& p) {
    const double r = p.rho_a;
    if (!(r > 0.0 && r < 1.0)) throw DomainError("ris_intercept: rho_a outside (0, 1)");
    auto f = [r](double th) {
        const double s = std::cos(r * th) + std::cos((1.0 - r) * th);
        return s * s;
    };
    const double avg = detail::integrate_panels(f, 0.0, std::numbers::pi, 1e-14, 0.0, 64, 64).value / std::numbers::pi;
    const double a = p.L / (4.0 * std::numbers::pi);
    return a * a * avg;
}

inline double ris_intercept(const ChannelParams& p, InterceptModel m) {
    return m == InterceptModel::paper_formula ? ris_intercept_formula(p) : ris_intercept_angle_average(p);
}

inline double path_loss_ris_approx(double r_br0, double r_ru0, double theta_br0, double theta_ru0,
                                   const ChannelParams& p) {
    if (!(r_br0 > 0.0 && r_ru0 > 0.0)) throw DomainError("path_loss_ris_approx: distances must be > 0");
    const double c = p.L / (4.0 * std::numbers::pi) * (std::cos(theta_br0) + std::cos(theta_ru0));
    return c * c * std::pow(r_br0 * r_ru0, -p.alpha_t);
}

// Angle-averaged RIS law K (r_br r_ru)^-alpha_t.
inline double path_loss_ris_avg(double r_br, double r_ru, double intercept, double alpha_t) {
    return intercept * std::pow(r_br * r_ru, -alpha_t);
}

inline double focusing_phase(double l, double theta_br0, double theta_ru0, const ChannelParams& p) {
    return (std::sin(theta_br0) - std::sin(theta_ru0)) * l + p.phi_0 / p.k;
}

using PhaseDesign = std::function<double(double)>;

// Signed angles to the RIS normal for a segment along +x centred at `ris`,
// oriented so that the linear phase profile cancels the path-length slope.
struct RisAngles {
    double theta_br0 = 0.0;
    double theta_ru0 = 0.0;
};

inline RisAngles ris_signed_angles(Point2 bs, Point2 ris, Point2 user) {
    const Point2 b = bs - ris;
    const Point2 u = user - ris;
    return {std::asin(-b.x / norm(b)), std::asin(u.x / norm(u))};
}

inline PhaseDesign focusing_phase_design(Point2 bs, Point2 ris, Point2 user, const ChannelParams& p) {
    const RisAngles a = ris_signed_angles(bs, ris, user);
    return [a, p](double l) { return focusing_phase(l, a.theta_br0, a.theta_ru0, p); };
}

// |int_{-L}^{L} Psi(l) exp(-j k Omega(l)) dl|^2 for a RIS segment along +x
// centred at `ris`, with exact per-element distances and angles.
inline double path_loss_general(Point2 bs, Point2 ris, Point2 user, const ChannelParams& p,
                                const PhaseDesign& phase, int quad_points) {
    if (quad_points < 64) throw DomainError("path_loss_general: quad_points must be >= 64");
    const double yb = bs.y - ris.y;
    const double yu = user.y - ris.y;
    if (std::abs(yb) < 1e-12 && std::abs(bs.x - ris.x) <= p.L) throw DomainError("path_loss_general: BS on the RIS segment");
    if (std::abs(yu) < 1e-12 && std::abs(user.x - ris.x) <= p.L) throw DomainError("path_loss_general: user on the RIS segment");
    if (yb * yu <= 0.0) throw DomainError("path_loss_general: BS and user must lie strictly on the same side of the RIS");
    const detail::GaussLegendre g = detail::make_gauss_legendre(quad_points);
    std::complex<double> acc{0.0, 0.0};
    for (int i = 0; i < quad_points; ++i) {
        const double l = p.L * g.nodes[i];
        const Point2 e{ris.x + l, ris.y};
        const double rb = distance(bs, e);
        const double ru = distance(user, e);
        const double cb = std::abs(yb) / rb;
        const double cu = std::abs(yu) / ru;
        const double psi = (cb + cu) / (8.0 * std::numbers::pi * std::pow(rb * ru, 0.5 * p.alpha_t));
        const double omega = rb + ru - phase(l);
        acc += g.weights[i] * psi * std::polar(1.0, -p.k * omega);
    }
    acc *= p.L;
    return std::norm(acc);
}

// ---------------------------------------------------------------- fading

// Gamma(m, 1/m) variate (unit mean) for integer m.
inline double sample_nakagami_power(int m, Rng& rng) {
    double logsum = 0.0;
    int left = m;
    while (left > 0) {
        const int chunk = left < 8 ? left : 8;
        double prod = 1.0;
        for (int i = 0; i < chunk; ++i) prod *= uniform_open0(rng);
        logsum += std::log(prod);
        left -= chunk;
    }
    return -logsum / m;
}

inline double sample_nakagami_power(int m, std::uint64_t seed) {
    if (m < 1) throw DomainError("sample_nakagami_power: m must be >= 1");
    Rng rng(seed);
    return sample_nakagami_power(m, rng);
}

// ---------------------------------------------------------------- SINR

struct LinkFading {
    double h_t = 1.0;               // serving BS -> typical user
    double h_c = 1.0;               // serving BS -> connected user
    std::vector<double> h_t_intf;   // per BS (serving entry unused)
    std::vector<double> h_c_intf;

    static LinkFading unit(std::size_t n_bs) {
        LinkFading f;
        f.h_t_intf.assign(n_bs, 1.0);
        f.h_c_intf.assign(n_bs, 1.0);
        return f;
    }
};

inline void sample_link_fading(std::size_t n_bs, const ChannelParams& p, Rng& rng, LinkFading& f) {
    f.h_t = sample_nakagami_power(p.m_t, rng);
    f.h_c = sample_nakagami_power(p.m_c, rng);
    f.h_t_intf.resize(n_bs);
    f.h_c_intf.resize(n_bs);
    for (std::size_t i = 0; i < n_bs; ++i) {
        f.h_t_intf[i] = sample_nakagami_power(p.m_t, rng);
        f.h_c_intf[i] = sample_nakagami_power(p.m_t, rng);
    }
}

inline LinkFading sample_link_fading(std::size_t n_bs, const ChannelParams& p, Rng& rng) {
    LinkFading f;
    sample_link_fading(n_bs, p, rng, f);
    return f;
}

// Unit-transmit-power link aggregates of one drop. Every SINR is a ratio of
// these scaled by P_b, so one drop serves every power level and scenario.
struct LinkGains {
    double typ_signal = 0.0;     // h_t P_t
    double typ_intf = 0.0;       // rho_t sum h P_t(interferers), incl. far-field mean
    double sic_signal = 0.0;     // h_t times the SIC channel
    double con_signal = 0.0;     // h_c P_c
    double con_intra = 0.0;      // h_c times the channel of the partner's share
    double con_intf = 0.0;       // sum h P_c(interferers), incl. far-field mean
    double dir_signal = 0.0;     // h_t C |x_B|^-alpha_c (no-RIS baseline)
    double dir_intf = 0.0;       // sum h C |x_I|^-alpha_c, incl. far-field mean
    double dir_sic_signal = 0.0; // SIC numerator channel in the baseline
};

inline LinkGains link_gains(const NetworkRealization& r, const ChannelParams& p, const ModelOptions& o,
                            const LinkFading& f) {
    if (r.bs_points.empty()) throw DomainError("link_gains: empty BS set");
    const double K = ris_intercept(p, o.intercept);
    const Point2 sb = r.serving();
    const double pt = path_loss_ris_avg(r.r_br0, r.r_ru0, K, p.alpha_t);
    const double pc = path_loss_direct(distance(sb, r.connected_point), p);
    const double pd = path_loss_direct(norm(sb), p);
    const double ru_term = std::pow(r.r_ru0, -p.alpha_t);
    double it = 0.0, ic = 0.0, id = 0.0;
    for (std::size_t i = 0; i < r.bs_points.size(); ++i) {
        if (i == r.serving_index) continue;
        const Point2 b = r.bs_points[i];
        it += f.h_t_intf[i] * std::pow(distance(b, r.ris_point), -p.alpha_t);
        id += f.h_t_intf[i] * std::pow(norm(b), -p.alpha_c);
        ic += f.h_c_intf[i] * std::pow(distance(b, r.connected_point), -p.alpha_c);
    }
    if (o.far_field_tail && std::isfinite(r.outer_radius)) {
        it += campbell_tail_mean(r.lambda_b, r.outer_radius, p.alpha_t);
        id += campbell_tail_mean(r.lambda_b, r.outer_radius, p.alpha_c);
        ic += campbell_tail_mean(r.lambda_b, r.outer_radius, p.alpha_c);
    }
    LinkGains g;
    g.typ_signal = f.h_t * pt;
    g.typ_intf = p.rho_t * K * ru_term * it;
    g.sic_signal = f.h_t * (o.sic_channel == SicChannel::paper ? pc : pt);
    g.con_signal = f.h_c * pc;
    g.con_intra = f.h_c * (o.connected_intra == ConnectedIntraChannel::physical ? pc : pt);
    g.con_intf = p.C * ic;
    g.dir_signal = f.h_t * pd;
    g.dir_intf = p.C * id;
    g.dir_sic_signal = f.h_t * (o.sic_channel == SicChannel::paper ? pc : pd);
    return g;
}

inline constexpr double kInfiniteSinr = std::numeric_limits<double>::max();

struct SinrValue {
    double value = 0.0;
    bool infinite = false;
};

inline SinrValue sinr_ratio(double num, double den) {
    if (num <= 0.0) return {0.0, false};
    if (den <= 0.0) return {kInfiniteSinr, true};
    const double v = num / den;
    if (!std::isfinite(v)) return {kInfiniteSinr, true};
    return {v, false};
}

struct SinrTriple {
    SinrValue sic;
    SinrValue t;
    SinrValue c;
};

inline SinrTriple sinr_from_gains(double typ_signal, double typ_intf, double sic_signal, double con_signal,
                                  double con_intra, double con_intf, const PowerAllocation& pa) {
    SinrTriple s;
    const double P = pa.P_b;
    s.sic = sinr_ratio(pa.a_c * P * sic_signal, pa.a_t * P * typ_signal + P * typ_intf + pa.sigma2);
    s.t = sinr_ratio(pa.a_t * P * typ_signal, P * typ_intf + pa.sigma2);
    s.c = sinr_ratio(pa.a_c * P * con_signal, pa.a_t * P * con_intra + P * con_intf + pa.sigma2);
    return s;
}

inline SinrTriple sinr_from_gains(const LinkGains& g, const PowerAllocation& pa) {
    return sinr_from_gains(g.typ_signal, g.typ_intf, g.sic_signal, g.con_signal, g.con_intra, g.con_intf, pa);
}

inline SinrTriple sinr_all(const NetworkRealization& r, const ChannelParams& p, const PowerAllocation& pa,
                           const ModelOptions& o, const LinkFading& f) {
    return sinr_from_gains(link_gains(r, p, o, f), pa);
}

inline SinrTriple sinr_all(const NetworkRealization& r, const ChannelParams& p, const PowerAllocation& pa,
                           const ModelOptions& o, std::uint64_t seed) {
    Rng rng(seed);
    return sinr_all(r, p, pa, o, sample_link_fading(r.bs_points.size(), p, rng));
}

} // namespace risnoma
