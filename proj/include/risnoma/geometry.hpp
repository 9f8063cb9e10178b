#pragma once

#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "risnoma/errors.hpp"
#include "risnoma/rng.hpp"
#include "risnoma/specfun.hpp"

namespace risnoma {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline double norm(Point2 p) { return std::hypot(p.x, p.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }

inline double default_sim_radius(double lambda_b) { return 30.0 / std::sqrt(std::numbers::pi * lambda_b); }

struct SpatialParams {
    double lambda_b = 1.0 / (300.0 * 300.0 * std::numbers::pi);
    double lambda_u = 1.0 / (300.0 * 300.0 * std::numbers::pi);
    double R_L = 25.0;
    double r_c = 50.0;
    double sim_radius = default_sim_radius(1.0 / (300.0 * 300.0 * std::numbers::pi));

    void validate() const {
        if (!(lambda_b > 0.0)) throw DomainError("lambda_b must be > 0");
        if (!(lambda_u >= 0.0)) throw DomainError("lambda_u must be >= 0");
        if (!(R_L > 0.0)) throw DomainError("R_L must be > 0");
        if (!(r_c > 0.0)) throw DomainError("r_c must be > 0");
        if (!(sim_radius > R_L)) throw DomainError("sim_radius must exceed R_L");
    }
};

// Share of the infinite-plane mean interference lost beyond `outer` for a
// power law r^-alpha with an inner exclusion radius `inner` (alpha > 2).
inline double truncation_fraction(double inner, double outer, double alpha) {
    if (!(alpha > 2.0)) throw DomainError("truncation_fraction: alpha must exceed 2");
    return std::pow(inner / outer, alpha - 2.0);
}

// Campbell mean of sum |x|^-alpha over a PPP of density lambda outside radius r0.
inline double campbell_tail_mean(double lambda, double r0, double alpha) {
    if (!(alpha > 2.0)) throw DomainError("campbell_tail_mean: alpha must exceed 2");
    return 2.0 * std::numbers::pi * lambda * std::pow(r0, 2.0 - alpha) / (alpha - 2.0);
}

// ------------------------------------------------------------------ sampling

inline void sample_ppp(const SpatialParams& p, Rng& rng, std::vector<Point2>& out) {
    out.clear();
    const double r2_lo = p.R_L * p.R_L;
    const double r2_hi = p.sim_radius * p.sim_radius;
    const double mean = p.lambda_b * std::numbers::pi * (r2_hi - r2_lo);
    std::poisson_distribution<long> count(mean);
    const long n = count(rng);
    out.reserve(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) {
        const double r = std::sqrt(r2_lo + (r2_hi - r2_lo) * uniform01(rng));
        const double phi = 2.0 * std::numbers::pi * uniform01(rng);
        out.push_back({r * std::cos(phi), r * std::sin(phi)});
    }
}

inline std::vector<Point2> sample_ppp(const SpatialParams& p, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Point2> out;
    sample_ppp(p, rng, out);
    return out;
}

inline Point2 sample_ris(const SpatialParams& p, Rng& rng) {
    const double r = p.R_L * std::sqrt(uniform01(rng));
    const double phi = 2.0 * std::numbers::pi * uniform01(rng);
    return {r * std::cos(phi), r * std::sin(phi)};
}

inline Point2 sample_ris(const SpatialParams& p, std::uint64_t seed) {
    Rng rng(seed);
    return sample_ris(p, rng);
}

// Interior angle at `apex` between the rays to `a` and `b`, in [0, pi].
inline double apex_angle(Point2 a, Point2 apex, Point2 b) {
    const Point2 u = a - apex;
    const Point2 v = b - apex;
    const double psi1 = std::atan2(u.y, u.x);
    const double psi2 = std::atan2(v.y, v.x);
    double d = std::abs(psi2 - psi1);
    if (d > std::numbers::pi) d = 2.0 * std::numbers::pi - d;
    return d;
}

struct NetworkRealization {
    std::vector<Point2> bs_points;
    Point2 ris_point;
    std::size_t serving_index = 0;
    double r_br0 = 0.0;
    double r_ru0 = 0.0;
    double theta = 0.0;
    Point2 connected_point;
    // sampling context needed for far-field compensation
    double lambda_b = 0.0;
    double outer_radius = std::numeric_limits<double>::infinity();
    int resamples = 0;

    const Point2& serving() const { return bs_points.at(serving_index); }
};

// Fills derived fields (serving BS, distances, angle) from points already set.
inline void finalize_realization(NetworkRealization& r) {
    if (r.bs_points.empty()) throw DomainError("realization has no base station");
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < r.bs_points.size(); ++i) {
        const double d = distance(r.bs_points[i], r.ris_point);
        if (d < best) {
            best = d;
            r.serving_index = i;
        }
    }
    r.r_br0 = best;
    r.r_ru0 = norm(r.ris_point);
    r.theta = apex_angle(r.serving(), r.ris_point, Point2{});
}

// One network drop. Empty BS sets are redrawn from the same stream and counted.
inline void sample_realization(const SpatialParams& p, Rng& rng, NetworkRealization& r) {
    r.resamples = 0;
    for (;;) {
        sample_ppp(p, rng, r.bs_points);
        r.ris_point = sample_ris(p, rng);
        const double phi = 2.0 * std::numbers::pi * uniform01(rng);
        if (!r.bs_points.empty()) {
            finalize_realization(r);
            const Point2 s = r.serving();
            r.connected_point = {s.x + p.r_c * std::cos(phi), s.y + p.r_c * std::sin(phi)};
            break;
        }
        ++r.resamples;
    }
    r.lambda_b = p.lambda_b;
    r.outer_radius = p.sim_radius;
}

inline NetworkRealization sample_realization(const SpatialParams& p, std::uint64_t seed) {
    Rng rng(seed);
    NetworkRealization r;
    sample_realization(p, rng, r);
    return r;
}

// ----------------------------------------------------------- distributions

inline double pdf_r_ru(double x, const SpatialParams& p) {
    if (x < 0.0) throw DomainError("pdf_r_ru: x must be >= 0");
    return x <= p.R_L ? 2.0 * x / (p.R_L * p.R_L) : 0.0;
}

inline double cdf_r_ru(double x, const SpatialParams& p) {
    if (x <= 0.0) return 0.0;
    if (x >= p.R_L) return 1.0;
    return x * x / (p.R_L * p.R_L);
}

// Density of the distance to the n-th nearest point of a PPP with density lambda_b.
inline double pdf_r_br(double x, int n, const SpatialParams& p) {
    if (x < 0.0) throw DomainError("pdf_r_br: x must be >= 0");
    if (n < 1) throw DomainError("pdf_r_br: n must be >= 1");
    const double a = std::numbers::pi * p.lambda_b;
    if (x == 0.0) return 0.0;
    const double logv = std::log(2.0) + n * std::log(a) - specfun::log_factorial(n - 1) +
                        (2.0 * n - 1.0) * std::log(x) - a * x * x;
    return std::exp(logv);
}

inline double cdf_r_br1(double x, const SpatialParams& p) {
    if (x <= 0.0) return 0.0;
    return -std::expm1(-std::numbers::pi * p.lambda_b * x * x);
}

inline double angle_theta_cdf(double x) {
    if (!(x >= 0.0 && x <= std::numbers::pi)) throw DomainError("angle_theta_cdf: x outside [0, pi]");
    return x / std::numbers::pi;
}

// Incidence / reflection angles obtained by splitting theta.
inline std::pair<double, double> split_angles(double theta, double rho_a) {
    if (!(theta >= 0.0 && theta <= std::numbers::pi)) throw DomainError("split_angles: theta outside [0, pi]");
    if (!(rho_a > 0.0 && rho_a < 1.0)) throw DomainError("split_angles: rho_a outside (0, 1)");
    const double br = rho_a * theta;
    return {br, theta - br};
}

// ----------------------------------------------------------- text format
//
//   # risnoma-realization 1
//   # ris
//   x y
//   # connected
//   x y
//   # bs serving=<index>
//   x y        (one line per base station)

inline void write_realization(std::ostream& os, const NetworkRealization& r) {
    std::ostringstream s;
    s.imbue(std::locale::classic());
    s.precision(17);
    s << "# risnoma-realization 1\n# ris\n" << r.ris_point.x << ' ' << r.ris_point.y << '\n';
    s << "# connected\n" << r.connected_point.x << ' ' << r.connected_point.y << '\n';
    s << "# bs serving=" << r.serving_index << '\n';
    for (const auto& b : r.bs_points) s << b.x << ' ' << b.y << '\n';
    os << s.str();
}

inline NetworkRealization read_realization(std::istream& is) {
    NetworkRealization r;
    std::string line;
    std::string section;
    int lineno = 0;
    bool have_ris = false;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream h(line.substr(1));
            h >> section;
            continue;
        }
        std::istringstream ls(line);
        ls.imbue(std::locale::classic());
        Point2 pt;
        if (!(ls >> pt.x >> pt.y)) throw ConfigError("realization: malformed point", lineno);
        if (section == "ris") {
            r.ris_point = pt;
            have_ris = true;
        } else if (section == "connected") {
            r.connected_point = pt;
        } else if (section == "bs") {
            r.bs_points.push_back(pt);
        } else {
            throw ConfigError("realization: point outside a known section", lineno);
        }
    }
    if (!have_ris) throw ConfigError("realization: missing ris section");
    finalize_realization(r);
    return r;
}

} // namespace risnoma
