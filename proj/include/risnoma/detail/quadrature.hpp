#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "risnoma/errors.hpp"

namespace risnoma::detail {

struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};

inline GaussLegendre make_gauss_legendre(int n) {
    GaussLegendre g;
    g.nodes.resize(n);
    g.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        g.nodes[i] = -x;
        g.nodes[n - 1 - i] = x;
        g.weights[i] = w;
        g.weights[n - 1 - i] = w;
    }
    return g;
}

inline const GaussLegendre& gauss_legendre(int n) {
    static const GaussLegendre g16 = make_gauss_legendre(16);
    static const GaussLegendre g32 = make_gauss_legendre(32);
    static const GaussLegendre g64 = make_gauss_legendre(64);
    static const GaussLegendre g128 = make_gauss_legendre(128);
    switch (n) {
    case 16: return g16;
    case 32: return g32;
    case 64: return g64;
    case 128: return g128;
    default: throw DomainError("gauss_legendre: supported orders are 16, 32, 64, 128");
    }
}

struct QuadResult {
    double value = 0.0;
    int panels = 0;
    bool converged = false;
};

template <class F>
double integrate_fixed(F&& f, double a, double b, int panels, const GaussLegendre& g) {
    const double h = (b - a) / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * h;
        const double mid = lo + 0.5 * h;
        double s = 0.0;
        for (std::size_t i = 0; i < g.nodes.size(); ++i) s += g.weights[i] * f(mid + 0.5 * h * g.nodes[i]);
        total += 0.5 * h * s;
    }
    return total;
}

// Composite Gauss-Legendre on [a,b], doubling the panel count until successive
// estimates agree to rel_tol (or abs_tol).
template <class F>
QuadResult integrate_panels(F&& f, double a, double b, double rel_tol, double abs_tol = 0.0,
                            int order = 64, int max_panels = 256) {
    const GaussLegendre& g = gauss_legendre(order);
    int panels = 1;
    double prev = integrate_fixed(f, a, b, panels, g);
    while (panels < max_panels) {
        panels *= 2;
        const double cur = integrate_fixed(f, a, b, panels, g);
        if (std::abs(cur - prev) <= std::max(rel_tol * std::abs(cur), abs_tol)) return {cur, panels, true};
        prev = cur;
    }
    return {prev, panels, false};
}

// Integral over [a, inf) via x = a + scale*t/(1-t).
template <class F>
QuadResult integrate_semi_infinite(F&& f, double a, double scale, double rel_tol, double abs_tol = 0.0,
                                   int order = 64, int max_panels = 256) {
    auto mapped = [&](double t) {
        if (t >= 1.0) return 0.0;
        const double u = 1.0 - t;
        const double v = f(a + scale * t / u);
        return v == 0.0 ? 0.0 : v * scale / (u * u);
    };
    return integrate_panels(mapped, 0.0, 1.0, rel_tol, abs_tol, order, max_panels);
}

} // namespace risnoma::detail
