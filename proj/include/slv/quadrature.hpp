#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>

#include "slv/errors.hpp"

namespace slv {

/// Tolerances and budget for the adaptive integrator.  A panel is accepted
/// when the bisection error estimate falls under its share of the combined
/// absolute + relative tolerance; exceeding the panel budget throws
/// NumericError with the offending interval in the message.
struct QuadOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_panels = 60000;
    const char* label = "integral";
};

namespace detail {

struct GaussRule {
    std::array<double, 15> node;   // on [-1,1]
    std::array<double, 15> weight;
};

/// 15-point Gauss-Legendre rule, nodes solved at startup by Newton iteration
/// on the Legendre recurrence (no hard-coded tables).
inline const GaussRule& gauss15() {
    static const GaussRule rule = [] {
        GaussRule r{};
        const int n = 15;
        for (int k = 0; k < n; ++k) {
            double x = std::cos(M_PI * (k + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (int j = 2; j <= n; ++j) {
                    const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-15) break;
            }
            r.node[k] = x;
            r.weight[k] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        return r;
    }();
    return rule;
}

template <class F>
double gauss_panel(const F& f, double a, double b) {
    const GaussRule& r = gauss15();
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double s = 0.0;
    for (int k = 0; k < 15; ++k) s += r.weight[k] * f(c + h * r.node[k]);
    return s * h;
}

template <class F>
double adapt_rec(const F& f, double a, double b, double whole, double tol,
                 int depth, int& panels, const QuadOptions& opts) {
    if (panels > opts.max_panels)
        throw NumericError(std::string("quadrature budget exceeded for ") +
                           opts.label + " on [" + std::to_string(a) + ", " +
                           std::to_string(b) + "]");
    const double m = 0.5 * (a + b);
    const double left = gauss_panel(f, a, m);
    const double right = gauss_panel(f, m, b);
    panels += 2;
    const double err = std::abs(left + right - whole);
    if (!std::isfinite(err))
        throw NumericError(std::string("non-finite integrand in ") + opts.label +
                           " near x=" + std::to_string(m));
    if (err <= tol || depth > 52) return left + right;
    return adapt_rec(f, a, m, left, 0.5 * tol, depth + 1, panels, opts) +
           adapt_rec(f, m, b, right, 0.5 * tol, depth + 1, panels, opts);
}

} // namespace detail

/// Adaptive Gauss-Legendre integration of f over the finite interval [a,b].
template <class F>
double integrate_adaptive(const F& f, double a, double b,
                          const QuadOptions& opts = QuadOptions{}) {
    if (!(b > a)) return 0.0;
    int panels = 1;
    const double whole = detail::gauss_panel(f, a, b);
    const double tol =
        std::max(opts.abs_tol, opts.rel_tol * std::abs(whole));
    return detail::adapt_rec(f, a, b, whole, tol, 0, panels, opts);
}

} // namespace slv
