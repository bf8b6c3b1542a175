#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <numbers>
#include <vector>

#include "siftlab/arith.hpp"
#include "siftlab/errors.hpp"

namespace siftlab {

namespace detail {

template <class F>
double simpson_rec(F& f, double a, double b, double fa, double fm, double fb, double whole,
                   double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace detail

/// Adaptive Simpson on [a, b]; tol is treated as an absolute tolerance that the
/// callers derive from a first-pass estimate.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double tol, int max_depth = 48) {
    if (a == b) return 0.0;
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::simpson_rec(f, a, b, fa, fm, fb, whole,
                               std::max(tol, 1e-300), max_depth);
}

/// int_y^x (log t)^j dt with relative tolerance rel_tol.
inline double log_power_integral(double y, double x, int j, double rel_tol = 1e-12) {
    if (j < 0) throw domain_error("log_power_integral: j must be >= 0");
    if (x <= y) return 0.0;
    if (j == 0) return x - y;
    auto f = [j](double t) { return std::pow(std::log(t), j); };
    double scale = (x - y) * std::pow(std::log(std::max(x, 3.0)), j);
    return adaptive_simpson(f, y, x, rel_tol * scale);
}

struct GaussNodes {
    std::vector<double> nodes;    // on (-1, 1)
    std::vector<double> weights;
};

/// Gauss-Legendre nodes/weights by Newton iteration on P_n; cached per order.
inline const GaussNodes& gauss_legendre(int n) {
    static std::map<int, GaussNodes> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    GaussNodes g;
    g.nodes.resize(n);
    g.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        g.nodes[i] = -x;
        g.nodes[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        g.weights[i] = w;
        g.weights[n - 1 - i] = w;
    }
    return cache.emplace(n, std::move(g)).first->second;
}

namespace detail {

template <class F>
double gauss_panel(F& f, double a, double b, const GaussNodes& g) {
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    KahanSum s;
    for (size_t i = 0; i < g.nodes.size(); ++i)
        s.add(g.weights[i] * f(mid + half * g.nodes[i]));
    return half * s.value();
}

template <class F>
double panel_adaptive(F& f, double a, double b, double tol_abs, int depth) {
    const auto& g16 = gauss_legendre(16);
    const auto& g32 = gauss_legendre(32);
    double coarse = gauss_panel(f, a, b, g16);
    double fine = gauss_panel(f, a, b, g32);
    if (depth <= 0 || std::abs(fine - coarse) <= tol_abs) return fine;
    double m = 0.5 * (a + b);
    return panel_adaptive(f, a, m, 0.5 * tol_abs, depth - 1) +
           panel_adaptive(f, m, b, 0.5 * tol_abs, depth - 1);
}

} // namespace detail

/// Integral of f over [a, b] for integrands oscillating no faster than
/// max_panel_width allows: the range is cut into panels of at most that width,
/// each refined adaptively (Gauss-Legendre 16 vs 32). Panels are summed in
/// ascending order, so the result is reproducible.
template <class F>
double integrate_panels(F&& f, double a, double b, double max_panel_width, double rel_tol = 1e-9) {
    if (b <= a) return 0.0;
    double width = std::min(max_panel_width, b - a);
    auto npanels = static_cast<uint64_t>(std::ceil((b - a) / width));
    if (npanels > 2'000'000) throw capacity_error("integrate_panels: too many panels");
    // first pass for a magnitude estimate
    const auto& g16 = gauss_legendre(16);
    KahanSum rough;
    for (uint64_t i = 0; i < npanels; ++i) {
        double p0 = a + (b - a) * static_cast<double>(i) / static_cast<double>(npanels);
        double p1 = a + (b - a) * static_cast<double>(i + 1) / static_cast<double>(npanels);
        rough.add(std::abs(detail::gauss_panel(f, p0, p1, g16)));
    }
    double tol_abs = std::max(rel_tol * rough.value(), 1e-300) /
                     static_cast<double>(npanels);
    KahanSum total;
    for (uint64_t i = 0; i < npanels; ++i) {
        double p0 = a + (b - a) * static_cast<double>(i) / static_cast<double>(npanels);
        double p1 = a + (b - a) * static_cast<double>(i + 1) / static_cast<double>(npanels);
        total.add(detail::panel_adaptive(f, p0, p1, tol_abs, 24));
    }
    return total.value();
}

/// Upper incomplete gamma for integer shape k >= 1:
/// Gamma(k, z) = (k-1)! e^{-z} sum_{i<k} z^i / i!.
inline double upper_gamma_int(int k, double z) {
    if (k < 1) throw domain_error("upper_gamma_int: shape must be >= 1");
    double fact = 1.0;
    for (int i = 2; i < k; ++i) fact *= i;
    double term = 1.0;
    double s = 1.0;
    for (int i = 1; i < k; ++i) {
        term *= z / i;
        s += term;
    }
    return fact * std::exp(-z) * s;
}

} // namespace siftlab
