#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "metriclab/errors.hpp"

namespace metriclab {

/// Gauss-Legendre nodes and weights on [-1, 1], computed by Newton iteration
/// on the Legendre recurrence and cached per order.
inline const std::pair<std::vector<double>, std::vector<double>>&
gauss_legendre_rule(int n) {
    static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    std::vector<double> x(n), w(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Chebyshev-based initial guess for the i-th root
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
    return cache.emplace(n, std::make_pair(std::move(x), std::move(w))).first->second;
}

namespace detail {

template <class F>
double gl_panel(const F& f, double a, double b, int order) {
    const auto& [x, w] = gauss_legendre_rule(order);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * f(mid + half * x[i]);
    return s * half;
}

} // namespace detail

/// Adaptive Gauss-Legendre integration of f over [a, b]. Each interval is
/// estimated with 15- and 31-point rules; intervals whose discrepancy exceeds
/// max(abs_floor, rel_tol * |total|) are bisected. Throws QuadratureFailure
/// when the interval budget runs out before the target is met.
template <class F>
double integrate(const F& f, double a, double b,
                 double rel_tol = 1e-11, double abs_floor = 1e-14,
                 int max_intervals = 4000) {
    if (a == b) return 0.0;
    struct Seg { double a, b, coarse; };
    std::vector<Seg> stack;
    stack.push_back({a, b, detail::gl_panel(f, a, b, 15)});
    double total = 0.0;
    double scale = std::abs(stack.back().coarse);
    int used = 1;
    while (!stack.empty()) {
        Seg s = stack.back();
        stack.pop_back();
        const double fine = detail::gl_panel(f, s.a, s.b, 31);
        const double err = std::abs(fine - s.coarse);
        const double tol = std::max(abs_floor, rel_tol * std::max(scale, std::abs(total)));
        if (err <= tol * std::max(1.0, (s.b - s.a) / (b - a)) || err <= abs_floor) {
            total += fine;
            scale = std::max(scale, std::abs(total));
            continue;
        }
        if (used + 2 > max_intervals)
            throw QuadratureFailure("adaptive Gauss-Legendre: interval budget exhausted");
        used += 2;
        const double mid = 0.5 * (s.a + s.b);
        stack.push_back({s.a, mid, detail::gl_panel(f, s.a, mid, 15)});
        stack.push_back({mid, s.b, detail::gl_panel(f, mid, s.b, 15)});
    }
    return total;
}

} // namespace metriclab
