#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace csbn {

namespace detail {

inline double horner(const std::vector<double>& c, double x) {
    double v = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
    return v;
}

// A few Newton steps on the original coefficients; keeps the polished
// value only if it lowers |f|.
inline double polish_root(const std::vector<double>& c, double x) {
    std::vector<double> dc;
    for (std::size_t k = 1; k < c.size(); ++k) dc.push_back(static_cast<double>(k) * c[k]);
    for (int it = 0; it < 4; ++it) {
        const double f = horner(c, x);
        const double df = horner(dc, x);
        if (df == 0.0 || !std::isfinite(df)) break;
        const double nx = x - f / df;
        if (!std::isfinite(nx) || std::abs(horner(c, nx)) >= std::abs(f)) break;
        x = nx;
    }
    return x;
}

} // namespace detail

/// Real roots of c2 x^2 + c1 x + c0, ascending. Degenerates to the linear case.
inline std::vector<double> real_quadratic_roots(double c2, double c1, double c0) {
    std::vector<double> roots;
    if (c2 == 0.0) {
        if (c1 != 0.0) roots.push_back(-c0 / c1);
        return roots;
    }
    const double disc = c1 * c1 - 4.0 * c2 * c0;
    if (disc < 0.0) return roots;
    const double sq = std::sqrt(disc);
    // Avoid cancellation: q has the sign of c1.
    const double q = -0.5 * (c1 + (c1 >= 0.0 ? sq : -sq));
    if (q != 0.0) {
        roots.push_back(q / c2);
        roots.push_back(c0 / q);
    } else {
        roots.push_back(0.0);
        roots.push_back(0.0);
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

/// Real roots of c3 x^3 + c2 x^2 + c1 x + c0, ascending, via the depressed
/// cubic: trigonometric form when the discriminant is positive (three real
/// roots), Cardano's formula otherwise.
inline std::vector<double> real_cubic_roots(double c3, double c2, double c1, double c0) {
    const double scale = std::max({std::abs(c2), std::abs(c1), std::abs(c0)});
    if (c3 == 0.0 || std::abs(c3) < 1e-14 * scale) return real_quadratic_roots(c2, c1, c0);

    const double a = c2 / c3;
    const double b = c1 / c3;
    const double c = c0 / c3;
    const double p = b - a * a / 3.0;
    const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    const double shift = -a / 3.0;
    const double disc = -(4.0 * p * p * p + 27.0 * q * q);

    std::vector<double> roots;
    if (disc > 0.0) {
        const double m = 2.0 * std::sqrt(-p / 3.0);
        double arg = 3.0 * q / (p * m);
        arg = std::clamp(arg, -1.0, 1.0);
        const double theta = std::acos(arg) / 3.0;
        for (int k = 0; k < 3; ++k) {
            roots.push_back(m * std::cos(theta - 2.0 * std::numbers::pi * k / 3.0) + shift);
        }
    } else {
        const double h = std::sqrt(std::max(q * q / 4.0 + p * p * p / 27.0, 0.0));
        const double t = std::cbrt(-q / 2.0 + h) + std::cbrt(-q / 2.0 - h);
        roots.push_back(t + shift);
    }
    const std::vector<double> coeffs{c0, c1, c2, c3};
    for (double& r : roots) r = detail::polish_root(coeffs, r);
    std::sort(roots.begin(), roots.end());
    return roots;
}

} // namespace csbn
