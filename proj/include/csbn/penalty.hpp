#pragma once

#include <cmath>

#include "core_model.hpp"

namespace csbn {

inline constexpr double sign(double t) noexcept { return static_cast<double>((t > 0.0) - (t < 0.0)); }

/// SCAD penalty P_lambda(t) for t >= 0.
inline double scad(double t, const PenaltyParams& pp) {
    if (t < 0.0) throw argument_error("scad: argument must be nonnegative");
    const double l = pp.lambda;
    const double a = pp.a;
    if (t < l) return l * t;
    if (t < a * l) return ((a * a - 1.0) * l * l - (t - a * l) * (t - a * l)) / (2.0 * (a - 1.0));
    return (a + 1.0) * l * l / 2.0;
}

/// d/dt P_lambda(|t|) = P'_lambda(|t|) sign(t); zero at t = 0.
inline double scad_d1(double t, const PenaltyParams& pp) noexcept {
    const double at = std::abs(t);
    const double l = pp.lambda;
    const double a = pp.a;
    double d = 0.0;
    if (at <= l) {
        d = l;
    } else if (at <= a * l) {
        d = (a * l - at) / (a - 1.0);
    }
    return d * sign(t);
}

/// P''_lambda(|t|): -1/(a-1) on the concave middle branch, else 0.
inline double scad_d2(double t, const PenaltyParams& pp) noexcept {
    const double at = std::abs(t);
    return (at > pp.lambda && at <= pp.a * pp.lambda) ? -1.0 / (pp.a - 1.0) : 0.0;
}

} // namespace csbn
