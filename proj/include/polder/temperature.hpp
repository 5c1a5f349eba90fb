#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "polder/errors.hpp"
#include "polder/oscillator.hpp"

namespace polder {

inline constexpr double default_t0_kelvin = 293.0;

/// Dimensionless temperature offset (T - T0)/T0.
inline double t_delta_of(double t_kelvin, double t0_kelvin = default_t0_kelvin) {
    if (!(t_kelvin > 0.0)) throw domain_error("temperature must be > 0 K, got " + std::to_string(t_kelvin));
    if (!(t0_kelvin > 0.0)) throw domain_error("reference temperature must be > 0 K, got " + std::to_string(t0_kelvin));
    return (t_kelvin - t0_kelvin) / t0_kelvin;
}

/// Inverse of t_delta_of: T = T0 (1 + T_delta).
inline double temperature_of(double t_delta, double t0_kelvin = default_t0_kelvin) {
    if (!(t0_kelvin > 0.0)) throw domain_error("reference temperature must be > 0 K, got " + std::to_string(t0_kelvin));
    return t0_kelvin * (1.0 + t_delta);
}

/// Quadratic polynomial c0 + c1 x + c2 x^2.
struct Quadratic {
    double c0 = 0.0, c1 = 0.0, c2 = 0.0;
    double operator()(double x) const { return (c2 * x + c1) * x + c0; }
    bool constant() const { return c1 == 0.0 && c2 == 0.0; }
};

/// Quadratic temperature dependence of one oscillator term's four parameters.
struct TermFit {
    Quadratic a, omega_r, gamma, gamma_prime;
};

enum class RangeMode {
    warn,   // extrapolate outside t_delta_range; caller may query in_range()
    strict, // throw range_error outside t_delta_range
};

/// Per-parameter quadratic coefficients in T_delta, producing an
/// OscillatorModel at any temperature in t_delta_range.
struct TemperatureFit {
    ModelKind kind = ModelKind::lorentz_dirac;
    double t0_kelvin = default_t0_kelvin;
    double t_delta_lo = 0.0;
    double t_delta_hi = 2.833;
    std::vector<TermFit> terms;

    bool in_range(double t_delta) const { return t_delta >= t_delta_lo && t_delta <= t_delta_hi; }

    /// Fixed-temperature fit: every coefficient triple is (value, 0, 0).
    static TemperatureFit constant(const OscillatorModel& m, double t0 = default_t0_kelvin) {
        TemperatureFit f;
        f.kind = m.kind;
        f.t0_kelvin = t0;
        for (const auto& t : m.terms)
            f.terms.push_back({{t.a, 0, 0}, {t.omega_r, 0, 0}, {t.gamma, 0, 0}, {t.gamma_prime, 0, 0}});
        return f;
    }
};

/// Evaluate the fit at one t_delta. The resulting model is invariant-checked;
/// violations throw model_error naming the offending parameter.
inline OscillatorModel params_at(const TemperatureFit& fit, double t_delta,
                                 RangeMode mode = RangeMode::warn) {
    if (mode == RangeMode::strict && !fit.in_range(t_delta))
        throw range_error("t_delta = " + std::to_string(t_delta) + " outside fit range [" +
                          std::to_string(fit.t_delta_lo) + ", " + std::to_string(fit.t_delta_hi) + "]");
    OscillatorModel m;
    m.kind = fit.kind;
    m.terms.reserve(fit.terms.size());
    for (const auto& tf : fit.terms)
        m.terms.push_back({tf.a(t_delta), tf.omega_r(t_delta), tf.gamma(t_delta), tf.gamma_prime(t_delta)});
    check_model(m);
    return m;
}

} // namespace polder
