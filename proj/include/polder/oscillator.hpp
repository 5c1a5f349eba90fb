#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "polder/errors.hpp"

namespace polder {

using complexd = std::complex<double>;

enum class ModelKind { clausius_mossotti, lorentz_dirac };

inline const char* to_string(ModelKind k) {
    return k == ModelKind::clausius_mossotti ? "clausius_mossotti" : "lorentz_dirac";
}

/// One damped oscillator with a radiation-damping numerator:
///   term(w) = a (omega_r^2 - i gamma' w) / (omega_r^2 - w^2 - i w gamma)
/// All frequencies in rad/s, `a` dimensionless.
struct OscillatorTerm {
    double a = 0.0;
    double omega_r = 0.0;
    double gamma = 0.0;
    double gamma_prime = 0.0;
};

/// Sum of oscillator terms interpreted either as the ratio
/// rho = (eps-1)/(eps+2) (Clausius-Mossotti) or as eps - 1 (Lorentz-Dirac).
struct OscillatorModel {
    ModelKind kind = ModelKind::lorentz_dirac;
    std::vector<OscillatorTerm> terms;

    /// Static value of the term sum: sum of amplitudes.
    double static_sum() const {
        double s = 0.0;
        for (const auto& t : terms) s += t.a;
        return s;
    }
};

// Tolerance on |1 - rho| below which the CM inversion eps = (1+2rho)/(1-rho)
// is reported as singular. Overridable per call.
inline constexpr double cm_inversion_tol = 1e-12;

/// Throws model_error naming the first offending parameter. Negative
/// amplitudes are allowed; physicality is the audit's business, not the
/// model's.
inline void check_model(const OscillatorModel& m) {
    if (m.terms.empty()) throw model_error("model has no oscillator terms");
    for (std::size_t k = 0; k < m.terms.size(); ++k) {
        const auto& t = m.terms[k];
        const std::string at = "terms[" + std::to_string(k) + "].";
        if (!std::isfinite(t.a)) throw model_error(at + "a is not finite");
        if (!(t.omega_r > 0.0)) throw model_error(at + "omega_r must be > 0, got " + std::to_string(t.omega_r));
        if (!(t.gamma >= 0.0)) throw model_error(at + "gamma must be >= 0, got " + std::to_string(t.gamma));
        if (!(t.gamma_prime >= 0.0)) throw model_error(at + "gamma_prime must be >= 0, got " + std::to_string(t.gamma_prime));
    }
    if (m.kind == ModelKind::clausius_mossotti && m.static_sum() >= 1.0)
        throw model_error("clausius_mossotti static ratio rho(0) = " + std::to_string(m.static_sum()) +
                          " must be < 1 for a finite positive eps(0)");
}

namespace detail {

inline void check_pole(const OscillatorTerm& t, double omega) {
    if (t.gamma == 0.0) {
        const double d = t.omega_r * t.omega_r - omega * omega;
        if (std::abs(d) <= 1e-14 * t.omega_r * t.omega_r)
            throw singularity_error("undamped pole at omega = " + std::to_string(omega) + " rad/s");
    }
}

} // namespace detail

/// Term sum S(w) = sum_k a_k (w_k^2 - i g'_k w) / (w_k^2 - w^2 - i w g_k).
/// Equals rho_CM for a CM parameter set and eps_LD - 1 for an LD one.
inline complexd term_sum(const std::vector<OscillatorTerm>& terms, double omega) {
    complexd s{0.0, 0.0};
    for (const auto& t : terms) {
        detail::check_pole(t, omega);
        const double w2 = t.omega_r * t.omega_r;
        const complexd num{t.a * w2, -t.a * t.gamma_prime * omega};
        const complexd den{w2 - omega * omega, -omega * t.gamma};
        s += num / den;
    }
    return s;
}

/// Term sum on the imaginary frequency axis, w = i xi, which is real:
///   S(i xi) = sum_k a_k (w_k^2 + g'_k xi) / (w_k^2 + xi^2 + g_k xi)
inline double term_sum_imag_axis(const std::vector<OscillatorTerm>& terms, double xi) {
    if (!(xi >= 0.0)) throw domain_error("imaginary-axis frequency must be >= 0");
    double s = 0.0;
    for (const auto& t : terms) {
        const double w2 = t.omega_r * t.omega_r;
        s += t.a * (w2 + t.gamma_prime * xi) / (w2 + xi * xi + t.gamma * xi);
    }
    return s;
}

/// rho = (eps-1)/(eps+2) of a Clausius-Mossotti model at real frequency.
inline complexd rho_cm(const OscillatorModel& m, double omega) {
    if (m.kind != ModelKind::clausius_mossotti)
        throw domain_error("rho_cm requires a clausius_mossotti model");
    return term_sum(m.terms, omega);
}

/// Inversion of the Clausius-Mossotti ratio.
inline complexd eps_from_rho(complexd rho, double tol = cm_inversion_tol) {
    const complexd one_minus = 1.0 - rho;
    if (std::abs(one_minus) < tol)
        throw singularity_error("clausius_mossotti inversion singular: |1 - rho| = " +
                                std::to_string(std::abs(one_minus)));
    return (1.0 + 2.0 * rho) / one_minus;
}

/// Complex permittivity at real angular frequency. Negative omega is allowed
/// (used by the parity audit).
inline complexd eps_real_axis(const OscillatorModel& m, double omega, double tol = cm_inversion_tol) {
    const complexd s = term_sum(m.terms, omega);
    if (m.kind == ModelKind::lorentz_dirac) return 1.0 + s;
    return eps_from_rho(s, tol);
}

/// Permittivity along the imaginary frequency axis; real by construction.
inline double eps_imag_axis(const OscillatorModel& m, double xi, double tol = cm_inversion_tol) {
    const double s = term_sum_imag_axis(m.terms, xi);
    if (m.kind == ModelKind::lorentz_dirac) return 1.0 + s;
    if (1.0 - s < tol)
        throw singularity_error("clausius_mossotti inversion singular on the imaginary axis at xi = " +
                                std::to_string(xi) + " rad/s (rho = " + std::to_string(s) + ")");
    return (1.0 + 2.0 * s) / (1.0 - s);
}

/// Exact static permittivity, independent of the damping constants.
inline double eps_static(const OscillatorModel& m) {
    const double s = m.static_sum();
    if (m.kind == ModelKind::lorentz_dirac) return 1.0 + s;
    if (1.0 - s < cm_inversion_tol)
        throw singularity_error("clausius_mossotti static inversion singular: rho(0) = " + std::to_string(s));
    return (1.0 + 2.0 * s) / (1.0 - s);
}

} // namespace polder
