#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "polder/oscillator.hpp"
#include "polder/quadrature.hpp"

namespace polder::validation {

/// Im of the term sum in rationalized form,
///   sum_k a_k w [w_k^2 (g_k - g'_k) + w^2 g'_k] / [(w_k^2 - w^2)^2 + w^2 g_k^2].
/// For a CM model this is Im rho; for an LD model it is Im eps directly.
inline double im_term_sum(const std::vector<OscillatorTerm>& terms, double omega) {
    double s = 0.0;
    for (const auto& t : terms) {
        detail::check_pole(t, omega);
        const double w2 = t.omega_r * t.omega_r;
        const double num = t.a * omega * (w2 * (t.gamma - t.gamma_prime) + omega * omega * t.gamma_prime);
        const double d1 = w2 - omega * omega;
        const double den = d1 * d1 + omega * omega * t.gamma * t.gamma;
        if (den == 0.0) throw singularity_error("pole at omega = " + std::to_string(omega) + " rad/s");
        s += num / den;
    }
    return s;
}

/// Re of the term sum in rationalized form (companion of im_term_sum).
inline double re_term_sum(const std::vector<OscillatorTerm>& terms, double omega) {
    double s = 0.0;
    for (const auto& t : terms) {
        detail::check_pole(t, omega);
        const double w2 = t.omega_r * t.omega_r;
        const double d1 = w2 - omega * omega;
        const double den = d1 * d1 + omega * omega * t.gamma * t.gamma;
        if (den == 0.0) throw singularity_error("pole at omega = " + std::to_string(omega) + " rad/s");
        s += t.a * (w2 * d1 + t.gamma * t.gamma_prime * omega * omega) / den;
    }
    return s;
}

inline double im_rho_cm(const OscillatorModel& m, double omega) {
    if (m.kind != ModelKind::clausius_mossotti)
        throw domain_error("im_rho_cm requires a clausius_mossotti model");
    if (!(omega >= 0.0)) throw domain_error("im_rho_cm requires omega >= 0");
    return im_term_sum(m.terms, omega);
}

/// Im eps of a CM model through the sign identity
///   Im eps = 3 Im rho / ((1 - Re rho)^2 + (Im rho)^2),
/// which shares the sign of Im rho away from the inversion singularity.
inline double im_eps_cm(const OscillatorModel& m, double omega, double tol = cm_inversion_tol) {
    if (m.kind != ModelKind::clausius_mossotti)
        throw domain_error("im_eps_cm requires a clausius_mossotti model");
    const double re = re_term_sum(m.terms, omega);
    const double im = im_term_sum(m.terms, omega);
    const double den = (1.0 - re) * (1.0 - re) + im * im;
    if (den < tol * tol)
        throw singularity_error("clausius_mossotti inversion singular at omega = " + std::to_string(omega));
    return 3.0 * im / den;
}

/// Im eps for either model kind (LD: direct sum; CM: sign-identity route).
inline double im_eps(const OscillatorModel& m, double omega, double tol = cm_inversion_tol) {
    if (m.kind == ModelKind::lorentz_dirac) return im_term_sum(m.terms, omega);
    return im_eps_cm(m, omega, tol);
}

inline double re_eps(const OscillatorModel& m, double omega, double tol = cm_inversion_tol) {
    if (m.kind == ModelKind::lorentz_dirac) return 1.0 + re_term_sum(m.terms, omega);
    return eps_real_axis(m, omega, tol).real();
}

/// Per-term frequency window (0, omega_upper) on which the term's Im
/// contribution is negative (positive instead when the amplitude is negative,
/// flagged by sign_inverted).
struct NegativityWindow {
    std::size_t term_index = 0;
    double omega_upper = 0.0; // rad/s, exclusive
    bool sign_inverted = false;
};

/// A window exists iff gamma' > gamma; then omega_upper = w_r sqrt(1 - gamma/gamma').
/// Total over valid terms: gamma' <= gamma (including gamma' = 0) yields nullopt.
inline std::optional<NegativityWindow> negativity_window(const OscillatorTerm& t, std::size_t index = 0) {
    if (t.a == 0.0) return std::nullopt;
    if (!(t.gamma_prime > t.gamma)) return std::nullopt;
    const double w = t.omega_r * std::sqrt(1.0 - t.gamma / t.gamma_prime);
    return NegativityWindow{index, w, t.a < 0.0};
}

/// True when every term has a > 0 and gamma' > gamma, in which case Im eps < 0
/// on (0, min_k omega_upper). Sufficient, not necessary.
inline bool all_terms_negative_condition(const OscillatorModel& m) {
    for (const auto& t : m.terms)
        if (!(t.a > 0.0 && t.gamma_prime > t.gamma)) return false;
    return !m.terms.empty();
}

/// True when every term has a >= 0 and 0 <= gamma' <= gamma; then every
/// rationalized numerator is non-negative and Im eps >= 0 for all omega >= 0.
inline bool positivity_certificate(const OscillatorModel& m) {
    for (const auto& t : m.terms)
        if (!(t.a >= 0.0 && t.gamma_prime >= 0.0 && t.gamma_prime <= t.gamma)) return false;
    return true;
}

struct SignScanOptions {
    double omega_lo = 1e10;        // rad/s
    double omega_hi = 1e17;        // rad/s
    std::size_t grid_size = 3584;  // log-spaced points; default ~512/decade over 7 decades
    double endpoint_rel_tol = 1e-6;
    bool near_zero_probe = true;   // prepend omega = 1e-3 * min_k omega_r
};

/// An interval (omega_lo, omega_hi) on which Im eps < 0. lo == 0 means the
/// scan found Im eps < 0 down to the near-zero probe.
struct NegativeInterval {
    double omega_lo = 0.0;
    double omega_hi = 0.0;
};

/// Scan Im eps over a log-spaced grid and return the strictly negative
/// intervals, endpoints refined by bisection. Grid points where the model is
/// singular are skipped.
inline std::vector<NegativeInterval> scan_negative_intervals(const OscillatorModel& m,
                                                             const SignScanOptions& opt = {}) {
    if (!(opt.omega_hi > opt.omega_lo && opt.omega_lo > 0.0))
        throw domain_error("sign scan requires 0 < omega_lo < omega_hi");
    if (opt.grid_size < 16) throw domain_error("sign scan requires grid_size >= 16");

    std::vector<double> grid;
    grid.reserve(opt.grid_size + 1);
    if (opt.near_zero_probe) {
        double wmin = m.terms.front().omega_r;
        for (const auto& t : m.terms) wmin = std::min(wmin, t.omega_r);
        const double probe = 1e-3 * wmin;
        if (probe < opt.omega_lo) grid.push_back(probe);
    }
    const double llo = std::log(opt.omega_lo), lhi = std::log(opt.omega_hi);
    for (std::size_t i = 0; i < opt.grid_size; ++i)
        grid.push_back(std::exp(llo + (lhi - llo) * static_cast<double>(i) /
                                          static_cast<double>(opt.grid_size - 1)));

    const auto f = [&](double w) { return im_eps(m, w); };

    std::vector<NegativeInterval> out;
    bool in_negative = false;
    double neg_start = 0.0;     // 0 marks "negative from the bottom of the scan"
    double prev_w = 0.0;
    bool have_prev = false;

    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double w = grid[i];
        double v;
        try {
            v = f(w);
        } catch (const error&) {
            continue; // singular grid point; the neighbours still bracket any sign change
        }
        const bool neg = v < 0.0;
        if (!have_prev) {
            in_negative = neg;
            neg_start = 0.0; // below the scan floor the sign is taken from the first probe
            have_prev = true;
            prev_w = w;
            continue;
        }
        if (neg != in_negative) {
            // refine the crossing
            double crossing;
            try {
                crossing = bisect(f, prev_w, w, opt.endpoint_rel_tol);
            } catch (const error&) {
                crossing = 0.5 * (prev_w + w);
            }
            if (neg) {
                neg_start = crossing;
            } else {
                out.push_back({neg_start, crossing});
            }
            in_negative = neg;
        }
        prev_w = w;
    }
    if (in_negative && have_prev) out.push_back({neg_start, prev_w});
    return out;
}

} // namespace polder::validation
