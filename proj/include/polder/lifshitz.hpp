#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "polder/atom.hpp"
#include "polder/constants.hpp"
#include "polder/errors.hpp"
#include "polder/kramers_kronig.hpp"
#include "polder/oscillator.hpp"
#include "polder/quadrature.hpp"
#include "polder/temperature.hpp"
#include "polder/validation.hpp"

namespace polder::lifshitz {

/// Half-space bounding the vacuum gap. The ideal-metal wall is kept as its
/// own kind because its reflection ratios are exact constants; a large finite
/// eps would approach them only as 1/sqrt(eps).
struct Plate {
    enum class Kind { ideal_metal, constant_eps, oscillator };

    Kind kind = Kind::ideal_metal;
    double eps_value = 1.0;
    OscillatorModel model;

    static Plate ideal_metal() { return Plate{Kind::ideal_metal, 1.0, {}}; }

    static Plate constant(double eps) {
        if (!(eps >= 1.0)) throw domain_error("constant plate eps must be >= 1 on the imaginary axis");
        return Plate{Kind::constant_eps, eps, {}};
    }

    static Plate dielectric(OscillatorModel m) {
        check_model(m);
        return Plate{Kind::oscillator, 1.0, std::move(m)};
    }

    /// eps(i xi); throws for the ideal-metal wall, which has no finite eps.
    double eps_imag_axis(double xi) const {
        switch (kind) {
            case Kind::constant_eps: return eps_value;
            case Kind::oscillator: return polder::eps_imag_axis(model, xi);
            case Kind::ideal_metal: break;
        }
        throw model_error("ideal-metal plate has no finite eps(i xi)");
    }

    /// Smallest resonance scale, used to place integration breakpoints and to
    /// pick the reduced-wavelength ladder for the retarded extrapolation.
    std::optional<double> min_resonance() const {
        if (kind != Kind::oscillator || model.terms.empty()) return std::nullopt;
        double w = model.terms.front().omega_r;
        for (const auto& t : model.terms) w = std::min(w, t.omega_r);
        return w;
    }
};

struct Fresnel {
    double r_tm = 0.0;
    double r_te = 0.0;
};

/// Reflection ratios on the imaginary frequency axis in the scaled variables
///   x = 2 z q,  y = 2 z xi / c,
/// where q >= xi/c is the vacuum transverse decay constant, so x >= y >= 0.
/// The pair is homogeneous of degree zero in (x, y), so any common rescaling
/// of the arguments is legal. x^2 + (eps - 1) y^2 >= x^2 - y^2 >= 0 keeps the
/// medium-side constant real for every eps > 0.
inline Fresnel fresnel_xy(double eps, double x, double y) {
    if (!(eps > 0.0)) throw domain_error("fresnel_xy: eps(i xi) must be > 0, got " + std::to_string(eps));
    if (!(x >= y) || !(y >= 0.0)) throw domain_error("fresnel_xy: need x >= y >= 0");
    const double kappa = std::sqrt(x * x + (eps - 1.0) * y * y);
    return Fresnel{(eps * x - kappa) / (eps * x + kappa), (x - kappa) / (x + kappa)};
}

/// Same ratios from SI arguments: imaginary frequency xi (rad/s) and vacuum
/// decay constant q (1/m), q >= xi/c.
inline Fresnel fresnel_imag(double eps, double xi, double q) {
    if (!(xi >= 0.0)) throw domain_error("fresnel_imag: need xi >= 0");
    if (!(q >= xi / si.c)) throw domain_error("fresnel_imag: need q >= xi/c");
    if (q == 0.0) throw domain_error("fresnel_imag: q and xi cannot both vanish");
    return fresnel_xy(eps, q, xi / si.c);
}

/// Inner x-integral against an ideal-metal wall,
///   J(y) = int_y^inf e^{-x} 2 x^2 dx = 2 e^{-y} (y^2 + 2 y + 2).
inline double j_ideal(double y) { return 2.0 * std::exp(-y) * (y * y + 2.0 * y + 2.0); }

struct PotentialOptions {
    double rel_tol = 1e-8;
    unsigned max_depth = 20;
    /// Upper cutoff for the exponentially damped scaled variables; e^{-45}
    /// is far below any tolerance used here.
    double exp_cut = 45.0;
};

namespace detail {

/// J(y) for a plate with fixed eps at this xi; s = x - y keeps the
/// exponential factored out so large y stays well conditioned.
inline QuadResult inner_j(double y, const Plate& plate, double eps, const PotentialOptions& opt) {
    const double y2 = y * y;
    auto f = [&](double s) {
        const double x = y + s;
        Fresnel r;
        if (plate.kind == Plate::Kind::ideal_metal) {
            r = Fresnel{1.0, -1.0};
        } else {
            r = fresnel_xy(eps, x, y);
        }
        return std::exp(-s) * ((2.0 * x * x - y2) * r.r_tm - y2 * r.r_te);
    };
    const double rough = std::abs(polder::detail::kronrod_once(f, 0.0, opt.exp_cut));
    const auto q = integrate_refined(f, 0.0, opt.exp_cut, 0.2 * opt.rel_tol * std::max(rough, 1.0),
                                     static_cast<int>(opt.max_depth));
    const double e = std::exp(-y);
    return QuadResult{e * q.value, e * q.error};
}

/// Breakpoints for the t in (0, 1) map xi = scale * t / (1 - t): plate
/// resonances plus the scales where the exponential damping turns on.
inline std::vector<double> outer_breakpoints(double scale, double t_hi,
                                             const std::vector<double>& xi_features) {
    std::vector<double> ts{0.0, t_hi};
    for (double xi : xi_features) {
        if (!(xi > 0.0)) continue;
        const double t = xi / (scale + xi);
        if (t > 1e-14 && t < t_hi * (1.0 - 1e-12)) ts.push_back(t);
    }
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end(),
                         [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(a, b); }),
             ts.end());
    return ts;
}

inline std::vector<double> plate_resonances(const Plate& plate) {
    std::vector<double> xs;
    if (plate.kind == Plate::Kind::oscillator)
        for (const auto& t : plate.model.terms) xs.push_back(t.omega_r);
    return xs;
}

} // namespace detail

/// Ground-state atom-wall potential at zero temperature,
///   U(z) = -(hbar c / (32 pi z^4)) int_0^inf dy alpha(y c / (2 z)) J(y),
/// with z in cm and the result in erg. Valid at any separation; the
/// non-retarded and retarded limits fall out of the same integral.
inline QuadResult potential_t0(const Polarizability& alpha, const Plate& plate, double z_cm,
                               const PotentialOptions& opt = {}) {
    if (!(z_cm > 0.0)) throw domain_error("potential_t0: separation must be > 0, got " + std::to_string(z_cm));
    const double c = cgs.c;
    const double xi_of_y = c / (2.0 * z_cm); // xi = y * xi_of_y

    const double scale = alpha.frequency_scale();
    const double xi_cut = opt.exp_cut * xi_of_y;
    const double t_hi = xi_cut / (scale + xi_cut);

    std::vector<double> features = detail::plate_resonances(plate);
    for (double y : {0.3, 3.0, 30.0}) features.push_back(y * xi_of_y);
    const auto ts = detail::outer_breakpoints(scale, t_hi, features);

    auto integrand = [&](double t) {
        const double u = 1.0 - t;
        if (u <= 0.0) return 0.0;
        const double xi = scale * t / u;
        const double y = xi / xi_of_y;
        const double eps = plate.kind == Plate::Kind::ideal_metal ? 1.0 : plate.eps_imag_axis(xi);
        const double j = detail::inner_j(y, plate, eps, opt).value;
        // dy = (2 z / c) dxi, dxi = scale / u^2 dt
        return alpha(xi) * j * scale / (u * u) / xi_of_y;
    };

    // One rough pass fixes the absolute tolerance so a segment carrying a
    // negligible share of the integral cannot fail the whole evaluation on
    // its own relative error.
    double rough = 0.0;
    for (std::size_t i = 0; i + 1 < ts.size(); ++i)
        rough += std::abs(polder::detail::kronrod_once(integrand, ts[i], ts[i + 1]));
    const double tol_abs = opt.rel_tol * std::max(rough, 1e-300);

    double total = 0.0, err = 0.0;
    for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
        const auto q = integrate_refined(integrand, ts[i], ts[i + 1], tol_abs,
                                         static_cast<int>(opt.max_depth));
        total += q.value;
        err += q.error;
    }

    const double pref = -cgs.hbar * c / (32.0 * pi * std::pow(z_cm, 4));
    // Inner tolerance is a factor 5 below the outer one; widen the bound to
    // cover its leakage.
    return QuadResult{pref * total, std::abs(pref) * (err + 0.2 * opt.rel_tol * std::abs(total)) * 2.0};
}

/// Non-retarded van der Waals coefficient, U -> -C3 / z^3 as z -> 0:
///   C3 = (hbar / 4 pi) int_0^inf dxi alpha(i xi) (eps(i xi) - 1)/(eps(i xi) + 1),
/// in erg cm^3. The ideal-metal ratio is exactly 1.
inline QuadResult c3_coefficient(const Polarizability& alpha, const Plate& plate,
                                 double rel_tol = 1e-9) {
    const double scale = alpha.frequency_scale();
    auto ratio = [&](double xi) {
        if (plate.kind == Plate::Kind::ideal_metal) return 1.0;
        const double e = plate.eps_imag_axis(xi);
        return (e - 1.0) / (e + 1.0);
    };
    auto integrand = [&](double t) {
        const double u = 1.0 - t;
        if (u <= 0.0) return 0.0;
        const double xi = scale * t / u;
        return alpha(xi) * ratio(xi) * scale / (u * u);
    };
    const auto ts = detail::outer_breakpoints(scale, 1.0, detail::plate_resonances(plate));
    double rough = 0.0;
    for (std::size_t i = 0; i + 1 < ts.size(); ++i)
        rough += std::abs(polder::detail::kronrod_once(integrand, ts[i], ts[i + 1]));
    const double tol_abs = rel_tol * std::max(rough, 1e-300);
    double total = 0.0, err = 0.0;
    for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
        const auto q = integrate_refined(integrand, ts[i], ts[i + 1], tol_abs);
        total += q.value;
        err += q.error;
    }
    const double pref = cgs.hbar / (4.0 * pi);
    return QuadResult{pref * total, pref * err};
}

/// Closed forms for the ideal-metal wall and a single-oscillator atom.
inline double c3_ideal(const AtomModel& a) {
    return cgs.hbar * a.alpha0_cm3 * a.omega_a / 8.0;
}
inline double c4_ideal(const AtomModel& a) {
    return 3.0 * cgs.hbar * cgs.c * a.alpha0_cm3 / (8.0 * pi);
}

struct C4Options {
    PotentialOptions potential;
    /// Ladder of separations z_j = lambda_bar * 10^(1 + 2 j / (points - 1)),
    /// spanning 10 to 1000 reduced wavelengths.
    std::size_t points = 9;
    std::size_t extrapolate_from = 4; // deepest points fed to Neville
    double drift_tol = 0.01;
};

struct C4Result {
    double c4 = 0.0;    // erg cm^4
    double error = 0.0; // extrapolation + quadrature estimate
    double lambda_bar_cm = 0.0;
    std::vector<double> z_cm;
    std::vector<double> z4u; // -z^4 U(z) along the ladder
};

/// Retarded coefficient via a deep-separation ladder: -z^4 U(z) is sampled on
/// a geometric ladder of z and Richardson-extrapolated in lambda_bar / z to
/// the z -> inf limit. Throws extraction_error when the ladder has not
/// plateaued, which signals a polarizability or plate scale the ladder missed.
inline C4Result c4_extract(const Polarizability& alpha, const Plate& plate, const C4Options& opt = {}) {
    if (opt.points < opt.extrapolate_from + 1 || opt.extrapolate_from < 2)
        throw domain_error("c4_extract: need points > extrapolate_from >= 2");
    const double c = cgs.c;
    double lambda_bar = 2.0 * pi * c / alpha.frequency_scale();
    if (const auto w = plate.min_resonance())
        lambda_bar = std::max(lambda_bar, 2.0 * pi * c / *w);

    C4Result out;
    out.lambda_bar_cm = lambda_bar;
    double quad_err = 0.0;
    for (std::size_t j = 0; j < opt.points; ++j) {
        const double expo = 1.0 + 2.0 * static_cast<double>(j) / static_cast<double>(opt.points - 1);
        const double z = lambda_bar * std::pow(10.0, expo);
        const auto u = potential_t0(alpha, plate, z, opt.potential);
        out.z_cm.push_back(z);
        out.z4u.push_back(-std::pow(z, 4) * u.value);
        quad_err = std::max(quad_err, std::pow(z, 4) * u.error);
    }

    const std::size_t n = opt.points;
    const std::size_t m = opt.extrapolate_from;
    const double fn = out.z4u[n - 1];
    if (fn == 0.0 && *std::max_element(out.z4u.begin(), out.z4u.end()) == 0.0) {
        out.c4 = 0.0;
        out.error = quad_err;
        return out;
    }
    for (std::size_t j : {n - 2, n - 3}) {
        if (!(std::abs(out.z4u[j + 1] - out.z4u[j]) <= opt.drift_tol * std::abs(fn)))
            throw extraction_error("c4_extract: no plateau; -z^4 U still drifts by more than " +
                                   std::to_string(opt.drift_tol) + " between z = " +
                                   std::to_string(out.z_cm[j]) + " and " + std::to_string(out.z_cm[j + 1]) +
                                   " cm");
    }

    // Neville in t = lambda_bar / z at t = 0 over the deepest m points.
    auto neville = [&](std::size_t count) {
        std::vector<double> t(count), p(count);
        for (std::size_t i = 0; i < count; ++i) {
            t[i] = lambda_bar / out.z_cm[n - count + i];
            p[i] = out.z4u[n - count + i];
        }
        for (std::size_t lvl = 1; lvl < count; ++lvl)
            for (std::size_t i = 0; i + lvl < count; ++i)
                p[i] = (t[i + lvl] * p[i] - t[i] * p[i + 1]) / (t[i + lvl] - t[i]);
        return p[0];
    };
    const double full = neville(m);
    const double reduced = neville(m - 1);
    out.c4 = full;
    out.error = std::abs(full - reduced) + quad_err;
    return out;
}

/// Bundle returned by the coefficient pipeline for one temperature point.
struct CPCoefficients {
    double t_delta = 0.0;
    double c3_erg_cm3 = 0.0;
    double c3_error = 0.0;
    double c4_erg_cm4 = 0.0;
    double c4_error = 0.0;
    /// Set when the plate model shows negative Im eps anywhere on the scan
    /// grid; the coefficients are still reported.
    bool unphysical_input = false;
};

inline CPCoefficients coefficients(const Polarizability& alpha, const OscillatorModel& plate_model,
                                   double t_delta, const C4Options& opt = {}) {
    const Plate plate = Plate::dielectric(plate_model);
    CPCoefficients out;
    out.t_delta = t_delta;
    const auto c3 = c3_coefficient(alpha, plate);
    out.c3_erg_cm3 = c3.value;
    out.c3_error = c3.error;
    const auto c4 = c4_extract(alpha, plate, opt);
    out.c4_erg_cm4 = c4.c4;
    out.c4_error = c4.error;
    out.unphysical_input = !validation::scan_negative_intervals(plate_model).empty();
    return out;
}

// Temperature-fit facing overloads; z crosses this interface in metres, the
// energy comes back in erg.
inline QuadResult potential_t0(const Polarizability& alpha, const TemperatureFit& fit, double t_delta,
                               double z_m, const PotentialOptions& opt = {},
                               RangeMode mode = RangeMode::warn) {
    const Plate plate = Plate::dielectric(params_at(fit, t_delta, mode));
    return potential_t0(alpha, plate, length_cm_from_m(z_m), opt);
}

inline QuadResult c3_coefficient(const Polarizability& alpha, const TemperatureFit& fit, double t_delta,
                                 double rel_tol = 1e-9, RangeMode mode = RangeMode::warn) {
    return c3_coefficient(alpha, Plate::dielectric(params_at(fit, t_delta, mode)), rel_tol);
}

inline C4Result c4_extract(const Polarizability& alpha, const TemperatureFit& fit, double t_delta,
                           const C4Options& opt = {}, RangeMode mode = RangeMode::warn) {
    return c4_extract(alpha, Plate::dielectric(params_at(fit, t_delta, mode)), opt);
}

inline CPCoefficients coefficients(const Polarizability& alpha, const TemperatureFit& fit, double t_delta,
                                   const C4Options& opt = {}, RangeMode mode = RangeMode::warn) {
    return coefficients(alpha, params_at(fit, t_delta, mode), t_delta, opt);
}

struct SensitivityOptions {
    double quad_rel_tol = 1e-6;
    kk::KKOptions kk; // applied to both reconstruction routes
};

/// How much the negative-Im windows move C3: the permittivity on the
/// imaginary axis is rebuilt through the Kramers-Kronig transform twice, once
/// from Im eps as given and once with negative values clamped to zero, and C3
/// is computed from each. For positivity-passing models the two agree and the
/// delta is pure quadrature noise.
struct SensitivityResult {
    double c3_direct = 0.0;  // analytic eps(i xi)
    double c3_raw = 0.0;     // KK of Im eps as given
    double c3_clamped = 0.0; // KK of max(Im eps, 0)
    double delta = 0.0;      // clamped - raw
    double delta_rel = 0.0;  // delta / |c3_direct|
};

inline SensitivityResult sensitivity_c3(const Polarizability& alpha, const OscillatorModel& model,
                                        const SensitivityOptions& opt = {}) {
    check_model(model);
    const double scale = alpha.frequency_scale();
    const double pref = cgs.hbar / (4.0 * pi);

    auto c3_via = [&](auto eps_of_xi) {
        auto integrand = [&](double t) {
            const double u = 1.0 - t;
            if (u <= 0.0) return 0.0;
            const double xi = scale * t / u;
            const double e = eps_of_xi(xi);
            // raw reconstructions of strongly inverted models can cross the
            // eps = -1 pole of the ratio; skip the node instead of feeding
            // an infinity to the quadrature
            const double d = e + 1.0;
            if (std::abs(d) < 1e-12 * (1.0 + std::abs(e))) return 0.0;
            return alpha(xi) * (e - 1.0) / d * scale / (u * u);
        };
        std::vector<double> feats;
        for (const auto& trm : model.terms) feats.push_back(trm.omega_r);
        const auto ts = detail::outer_breakpoints(scale, 1.0, feats);
        double rough = 0.0;
        for (std::size_t i = 0; i + 1 < ts.size(); ++i)
            rough += std::abs(polder::detail::kronrod_once(integrand, ts[i], ts[i + 1]));
        const double tol_abs = opt.quad_rel_tol * std::max(rough, 1e-300);
        double total = 0.0;
        for (std::size_t i = 0; i + 1 < ts.size(); ++i)
            total += integrate_refined(integrand, ts[i], ts[i + 1], tol_abs).value;
        return pref * total;
    };

    SensitivityResult out;
    out.c3_direct = c3_via([&](double xi) { return eps_imag_axis(model, xi); });
    kk::KKOptions raw = opt.kk;
    raw.clamp_negative_im = false;
    out.c3_raw = c3_via([&](double xi) { return kk::kk_reconstruct(model, xi, raw).eps; });
    kk::KKOptions clamped = opt.kk;
    clamped.clamp_negative_im = true;
    out.c3_clamped = c3_via([&](double xi) { return kk::kk_reconstruct(model, xi, clamped).eps; });
    out.delta = out.c3_clamped - out.c3_raw;
    out.delta_rel = out.c3_direct != 0.0 ? out.delta / std::abs(out.c3_direct) : 0.0;
    return out;
}

} // namespace polder::lifshitz
