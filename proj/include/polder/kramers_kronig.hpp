#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "polder/constants.hpp"
#include "polder/quadrature.hpp"
#include "polder/temperature.hpp"
#include "polder/validation.hpp"

namespace polder::kk {

struct KKOptions {
    double rel_tol = 1e-6;
    double omega_cutoff = 0.0;     // 0 -> max(1e4 * max_k omega_r, 1e3 * xi)
    bool clamp_negative_im = false; // integrate max(Im eps, 0) instead of Im eps
};

struct KKResult {
    double eps = 1.0;
    double error_bound = 0.0;
};

/// eps(i xi) from the real-axis imaginary part via
///   eps(i xi) = 1 + (2/pi) int_0^inf w Im eps(w) / (w^2 + xi^2) dw.
/// The integral is evaluated adaptively up to omega_cutoff; beyond it the
/// asymptote Im eps ~ C1/w + C3/w^3 is fitted from samples at the cutoff and
/// integrated in closed form. No principal value is needed: the kernel
/// denominator is positive for xi > 0.
inline KKResult kk_reconstruct(const OscillatorModel& m, double xi, const KKOptions& opt = {}) {
    if (!(xi > 0.0)) throw domain_error("kk_reconstruct requires xi > 0");

    double w_max = 0.0;
    for (const auto& t : m.terms) w_max = std::max(w_max, t.omega_r);
    const double cutoff =
        opt.omega_cutoff > 0.0 ? opt.omega_cutoff : std::max(1e4 * w_max, 1e3 * xi);
    if (cutoff <= 10.0 * std::max(w_max, xi))
        throw domain_error("kk_reconstruct: omega_cutoff too small for a meaningful tail split");

    const auto im = [&](double w) {
        const double v = validation::im_eps(m, w);
        return opt.clamp_negative_im ? std::max(v, 0.0) : v;
    };
    const auto g = [&](double w) { return w * im(w) / (w * w + xi * xi); };

    // Segment the range at the model's resonances, at xi, and at scanned
    // peaks of |Im eps|. The bare resonances alone are not safe seeds: a
    // Clausius-Mossotti inversion concentrates spectral weight where 1 - rho
    // nearly vanishes, well away from omega_r.
    std::vector<double> breaks;
    for (const auto& t : m.terms) breaks.push_back(t.omega_r);
    breaks.push_back(xi);

    double w_scan_lo = xi;
    for (const auto& t : m.terms) w_scan_lo = std::min(w_scan_lo, t.omega_r);
    w_scan_lo /= 30.0;
    const double w_scan_hi = std::min(cutoff, 30.0 * std::max(w_max, xi));
    const int n_scan =
        64 * static_cast<int>(std::ceil(std::log10(w_scan_hi / w_scan_lo))) + 1;
    std::vector<double> scan_y(static_cast<std::size_t>(n_scan));
    const double scan_step = std::log(w_scan_hi / w_scan_lo) / (n_scan - 1);
    const auto scan_w = [&](int i) { return w_scan_lo * std::exp(scan_step * i); };
    for (int i = 0; i < n_scan; ++i) scan_y[static_cast<std::size_t>(i)] = std::abs(im(scan_w(i)));
    for (int i = 1; i + 1 < n_scan; ++i) {
        const auto s = static_cast<std::size_t>(i);
        if (scan_y[s] > 0.0 && scan_y[s] >= scan_y[s - 1] && scan_y[s] >= scan_y[s + 1]) {
            breaks.push_back(scan_w(i - 1));
            breaks.push_back(scan_w(i));
            breaks.push_back(scan_w(i + 1));
        }
    }

    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::remove_if(breaks.begin(), breaks.end(),
                                [&](double b) { return b <= 0.0 || b >= 0.9 * cutoff; }),
                 breaks.end());

    // Rough one-pass scale fixes the absolute tolerance handed to the
    // verified panel refinement.
    double rough = 0.0;
    {
        double rlo = 0.0;
        for (double b : breaks) {
            if (b <= rlo) continue;
            rough += std::abs(detail::kronrod_once(g, rlo, b));
            rlo = b;
        }
    }
    const double tol_abs = opt.rel_tol * std::max(rough, 1e-300);

    double integral = 0.0, quad_err = 0.0;
    double lo = 0.0;
    for (double b : breaks) {
        if (b <= lo) continue;
        const auto r = integrate_refined(g, lo, b, tol_abs);
        integral += r.value;
        quad_err += r.error;
        lo = b;
    }
    // Final smooth decaying segment mapped by u = lo/w so the ~w^-3 decay
    // becomes nearly linear in u.
    if (lo > 0.0) {
        const double seg_lo = lo;
        const auto r = integrate_refined(
            [&](double u) {
                const double w = seg_lo / u;
                return g(w) * seg_lo / (u * u);
            },
            seg_lo / cutoff, 1.0, tol_abs);
        integral += r.value;
        quad_err += r.error;
    } else {
        const auto r = integrate_refined(g, 0.0, cutoff, tol_abs);
        integral += r.value;
        quad_err += r.error;
    }

    // Tail fit: Im eps(w) ~ C1/w + C3/w^3 from samples at cutoff and 2*cutoff.
    const double im1 = im(cutoff), im2 = im(2.0 * cutoff);
    const double x1 = im1 * cutoff, x2 = im2 * 2.0 * cutoff;
    const double c3 = (x1 - x2) * cutoff * cutoff * 4.0 / 3.0;
    const double c1 = x2 - c3 / (4.0 * cutoff * cutoff);
    const double at = std::atan(xi / cutoff) / xi; // -> 1/cutoff as xi -> 0
    double tail = c1 * at + (c3 / (xi * xi)) * (1.0 / cutoff - at);
    if (opt.clamp_negative_im && tail < 0.0) tail = 0.0;

    // Tail-model residual at 1.5*cutoff bounds the fit's credibility.
    const double wm = 1.5 * cutoff;
    const double fit_mid = c1 / wm + c3 / (wm * wm * wm);
    const double mid = im(wm);
    const double tail_rel_err =
        std::abs(fit_mid - mid) / (std::abs(mid) + 1e-300);
    const double tail_err = std::abs(tail) * std::min(1.0, tail_rel_err) + std::abs(tail) * 1e-3;

    KKResult out;
    out.eps = 1.0 + (2.0 / pi) * (integral + tail);
    out.error_bound = (2.0 / pi) * (quad_err + tail_err);
    return out;
}

inline KKResult kk_reconstruct(const TemperatureFit& fit, double t_delta, double xi,
                               const KKOptions& opt = {}) {
    return kk_reconstruct(params_at(fit, t_delta), xi, opt);
}

} // namespace polder::kk
