#pragma once

#include <cmath>
#include <complex>
#include <future>
#include <limits>
#include <string>
#include <vector>

#include "polder/kramers_kronig.hpp"
#include "polder/oscillator.hpp"
#include "polder/temperature.hpp"
#include "polder/validation.hpp"

namespace polder::validation {

inline double im_rho_cm(const TemperatureFit& fit, double t_delta, double omega,
                        RangeMode mode = RangeMode::warn) {
    return im_rho_cm(params_at(fit, t_delta, mode), omega);
}

inline double im_eps_cm(const TemperatureFit& fit, double t_delta, double omega,
                        RangeMode mode = RangeMode::warn) {
    return im_eps_cm(params_at(fit, t_delta, mode), omega);
}

struct AuditOptions {
    SignScanOptions scan;
    /// Kramers-Kronig self-consistency probes on the imaginary axis; zero
    /// disables the check.
    std::size_t kk_probes = 5;
    double kk_xi_lo = 1e13;
    double kk_xi_hi = 1e16;
    kk::KKOptions kk;
    std::size_t parity_samples = 8;
    double parity_rel_tol = 1e-9;
    RangeMode range_mode = RangeMode::warn;
    bool parallel = true;
};

struct ValidationReport {
    double t_delta = 0.0;
    std::vector<NegativityWindow> windows;
    /// All terms satisfy the per-term negativity condition, which guarantees
    /// the whole low-frequency window (0, min_k omega_upper_k) is negative.
    bool sufficient_all_terms = false;
    std::vector<NegativeInterval> numeric_negative_intervals;
    /// max over probes of |eps_kk - eps_direct| / |eps_direct|; NaN when the
    /// check is disabled or the model could not be evaluated on the axis.
    double kk_max_relative_residual = std::numeric_limits<double>::quiet_NaN();
    bool parity_ok = false;
    bool outside_fit_range = false;
    std::vector<std::string> notes;
};

namespace detail {

inline ValidationReport audit_point(const TemperatureFit& fit, double t_delta, const AuditOptions& opt) {
    ValidationReport rep;
    rep.t_delta = t_delta;
    rep.outside_fit_range = !fit.in_range(t_delta);

    OscillatorModel model = params_at(fit, t_delta, opt.range_mode);

    for (std::size_t k = 0; k < model.terms.size(); ++k)
        if (auto w = negativity_window(model.terms[k], k)) rep.windows.push_back(*w);
    rep.sufficient_all_terms = all_terms_negative_condition(model);
    rep.numeric_negative_intervals = scan_negative_intervals(model, opt.scan);

    if (opt.kk_probes > 0) {
        double worst = 0.0;
        bool usable = true;
        for (std::size_t i = 0; i < opt.kk_probes && usable; ++i) {
            const double f = opt.kk_probes == 1
                                 ? 0.5
                                 : static_cast<double>(i) / static_cast<double>(opt.kk_probes - 1);
            const double xi = opt.kk_xi_lo * std::pow(opt.kk_xi_hi / opt.kk_xi_lo, f);
            try {
                const double direct = eps_imag_axis(model, xi);
                const auto rec = kk::kk_reconstruct(model, xi, opt.kk);
                worst = std::max(worst, std::abs(rec.eps - direct) / std::abs(direct));
            } catch (const error& e) {
                rep.notes.push_back("kk probe at xi = " + std::to_string(xi) + " failed: " + e.what());
                usable = false;
            }
        }
        if (usable) rep.kk_max_relative_residual = worst;
    }

    std::size_t checked = 0, passed = 0;
    for (std::size_t i = 0; i < opt.parity_samples; ++i) {
        const double f = opt.parity_samples == 1
                             ? 0.5
                             : static_cast<double>(i) / static_cast<double>(opt.parity_samples - 1);
        const double w = opt.scan.omega_lo * std::pow(opt.scan.omega_hi / opt.scan.omega_lo, f);
        try {
            const auto ep = eps_real_axis(model, w);
            const auto em = eps_real_axis(model, -w);
            const double scale = std::abs(ep);
            ++checked;
            if (std::abs(em - std::conj(ep)) <= opt.parity_rel_tol * scale) ++passed;
        } catch (const error&) {
            // singular sample point, not a parity statement
        }
    }
    rep.parity_ok = checked > 0 && checked == passed;
    return rep;
}

} // namespace detail

/// Runs the full consistency audit at every grid point. Points are
/// independent; evaluation order never affects the result.
inline std::vector<ValidationReport> audit(const TemperatureFit& fit, const std::vector<double>& t_grid,
                                           const AuditOptions& opt = {}) {
    std::vector<ValidationReport> out(t_grid.size());
    auto run = [&](std::size_t i) {
        try {
            return detail::audit_point(fit, t_grid[i], opt);
        } catch (const error& e) {
            throw model_error("audit at t_delta = " + std::to_string(t_grid[i]) + ": " + e.what());
        }
    };
    if (!opt.parallel || t_grid.size() < 2) {
        for (std::size_t i = 0; i < t_grid.size(); ++i) out[i] = run(i);
        return out;
    }
    std::vector<std::future<ValidationReport>> futs;
    futs.reserve(t_grid.size());
    for (std::size_t i = 0; i < t_grid.size(); ++i)
        futs.push_back(std::async(std::launch::async, run, i));
    for (std::size_t i = 0; i < t_grid.size(); ++i) out[i] = futs[i].get();
    return out;
}

inline std::vector<ValidationReport> audit(const TemperatureFit& fit, const std::vector<double>& t_grid,
                                           double omega_lo, double omega_hi, std::size_t grid_size) {
    AuditOptions opt;
    opt.scan.omega_lo = omega_lo;
    opt.scan.omega_hi = omega_hi;
    opt.scan.grid_size = grid_size;
    return audit(fit, t_grid, opt);
}

} // namespace polder::validation
