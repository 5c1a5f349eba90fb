#pragma once

#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "polder/audit.hpp"
#include "polder/csv.hpp"
#include "polder/lifshitz.hpp"
#include "polder/regimes.hpp"

namespace polder::io {

using ordered_json = nlohmann::ordered_json;

inline ordered_json to_json(const validation::ValidationReport& r) {
    ordered_json j;
    j["t_delta"] = r.t_delta;
    auto& ws = j["windows"] = ordered_json::array();
    for (const auto& w : r.windows) {
        ordered_json wj;
        wj["term_index"] = w.term_index;
        wj["omega_upper"] = w.omega_upper;
        wj["sign_inverted"] = w.sign_inverted;
        ws.push_back(std::move(wj));
    }
    j["sufficient_all_terms"] = r.sufficient_all_terms;
    auto& is = j["numeric_negative_intervals"] = ordered_json::array();
    for (const auto& iv : r.numeric_negative_intervals)
        is.push_back(ordered_json::array({iv.omega_lo, iv.omega_hi}));
    if (std::isnan(r.kk_max_relative_residual))
        j["kk_max_relative_residual"] = nullptr;
    else
        j["kk_max_relative_residual"] = r.kk_max_relative_residual;
    j["parity_ok"] = r.parity_ok;
    j["outside_fit_range"] = r.outside_fit_range;
    j["notes"] = r.notes;
    return j;
}

inline ordered_json to_json(const std::vector<validation::ValidationReport>& reports) {
    ordered_json arr = ordered_json::array();
    for (const auto& r : reports) arr.push_back(to_json(r));
    return arr;
}

inline ordered_json to_json(const lifshitz::CPCoefficients& c) {
    ordered_json j;
    j["t_delta"] = c.t_delta;
    j["c3"] = ordered_json{{"erg_cm3", c.c3_erg_cm3},
                           {"j_m3", c3_si_from_cgs(c.c3_erg_cm3)},
                           {"au", c3_au_from_cgs(c.c3_erg_cm3)},
                           {"error_erg_cm3", c.c3_error}};
    j["c4"] = ordered_json{{"erg_cm4", c.c4_erg_cm4},
                           {"j_m4", c4_si_from_cgs(c.c4_erg_cm4)},
                           {"au", c4_au_from_cgs(c.c4_erg_cm4)},
                           {"error_erg_cm4", c.c4_error}};
    j["unphysical_input"] = c.unphysical_input;
    return j;
}

inline ordered_json to_json(const lifshitz::SensitivityResult& s) {
    ordered_json j;
    j["c3_direct_erg_cm3"] = s.c3_direct;
    j["c3_kk_raw_erg_cm3"] = s.c3_raw;
    j["c3_kk_clamped_erg_cm3"] = s.c3_clamped;
    j["delta_clamped_minus_raw"] = s.delta;
    j["delta_relative_to_direct"] = s.delta_rel;
    return j;
}

inline ordered_json to_json(const regimes::RegimeVerdict& v) {
    ordered_json j;
    j["z_m"] = v.z_m;
    j["thermal_wavelength_m"] = v.thermal_wavelength_m;
    j["continuum_ok"] = v.continuum_ok;
    j["short_range_ok"] = v.short_range_ok;
    j["long_range_ok"] = v.long_range_ok;
    j["alt_short_ok"] = v.alt_short_ok;
    j["alt_long_ok"] = v.alt_long_ok;
    j["continuum"] = regimes::to_string(v.continuum);
    j["short_range"] = regimes::to_string(v.short_range);
    j["long_range"] = regimes::to_string(v.long_range);
    j["alt_short"] = regimes::to_string(v.alt_short);
    j["alt_long"] = regimes::to_string(v.alt_long);
    j["notes"] = v.notes;
    return j;
}

inline ordered_json to_json(const regimes::CompareReport& r) {
    ordered_json j;
    j["verdict"] = to_json(r.verdict);
    j["alt_short_raw"] = r.alt_short_raw;
    j["alt_long_raw"] = r.alt_long_raw;
    auto& ds = j["discrepancies"] = ordered_json::array();
    for (const auto& d : r.discrepancies) {
        ordered_json dj;
        dj["condition"] = d.condition;
        dj["alternative_grants"] = d.alternative_grants;
        dj["founders_grant"] = d.founders_grant;
        dj["reason"] = d.reason;
        ds.push_back(std::move(dj));
    }
    return j;
}

/// (omega, Re eps, Im eps) sweep rows for plotting.
inline void write_curve_csv(std::ostream& os, const OscillatorModel& m, double omega_lo, double omega_hi,
                            std::size_t n) {
    if (!(omega_lo > 0.0) || !(omega_hi > omega_lo) || n < 2)
        throw domain_error("curve sweep needs 0 < omega_lo < omega_hi and n >= 2");
    os << "omega_rad_s,eps_re,eps_im\n";
    csv::Writer w(os);
    for (std::size_t i = 0; i < n; ++i) {
        const double f = static_cast<double>(i) / static_cast<double>(n - 1);
        const double omega = omega_lo * std::pow(omega_hi / omega_lo, f);
        const auto e = eps_real_axis(m, omega);
        w.field(omega).field(e.real()).field(e.imag());
        w.end_row();
    }
}

/// (xi, eps(i xi)) sweep rows.
inline void write_imag_axis_csv(std::ostream& os, const OscillatorModel& m, double xi_lo, double xi_hi,
                                std::size_t n) {
    if (!(xi_lo >= 0.0) || !(xi_hi > xi_lo) || n < 2)
        throw domain_error("imaginary-axis sweep needs 0 <= xi_lo < xi_hi and n >= 2");
    os << "xi_rad_s,eps\n";
    csv::Writer w(os);
    for (std::size_t i = 0; i < n; ++i) {
        const double f = static_cast<double>(i) / static_cast<double>(n - 1);
        const double xi = xi_lo > 0.0 ? xi_lo * std::pow(xi_hi / xi_lo, f)
                                      : f * xi_hi;
        w.field(xi).field(eps_imag_axis(m, xi));
        w.end_row();
    }
}

inline void write_regime_csv_header(std::ostream& os) {
    os << "z_m,continuum,short,long,alt_short,alt_long\n";
}

inline void write_regime_csv_row(std::ostream& os, const regimes::RegimeVerdict& v) {
    csv::Writer w(os);
    w.field(v.z_m)
        .field(v.continuum_ok)
        .field(v.short_range_ok)
        .field(v.long_range_ok)
        .field(v.alt_short_ok)
        .field(v.alt_long_ok);
    w.end_row();
}

} // namespace polder::io
