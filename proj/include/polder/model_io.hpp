#pragma once

#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "polder/constants.hpp"
#include "polder/errors.hpp"
#include "polder/oscillator.hpp"
#include "polder/temperature.hpp"

namespace polder::io {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

// Model files carry a temperature fit: every parameter of every term is a
// quadratic in T_delta. A plain model is the special case of constant
// quadratics. Frequencies may be given in rad/s or atomic units; they are
// converted on ingestion and always written back as rad/s.

namespace detail {

inline const json& require(const json& j, const char* key, const std::string& origin) {
    const auto it = j.find(key);
    if (it == j.end()) throw parse_error(origin + ": missing key '" + key + "'");
    return *it;
}

inline double number(const json& j, const std::string& where) {
    if (!j.is_number()) throw parse_error(where + ": expected a number");
    return j.get<double>();
}

inline Quadratic quadratic(const json& j, const std::string& where) {
    if (j.is_number()) return Quadratic{j.get<double>(), 0.0, 0.0};
    if (!j.is_array() || j.empty() || j.size() > 3)
        throw parse_error(where + ": expected a number or an array of 1..3 coefficients");
    Quadratic q{0.0, 0.0, 0.0};
    double* c[3] = {&q.c0, &q.c1, &q.c2};
    for (std::size_t i = 0; i < j.size(); ++i)
        *c[i] = number(j[i], where + "[" + std::to_string(i) + "]");
    return q;
}

inline json coeffs(const Quadratic& q) { return json::array({q.c0, q.c1, q.c2}); }

} // namespace detail

inline TemperatureFit fit_from_json(const json& j, const std::string& origin) {
    if (!j.is_object()) throw parse_error(origin + ": top level must be an object");
    TemperatureFit fit;

    const std::string kind = detail::require(j, "kind", origin).get<std::string>();
    if (kind == "clausius_mossotti")
        fit.kind = ModelKind::clausius_mossotti;
    else if (kind == "lorentz_dirac")
        fit.kind = ModelKind::lorentz_dirac;
    else
        throw parse_error(origin + ": kind must be 'clausius_mossotti' or 'lorentz_dirac', got '" + kind + "'");

    fit.t0_kelvin = detail::number(detail::require(j, "t0_kelvin", origin), origin + ".t0_kelvin");
    if (!(fit.t0_kelvin > 0.0)) throw parse_error(origin + ".t0_kelvin: must be > 0");

    const auto& range = detail::require(j, "t_delta_range", origin);
    if (!range.is_array() || range.size() != 2)
        throw parse_error(origin + ".t_delta_range: expected [lo, hi]");
    fit.t_delta_lo = detail::number(range[0], origin + ".t_delta_range[0]");
    fit.t_delta_hi = detail::number(range[1], origin + ".t_delta_range[1]");
    if (!(fit.t_delta_lo <= fit.t_delta_hi))
        throw parse_error(origin + ".t_delta_range: lo must not exceed hi");

    const std::string unit = detail::require(j, "frequency_unit", origin).get<std::string>();
    double scale = 1.0;
    if (unit == "au")
        scale = si.au_omega;
    else if (unit != "rad_s")
        throw parse_error(origin + ".frequency_unit: must be 'rad_s' or 'au', got '" + unit + "'");

    const auto& terms = detail::require(j, "terms_fit", origin);
    if (!terms.is_array() || terms.empty())
        throw parse_error(origin + ".terms_fit: expected a non-empty array");
    for (std::size_t k = 0; k < terms.size(); ++k) {
        const std::string where = origin + ".terms_fit[" + std::to_string(k) + "]";
        const auto& t = terms[k];
        if (!t.is_object()) throw parse_error(where + ": expected an object");
        TermFit tf;
        tf.a = detail::quadratic(detail::require(t, "a", where), where + ".a");
        tf.omega_r = detail::quadratic(detail::require(t, "omega_r", where), where + ".omega_r");
        tf.gamma = detail::quadratic(detail::require(t, "gamma", where), where + ".gamma");
        tf.gamma_prime = detail::quadratic(detail::require(t, "gamma_prime", where), where + ".gamma_prime");
        for (Quadratic* q : {&tf.omega_r, &tf.gamma, &tf.gamma_prime}) {
            q->c0 *= scale;
            q->c1 *= scale;
            q->c2 *= scale;
        }
        fit.terms.push_back(tf);
    }
    return fit;
}

inline ordered_json to_json(const TemperatureFit& fit) {
    ordered_json j;
    j["kind"] = to_string(fit.kind);
    j["t0_kelvin"] = fit.t0_kelvin;
    j["t_delta_range"] = ordered_json::array({fit.t_delta_lo, fit.t_delta_hi});
    j["frequency_unit"] = "rad_s";
    auto& terms = j["terms_fit"] = ordered_json::array();
    for (const auto& t : fit.terms) {
        ordered_json tj;
        tj["a"] = detail::coeffs(t.a);
        tj["omega_r"] = detail::coeffs(t.omega_r);
        tj["gamma"] = detail::coeffs(t.gamma);
        tj["gamma_prime"] = detail::coeffs(t.gamma_prime);
        terms.push_back(std::move(tj));
    }
    return j;
}

inline TemperatureFit load_fit(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw parse_error(path + ": cannot open");
    json j;
    try {
        j = json::parse(is);
    } catch (const json::exception& e) {
        throw parse_error(path + ": " + e.what());
    }
    return fit_from_json(j, path);
}

inline void save_fit(const std::string& path, const TemperatureFit& fit,
                     const ordered_json* metadata = nullptr) {
    ordered_json j = to_json(fit);
    if (metadata) j["fit"] = *metadata;
    std::ofstream os(path);
    if (!os) throw parse_error(path + ": cannot open for writing");
    os << j.dump(2) << '\n';
}

} // namespace polder::io
