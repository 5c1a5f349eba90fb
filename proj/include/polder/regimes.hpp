#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "polder/constants.hpp"
#include "polder/errors.hpp"
#include "polder/oscillator.hpp"

namespace polder::regimes {

struct MaterialProfile {
    std::string name;
    double lattice_constant_m = 0.0;
    double lambda0_m = 0.0; // characteristic absorption wavelength
};

inline void check_material(const MaterialProfile& m) {
    if (!(m.lattice_constant_m > 0.0))
        throw domain_error("material lattice constant must be > 0");
    if (!(m.lambda0_m > m.lattice_constant_m))
        throw domain_error("material lambda0 must exceed the lattice constant");
}

/// Multiplicative margins giving teeth to the "much less than" conditions.
/// The short-range upper bound uses 50, the factor-of-fifty rule; everywhere
/// else 10 is a documented default.
struct MarginSet {
    double continuum = 10.0;
    double short_range = 50.0;
    double long_lo = 10.0;
    double long_hi = 10.0;
    double alternative = 10.0;
};

inline void check_margins(const MarginSet& m) {
    for (double v : {m.continuum, m.short_range, m.long_lo, m.long_hi, m.alternative})
        if (!(v >= 1.0)) throw domain_error("margins must be >= 1");
}

/// Tri-state so knife-edge separations are not presented as certain:
/// marginal means the margined boundary fails but by less than a factor 2.
enum class Verdict { invalid, marginal, valid };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::invalid: return "invalid";
        case Verdict::marginal: return "marginal";
        case Verdict::valid: return "valid";
    }
    return "?";
}

namespace detail {

inline Verdict above(double z, double bound) {
    if (z > bound) return Verdict::valid;
    if (2.0 * z > bound) return Verdict::marginal;
    return Verdict::invalid;
}

inline Verdict below(double z, double bound) {
    if (z < bound) return Verdict::valid;
    if (z < 2.0 * bound) return Verdict::marginal;
    return Verdict::invalid;
}

inline Verdict both(Verdict a, Verdict b) { return std::min(a, b); }

} // namespace detail

struct RegimeVerdict {
    double z_m = 0.0;
    double thermal_wavelength_m = 0.0;
    // Strict margined conditions. continuum_ok is false whenever
    // z <= margin * l; short and long range are mutually exclusive because
    // their margins are >= 1.
    bool continuum_ok = false;
    bool short_range_ok = false;
    bool long_range_ok = false;
    // Alternative conditions: universal bounds built from a0 and a0/alpha.
    // These booleans count a marginal verdict as passing; the tri-state
    // fields below distinguish.
    bool alt_short_ok = false;
    bool alt_long_ok = false;
    Verdict continuum = Verdict::invalid;
    Verdict short_range = Verdict::invalid;
    Verdict long_range = Verdict::invalid;
    Verdict alt_short = Verdict::invalid;
    Verdict alt_long = Verdict::invalid;
    std::vector<std::string> notes;
};

/// lambda_T = hbar c / (k_B T), the separation scale beyond which thermal
/// photons dominate. T = 0 returns infinity.
inline double thermal_wavelength(double temperature_k) {
    if (temperature_k < 0.0) throw domain_error("temperature must be >= 0 K");
    if (temperature_k == 0.0) return std::numeric_limits<double>::infinity();
    return si.hbar * si.c / (si.k_b * temperature_k);
}

/// The alternative conditions' universal length a0 / alpha ~ 7.26 nm.
inline double a0_over_alpha_m() { return si.a0 / si.alpha_fs; }

/// Estimate of the characteristic absorption wavelength from an oscillator
/// model, 2 pi c / min_k omega_r. An estimate only: the true lambda0 is an
/// experimental property of the dominant absorption band.
inline double lambda0_estimate_m(const OscillatorModel& m) {
    if (m.terms.empty()) throw model_error("lambda0 estimate needs at least one oscillator term");
    double w = m.terms.front().omega_r;
    for (const auto& t : m.terms) w = std::min(w, t.omega_r);
    return 2.0 * pi * si.c / w;
}

inline double short_range_upper_bound_m(const MaterialProfile& mat, const MarginSet& margins = {}) {
    check_material(mat);
    check_margins(margins);
    return mat.lambda0_m / margins.short_range;
}

struct AlternativeVerdict {
    bool alt_short_ok = false;
    bool alt_long_ok = false;
    Verdict alt_short = Verdict::invalid;
    Verdict alt_long = Verdict::invalid;
};

/// Alternative bounds: a0 < z < a0/alpha for the short range and
/// z > a0/alpha for the long range, with the margin applied to each side.
/// The booleans treat marginal as passing.
inline AlternativeVerdict classify_alternative(double z_m, double margin = 10.0) {
    if (!(z_m > 0.0)) throw domain_error("separation must be > 0");
    if (!(margin >= 1.0)) throw domain_error("margins must be >= 1");
    const double universal = a0_over_alpha_m();
    AlternativeVerdict v;
    v.alt_short = detail::both(detail::above(z_m, margin * si.a0),
                               detail::below(z_m, universal / margin));
    v.alt_long = detail::above(z_m, margin * universal);
    v.alt_short_ok = v.alt_short != Verdict::invalid;
    v.alt_long_ok = v.alt_long != Verdict::invalid;
    return v;
}

inline RegimeVerdict classify(double z_m, const MaterialProfile& mat, double temperature_k,
                              const MarginSet& margins = {}) {
    if (!(z_m > 0.0)) throw domain_error("separation must be > 0");
    check_material(mat);
    check_margins(margins);

    RegimeVerdict v;
    v.z_m = z_m;
    v.thermal_wavelength_m = thermal_wavelength(temperature_k);

    const double cont_bound = margins.continuum * mat.lattice_constant_m;
    const double short_bound = mat.lambda0_m / margins.short_range;
    const double long_lo = margins.long_lo * mat.lambda0_m;
    const double long_hi = v.thermal_wavelength_m / margins.long_hi;

    v.continuum_ok = z_m > cont_bound;
    v.short_range_ok = v.continuum_ok && z_m < short_bound;
    v.long_range_ok = z_m > long_lo && z_m < long_hi;

    v.continuum = detail::above(z_m, cont_bound);
    v.short_range = detail::both(v.continuum, detail::below(z_m, short_bound));
    v.long_range = detail::both(detail::above(z_m, long_lo), detail::below(z_m, long_hi));

    const auto alt = classify_alternative(z_m, margins.alternative);
    v.alt_short_ok = alt.alt_short_ok;
    v.alt_long_ok = alt.alt_long_ok;
    v.alt_short = alt.alt_short;
    v.alt_long = alt.alt_long;

    auto note_marginal = [&](Verdict w, const char* what) {
        if (w == Verdict::marginal)
            v.notes.push_back(std::string("within a factor 2 of the ") + what + " boundary");
    };
    note_marginal(v.continuum, "continuum");
    note_marginal(v.short_range, "short-range");
    note_marginal(v.long_range, "long-range");
    note_marginal(v.alt_short, "alternative short-range");
    note_marginal(v.alt_long, "alternative long-range");
    return v;
}

struct Discrepancy {
    std::string condition; // "short_range" or "long_range"
    bool alternative_grants = false;
    bool founders_grant = false;
    std::string reason;
};

struct CompareReport {
    RegimeVerdict verdict;
    // Raw alternative conditions with no margin, the reading under which the
    // criticized region claims start.
    bool alt_short_raw = false;
    bool alt_long_raw = false;
    std::vector<Discrepancy> discrepancies;
};

/// Pits the margined founders' conditions against the raw alternative
/// bounds and explains every disagreement.
inline CompareReport compare(double z_m, const MaterialProfile& mat, double temperature_k,
                             const MarginSet& margins = {}) {
    CompareReport rep;
    rep.verdict = classify(z_m, mat, temperature_k, margins);
    const double universal = a0_over_alpha_m();
    rep.alt_short_raw = z_m > si.a0 && z_m < universal;
    rep.alt_long_raw = z_m > universal;

    const auto& v = rep.verdict;
    if (rep.alt_short_raw != v.short_range_ok) {
        Discrepancy d;
        d.condition = "short_range";
        d.alternative_grants = rep.alt_short_raw;
        d.founders_grant = v.short_range_ok;
        if (rep.alt_short_raw) {
            if (!v.continuum_ok)
                d.reason = "continuum violation: z <= " + std::to_string(margins.continuum) +
                           " lattice constants";
            else
                d.reason = "lambda0 bound: z exceeds lambda0 / " + std::to_string(margins.short_range);
        } else {
            d.reason = "alternative a0-based window excludes z";
        }
        rep.discrepancies.push_back(std::move(d));
    }
    if (rep.alt_long_raw != v.long_range_ok) {
        Discrepancy d;
        d.condition = "long_range";
        d.alternative_grants = rep.alt_long_raw;
        d.founders_grant = v.long_range_ok;
        if (rep.alt_long_raw) {
            if (!(z_m > margins.long_lo * mat.lambda0_m))
                d.reason = "lambda0 bound: retarded regime starts at " +
                           std::to_string(margins.long_lo) + " lambda0";
            else
                d.reason = "lambda_T bound: z too close to the thermal wavelength";
        } else {
            d.reason = "alternative a0/alpha bound excludes z";
        }
        rep.discrepancies.push_back(std::move(d));
    }
    return rep;
}

} // namespace polder::regimes
