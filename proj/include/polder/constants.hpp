#pragma once

#include <cmath>
#include <numbers>

namespace polder {

inline constexpr double pi = std::numbers::pi;

/// Fundamental constants in one unit system. Two instances are provided:
/// `si` (J, m, s, K) and `cgs` (erg, cm, s, K). Frequencies are always rad/s.
struct PhysicalConstants {
    double hbar;     // action
    double c;        // speed of light
    double k_b;      // Boltzmann constant
    double alpha_fs; // fine structure constant
    double a0;       // Bohr radius
    double m_e;      // electron mass
    double au_omega; // one atomic unit of angular frequency, rad/s
};

// CODATA 2018
inline constexpr PhysicalConstants si{
    1.054571817e-34,   // J s
    2.99792458e8,      // m/s
    1.380649e-23,      // J/K
    7.2973525693e-3,   //
    5.29177210903e-11, // m
    9.1093837015e-31,  // kg
    4.1341373336e16,   // rad/s  (E_h / hbar)
};

inline constexpr PhysicalConstants cgs{
    1.054571817e-27,   // erg s
    2.99792458e10,     // cm/s
    1.380649e-16,      // erg/K
    7.2973525693e-3,   //
    5.29177210903e-9,  // cm
    9.1093837015e-28,  // g
    4.1341373336e16,   // rad/s
};

// Unit conversions. Angular frequencies are stored in rad/s throughout the
// library; atomic-unit input is converted once on ingestion.
inline double omega_from_au(double omega_au) { return omega_au * si.au_omega; }
inline double omega_to_au(double omega_rad_s) { return omega_rad_s / si.au_omega; }

// Polarizability volumes. One atomic unit of polarizability is a0^3 as a volume.
inline double volume_cm3_from_au(double v_au) { return v_au * cgs.a0 * cgs.a0 * cgs.a0; }
inline double volume_cm3_from_m3(double v_m3) { return v_m3 * 1e6; }
inline double volume_m3_from_cm3(double v_cm3) { return v_cm3 * 1e-6; }

inline double energy_j_from_erg(double e_erg) { return e_erg * 1e-7; }
inline double length_cm_from_m(double z_m) { return z_m * 1e2; }

// C3 is energy*length^3, C4 energy*length^4 (Gaussian: erg cm^3, erg cm^4).
inline double c3_si_from_cgs(double c3_erg_cm3) { return c3_erg_cm3 * 1e-13; }
inline double c4_si_from_cgs(double c4_erg_cm4) { return c4_erg_cm4 * 1e-15; }
inline double c3_au_from_cgs(double c3_erg_cm3) {
    const double hartree_erg = si.alpha_fs * si.alpha_fs * cgs.m_e * cgs.c * cgs.c;
    return c3_erg_cm3 / (hartree_erg * std::pow(cgs.a0, 3));
}
inline double c4_au_from_cgs(double c4_erg_cm4) {
    const double hartree_erg = si.alpha_fs * si.alpha_fs * cgs.m_e * cgs.c * cgs.c;
    return c4_erg_cm4 / (hartree_erg * std::pow(cgs.a0, 4));
}

} // namespace polder
