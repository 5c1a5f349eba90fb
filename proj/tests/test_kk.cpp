#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "polder/kramers_kronig.hpp"

using namespace polder;
using namespace polder::kk;

TEST_CASE("KK reconstruction matches the analytic imaginary-axis form", "[kk]") {
    // The dispersion integral over Im eps(omega) must reproduce eps(i xi)
    // computed directly from the oscillator sum. Two independent routes.
    OscillatorModel m{ModelKind::lorentz_dirac, {{1.0, 1e15, 1e14, 0.0}}};
    for (double xi : {1e13, 1e14, 5e14, 1e15, 5e15, 1e16}) {
        const auto r = kk_reconstruct(m, xi);
        const double ref = eps_imag_axis(m, xi);
        CHECK(std::abs(r.eps - ref) <= 1e-3 * std::abs(ref));
        CHECK(std::abs(r.eps - ref) <= std::max(r.error_bound, 1e-6 * std::abs(ref)));
    }
}

TEST_CASE("KK reconstruction on a two-term CM model", "[kk]") {
    OscillatorModel m{ModelKind::clausius_mossotti,
                      {{0.4, 1.1e15, 0.9e14, 0.3e14}, {0.35, 4.2e15, 2.1e14, 0.0}}};
    for (double xi : {3e13, 7e14, 2.5e15, 8e15}) {
        const auto r = kk_reconstruct(m, xi);
        const double ref = eps_imag_axis(m, xi);
        CHECK(std::abs(r.eps - ref) <= 1e-3 * std::abs(ref));
    }
}

TEST_CASE("KK limit at large xi is vacuum", "[kk]") {
    OscillatorModel m{ModelKind::lorentz_dirac, {{0.8, 2e15, 3e14, 1e14}}};
    const auto r = kk_reconstruct(m, 1e19);
    CHECK(r.eps == Catch::Approx(1.0).margin(1e-6));
}

TEST_CASE("KK holds even for sign-inverted damping", "[kk]") {
    // gamma_prime > gamma breaks positivity, not analyticity; the dispersion
    // relation still reproduces the analytic continuation.
    OscillatorModel m{ModelKind::lorentz_dirac, {{0.5, 2e15, 3e14, 9e14}}};
    for (double xi : {1e14, 1e15, 6e15}) {
        const auto r = kk_reconstruct(m, xi);
        const double ref = eps_imag_axis(m, xi);
        CHECK(std::abs(r.eps - ref) <= 1e-3 * std::abs(ref));
    }
}

TEST_CASE("clamping negative Im eps changes the unphysical model only", "[kk]") {
    KKOptions clamp;
    clamp.clamp_negative_im = true;

    OscillatorModel good{ModelKind::lorentz_dirac, {{0.7, 1.5e15, 2e14, 1e14}}};
    const double xi = 8e14;
    const auto a = kk_reconstruct(good, xi);
    const auto b = kk_reconstruct(good, xi, clamp);
    CHECK(a.eps == Catch::Approx(b.eps).epsilon(1e-9));

    OscillatorModel bad{ModelKind::lorentz_dirac, {{0.7, 1.5e15, 2e14, 8e14}}};
    const auto c = kk_reconstruct(bad, xi);
    const auto d = kk_reconstruct(bad, xi, clamp);
    // clamping discards negative spectral weight, raising the reconstruction
    CHECK(d.eps > c.eps + 1e-3);
}

TEST_CASE("KK input validation", "[kk]") {
    OscillatorModel m{ModelKind::lorentz_dirac, {{0.5, 1e15, 1e14, 0.0}}};
    CHECK_THROWS_AS(kk_reconstruct(m, 0.0), domain_error);
    CHECK_THROWS_AS(kk_reconstruct(m, -1e14), domain_error);
    KKOptions opt;
    opt.omega_cutoff = 1e14; // below the resonance, tail split meaningless
    CHECK_THROWS_AS(kk_reconstruct(m, 1e14, opt), domain_error);
}

TEST_CASE("temperature fit overload tracks params_at", "[kk]") {
    TemperatureFit fit;
    fit.kind = ModelKind::lorentz_dirac;
    fit.terms.push_back({{0.6, 0.05, 0.0}, {1.2e15, 0, 0}, {1.5e14, 0, 0}, {0, 0, 0}});
    const double xi = 5e14;
    const auto via_fit = kk_reconstruct(fit, 1.0, xi);
    const auto direct = kk_reconstruct(params_at(fit, 1.0), xi);
    CHECK(via_fit.eps == Catch::Approx(direct.eps).epsilon(1e-12));
}
