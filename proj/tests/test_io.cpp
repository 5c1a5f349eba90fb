#include <catch2/catch_amalgamated.hpp>

#include <clocale>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include "polder/audit.hpp"
#include "polder/csv.hpp"
#include "polder/dataset.hpp"
#include "polder/model_io.hpp"
#include "polder/report_io.hpp"

using namespace polder;

namespace {

std::string temp_path(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

TemperatureFit sample_fit() {
    TemperatureFit fit;
    fit.kind = ModelKind::clausius_mossotti;
    fit.t0_kelvin = 293.0;
    fit.t_delta_lo = 0.0;
    fit.t_delta_hi = 1.5;
    fit.terms.push_back({{0.4, 0.01, -0.002}, {1.1e15, -3e12, 0}, {0.9e14, 0, 0}, {0.3e14, 0, 0}});
    fit.terms.push_back({{0.35, 0, 0}, {4.2e15, 0, 0}, {2.1e14, 5e11, 1e10}, {0, 0, 0}});
    return fit;
}

} // namespace

TEST_CASE("double formatting round-trips exactly", "[io]") {
    for (double v : {0.1, -1.0 / 3.0, 1e-300, 6.02214076e23, 0.0, -0.0, 42.0,
                     7.2973525693e-3, 1.7976931348623157e308}) {
        const auto s = csv::format(v);
        CHECK(csv::parse_double(s, 1, 0) == v);
        CHECK(s.find(',') == std::string::npos);
    }
}

TEST_CASE("CSV writer emits newline-terminated comma rows", "[io]") {
    std::ostringstream os;
    csv::Writer w(os);
    w.field(1.5).field(true).field(false).field("x");
    w.end_row();
    w.field(-2.0);
    w.end_row();
    CHECK(os.str() == "1.5,1,0,x\n-2\n");
}

TEST_CASE("CSV parsing reports line and column", "[io]") {
    std::istringstream is("a,b\n1,2\n3,nope\n");
    try {
        csv::read_numeric(is, "test.csv");
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        const std::string msg = e.what();
        CHECK(msg.find("test.csv") != std::string::npos);
        CHECK(msg.find("3") != std::string::npos); // line number
    }
    std::istringstream short_row("a,b\n1\n");
    CHECK_THROWS_AS(csv::read_numeric(short_row, "x"), parse_error);
    std::istringstream empty("");
    CHECK_THROWS_AS(csv::read_numeric(empty, "x"), parse_error);
}

TEST_CASE("CSV numbers are locale independent", "[io]") {
    // a comma-decimal locale must not change the wire format
    const char* saved = std::setlocale(LC_NUMERIC, nullptr);
    const std::string saved_name = saved ? saved : "C";
    const bool have_locale = std::setlocale(LC_NUMERIC, "de_DE.UTF-8") != nullptr;
    const auto s = csv::format(0.5);
    const double v = csv::parse_double("2.5", 1, 0);
    std::setlocale(LC_NUMERIC, saved_name.c_str());
    CHECK(s == "0.5");
    CHECK(v == 2.5);
    (void)have_locale; // the checks hold either way; the locale just makes them sharp
}

TEST_CASE("dataset save/load round trip", "[io]") {
    OpticalDataset d;
    d.t_delta = 0.7;
    d.points = {{1e14, 2.5, 0.01, 1.0}, {5e14, 3.1, 0.4, 0.5}, {2e15, 0.9, 1.7, 1.0}};
    const auto path = temp_path("polder_test_dataset.csv");
    save_dataset(path, d);
    const auto back = load_dataset(path, 0.7);
    REQUIRE(back.points.size() == d.points.size());
    for (std::size_t i = 0; i < d.points.size(); ++i) {
        CHECK(back.points[i].omega == d.points[i].omega);
        CHECK(back.points[i].eps_re == d.points[i].eps_re);
        CHECK(back.points[i].eps_im == d.points[i].eps_im);
        CHECK(back.points[i].weight == d.points[i].weight);
    }
    CHECK(back.t_delta == 0.7);
    std::remove(path.c_str());
}

TEST_CASE("dataset validation", "[io]") {
    OpticalDataset d;
    d.points = {{1e15, 2.0, 0.1, 1.0}, {1e14, 2.0, 0.1, 1.0}};
    CHECK_THROWS_AS(check_dataset(d), domain_error); // not increasing
    d.points = {{1e14, 2.0, 0.1, -1.0}};
    CHECK_THROWS_AS(check_dataset(d), domain_error); // negative weight
    d.points = {{-1e14, 2.0, 0.1, 1.0}};
    CHECK_THROWS_AS(check_dataset(d), domain_error); // negative omega

    // header must match exactly
    const auto path = temp_path("polder_test_badheader.csv");
    {
        std::ofstream os(path);
        os << "omega,eps_re,eps_im,weight\n1e14,2,0.1,1\n";
    }
    CHECK_THROWS_AS(load_dataset(path), parse_error);
    std::remove(path.c_str());
}

TEST_CASE("model JSON round trip is bit identical", "[io]") {
    const auto fit = sample_fit();
    const auto path = temp_path("polder_test_model.json");
    io::save_fit(path, fit);
    const auto back = io::load_fit(path);

    CHECK(back.kind == fit.kind);
    CHECK(back.t0_kelvin == fit.t0_kelvin);
    CHECK(back.t_delta_lo == fit.t_delta_lo);
    CHECK(back.t_delta_hi == fit.t_delta_hi);
    REQUIRE(back.terms.size() == fit.terms.size());
    for (std::size_t k = 0; k < fit.terms.size(); ++k) {
        const auto& a = fit.terms[k];
        const auto& b = back.terms[k];
        const std::pair<Quadratic, Quadratic> qs[] = {
            {a.a, b.a}, {a.omega_r, b.omega_r}, {a.gamma, b.gamma}, {a.gamma_prime, b.gamma_prime}};
        for (const auto& t : qs) {
            CHECK(t.first.c0 == t.second.c0);
            CHECK(t.first.c1 == t.second.c1);
            CHECK(t.first.c2 == t.second.c2);
        }
    }
    // and the serialized text itself is stable under a second round trip
    CHECK(io::to_json(back).dump() == io::to_json(fit).dump());
    std::remove(path.c_str());
}

TEST_CASE("atomic-unit frequencies are converted on ingestion", "[io]") {
    io::json j = {{"kind", "lorentz_dirac"},
                  {"t0_kelvin", 293.0},
                  {"t_delta_range", {0.0, 1.0}},
                  {"frequency_unit", "au"},
                  {"terms_fit",
                   {{{"a", 0.5}, {"omega_r", 0.25}, {"gamma", {0.01, 0.002}}, {"gamma_prime", 0.0}}}}};
    const auto fit = io::fit_from_json(j, "inline");
    CHECK(fit.terms[0].omega_r.c0 == Catch::Approx(0.25 * si.au_omega).epsilon(1e-15));
    CHECK(fit.terms[0].gamma.c0 == Catch::Approx(0.01 * si.au_omega).epsilon(1e-15));
    CHECK(fit.terms[0].gamma.c1 == Catch::Approx(0.002 * si.au_omega).epsilon(1e-15));
    // amplitudes are dimensionless and untouched
    CHECK(fit.terms[0].a.c0 == 0.5);
    // scalar quadratics mean constants
    CHECK(fit.terms[0].a.constant());
}

TEST_CASE("model JSON diagnostics", "[io]") {
    using io::json;
    auto base = json{{"kind", "lorentz_dirac"},
                     {"t0_kelvin", 293.0},
                     {"t_delta_range", {0.0, 1.0}},
                     {"frequency_unit", "rad_s"},
                     {"terms_fit", {{{"a", 0.5}, {"omega_r", 1e15}, {"gamma", 1e14}, {"gamma_prime", 0.0}}}}};
    CHECK_NOTHROW(io::fit_from_json(base, "m"));

    auto bad = base;
    bad.erase("kind");
    CHECK_THROWS_WITH(io::fit_from_json(bad, "m"), Catch::Matchers::ContainsSubstring("kind"));
    bad = base;
    bad["kind"] = "drude";
    CHECK_THROWS_AS(io::fit_from_json(bad, "m"), parse_error);
    bad = base;
    bad["t0_kelvin"] = -5.0;
    CHECK_THROWS_AS(io::fit_from_json(bad, "m"), parse_error);
    bad = base;
    bad["t_delta_range"] = {1.0, 0.0};
    CHECK_THROWS_AS(io::fit_from_json(bad, "m"), parse_error);
    bad = base;
    bad["frequency_unit"] = "hz";
    CHECK_THROWS_AS(io::fit_from_json(bad, "m"), parse_error);
    bad = base;
    bad["terms_fit"] = json::array();
    CHECK_THROWS_AS(io::fit_from_json(bad, "m"), parse_error);
    bad = base;
    bad["terms_fit"][0]["omega_r"] = {1.0, 2.0, 3.0, 4.0};
    CHECK_THROWS_WITH(io::fit_from_json(bad, "m"),
                      Catch::Matchers::ContainsSubstring("terms_fit[0].omega_r"));
    CHECK_THROWS_AS(io::load_fit(temp_path("polder_no_such_file.json")), parse_error);
}

TEST_CASE("validation report JSON shape", "[io]") {
    validation::ValidationReport r;
    r.t_delta = 0.5;
    r.windows.push_back({1, 1.7e15, true});
    r.numeric_negative_intervals.push_back({0.0, 1.6e15});
    r.parity_ok = true;
    const auto j = io::to_json(r);
    CHECK(j["t_delta"] == 0.5);
    CHECK(j["windows"][0]["term_index"] == 1);
    CHECK(j["windows"][0]["omega_upper"] == 1.7e15);
    CHECK(j["numeric_negative_intervals"][0][1] == 1.6e15);
    CHECK(j["parity_ok"] == true);
    // NaN residual serializes as null, not as an invalid token
    CHECK(j["kk_max_relative_residual"].is_null());
    const auto txt = j.dump();
    CHECK(txt.find("nan") == std::string::npos);
}

TEST_CASE("coefficient JSON carries all three unit systems", "[io]") {
    lifshitz::CPCoefficients c;
    c.t_delta = 0.0;
    c.c3_erg_cm3 = 1.2920950267e-37;
    c.c4_erg_cm4 = 5.5921866404e-43;
    const auto j = io::to_json(c);
    CHECK(j["c3"]["erg_cm3"] == c.c3_erg_cm3);
    CHECK(j["c3"]["j_m3"].get<double>() == Catch::Approx(c3_si_from_cgs(c.c3_erg_cm3)).epsilon(1e-15));
    CHECK(j["c3"]["au"].get<double>() == Catch::Approx(c3_au_from_cgs(c.c3_erg_cm3)).epsilon(1e-15));
    CHECK(j["c4"]["erg_cm4"] == c.c4_erg_cm4);
    CHECK(j["unphysical_input"] == false);
}

TEST_CASE("curve CSV writers", "[io]") {
    OscillatorModel m{ModelKind::lorentz_dirac, {{0.5, 1e15, 1e14, 0.0}}};
    std::ostringstream os;
    io::write_curve_csv(os, m, 1e14, 1e16, 11);
    std::istringstream is(os.str());
    const auto t = csv::read_numeric(is, "curve");
    REQUIRE(t.header == std::vector<std::string>{"omega_rad_s", "eps_re", "eps_im"});
    CHECK(t.rows.size() == 11);
    CHECK(t.rows.front()[0] == Catch::Approx(1e14).epsilon(1e-12));
    CHECK(t.rows.back()[0] == Catch::Approx(1e16).epsilon(1e-12));

    std::ostringstream os2;
    io::write_imag_axis_csv(os2, m, 0.0, 1e16, 5);
    std::istringstream is2(os2.str());
    const auto t2 = csv::read_numeric(is2, "imag");
    REQUIRE(t2.header == std::vector<std::string>{"xi_rad_s", "eps"});
    CHECK(t2.rows.size() == 5);
    CHECK(t2.rows.front()[0] == 0.0);
    CHECK(t2.rows.front()[1] == Catch::Approx(1.5).epsilon(1e-12)); // static LD value

    std::ostringstream os3;
    io::write_regime_csv_header(os3);
    regimes::RegimeVerdict v;
    v.z_m = 1e-9;
    v.continuum_ok = true;
    io::write_regime_csv_row(os3, v);
    std::istringstream is3(os3.str());
    const auto t3 = csv::read_numeric(is3, "regimes");
    REQUIRE(t3.header.size() == 6);
    CHECK(t3.header.front() == "z_m");
    CHECK(t3.rows.size() == 1);
    CHECK(t3.rows[0][1] == 1.0);
    CHECK(t3.rows[0][2] == 0.0);
}
