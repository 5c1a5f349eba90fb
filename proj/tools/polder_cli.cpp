// polder: oscillator permittivity models, positivity/KK audits, Casimir-Polder
// coefficients, and separation-regime classification.
//
// Exit codes: 0 success; 1 operational error (bad flags, unreadable files,
// numerical failure); 2 physicality failure detected by `validate`.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "polder/polder.hpp"

namespace {

using polder::io::ordered_json;

std::vector<double> parse_csv_doubles(const std::string& s, std::size_t expect, const char* what) {
    const auto fields = polder::csv::split_fields(s);
    if (expect != 0 && fields.size() != expect)
        throw polder::parse_error(std::string(what) + ": expected " + std::to_string(expect) +
                                  " comma-separated numbers, got " + std::to_string(fields.size()));
    std::vector<double> out;
    for (std::size_t i = 0; i < fields.size(); ++i)
        out.push_back(polder::csv::parse_double(fields[i], 1, i));
    return out;
}

struct AtomFlag {
    std::string spec;
    std::string units = "cgs"; // cgs: alpha0 in cm^3, omega_a in rad/s; au: a0^3 and au_omega

    polder::AtomModel parse() const {
        const auto v = parse_csv_doubles(spec, 2, "--atom");
        polder::AtomModel a;
        if (units == "cgs") {
            a.alpha0_cm3 = v[0];
            a.omega_a = v[1];
        } else if (units == "au") {
            a.alpha0_cm3 = polder::volume_cm3_from_au(v[0]);
            a.omega_a = polder::omega_from_au(v[1]);
        } else {
            throw polder::parse_error("--atom-units must be 'cgs' or 'au'");
        }
        polder::check_atom(a);
        return a;
    }
};

std::ostream& open_out(std::ofstream& file, const std::string& path) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path);
    if (!file) throw polder::parse_error(path + ": cannot open for writing");
    return file;
}

void write_json(const std::string& path, const ordered_json& j) {
    std::ofstream file;
    auto& os = open_out(file, path);
    os << j.dump(2) << '\n';
}

std::vector<double> t_grid_or_default(std::vector<double> ts, const polder::TemperatureFit& fit,
                                      std::size_t n_default = 15) {
    if (!ts.empty()) return ts;
    std::vector<double> out;
    if (fit.t_delta_hi <= fit.t_delta_lo) return {fit.t_delta_lo};
    for (std::size_t i = 0; i < n_default; ++i)
        out.push_back(fit.t_delta_lo + (fit.t_delta_hi - fit.t_delta_lo) * static_cast<double>(i) /
                                           static_cast<double>(n_default - 1));
    return out;
}

polder::lifshitz::Plate parse_plate(const std::string& plate_spec, const polder::TemperatureFit& fit,
                                    double t_delta, polder::RangeMode mode) {
    if (plate_spec == "model")
        return polder::lifshitz::Plate::dielectric(polder::params_at(fit, t_delta, mode));
    if (plate_spec == "ideal") return polder::lifshitz::Plate::ideal_metal();
    if (plate_spec.rfind("eps:", 0) == 0)
        return polder::lifshitz::Plate::constant(polder::csv::parse_double(plate_spec.substr(4), 1, 0));
    throw polder::parse_error("--plate must be 'model', 'ideal', or 'eps:<value>'");
}

int cmd_validate(const std::string& model_path, std::vector<double> t_deltas, double omega_lo,
                 double omega_hi, std::size_t grid, const std::string& out,
                 const std::string& curves_out, bool strict, bool no_kk) {
    const auto fit = polder::io::load_fit(model_path);
    const auto ts = t_grid_or_default(std::move(t_deltas), fit);

    polder::validation::AuditOptions opt;
    opt.scan.omega_lo = omega_lo;
    opt.scan.omega_hi = omega_hi;
    opt.scan.grid_size = grid;
    opt.range_mode = strict ? polder::RangeMode::strict : polder::RangeMode::warn;
    if (no_kk) opt.kk_probes = 0;

    const auto reports = polder::validation::audit(fit, ts, opt);

    ordered_json doc;
    doc["config"] = ordered_json{{"command", "validate"},       {"model", model_path},
                                 {"t_delta", ts},               {"omega_min", omega_lo},
                                 {"omega_max", omega_hi},       {"grid_size", grid},
                                 {"strict", strict},            {"kk_probes", opt.kk_probes},
                                 {"kk_rel_tol", opt.kk.rel_tol}};
    doc["reports"] = polder::io::to_json(reports);
    write_json(out, doc);

    if (!curves_out.empty()) {
        std::ofstream cs(curves_out);
        if (!cs) throw polder::parse_error(curves_out + ": cannot open for writing");
        cs << "t_delta,omega_rad_s,eps_re,eps_im\n";
        polder::csv::Writer w(cs);
        for (double t : ts) {
            const auto m = polder::params_at(fit, t, opt.range_mode);
            for (std::size_t i = 0; i < 400; ++i) {
                const double f = static_cast<double>(i) / 399.0;
                const double omega = omega_lo * std::pow(omega_hi / omega_lo, f);
                try {
                    w.field(t)
                        .field(omega)
                        .field(polder::validation::re_eps(m, omega))
                        .field(polder::validation::im_eps(m, omega));
                    w.end_row();
                } catch (const polder::singularity_error&) {
                    // skip singular sample
                }
            }
        }
    }

    bool unphysical = false;
    for (const auto& r : reports) unphysical = unphysical || !r.numeric_negative_intervals.empty();
    std::cerr << "validate: " << reports.size() << " temperature point(s), "
              << (unphysical ? "negative Im eps intervals found" : "no negative Im eps intervals") << "\n";
    return unphysical ? 2 : 0;
}

int cmd_eval(const std::string& model_path, double t_delta, const std::string& axis, double lo,
             double hi, std::size_t points, const std::string& out, bool strict) {
    const auto fit = polder::io::load_fit(model_path);
    const auto mode = strict ? polder::RangeMode::strict : polder::RangeMode::warn;
    const auto m = polder::params_at(fit, t_delta, mode);
    std::ofstream file;
    auto& os = open_out(file, out);
    if (axis == "real")
        polder::io::write_curve_csv(os, m, lo, hi, points);
    else if (axis == "imag")
        polder::io::write_imag_axis_csv(os, m, lo, hi, points);
    else
        throw polder::parse_error("--axis must be 'real' or 'imag'");
    return 0;
}

int cmd_potential(const std::string& model_path, double t_delta, const AtomFlag& atom, double z_lo,
                  double z_hi, std::size_t points, const std::string& plate_spec,
                  const std::string& out, bool strict) {
    const auto mode = strict ? polder::RangeMode::strict : polder::RangeMode::warn;
    polder::TemperatureFit fit;
    if (!model_path.empty()) fit = polder::io::load_fit(model_path);
    const auto plate = model_path.empty() && plate_spec == "model"
                           ? polder::lifshitz::Plate::ideal_metal()
                           : parse_plate(plate_spec, fit, t_delta, mode);
    const polder::Polarizability alpha(atom.parse());

    std::ofstream file;
    auto& os = open_out(file, out);
    os << "z_m,u_erg,z3u_erg_cm3,z4u_erg_cm4\n";
    polder::csv::Writer w(os);
    for (std::size_t i = 0; i < points; ++i) {
        const double f = points == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(points - 1);
        const double z_m = z_lo * std::pow(z_hi / z_lo, f);
        const double z_cm = polder::length_cm_from_m(z_m);
        const auto u = polder::lifshitz::potential_t0(alpha, plate, z_cm);
        w.field(z_m)
            .field(u.value)
            .field(u.value * z_cm * z_cm * z_cm)
            .field(u.value * z_cm * z_cm * z_cm * z_cm);
        w.end_row();
    }
    return 0;
}

int cmd_coefficients(const std::string& model_path, std::vector<double> t_deltas, const AtomFlag& atom,
                     const std::string& plate_spec, const std::string& out, bool strict) {
    const auto mode = strict ? polder::RangeMode::strict : polder::RangeMode::warn;
    const polder::Polarizability alpha(atom.parse());

    ordered_json results = ordered_json::array();
    std::vector<double> ts;
    if (plate_spec == "model") {
        const auto fit = polder::io::load_fit(model_path);
        ts = t_grid_or_default(std::move(t_deltas), fit, 7);
        for (double t : ts)
            results.push_back(polder::io::to_json(
                polder::lifshitz::coefficients(alpha, fit, t, {}, mode)));
    } else {
        // plate override: single evaluation, temperature-independent
        polder::TemperatureFit dummy;
        const auto plate = parse_plate(plate_spec, dummy, 0.0, mode);
        const auto c3 = polder::lifshitz::c3_coefficient(alpha, plate);
        const auto c4 = polder::lifshitz::c4_extract(alpha, plate);
        polder::lifshitz::CPCoefficients c;
        c.t_delta = 0.0;
        c.c3_erg_cm3 = c3.value;
        c.c3_error = c3.error;
        c.c4_erg_cm4 = c4.c4;
        c.c4_error = c4.error;
        results.push_back(polder::io::to_json(c));
        ts = {0.0};
    }

    ordered_json doc;
    doc["config"] = ordered_json{{"command", "coefficients"},
                                 {"model", model_path},
                                 {"plate", plate_spec},
                                 {"t_delta", ts},
                                 {"atom", atom.spec},
                                 {"atom_units", atom.units}};
    doc["results"] = std::move(results);
    write_json(out, doc);
    return 0;
}

int cmd_regimes(const std::string& material_spec, const std::string& name, double temperature,
                const std::string& margins_spec, double z, double z_lo, double z_hi,
                std::size_t points, bool do_compare, const std::string& out) {
    const auto mv = parse_csv_doubles(material_spec, 2, "--material");
    polder::regimes::MaterialProfile mat{name, mv[0], mv[1]};
    polder::regimes::MarginSet margins;
    if (!margins_spec.empty()) {
        const auto ms = parse_csv_doubles(margins_spec, 5, "--margins");
        margins = {ms[0], ms[1], ms[2], ms[3], ms[4]};
    }

    std::ofstream file;
    auto& os = open_out(file, out);
    if (do_compare) {
        if (!(z > 0.0)) throw polder::parse_error("--compare needs --z");
        const auto rep = polder::regimes::compare(z, mat, temperature, margins);
        ordered_json doc;
        doc["config"] = ordered_json{{"command", "regimes"},
                                     {"material", material_spec},
                                     {"temperature_k", temperature},
                                     {"margins",
                                      {margins.continuum, margins.short_range, margins.long_lo,
                                       margins.long_hi, margins.alternative}},
                                     {"z_m", z}};
        doc["report"] = polder::io::to_json(rep);
        os << doc.dump(2) << '\n';
        return 0;
    }
    polder::io::write_regime_csv_header(os);
    if (z > 0.0) {
        polder::io::write_regime_csv_row(os, polder::regimes::classify(z, mat, temperature, margins));
        return 0;
    }
    if (!(z_lo > 0.0) || !(z_hi > z_lo) || points < 2)
        throw polder::parse_error("regimes sweep needs --z-min < --z-max and --points >= 2");
    for (std::size_t i = 0; i < points; ++i) {
        const double f = static_cast<double>(i) / static_cast<double>(points - 1);
        const double zi = z_lo * std::pow(z_hi / z_lo, f);
        polder::io::write_regime_csv_row(os, polder::regimes::classify(zi, mat, temperature, margins));
    }
    return 0;
}

int cmd_fit(const std::vector<std::string>& data_paths, std::vector<double> t_deltas,
            const std::string& kind_str, std::size_t n_terms, const std::string& mode_str,
            std::uint64_t seed, std::size_t starts, const std::string& out) {
    if (data_paths.empty()) throw polder::parse_error("fit needs at least one --data file");
    if (t_deltas.empty()) t_deltas.assign(data_paths.size(), 0.0);
    if (t_deltas.size() != data_paths.size())
        throw polder::parse_error("fit: need one --t-delta per --data file");

    polder::ModelKind kind;
    if (kind_str == "clausius_mossotti" || kind_str == "cm")
        kind = polder::ModelKind::clausius_mossotti;
    else if (kind_str == "lorentz_dirac" || kind_str == "ld")
        kind = polder::ModelKind::lorentz_dirac;
    else
        throw polder::parse_error("--kind must be clausius_mossotti|cm|lorentz_dirac|ld");

    polder::fitting::FitOptions opt;
    opt.mode = polder::fitting::constraint_mode_of(mode_str);
    opt.seed = seed;
    opt.n_starts = starts;

    std::vector<polder::OpticalDataset> datasets;
    for (std::size_t i = 0; i < data_paths.size(); ++i)
        datasets.push_back(polder::load_dataset(data_paths[i], t_deltas[i]));

    std::vector<polder::fitting::FitResult> stage1;
    polder::TemperatureFit fit =
        polder::fitting::fit_temperature(datasets, kind, n_terms, opt, polder::default_t0_kelvin, &stage1);

    ordered_json meta;
    meta["constraint_mode"] = mode_str;
    meta["seed"] = seed;
    meta["n_starts"] = starts;
    auto& stages = meta["per_dataset"] = ordered_json::array();
    for (std::size_t i = 0; i < stage1.size(); ++i) {
        stages.push_back(ordered_json{{"t_delta", t_deltas[i]},
                                      {"residual_rms", stage1[i].residual_rms},
                                      {"positivity_certified", stage1[i].positivity_certified},
                                      {"iterations", stage1[i].iterations},
                                      {"converged", stage1[i].converged}});
        std::cerr << "fit: t_delta " << t_deltas[i] << ": rms " << stage1[i].residual_rms
                  << (stage1[i].positivity_certified ? ", certified" : ", NOT certified")
                  << (stage1[i].converged ? "" : ", unconverged") << "\n";
    }

    if (out.empty() || out == "-") {
        ordered_json j = polder::io::to_json(fit);
        j["fit"] = meta;
        std::cout << j.dump(2) << '\n';
    } else {
        polder::io::save_fit(out, fit, &meta);
    }
    return 0;
}

int cmd_sensitivity(const std::string& model_path, double t_delta, const AtomFlag& atom,
                    const std::string& out, bool strict) {
    const auto fit = polder::io::load_fit(model_path);
    const auto mode = strict ? polder::RangeMode::strict : polder::RangeMode::warn;
    const auto model = polder::params_at(fit, t_delta, mode);
    const polder::Polarizability alpha(atom.parse());
    const auto s = polder::lifshitz::sensitivity_c3(alpha, model);

    ordered_json doc;
    doc["config"] = ordered_json{{"command", "sensitivity"},
                                 {"model", model_path},
                                 {"t_delta", t_delta},
                                 {"atom", atom.spec},
                                 {"atom_units", atom.units}};
    doc["result"] = polder::io::to_json(s);
    write_json(out, doc);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"oscillator permittivity models: evaluation, positivity/KK audit, "
                 "Casimir-Polder coefficients, separation regimes"};
    app.require_subcommand(1);

    std::string model_path, out, curves_out, axis = "real", plate_spec = "model";
    std::vector<double> t_deltas;
    double t_delta_one = 0.0;
    double omega_lo = 1e10, omega_hi = 1e17;
    std::size_t grid = 3584, points = 200;
    bool strict = false, no_kk = false, do_compare = false;
    AtomFlag atom;
    std::string material_spec, material_name = "material", margins_spec;
    double temperature = polder::default_t0_kelvin;
    double z = 0.0, z_lo = 1e-9, z_hi = 1e-5;
    std::vector<std::string> data_paths;
    std::string kind_str = "lorentz_dirac", mode_str = "hard";
    std::size_t n_terms = 2, starts = 8;
    std::uint64_t seed = 12345;

    auto* validate = app.add_subcommand("validate", "positivity / KK / parity audit of a model file");
    validate->add_option("--model", model_path, "model JSON file")->required();
    validate->add_option("--t-delta", t_deltas, "T_Delta points (default: 15 across the fit range)");
    validate->add_option("--omega-min", omega_lo, "scan lower bound, rad/s");
    validate->add_option("--omega-max", omega_hi, "scan upper bound, rad/s");
    validate->add_option("--grid", grid, "sign-scan grid size");
    validate->add_option("--out", out, "audit JSON path (default stdout)");
    validate->add_option("--curves-out", curves_out, "Im/Re eps curve CSV path");
    validate->add_flag("--strict", strict, "reject t_delta outside the fit range");
    validate->add_flag("--no-kk", no_kk, "skip Kramers-Kronig probes");

    auto* eval = app.add_subcommand("eval", "permittivity sweep CSV");
    eval->add_option("--model", model_path)->required();
    eval->add_option("--t-delta", t_delta_one, "T_Delta (default 0)");
    eval->add_option("--axis", axis, "real | imag");
    eval->add_option("--omega-min", omega_lo, "sweep lower bound, rad/s");
    eval->add_option("--omega-max", omega_hi, "sweep upper bound, rad/s");
    eval->add_option("--points", points, "sample count");
    eval->add_option("--out", out, "CSV path (default stdout)");
    eval->add_flag("--strict", strict);

    auto* potential = app.add_subcommand("potential", "atom-plate potential sweep CSV");
    potential->add_option("--model", model_path, "model JSON (omit with --plate ideal/eps:)");
    potential->add_option("--t-delta", t_delta_one);
    potential->add_option("--atom", atom.spec, "alpha0,omega_a")->required();
    potential->add_option("--atom-units", atom.units, "cgs (cm^3, rad/s) | au");
    potential->add_option("--plate", plate_spec, "model | ideal | eps:<value>");
    potential->add_option("--z-min", z_lo, "m")->required();
    potential->add_option("--z-max", z_hi, "m")->required();
    potential->add_option("--points", points);
    potential->add_option("--out", out);
    potential->add_flag("--strict", strict);

    auto* coeff = app.add_subcommand("coefficients", "C3/C4 per temperature, JSON");
    coeff->add_option("--model", model_path, "model JSON (omit with --plate ideal/eps:)");
    coeff->add_option("--t-delta", t_deltas);
    coeff->add_option("--atom", atom.spec, "alpha0,omega_a")->required();
    coeff->add_option("--atom-units", atom.units);
    coeff->add_option("--plate", plate_spec, "model | ideal | eps:<value>");
    coeff->add_option("--out", out);
    coeff->add_flag("--strict", strict);

    auto* regimes = app.add_subcommand("regimes", "separation regime classification CSV / compare JSON");
    regimes->add_option("--material", material_spec, "l,lambda0 in m")->required();
    regimes->add_option("--name", material_name, "material label");
    regimes->add_option("--temperature", temperature, "K");
    regimes->add_option("--margins", margins_spec, "continuum,short,long_lo,long_hi,alt");
    regimes->add_option("--z", z, "single separation, m");
    regimes->add_option("--z-min", z_lo, "sweep lower bound, m");
    regimes->add_option("--z-max", z_hi, "sweep upper bound, m");
    regimes->add_option("--points", points);
    regimes->add_flag("--compare", do_compare, "founders vs alternative discrepancy JSON");
    regimes->add_option("--out", out);

    auto* fitcmd = app.add_subcommand("fit", "fit oscillator parameters to CSV data");
    fitcmd->add_option("--data", data_paths, "dataset CSV (repeatable)")->required();
    fitcmd->add_option("--t-delta", t_deltas, "T_Delta label per dataset");
    fitcmd->add_option("--kind", kind_str, "clausius_mossotti | lorentz_dirac");
    fitcmd->add_option("--terms", n_terms, "oscillator term count");
    fitcmd->add_option("--mode", mode_str, "hard | penalty | none");
    fitcmd->add_option("--seed", seed, "multi-start RNG seed");
    fitcmd->add_option("--starts", starts, "multi-start count");
    fitcmd->add_option("--out", out, "model JSON path (default stdout)");

    auto* sens = app.add_subcommand("sensitivity", "clamped-vs-raw KK route C3 comparison, JSON");
    sens->add_option("--model", model_path)->required();
    sens->add_option("--t-delta", t_delta_one);
    sens->add_option("--atom", atom.spec, "alpha0,omega_a")->required();
    sens->add_option("--atom-units", atom.units);
    sens->add_option("--out", out);
    sens->add_flag("--strict", strict);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (validate->parsed())
            return cmd_validate(model_path, t_deltas, omega_lo, omega_hi, grid, out, curves_out,
                                strict, no_kk);
        if (eval->parsed())
            return cmd_eval(model_path, t_delta_one, axis, omega_lo, omega_hi, points, out, strict);
        if (potential->parsed())
            return cmd_potential(model_path, t_delta_one, atom, z_lo, z_hi, points, plate_spec, out,
                                 strict);
        if (coeff->parsed())
            return cmd_coefficients(model_path, t_deltas, atom, plate_spec, out, strict);
        if (regimes->parsed())
            return cmd_regimes(material_spec, material_name, temperature, margins_spec, z, z_lo, z_hi,
                               points, do_compare, out);
        if (fitcmd->parsed())
            return cmd_fit(data_paths, t_deltas, kind_str, n_terms, mode_str, seed, starts, out);
        if (sens->parsed())
            return cmd_sensitivity(model_path, t_delta_one, atom, out, strict);
    } catch (const polder::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
