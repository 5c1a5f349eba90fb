#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <future>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "polder/dataset.hpp"
#include "polder/errors.hpp"
#include "polder/levmar.hpp"
#include "polder/oscillator.hpp"
#include "polder/temperature.hpp"
#include "polder/validation.hpp"

namespace polder::fitting {

/// hard: a > 0 and 0 <= gamma' <= gamma by reparameterization, so the result
/// carries a positivity certificate. penalty: adds a negative-Im penalty on a
/// dense grid. none: the unconstrained style whose defect this library audits.
enum class ConstraintMode { hard, penalty, none };

inline const char* to_string(ConstraintMode m) {
    switch (m) {
        case ConstraintMode::hard: return "hard";
        case ConstraintMode::penalty: return "penalty";
        case ConstraintMode::none: return "none";
    }
    return "?";
}

inline ConstraintMode constraint_mode_of(const std::string& s) {
    if (s == "hard") return ConstraintMode::hard;
    if (s == "penalty") return ConstraintMode::penalty;
    if (s == "none") return ConstraintMode::none;
    throw parse_error("unknown constraint mode '" + s + "' (hard, penalty, none)");
}

struct FitOptions {
    ConstraintMode mode = ConstraintMode::hard;
    std::size_t n_starts = 8;
    std::uint64_t seed = 12345;
    levmar::Options lm;
    bool parallel = true;
    /// Penalty weight relative to the mean data weight; grid is log-spaced
    /// over the data range extended one decade below.
    double penalty_scale = 1e3;
    std::size_t penalty_grid = 1024;
};

struct FitResult {
    OscillatorModel model;
    /// sqrt of the weighted mean squared eps misfit, penalty terms excluded.
    double residual_rms = 0.0;
    bool positivity_certified = false;
    std::size_t iterations = 0;
    bool converged = false;
};

namespace detail {

inline double sigmoid(double s) { return 1.0 / (1.0 + std::exp(-s)); }

/// Packing: per term [log a, log omega_r, log gamma, q] where q is the
/// gamma' parameter: gamma' = gamma * sigmoid(q) in hard mode, exp(q)
/// otherwise. All stored frequencies stay positive by construction.
inline std::vector<OscillatorTerm> unpack(const std::vector<double>& x, ConstraintMode mode) {
    std::vector<OscillatorTerm> terms(x.size() / 4);
    for (std::size_t k = 0; k < terms.size(); ++k) {
        auto& t = terms[k];
        t.a = std::exp(x[4 * k]);
        t.omega_r = std::exp(x[4 * k + 1]);
        t.gamma = std::exp(x[4 * k + 2]);
        t.gamma_prime = mode == ConstraintMode::hard ? t.gamma * sigmoid(x[4 * k + 3])
                                                     : std::exp(x[4 * k + 3]);
    }
    return terms;
}

inline complexd eval_eps(ModelKind kind, const std::vector<OscillatorTerm>& terms, double omega) {
    const complexd s = term_sum(terms, omega);
    if (kind == ModelKind::lorentz_dirac) return 1.0 + s;
    return (1.0 + 2.0 * s) / (1.0 - s);
}

struct Workspace {
    ModelKind kind = ModelKind::lorentz_dirac;
    ConstraintMode mode = ConstraintMode::none;
    const OpticalDataset* data = nullptr;
    std::vector<double> sqrt_w;
    std::vector<double> penalty_omega;
    double sqrt_penalty_w = 0.0;
    double weight_sum = 0.0;

    void residuals(const std::vector<double>& x, std::vector<double>& r) const {
        const auto terms = unpack(x, mode);
        const std::size_t np = data->points.size();
        r.assign(2 * np + penalty_omega.size() + 1, 0.0);
        for (std::size_t i = 0; i < np; ++i) {
            const auto& p = data->points[i];
            complexd e;
            try {
                e = eval_eps(kind, terms, p.omega);
            } catch (const error&) {
                e = complexd(1e30, 1e30);
            }
            if (!std::isfinite(e.real()) || !std::isfinite(e.imag())) e = complexd(1e30, 1e30);
            r[2 * i] = sqrt_w[i] * (e.real() - p.eps_re);
            r[2 * i + 1] = sqrt_w[i] * (e.imag() - p.eps_im);
        }
        for (std::size_t j = 0; j < penalty_omega.size(); ++j) {
            double im;
            try {
                im = eval_eps(kind, terms, penalty_omega[j]).imag();
            } catch (const error&) {
                im = -1e30;
            }
            if (!std::isfinite(im)) im = -1e30;
            r[2 * np + j] = im < 0.0 ? -sqrt_penalty_w * im : 0.0;
        }
        // Clausius-Mossotti inversion needs the static term sum below 1;
        // steer the iterate away from the boundary instead of failing there.
        if (kind == ModelKind::clausius_mossotti) {
            double s = 0.0;
            for (const auto& t : terms) s += t.a;
            if (s > 0.99) r.back() = 50.0 * std::sqrt(std::max(weight_sum, 1.0)) * (s - 0.99);
        }
    }

    double data_rms(const std::vector<double>& x) const {
        const auto terms = unpack(x, mode);
        double acc = 0.0;
        for (const auto& p : data->points) {
            complexd e;
            try {
                e = eval_eps(kind, terms, p.omega);
            } catch (const error&) {
                return std::numeric_limits<double>::infinity();
            }
            const double dr = e.real() - p.eps_re, di = e.imag() - p.eps_im;
            acc += p.weight * (dr * dr + di * di);
        }
        return std::sqrt(acc / std::max(weight_sum, 1e-300));
    }
};

/// Peak-based starting point: tallest Im maxima give omega_r, half-height
/// widths give gamma, peak heights give a, gamma' starts at zero.
inline std::vector<double> initial_guess(const OpticalDataset& data, ModelKind kind,
                                         std::size_t n_terms, ConstraintMode mode) {
    const auto& pts = data.points;
    std::vector<double> curve(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (kind == ModelKind::lorentz_dirac) {
            curve[i] = pts[i].eps_im;
        } else {
            const complexd e(pts[i].eps_re, pts[i].eps_im);
            curve[i] = ((e - 1.0) / (e + 2.0)).imag();
        }
    }
    std::vector<std::size_t> peaks;
    for (std::size_t i = 1; i + 1 < pts.size(); ++i)
        if (curve[i] > curve[i - 1] && curve[i] >= curve[i + 1] && curve[i] > 0.0) peaks.push_back(i);
    std::sort(peaks.begin(), peaks.end(), [&](std::size_t a, std::size_t b) { return curve[a] > curve[b]; });
    if (peaks.size() > n_terms) peaks.resize(n_terms);
    std::sort(peaks.begin(), peaks.end());

    struct Guess {
        double a, wr, g;
    };
    std::vector<Guess> guesses;
    for (std::size_t p : peaks) {
        const double wr = pts[p].omega;
        const double half = 0.5 * curve[p];
        double lo = pts.front().omega, hi = pts.back().omega;
        for (std::size_t i = p; i-- > 0;)
            if (curve[i] < half) {
                lo = pts[i].omega;
                break;
            }
        for (std::size_t i = p + 1; i < pts.size(); ++i)
            if (curve[i] < half) {
                hi = pts[i].omega;
                break;
            }
        const double g = std::max(hi - lo, wr / 50.0);
        guesses.push_back({std::max(curve[p] * g / wr, 1e-12), wr, g});
    }
    // not enough clear peaks: spread the rest across the data range
    const double wlo = pts.front().omega, whi = pts.back().omega;
    for (std::size_t k = guesses.size(); k < n_terms; ++k) {
        const double f = (static_cast<double>(k) + 0.5) / static_cast<double>(n_terms);
        const double wr = wlo * std::pow(whi / wlo, f);
        guesses.push_back({0.1, wr, wr / 10.0});
    }
    std::sort(guesses.begin(), guesses.end(), [](const Guess& a, const Guess& b) { return a.wr < b.wr; });

    if (kind == ModelKind::clausius_mossotti) {
        double s = 0.0;
        for (const auto& g : guesses) s += g.a;
        if (s >= 0.95)
            for (auto& g : guesses) g.a *= 0.9 * 0.95 / s;
    }

    // unconstrained modes must start inverted when the data shows negative
    // Im eps: from a physical start the nearest descent direction on such
    // data is killing the term outright
    bool negative_im = false;
    for (const auto& p : pts)
        if (p.eps_im < 0.0) {
            negative_im = true;
            break;
        }

    std::vector<double> x;
    x.reserve(4 * n_terms);
    for (const auto& g : guesses) {
        x.push_back(std::log(g.a));
        x.push_back(std::log(g.wr));
        x.push_back(std::log(g.g));
        // the gamma' coordinate must start where its gradient is alive; a
        // near-zero start is an exponentially flat spot the optimizer cannot
        // leave once finite differences underflow
        x.push_back(mode == ConstraintMode::hard ? -2.0
                    : negative_im              ? std::log(3.0 * g.g)
                                               : std::log(g.g) - 2.0);
    }
    return x;
}

} // namespace detail

inline FitResult fit_oscillators(const OpticalDataset& data, ModelKind kind, std::size_t n_terms,
                                 const FitOptions& opt = {}) {
    check_dataset(data);
    if (n_terms == 0) throw domain_error("fit needs n_terms >= 1");
    if (data.points.size() < 4 * n_terms)
        throw domain_error("fit needs at least 4 points per term: " + std::to_string(data.points.size()) +
                           " < " + std::to_string(4 * n_terms));

    detail::Workspace ws;
    ws.kind = kind;
    ws.mode = opt.mode;
    ws.data = &data;
    ws.sqrt_w.reserve(data.points.size());
    for (const auto& p : data.points) {
        ws.sqrt_w.push_back(std::sqrt(p.weight));
        ws.weight_sum += p.weight;
    }
    if (!(ws.weight_sum > 0.0)) throw domain_error("fit needs at least one positive weight");
    if (opt.mode == ConstraintMode::penalty) {
        const double lo = data.points.front().omega / 10.0;
        const double hi = data.points.back().omega;
        ws.penalty_omega.resize(opt.penalty_grid);
        for (std::size_t j = 0; j < opt.penalty_grid; ++j) {
            const double f = static_cast<double>(j) / static_cast<double>(opt.penalty_grid - 1);
            ws.penalty_omega[j] = lo * std::pow(hi / lo, f);
        }
        ws.sqrt_penalty_w =
            std::sqrt(opt.penalty_scale * ws.weight_sum / static_cast<double>(opt.penalty_grid));
    }

    // All perturbed starts are drawn up front so threading cannot change them.
    const auto base = detail::initial_guess(data, kind, n_terms, opt.mode);
    std::vector<std::vector<double>> starts{base};
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (std::size_t j = 1; j < std::max<std::size_t>(opt.n_starts, 1); ++j) {
        const double amp = 0.25 * (1.0 + 0.5 * static_cast<double>(j));
        auto x = base;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const bool is_shape = (i % 4) == 3;
            x[i] += (is_shape ? 2.0 : amp) * u(rng);
        }
        starts.push_back(std::move(x));
    }

    auto run_one = [&](const std::vector<double>& x0) {
        return levmar::minimize([&ws](const std::vector<double>& x, std::vector<double>& r) { ws.residuals(x, r); },
                                x0, opt.lm);
    };

    std::vector<levmar::Result> cands(starts.size());
    if (opt.parallel && starts.size() > 1) {
        std::vector<std::future<levmar::Result>> futs;
        futs.reserve(starts.size());
        for (const auto& s : starts)
            futs.push_back(std::async(std::launch::async, run_one, s));
        for (std::size_t i = 0; i < futs.size(); ++i) cands[i] = futs[i].get();
    } else {
        for (std::size_t i = 0; i < starts.size(); ++i) cands[i] = run_one(starts[i]);
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i < cands.size(); ++i)
        if (cands[i].cost < cands[best].cost) best = i;

    FitResult out;
    out.model.kind = kind;
    out.model.terms = detail::unpack(cands[best].x, opt.mode);
    std::sort(out.model.terms.begin(), out.model.terms.end(),
              [](const OscillatorTerm& a, const OscillatorTerm& b) { return a.omega_r < b.omega_r; });
    out.residual_rms = ws.data_rms(cands[best].x);
    out.iterations = cands[best].iterations;
    out.converged = cands[best].converged;
    try {
        check_model(out.model);
        out.positivity_certified = validation::positivity_certificate(out.model);
    } catch (const error&) {
        out.positivity_certified = false;
    }
    return out;
}

/// Second stage: per-parameter ordinary least squares quadratics in T_delta
/// over per-temperature fit results. Terms must already be resonance-sorted,
/// which fit_oscillators guarantees.
inline TemperatureFit fit_temperature_quadratics(ModelKind kind, double t0_kelvin,
                                                 const std::vector<std::pair<double, OscillatorModel>>& samples) {
    if (samples.empty()) throw domain_error("temperature fit needs at least one sample");
    const std::size_t n_terms = samples.front().second.terms.size();
    for (const auto& [t, m] : samples) {
        if (m.kind != kind) throw domain_error("temperature fit: mixed model kinds");
        if (m.terms.size() != n_terms) throw domain_error("temperature fit: term counts differ across samples");
    }

    const std::size_t degree = std::min<std::size_t>(samples.size() - 1, 2);
    auto ols = [&](auto value_of) {
        // normal equations for sum_j (c0 + c1 t + c2 t^2 - v_j)^2
        std::vector<double> a(9, 0.0), b(3, 0.0);
        for (const auto& [t, m] : samples) {
            const double v = value_of(m);
            const double tt[3] = {1.0, t, t * t};
            for (std::size_t r = 0; r <= degree; ++r) {
                b[r] += tt[r] * v;
                for (std::size_t c = 0; c <= degree; ++c) a[r * 3 + c] += tt[r] * tt[c];
            }
        }
        for (std::size_t d = degree + 1; d < 3; ++d) a[d * 3 + d] = 1.0;
        std::vector<double> coef;
        if (!levmar::detail::solve_spd(std::move(a), std::move(b), 3, coef))
            throw accuracy_error("temperature fit: singular normal equations", 0.0);
        return Quadratic{coef[0], coef[1], coef[2]};
    };

    TemperatureFit fit;
    fit.kind = kind;
    fit.t0_kelvin = t0_kelvin;
    fit.t_delta_lo = samples.front().first;
    fit.t_delta_hi = samples.front().first;
    for (const auto& [t, m] : samples) {
        fit.t_delta_lo = std::min(fit.t_delta_lo, t);
        fit.t_delta_hi = std::max(fit.t_delta_hi, t);
    }
    for (std::size_t k = 0; k < n_terms; ++k) {
        TermFit tf;
        tf.a = ols([k](const OscillatorModel& m) { return m.terms[k].a; });
        tf.omega_r = ols([k](const OscillatorModel& m) { return m.terms[k].omega_r; });
        tf.gamma = ols([k](const OscillatorModel& m) { return m.terms[k].gamma; });
        tf.gamma_prime = ols([k](const OscillatorModel& m) { return m.terms[k].gamma_prime; });
        fit.terms.push_back(tf);
    }
    return fit;
}

/// Full two-stage pipeline over per-temperature datasets.
inline TemperatureFit fit_temperature(const std::vector<OpticalDataset>& datasets, ModelKind kind,
                                      std::size_t n_terms, const FitOptions& opt = {},
                                      double t0_kelvin = default_t0_kelvin,
                                      std::vector<FitResult>* stage1_out = nullptr) {
    if (datasets.empty()) throw domain_error("temperature fit needs at least one dataset");
    std::vector<std::pair<double, OscillatorModel>> samples;
    for (const auto& d : datasets) {
        auto r = fit_oscillators(d, kind, n_terms, opt);
        samples.emplace_back(d.t_delta, r.model);
        if (stage1_out) stage1_out->push_back(std::move(r));
    }
    return fit_temperature_quadratics(kind, t0_kelvin, samples);
}

} // namespace polder::fitting
