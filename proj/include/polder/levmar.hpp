#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include "polder/errors.hpp"

namespace polder::levmar {

struct Options {
    std::size_t max_iter = 400;
    double ftol = 1e-14;    // relative cost decrease
    double xtol = 1e-12;    // relative step size
    double gtol = 1e-14;    // infinity norm of the gradient
    double atol = 1e-18;    // absolute cost floor, squared-residual units
    double lambda0 = 1e-3;  // initial damping
    double fd_step = 1e-7;  // forward-difference step, relative with floor 1
};

struct Result {
    std::vector<double> x;
    double cost = 0.0; // sum of squared residuals at x
    std::size_t iterations = 0;
    bool converged = false;
};

using ResidualFn = std::function<void(const std::vector<double>&, std::vector<double>&)>;

namespace detail {

/// LDL^T solve of a symmetric positive semidefinite system; the caller adds
/// damping, so near-singular pivots only need a floor, not a failure path.
inline bool solve_spd(std::vector<double> a, std::vector<double> b, std::size_t n,
                      std::vector<double>& out) {
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < j; ++k) {
            // columns k < j are unit-L entries already, so restore the d_k factor
            const double f = a[j * n + k] * a[k * n + k];
            for (std::size_t i = j; i < n; ++i) a[i * n + j] -= f * a[i * n + k];
        }
        const double d = a[j * n + j];
        if (!(d > 0.0) || !std::isfinite(d)) return false;
        const double inv = 1.0 / d;
        for (std::size_t i = j + 1; i < n; ++i) a[i * n + j] *= inv;
        // store D on the diagonal, L strictly below
    }
    // forward substitution L y = b
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < i; ++k) b[i] -= a[i * n + k] * b[k];
    for (std::size_t i = 0; i < n; ++i) b[i] /= a[i * n + i];
    // back substitution L^T x = y
    for (std::size_t ii = n; ii-- > 0;)
        for (std::size_t k = ii + 1; k < n; ++k) b[ii] -= a[k * n + ii] * b[k];
    out = std::move(b);
    return true;
}

inline double cost_of(const std::vector<double>& r) {
    double c = 0.0;
    for (double v : r) c += v * v;
    return std::isfinite(c) ? c : std::numeric_limits<double>::infinity();
}

} // namespace detail

/// Damped Gauss-Newton with a forward-difference Jacobian. The residual
/// callback must treat any parameter vector as a legal query; infeasible
/// points should produce large finite residuals rather than throw.
inline Result minimize(const ResidualFn& fn, std::vector<double> x0, const Options& opt = {}) {
    const std::size_t n = x0.size();
    if (n == 0) throw domain_error("levmar: empty parameter vector");

    std::vector<double> r;
    fn(x0, r);
    const std::size_t m = r.size();
    if (m < n) throw domain_error("levmar: fewer residuals than parameters");

    Result res;
    res.x = std::move(x0);
    res.cost = detail::cost_of(r);
    if (res.cost <= opt.atol) {
        res.converged = true;
        return res;
    }

    std::vector<double> jac(m * n), rp, jtj(n * n), jtr(n), step, xtrial, rtrial;
    double lambda = opt.lambda0;

    for (res.iterations = 0; res.iterations < opt.max_iter; ++res.iterations) {
        // Jacobian by forward differences
        for (std::size_t j = 0; j < n; ++j) {
            const double h = opt.fd_step * std::max(1.0, std::abs(res.x[j]));
            xtrial = res.x;
            xtrial[j] += h;
            fn(xtrial, rp);
            for (std::size_t i = 0; i < m; ++i) {
                const double d = (rp[i] - r[i]) / h;
                jac[i * n + j] = std::isfinite(d) ? d : 0.0;
            }
        }
        for (std::size_t a = 0; a < n; ++a) {
            jtr[a] = 0.0;
            for (std::size_t i = 0; i < m; ++i) jtr[a] += jac[i * n + a] * r[i];
            for (std::size_t b = 0; b <= a; ++b) {
                double s = 0.0;
                for (std::size_t i = 0; i < m; ++i) s += jac[i * n + a] * jac[i * n + b];
                jtj[a * n + b] = jtj[b * n + a] = s;
            }
        }
        double gmax = 0.0;
        for (double g : jtr) gmax = std::max(gmax, std::abs(g));
        if (gmax <= opt.gtol * std::max(1.0, res.cost)) {
            res.converged = true;
            break;
        }

        double diag_max = 1e-300;
        for (std::size_t d = 0; d < n; ++d) diag_max = std::max(diag_max, jtj[d * n + d]);

        bool accepted = false;
        for (int tries = 0; tries < 40; ++tries) {
            std::vector<double> a = jtj;
            // floor the damping relative to the largest curvature so flat
            // directions cannot produce unbounded steps
            for (std::size_t d = 0; d < n; ++d)
                a[d * n + d] += lambda * std::max(jtj[d * n + d], 1e-10 * diag_max);
            std::vector<double> rhs(n);
            for (std::size_t d = 0; d < n; ++d) rhs[d] = -jtr[d];
            if (!detail::solve_spd(std::move(a), std::move(rhs), n, step)) {
                lambda *= 10.0;
                continue;
            }
            // cap the step so a flat direction cannot leap out of the
            // representable region in one iteration
            double big = 0.0;
            for (double s : step) big = std::max(big, std::abs(s));
            if (big > 10.0)
                for (double& s : step) s *= 10.0 / big;
            xtrial = res.x;
            for (std::size_t d = 0; d < n; ++d) xtrial[d] += step[d];
            fn(xtrial, rtrial);
            const double ctrial = detail::cost_of(rtrial);
            if (ctrial < res.cost) {
                double smax = 0.0;
                for (std::size_t d = 0; d < n; ++d)
                    smax = std::max(smax, std::abs(step[d]) / std::max(1.0, std::abs(xtrial[d])));
                const double drop = res.cost - ctrial;
                res.x = xtrial;
                r = rtrial;
                res.cost = ctrial;
                lambda = std::max(lambda / 3.0, 1e-12);
                accepted = true;
                if (res.cost <= opt.atol || drop <= opt.ftol * std::max(res.cost, 1e-300) ||
                    smax <= opt.xtol)
                    res.converged = true;
                break;
            }
            lambda *= 10.0;
            if (lambda > 1e14) break;
        }
        if (!accepted) {
            // No damping level yields descent: practically a local minimum.
            res.converged = true;
            break;
        }
        if (res.converged) break;
    }
    return res;
}

} // namespace polder::levmar
