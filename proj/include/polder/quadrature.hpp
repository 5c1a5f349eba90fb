#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <limits>

#include "polder/errors.hpp"

namespace polder {

struct QuadResult {
    double value = 0.0;
    double error = 0.0; // absolute error estimate
};

namespace detail {

template <typename F>
double kronrod_once(F& f, double a, double b) {
    using boost::math::quadrature::gauss_kronrod;
    return gauss_kronrod<double, 15>::integrate(f, a, b, 0);
}

template <typename F>
void refine_panel(F& f, double a, double b, double whole, double tol_abs, int depth,
                  QuadResult& acc) {
    const double mid = 0.5 * (a + b);
    const double left = kronrod_once(f, a, mid);
    const double right = kronrod_once(f, mid, b);
    const double diff = std::abs(whole - (left + right));
    if (diff <= tol_abs || depth <= 0 || !(a < mid && mid < b)) {
        acc.value += left + right;
        acc.error += diff;
        return;
    }
    refine_panel(f, a, mid, left, 0.5 * tol_abs, depth - 1, acc);
    refine_panel(f, mid, b, right, 0.5 * tol_abs, depth - 1, acc);
}

} // namespace detail

/// Adaptive Kronrod integration over finite [a, b] that never trusts the
/// embedded error estimate: a panel is accepted only when one whole-panel
/// rule and the sum over its halves agree to tol_abs (halved per level).
/// The embedded Gauss/Kronrod difference can vanish on a narrow feature the
/// nodes straddle unluckily, silently freezing boost's recursion; comparing
/// two genuinely different resolutions cannot fail that way. The returned
/// error is the sum of accepted disagreements, a pessimistic bound on the
/// refined value's error. Does not throw on non-convergence; the error field
/// carries the verdict.
template <typename F>
QuadResult integrate_refined(F&& f, double a, double b, double tol_abs, int max_depth = 26) {
    if (!(b > a)) return {};
    QuadResult acc;
    detail::refine_panel(f, a, b, detail::kronrod_once(f, a, b), tol_abs, max_depth, acc);
    return acc;
}

/// Simple bisection on a sign change; f(lo) and f(hi) must have opposite
/// signs. Resolves the root to rel_tol relative precision.
template <typename F>
double bisect(F&& f, double lo, double hi, double rel_tol = 1e-12, int max_iter = 200) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw domain_error("bisect: no sign change on [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    for (int i = 0; i < max_iter; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (hi - lo <= rel_tol * std::abs(mid)) return mid;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace polder
