#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include "polder/errors.hpp"

namespace polder {

/// Single-oscillator dynamic polarizability
///   alpha(i xi) = alpha0 * omega_a^2 / (omega_a^2 + xi^2),
/// positive and monotonically decreasing in xi. alpha0 is a polarizability
/// volume in cm^3; omega_a in rad/s.
struct AtomModel {
    double alpha0_cm3 = 0.0;
    double omega_a = 0.0;

    double operator()(double xi) const {
        const double w2 = omega_a * omega_a;
        return alpha0_cm3 * w2 / (w2 + xi * xi);
    }
};

inline void check_atom(const AtomModel& a) {
    if (!(a.alpha0_cm3 > 0.0)) throw domain_error("atom alpha0 must be > 0, got " + std::to_string(a.alpha0_cm3));
    if (!(a.omega_a > 0.0)) throw domain_error("atom omega_a must be > 0, got " + std::to_string(a.omega_a));
}

/// Tabulated alpha(i xi) with monotone (Fritsch-Carlson) cubic interpolation.
/// Below the first node the value is clamped; above the last node the table is
/// extended by the ~1/xi^2 asymptote anchored at the last node.
class TabulatedPolarizability {
  public:
    TabulatedPolarizability(std::vector<double> xi, std::vector<double> alpha)
        : xi_(std::move(xi)), alpha_(std::move(alpha)) {
        if (xi_.size() != alpha_.size() || xi_.size() < 2)
            throw domain_error("tabulated polarizability needs >= 2 (xi, alpha) points");
        for (std::size_t i = 0; i + 1 < xi_.size(); ++i)
            if (!(xi_[i] < xi_[i + 1]))
                throw domain_error("tabulated polarizability xi values must be strictly increasing");
        build_slopes();
    }

    double operator()(double xi) const {
        if (xi <= xi_.front()) return alpha_.front();
        if (xi >= xi_.back()) {
            const double xl = xi_.back();
            return alpha_.back() * (xl * xl) / (xi * xi);
        }
        const auto it = std::upper_bound(xi_.begin(), xi_.end(), xi);
        const std::size_t i = static_cast<std::size_t>(it - xi_.begin()) - 1;
        const double h = xi_[i + 1] - xi_[i];
        const double t = (xi - xi_[i]) / h;
        const double t2 = t * t, t3 = t2 * t;
        const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
        const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
        return h00 * alpha_[i] + h10 * h * d_[i] + h01 * alpha_[i + 1] + h11 * h * d_[i + 1];
    }

    /// Roll-off scale: the first node where alpha drops below half the static
    /// value, falling back to the median node.
    double scale() const {
        for (std::size_t i = 0; i < xi_.size(); ++i)
            if (alpha_[i] < 0.5 * alpha_.front() && xi_[i] > 0.0) return xi_[i];
        return std::max(xi_[xi_.size() / 2], xi_[1]);
    }

  private:
    void build_slopes() {
        const std::size_t n = xi_.size();
        std::vector<double> delta(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i)
            delta[i] = (alpha_[i + 1] - alpha_[i]) / (xi_[i + 1] - xi_[i]);
        d_.assign(n, 0.0);
        d_[0] = delta[0];
        d_[n - 1] = delta[n - 2];
        for (std::size_t i = 1; i + 1 < n; ++i)
            d_[i] = (delta[i - 1] * delta[i] <= 0.0) ? 0.0 : 0.5 * (delta[i - 1] + delta[i]);
        // Fritsch-Carlson limiter keeps the interpolant monotone per interval.
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (delta[i] == 0.0) {
                d_[i] = d_[i + 1] = 0.0;
                continue;
            }
            const double a = d_[i] / delta[i];
            const double b = d_[i + 1] / delta[i];
            const double s = a * a + b * b;
            if (s > 9.0) {
                const double tau = 3.0 / std::sqrt(s);
                d_[i] = tau * a * delta[i];
                d_[i + 1] = tau * b * delta[i];
            }
        }
    }

    std::vector<double> xi_, alpha_, d_;
};

/// Either polarizability form behind one callable value type.
class Polarizability {
  public:
    Polarizability(AtomModel a) : impl_(a) { check_atom(a); } // NOLINT(google-explicit-constructor)
    Polarizability(TabulatedPolarizability t) : impl_(std::move(t)) {} // NOLINT(google-explicit-constructor)

    double operator()(double xi) const {
        return std::visit([&](const auto& f) { return f(xi); }, impl_);
    }

    /// Static value alpha(0).
    double static_value() const { return (*this)(0.0); }

    /// Frequency scale used when mapping the semi-infinite xi integral to a
    /// finite interval; for a table this is the midpoint node.
    double frequency_scale() const {
        if (const auto* a = std::get_if<AtomModel>(&impl_)) return a->omega_a;
        return std::get<TabulatedPolarizability>(impl_).scale();
    }

  private:
    std::variant<AtomModel, TabulatedPolarizability> impl_;
};

} // namespace polder
