#pragma once

#include <array>
#include <cmath>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "bwave/core.hpp"

namespace bwave::soliton {

struct SolitonSpec {
    double zeta_max = 1.0;
    double eps = 0.3;
    double mu = 0.3;
    int direction = 1;  // +1 right-going, -1 left-going

    void validate() const {
        if (!(zeta_max > 0.0)) throw ConfigError("soliton: zeta_max must be positive");
        if (!(eps > 0.0)) throw ConfigError("soliton: eps must be positive");
        if (!(mu > 0.0)) throw ConfigError("soliton: mu must be positive");
        if (!(1.0 + eps * zeta_max > 0.0)) throw ConfigError("soliton: crest depth must be positive");
        if (direction != 1 && direction != -1) throw ConfigError("soliton: direction must be +1 or -1");
    }
};

/// c^2 = eps (eps zm^3/6 + zm^2/2) / (zm - ln(1 + eps zm)/eps), signed by direction.
inline double soliton_speed(double zeta_max, double eps, int direction = 1) {
    if (!(eps > 0.0) || !(zeta_max > 0.0)) throw ConfigError("soliton speed: eps and zeta_max must be positive");
    const double num = eps * (eps * zeta_max * zeta_max * zeta_max / 6.0 + 0.5 * zeta_max * zeta_max);
    const double den = zeta_max - std::log1p(eps * zeta_max) / eps;
    if (!(den > 0.0)) throw ConfigError("soliton speed: non-positive denominator " + std::to_string(den));
    return direction * std::sqrt(num / den);
}

namespace detail {

// (y - log(1+y)) / y^2, with a series near zero where the difference cancels.
inline double log_defect(double y) {
    if (std::abs(y) < 1e-2) {
        double term = 1.0, sum = 0.0;
        for (int k = 2; k < 12; ++k) {
            sum += ((k % 2 == 0) ? 1.0 : -1.0) * term / k;
            term *= y;
        }
        return sum;
    }
    return (y - std::log1p(y)) / (y * y);
}

}  // namespace detail

/// Traveling-wave relations for a given speed: zeta'' as a function of zeta,
/// and the squared slope G(zeta) = (zeta')^2 from the first integral.
struct TravelingWaveOde {
    double c2;
    double eps;
    double mu;

    // (c^2 mu / 3) zeta'' = c^2 zeta/(1 + eps zeta) - zeta - eps zeta^2 / 2
    double second_derivative(double z) const {
        return 3.0 / (c2 * mu) * (c2 * z / (1.0 + eps * z) - z - 0.5 * eps * z * z);
    }

    // (c^2 mu / 6) G = (c^2/eps)(z - ln(1 + eps z)/eps) - eps z^3/6 - z^2/2
    double slope_squared(double z) const {
        return 6.0 / (c2 * mu) * z * z * (c2 * detail::log_defect(eps * z) - eps * z / 6.0 - 0.5);
    }

    /// Residual of the first integral for a (zeta, zeta') pair, in units of G.
    double first_integral_residual(double z, double dz) const { return dz * dz - slope_squared(z); }
};

/// Even crest profile sampled at xi = i*h for i >= 0, with exact slopes for
/// Hermite interpolation. Values below the cutoff are treated as zero.
class SolitonProfile {
public:
    double speed() const noexcept { return c_; }
    double zeta_max() const noexcept { return spec_.zeta_max; }
    const SolitonSpec& spec() const noexcept { return spec_; }
    const TravelingWaveOde& ode() const noexcept { return ode_; }
    double step() const noexcept { return h_; }
    double radius() const noexcept { return h_ * static_cast<double>(zeta_.size() - 1); }
    bool complete() const noexcept { return complete_; }
    const std::vector<double>& half_zeta() const noexcept { return zeta_; }
    const std::vector<double>& half_slope() const noexcept { return slope_; }

    double zeta(double xi) const {
        const auto [z, dz] = eval(std::abs(xi));
        return z;
    }
    double slope(double xi) const {
        const auto [z, dz] = eval(std::abs(xi));
        return xi < 0.0 ? -dz : dz;
    }
    double curvature(double xi) const { return ode_.second_derivative(zeta(xi)); }
    double discharge(double xi) const { return c_ * zeta(xi); }

    // Built by soliton_profile().
    SolitonProfile(SolitonSpec spec, double c, TravelingWaveOde ode, double h, std::vector<double> zeta,
                   std::vector<double> slope, bool complete)
        : spec_(spec), c_(c), ode_(ode), h_(h), zeta_(std::move(zeta)), slope_(std::move(slope)),
          complete_(complete) {}

private:
    std::array<double, 2> eval(double a) const {
        const double s = a / h_;
        const std::size_t last = zeta_.size() - 1;
        if (s >= static_cast<double>(last)) {
            if (!complete_ && s > static_cast<double>(last) + 1e-9)
                throw RangeError("soliton profile: |xi|=" + std::to_string(a) + " beyond truncation radius " +
                                 std::to_string(radius()));
            return {0.0, 0.0};
        }
        const auto i = static_cast<std::size_t>(s);
        const double w = s - static_cast<double>(i);
        const double z0 = zeta_[i], z1 = zeta_[i + 1];
        const double d0 = slope_[i] * h_, d1 = slope_[i + 1] * h_;
        const double w2 = w * w, w3 = w2 * w;
        const double z = (2 * w3 - 3 * w2 + 1) * z0 + (w3 - 2 * w2 + w) * d0 + (-2 * w3 + 3 * w2) * z1 + (w3 - w2) * d1;
        const double dz = ((6 * w2 - 6 * w) * z0 + (3 * w2 - 4 * w + 1) * d0 + (-6 * w2 + 6 * w) * z1 +
                           (3 * w2 - 2 * w) * d1) /
                          h_;
        return {z, dz};
    }

    SolitonSpec spec_;
    double c_;
    TravelingWaveOde ode_;
    double h_;
    std::vector<double> zeta_;
    std::vector<double> slope_;
    bool complete_;
};

struct ProfileOptions {
    double step = 1e-4;
    double cutoff = 1e-12;
    double max_radius = 400.0;
    // Leave the crest on the second-order system until zeta drops to this
    // fraction of zeta_max, then continue on the first-order quadrature.
    double switch_fraction = 0.75;
};

/// Integrates the traveling-wave profile outward from the crest with the
/// classical fourth-order Runge-Kutta method at a fixed step.
///
/// Near the crest the slope equation zeta' = -sqrt(G(zeta)) is singular, so
/// the second-order system (zeta, zeta') is advanced from (zeta_max, 0). Once
/// zeta has dropped below switch_fraction*zeta_max the first-order equation
/// takes over; it is stable toward the decaying tail.
inline SolitonProfile soliton_profile(const SolitonSpec& spec, const ProfileOptions& opt = {}) {
    spec.validate();
    const double c = soliton_speed(spec.zeta_max, spec.eps, spec.direction);
    const TravelingWaveOde ode{c * c, spec.eps, spec.mu};
    const double h = opt.step;
    const double zm = spec.zeta_max;

    auto neg_sqrt_g = [&](double z) {
        const double g = ode.slope_squared(z);
        if (g < -1e-8 * zm * zm)
            throw IntegrationError("soliton profile: G(zeta)=" + std::to_string(g) + " < 0 at zeta=" +
                                   std::to_string(z) + "; speed inconsistent with the first integral");
        return -std::sqrt(std::max(g, 0.0));
    };

    std::vector<double> zeta{zm}, slope{0.0};
    double z = zm, dz = 0.0;
    const auto max_steps = static_cast<std::size_t>(opt.max_radius / h);

    // Crest region: y' = (dz, phi(z)).
    while (z > opt.switch_fraction * zm && zeta.size() < max_steps) {
        const double k1z = dz, k1d = ode.second_derivative(z);
        const double k2z = dz + 0.5 * h * k1d, k2d = ode.second_derivative(z + 0.5 * h * k1z);
        const double k3z = dz + 0.5 * h * k2d, k3d = ode.second_derivative(z + 0.5 * h * k2z);
        const double k4z = dz + h * k3d, k4d = ode.second_derivative(z + h * k3z);
        z += h / 6.0 * (k1z + 2 * k2z + 2 * k3z + k4z);
        dz += h / 6.0 * (k1d + 2 * k2d + 2 * k3d + k4d);
        zeta.push_back(z);
        slope.push_back(dz);
    }
    if (dz >= 0.0) throw IntegrationError("soliton profile: crest is not a maximum (check eps, mu, zeta_max)");

    // Tail: zeta' = -sqrt(G(zeta)).
    bool complete = false;
    while (zeta.size() < max_steps) {
        const double k1 = neg_sqrt_g(z);
        const double k2 = neg_sqrt_g(z + 0.5 * h * k1);
        const double k3 = neg_sqrt_g(z + 0.5 * h * k2);
        const double k4 = neg_sqrt_g(z + h * k3);
        z += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
        if (z < opt.cutoff) {
            zeta.push_back(0.0);
            slope.push_back(0.0);
            complete = true;
            break;
        }
        zeta.push_back(z);
        slope.push_back(neg_sqrt_g(z));
    }
    return {spec, c, ode, h, std::move(zeta), std::move(slope), complete};
}

/// Samples of the profile at the given xi values (for CSV export).
struct ProfileSamples {
    std::vector<double> xi, zeta, q;
};

inline ProfileSamples sample_profile(const SolitonProfile& p, std::span<const double> xi) {
    ProfileSamples s;
    for (double v : xi) {
        s.xi.push_back(v);
        s.zeta.push_back(p.zeta(v));
        s.q.push_back(p.discharge(v));
    }
    return s;
}

struct InitialData {
    WaveState state;          // nodes 1..n, q_trace set to the boundary discharge
    BoundaryForcing forcing;  // exact traveling trace at the left edge
};

/// Soliton with crest at x_center, sampled on nodes 1..n of `grid`; the
/// forcing at the left edge is the exact trace f(t) = zeta(x_left - x_center - c t)
/// with fddot = c^2 zeta''.
inline InitialData soliton_initial_data(const SolitonProfile& profile, const Grid1D& grid, double x_center) {
    const double c = profile.speed();
    InitialData d;
    d.state.zeta.reserve(grid.n());
    d.state.q.reserve(grid.n());
    for (std::size_t i = 1; i <= grid.n(); ++i) {
        const double xi = grid.x(i) - x_center;
        d.state.zeta.push_back(profile.zeta(xi));
        d.state.q.push_back(profile.discharge(xi));
    }
    const double xb = grid.x_left() - x_center;
    d.state.q_trace = profile.discharge(xb);
    auto p = std::make_shared<const SolitonProfile>(profile);
    d.forcing = BoundaryForcing::analytic([p, xb, c](double t) { return p->zeta(xb - c * t); },
                                          [p, xb, c](double t) { return c * c * p->curvature(xb - c * t); },
                                          [p, xb, c](double t) { return -c * p->slope(xb - c * t); });
    return d;
}

}  // namespace bwave::soliton
