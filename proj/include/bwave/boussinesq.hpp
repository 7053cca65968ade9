#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bwave/core.hpp"
#include "bwave/dispersive_ops.hpp"

namespace bwave::bouss {

/// Nodewise momentum flux of the dimensionless shallow water system,
/// (h^2 - 1)/(2 eps) + eps q^2/h with h = 1 + eps zeta.
inline double sw_flux_dimensionless(double zeta, double q, const DimensionlessParams& p) {
    const double eps = p.eps();
    const double h = 1.0 + eps * zeta;
    if (!(h > 0.0)) throw DepthError("boussinesq: non-positive depth 1+eps*zeta=" + std::to_string(h));
    // (h^2 - 1)/(2 eps) = zeta (1 + eps zeta / 2), free of cancellation for small eps.
    return zeta * (1.0 + 0.5 * eps * zeta) + eps * q * q / h;
}

inline std::vector<double> nodal_flux(std::span<const double> zeta, std::span<const double> q,
                                      const DimensionlessParams& p) {
    detail::check_length(q.size(), zeta.size(), "nodal flux");
    std::vector<double> out(zeta.size());
    for (std::size_t i = 0; i < zeta.size(); ++i) out[i] = sw_flux_dimensionless(zeta[i], q[i], p);
    return out;
}

struct NonlocalFlux {
    std::vector<double> fmu;  // R1 applied to the nodal flux
    double fmu0 = 0.0;        // its boundary trace
};

inline NonlocalFlux nonlocal_flux(const NeumannInverse& r1, const DimensionlessParams& p,
                                  std::span<const double> zeta, std::span<const double> q) {
    NonlocalFlux out;
    out.fmu = r1.apply(nodal_flux(zeta, q, p));
    out.fmu0 = out.fmu.front();
    return out;
}

/// Amplitude of the boundary-layer source, which is also the time derivative
/// of the discharge trace:
///   (eps/delta) qb^2/(1 + eps f) + delta fddot + (1/delta)(1 + eps f/2) f - fmu0/delta.
inline double source_amplitude(double q_trace, double f, double fddot, double fmu0, const DimensionlessParams& p) {
    const double eps = p.eps();
    const double delta = p.delta();
    const double hb = 1.0 + eps * f;
    if (!(hb > 0.0)) throw DepthError("boussinesq: non-positive boundary depth 1+eps*f=" + std::to_string(hb));
    return (eps / delta) * q_trace * q_trace / hb + delta * fddot + (1.0 + 0.5 * eps * f) * f / delta -
           fmu0 / delta;
}

/// Explicit Euler step of the trace ODE.
inline double advance_trace(double q_trace, double amplitude, double dt) { return q_trace + dt * amplitude; }

/// exp(-(x_i - x_left)/delta) on the unknown nodes.
struct SourceProfile {
    std::vector<double> decay;

    SourceProfile() = default;
    SourceProfile(std::span<const double> x, double x_left, double delta) {
        decay.reserve(x.size());
        for (double xi : x) decay.push_back(std::exp(-(xi - x_left) / delta));
    }
};

enum class RightClosure { Extrapolate, Wall };

struct StepReport {
    std::size_t step = 0;
    double max_cfl = 0.0;           // max(|eps u| + sqrt(h)) dt/dx at the start of the step
    double left_mass_flux = 0.0;
    double right_mass_flux = 0.0;
    double source_amplitude = 0.0;  // zero for periodic runs
    double fmu0 = 0.0;
};

/// Lax-Friedrichs finite volume solver for the dimensionless Boussinesq-Abbott
/// system written as conservation laws with the nonlocal flux (q, R1 f).
///
/// In generating mode the unknowns live on nodes 1..n, node 0 carries
/// (f, q_trace), and the momentum equation receives the source
/// Q exp(-(x - x_left)/delta) whose amplitude also drives q_trace.
/// In periodic mode the unknowns live on nodes 0..n-1 and there is no source.
class BoussinesqSolver {
public:
    static BoussinesqSolver generating(Grid1D grid, DimensionlessParams params, BoundaryForcing forcing,
                                       WaveState initial, RightClosure right = RightClosure::Extrapolate) {
        BoussinesqSolver s(std::move(grid), params, std::move(initial), false);
        s.forcing_ = std::move(forcing);
        s.right_ = right;
        s.r1_.emplace(s.grid_.n(), params.mu(), s.grid_.dx());
        s.profile_ = SourceProfile(s.x_, s.grid_.x_left(), params.delta());
        return s;
    }

    static BoussinesqSolver periodic(Grid1D grid, DimensionlessParams params, WaveState initial) {
        BoussinesqSolver s(std::move(grid), params, std::move(initial), true);
        s.rp_.emplace(s.grid_.n(), params.mu(), s.grid_.dx());
        return s;
    }

    bool is_periodic() const noexcept { return periodic_; }
    const WaveState& state() const noexcept { return state_; }
    const Grid1D& grid() const noexcept { return grid_; }
    const DimensionlessParams& params() const noexcept { return params_; }
    const std::vector<double>& x() const noexcept { return x_; }
    const SourceProfile& source_profile() const noexcept { return profile_; }
    const BoundaryForcing& forcing() const noexcept { return forcing_; }
    std::size_t steps_taken() const noexcept { return steps_; }

    StepReport step(double dt) {
        if (!(dt > 0.0)) throw ConfigError("boussinesq: dt must be positive");
        StepReport rep = periodic_ ? step_periodic(dt) : step_generating(dt);
        ++steps_;
        rep.step = steps_;
        check_finite();
        return rep;
    }

private:
    BoussinesqSolver(Grid1D grid, DimensionlessParams params, WaveState initial, bool periodic)
        : grid_(std::move(grid)), params_(params), state_(std::move(initial)), periodic_(periodic) {
        check_shape(state_);
        if (state_.size() != grid_.n())
            throw ShapeError("boussinesq: state has " + std::to_string(state_.size()) + " nodes, grid has " +
                             std::to_string(grid_.n()));
        x_ = periodic ? grid_.nodes(0, grid_.n() - 1) : grid_.nodes(1, grid_.n());
        for (double z : state_.zeta)
            if (!(1.0 + params_.eps() * z > 0.0)) throw DepthError("boussinesq: initial depth not positive");
    }

    double max_speed() const {
        const double eps = params_.eps();
        double m = 0.0;
        for (std::size_t i = 0; i < state_.size(); ++i) {
            const double h = 1.0 + eps * state_.zeta[i];
            m = std::max(m, std::abs(eps * state_.q[i] / h) + std::sqrt(std::max(h, 0.0)));
        }
        return m;
    }

    StepReport step_generating(double dt) {
        const std::size_t n = state_.size();
        const double dx = grid_.dx();
        const double visc = dx / (2.0 * dt);
        const auto& z = state_.zeta;
        const auto& q = state_.q;

        StepReport rep;
        rep.max_cfl = max_speed() * dt / dx;

        const ForcingSample fs = forcing_(state_.t);
        const double qb = state_.q_trace;
        const NonlocalFlux nl = nonlocal_flux(*r1_, params_, z, q);
        const double amp = source_amplitude(qb, fs.f, fs.fddot, nl.fmu0, params_);

        // Face k sits between unknowns k-1 and k; face 0 is the generating edge,
        // face n the right edge.
        std::vector<double> mass(n + 1), mom(n + 1);
        mass[0] = 0.5 * (qb + q[0]) - visc * (z[0] - fs.f);
        mom[0] = 0.5 * (nl.fmu0 + nl.fmu[0]) - visc * (q[0] - qb);
        for (std::size_t k = 1; k < n; ++k) {
            mass[k] = 0.5 * (q[k - 1] + q[k]) - visc * (z[k] - z[k - 1]);
            mom[k] = 0.5 * (nl.fmu[k - 1] + nl.fmu[k]) - visc * (q[k] - q[k - 1]);
        }
        if (right_ == RightClosure::Extrapolate) {
            mass[n] = q[n - 1];
            mom[n] = nl.fmu[n - 1];
        } else {
            // Mirrored ghost (zeta_n, -q_n): the mass flux through the wall vanishes.
            mass[n] = 0.0;
            mom[n] = nl.fmu[n - 1] - visc * (-2.0 * q[n - 1]);
        }

        const double r = dt / dx;
        WaveState next;
        next.zeta.resize(n);
        next.q.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            next.zeta[i] = z[i] - r * (mass[i + 1] - mass[i]);
            next.q[i] = q[i] - r * (mom[i + 1] - mom[i]) + dt * amp * profile_.decay[i];
        }
        next.q_trace = advance_trace(qb, amp, dt);
        next.t = state_.t + dt;

        rep.left_mass_flux = mass[0];
        rep.right_mass_flux = mass[n];
        rep.source_amplitude = amp;
        rep.fmu0 = nl.fmu0;
        state_ = std::move(next);
        return rep;
    }

    StepReport step_periodic(double dt) {
        const std::size_t n = state_.size();
        const double dx = grid_.dx();
        const double visc = dx / (2.0 * dt);
        const auto& z = state_.zeta;
        const auto& q = state_.q;

        StepReport rep;
        rep.max_cfl = max_speed() * dt / dx;
        const std::vector<double> fmu = rp_->apply(nodal_flux(z, q, params_));

        // Face k sits between unknowns k-1 (wrapped) and k.
        std::vector<double> mass(n), mom(n);
        for (std::size_t k = 0; k < n; ++k) {
            const std::size_t l = (k + n - 1) % n;
            mass[k] = 0.5 * (q[l] + q[k]) - visc * (z[k] - z[l]);
            mom[k] = 0.5 * (fmu[l] + fmu[k]) - visc * (q[k] - q[l]);
        }
        const double r = dt / dx;
        WaveState next;
        next.zeta.resize(n);
        next.q.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t k = (i + 1) % n;
            next.zeta[i] = z[i] - r * (mass[k] - mass[i]);
            next.q[i] = q[i] - r * (mom[k] - mom[i]);
        }
        next.t = state_.t + dt;
        rep.left_mass_flux = mass[0];
        rep.right_mass_flux = mass[0];
        state_ = std::move(next);
        return rep;
    }

    void check_finite() const {
        const double eps = params_.eps();
        for (std::size_t i = 0; i < state_.size(); ++i) {
            if (!std::isfinite(state_.zeta[i]) || !std::isfinite(state_.q[i]))
                throw DivergenceError("boussinesq: non-finite value at x=" + std::to_string(x_[i]) + " in step " +
                                      std::to_string(steps_) + " (t=" + std::to_string(state_.t) + ")");
            if (!(1.0 + eps * state_.zeta[i] > 0.0))
                throw DepthError("boussinesq: depth vanished at x=" + std::to_string(x_[i]) + " in step " +
                                 std::to_string(steps_));
        }
        if (!std::isfinite(state_.q_trace))
            throw DivergenceError("boussinesq: non-finite discharge trace in step " + std::to_string(steps_));
    }

    Grid1D grid_;
    DimensionlessParams params_;
    WaveState state_;
    bool periodic_;
    std::vector<double> x_;
    BoundaryForcing forcing_;
    RightClosure right_ = RightClosure::Extrapolate;
    std::optional<NeumannInverse> r1_;
    std::optional<PeriodicInverse> rp_;
    SourceProfile profile_;
    std::size_t steps_ = 0;
};

/// Residuals of the two conditions under which the prescribed elevation is
/// recovered exactly at the boundary: zeta0(0) = f(0) and -dq0/dx(0) = fdot(0).
struct CompatibilityReport {
    double elevation_residual = 0.0;
    double flux_residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

/// `zeta0`/`q0` hold initial values on nodes 0..n (node 0 on the boundary).
inline CompatibilityReport check_compatibility(std::span<const double> zeta0, std::span<const double> q0,
                                               const BoundaryForcing& forcing, double dx) {
    if (zeta0.size() < 3 || q0.size() < 3) throw ShapeError("compatibility: need at least 3 nodes");
    CompatibilityReport r;
    r.elevation_residual = std::abs(zeta0[0] - forcing(0.0).f);
    const double dq = (-3.0 * q0[0] + 4.0 * q0[1] - q0[2]) / (2.0 * dx);
    r.flux_residual = std::abs(-dq - forcing.fdot(0.0));
    r.tolerance = 10.0 * dx * dx;
    r.pass = r.elevation_residual <= r.tolerance && r.flux_residual <= r.tolerance;
    return r;
}

}  // namespace bwave::bouss
