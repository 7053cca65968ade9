#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "bwave/core.hpp"

namespace bwave::swe {

struct SweParams {
    double g = 9.81;
    double H0 = 1.0;
    double courant = 0.9;  // dt sqrt(g H0) / dx

    void validate() const {
        if (!(g > 0.0)) throw ConfigError("swe: g must be positive");
        if (!(H0 > 0.0)) throw ConfigError("swe: H0 must be positive");
        if (!(courant > 0.0 && courant <= 1.0)) throw ConfigError("swe: courant must lie in (0, 1]");
    }
};

struct Flux {
    double mass = 0.0;
    double momentum = 0.0;
};

inline double depth(double zeta, const SweParams& p) {
    const double h = p.H0 + zeta;
    if (!(h > 0.0)) throw DepthError("swe: non-positive depth h=" + std::to_string(h));
    return h;
}

/// F(U) = (q, g(h^2 - H0^2)/2 + q^2/h).
inline Flux sw_flux(double zeta, double q, const SweParams& p) {
    const double h = depth(zeta, p);
    // h^2 - H0^2 written as zeta*(2 H0 + zeta) so the rest state is exactly zero.
    return {q, 0.5 * p.g * zeta * (2.0 * p.H0 + zeta) + q * q / h};
}

/// lambda_plus = u + sqrt(gh), lambda_minus = -u + sqrt(gh).
inline std::pair<double, double> eigenvalues(double zeta, double q, const SweParams& p) {
    const double h = depth(zeta, p);
    const double u = q / h;
    const double c = std::sqrt(p.g * h);
    return {u + c, -u + c};
}

/// R_plus/minus = 2(sqrt(gh) - sqrt(g H0)) +/- u.
inline std::pair<double, double> riemann_invariants(double zeta, double q, const SweParams& p) {
    const double h = depth(zeta, p);
    const double u = q / h;
    const double w = 2.0 * (std::sqrt(p.g * h) - std::sqrt(p.g * p.H0));
    return {w + u, w - u};
}

/// Value of the outgoing invariant R_minus at the boundary from the last step.
struct CharacteristicTraceState {
    double R_minus_trace = 0.0;
};

struct OutgoingUpdate {
    double R_minus = 0.0;
    double alpha = 0.0;
    double lambda = 0.0;
    bool clamped = false;
};

/// Upwind transport of R_minus into the boundary along its characteristic.
///
/// The foot of the characteristic sits at alpha*dx with lambda*dt = alpha*dx and
/// lambda = alpha*lambda_0 + (1-alpha)*lambda_1; the linear equation for alpha is
/// solved exactly and clamped to [0, 1].
inline OutgoingUpdate advance_outgoing_invariant(const CharacteristicTraceState& trace, double R_minus_at_node1,
                                                 double lambda_minus_0, double lambda_minus_1, double dt,
                                                 double dx) {
    if (!(dt > 0.0 && dx > 0.0)) throw ConfigError("characteristic update: dt and dx must be positive");
    const double denom = dx - dt * (lambda_minus_0 - lambda_minus_1);
    if (!(denom > 0.0))
        throw CflError("characteristic update: non-positive denominator " + std::to_string(denom) +
                       " in the foot-point solve");
    double alpha = dt * lambda_minus_1 / denom;
    OutgoingUpdate out;
    out.clamped = alpha < 0.0 || alpha > 1.0;
    alpha = std::clamp(alpha, 0.0, 1.0);
    out.alpha = alpha;
    out.lambda = alpha * lambda_minus_0 + (1.0 - alpha) * lambda_minus_1;
    const double nu = out.lambda * dt / dx;
    out.R_minus = (1.0 - nu) * trace.R_minus_trace + nu * R_minus_at_node1;
    return out;
}

/// q_0 = (H0 + f)(2(sqrt(g(H0+f)) - sqrt(g H0)) - R_minus).
inline double boundary_discharge(double f, double R_minus_0, const SweParams& p) {
    const double h = p.H0 + f;
    if (!(h > 0.0)) throw DepthError("swe: non-positive boundary depth H0+f=" + std::to_string(h));
    return h * (2.0 * (std::sqrt(p.g * h) - std::sqrt(p.g * p.H0)) - R_minus_0);
}

enum class RightBoundary { Extrapolate, Wall };

struct StepReport {
    double max_cfl = 0.0;        // max |lambda| dt/dx over nodes at the start of the step
    double left_mass_flux = 0.0;   // mass component of the face flux at x_left
    double right_mass_flux = 0.0;  // mass component of the face flux at x_right
    bool inflow_supercritical = false;  // alpha clamped in the characteristic update
};

/// Lax-Friedrichs solver for the dimensional shallow water equations on nodes
/// 1..n of `grid`, with elevation forcing at node 0 and the discharge there
/// recovered from the outgoing Riemann invariant.
class SweSolver {
public:
    SweSolver(Grid1D grid, SweParams params, BoundaryForcing forcing, WaveState initial,
              RightBoundary right = RightBoundary::Extrapolate)
        : grid_(std::move(grid)), params_(params), forcing_(std::move(forcing)), state_(std::move(initial)),
          right_(right) {
        params_.validate();
        check_shape(state_);
        if (state_.size() != grid_.n()) throw ShapeError("swe: state size does not match grid");
        // Initial boundary invariant from the first interior node.
        trace_.R_minus_trace = riemann_invariants(state_.zeta[0], state_.q[0], params_).second;
    }

    const WaveState& state() const noexcept { return state_; }
    const Grid1D& grid() const noexcept { return grid_; }
    const SweParams& params() const noexcept { return params_; }
    const CharacteristicTraceState& characteristic_trace() const noexcept { return trace_; }
    void set_characteristic_trace(CharacteristicTraceState t) noexcept { trace_ = t; }
    double nominal_dt() const noexcept { return params_.courant * grid_.dx() / std::sqrt(params_.g * params_.H0); }

    /// Ghost state (f^n, q_0^n) for the current time.
    std::pair<double, double> boundary_state() const {
        const double f = forcing_(state_.t).f;
        return {f, boundary_discharge(f, trace_.R_minus_trace, params_)};
    }

    StepReport step(double dt) {
        const std::size_t n = state_.size();
        const double dx = grid_.dx();
        const double visc = dx / (2.0 * dt);
        const auto& z = state_.zeta;
        const auto& q = state_.q;

        const auto [f, q0] = boundary_state();
        StepReport rep;

        std::vector<Flux> node_flux(n);
        for (std::size_t i = 0; i < n; ++i) {
            node_flux[i] = sw_flux(z[i], q[i], params_);
            const auto [lp, lm] = eigenvalues(z[i], q[i], params_);
            rep.max_cfl = std::max(rep.max_cfl, std::max(std::abs(lp), std::abs(lm)) * dt / dx);
        }
        const Flux ghost_left = sw_flux(f, q0, params_);
        double zr = z[n - 1], qr = q[n - 1];
        if (right_ == RightBoundary::Wall) qr = -qr;
        const Flux ghost_right = sw_flux(zr, qr, params_);

        // faces[i] is the flux through the face between unknowns i-1 and i (0-based),
        // faces[0] at the left edge and faces[n] at the right edge.
        std::vector<Flux> faces(n + 1);
        auto lf = [visc](const Flux& fl, const Flux& fr, double zl, double zrr, double ql, double qrr) {
            return Flux{0.5 * (fl.mass + fr.mass) - visc * (zrr - zl),
                        0.5 * (fl.momentum + fr.momentum) - visc * (qrr - ql)};
        };
        faces[0] = lf(ghost_left, node_flux[0], f, z[0], q0, q[0]);
        for (std::size_t i = 1; i < n; ++i) faces[i] = lf(node_flux[i - 1], node_flux[i], z[i - 1], z[i], q[i - 1], q[i]);
        faces[n] = lf(node_flux[n - 1], ghost_right, z[n - 1], zr, q[n - 1], qr);

        // Characteristic update for the next boundary invariant uses time-n data.
        const double lm0 = eigenvalues(f, q0, params_).second;
        const double lm1 = eigenvalues(z[0], q[0], params_).second;
        const double rm1 = riemann_invariants(z[0], q[0], params_).second;
        const auto upd = advance_outgoing_invariant(trace_, rm1, lm0, lm1, dt, dx);
        rep.inflow_supercritical = upd.clamped;

        const double r = dt / dx;
        WaveState next;
        next.zeta.resize(n);
        next.q.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            next.zeta[i] = z[i] - r * (faces[i + 1].mass - faces[i].mass);
            next.q[i] = q[i] - r * (faces[i + 1].momentum - faces[i].momentum);
        }
        next.t = state_.t + dt;
        rep.left_mass_flux = faces[0].mass;
        rep.right_mass_flux = faces[n].mass;

        for (std::size_t i = 0; i < n; ++i)
            if (!std::isfinite(next.zeta[i]) || !std::isfinite(next.q[i]))
                throw DivergenceError("swe: non-finite value at node " + std::to_string(i + 1) +
                                      ", t=" + std::to_string(next.t));
        trace_.R_minus_trace = upd.R_minus;
        next.q_trace = boundary_discharge(forcing_(next.t).f, trace_.R_minus_trace, params_);
        state_ = std::move(next);
        return rep;
    }

private:
    Grid1D grid_;
    SweParams params_;
    BoundaryForcing forcing_;
    WaveState state_;
    RightBoundary right_;
    CharacteristicTraceState trace_;
};

/// Single Lax-Friedrichs step; convenience wrapper over SweSolver for callers
/// holding the pieces separately. Updates `trace` in place.
inline WaveState lf_step_sw(const WaveState& state, const BoundaryForcing& forcing, CharacteristicTraceState& trace,
                            const Grid1D& grid, const SweParams& params, double dt) {
    SweSolver s(grid, params, forcing, state);
    s.set_characteristic_trace(trace);
    s.step(dt);
    trace = s.characteristic_trace();
    return s.state();
}

}  // namespace bwave::swe
