#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "bwave/boussinesq.hpp"
#include "bwave/soliton.hpp"
#include "oracles.hpp"

using namespace bwave;
using namespace bwave::bouss;

namespace {

const DimensionlessParams p03{0.3, 0.3};

double total(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

BoundaryForcing constant_forcing(double f, double fddot) {
    return BoundaryForcing::analytic([f](double) { return f; }, [fddot](double) { return fddot; });
}

}  // namespace

TEST(BoussFlux, Examples) {
    EXPECT_EQ(sw_flux_dimensionless(0.0, 0.0, p03), 0.0);
    EXPECT_NEAR(sw_flux_dimensionless(1.0, 0.0, p03), (1.69 - 1.0) / 0.6, 1e-15);
    EXPECT_NEAR(sw_flux_dimensionless(1.0, 0.0, p03), 1.15, 1e-15);
    EXPECT_NEAR(sw_flux_dimensionless(0.0, 1.0, p03), 0.3, 1e-15);
    EXPECT_THROW(sw_flux_dimensionless(-4.0, 0.0, p03), DepthError);
}

TEST(NonlocalFlux, RestAndConstant) {
    const NeumannInverse r1(6, 0.3, 0.5);
    auto nl = nonlocal_flux(r1, p03, std::vector<double>(6, 0.0), std::vector<double>(6, 0.0));
    for (double v : nl.fmu) EXPECT_EQ(v, 0.0);
    EXPECT_EQ(nl.fmu0, 0.0);
    nl = nonlocal_flux(r1, p03, std::vector<double>(6, 1.0), std::vector<double>(6, 0.0));
    for (double v : nl.fmu) EXPECT_NEAR(v, 1.15, 1e-13);
    EXPECT_NEAR(nl.fmu0, 1.15, 1e-13);
}

TEST(NonlocalFlux, DenseOracle) {
    const std::vector<double> z{0.1, -0.05, 0.2, 0.0, 0.07}, q{0.0, 0.3, -0.1, 0.05, 0.2};
    const double dx = 0.4;
    const NeumannInverse r1(5, p03.mu(), dx);
    const auto nl = nonlocal_flux(r1, p03, z, q);
    std::vector<double> f;
    for (std::size_t i = 0; i < 5; ++i) {
        const double h = 1.0 + 0.3 * z[i];
        f.push_back((h * h - 1.0) / 0.6 + 0.3 * q[i] * q[i] / h);
    }
    const auto want = oracle::dense_solve(oracle::helmholtz_matrix(5, p03.mu(), dx, false), f);
    EXPECT_LE(oracle::max_abs_diff(nl.fmu, want), 1e-13);
    EXPECT_NEAR(nl.fmu0, want[0], 1e-13);
}

TEST(SourceAmplitude, Examples) {
    EXPECT_EQ(source_amplitude(0, 0, 0, 0, p03), 0.0);
    EXPECT_NEAR(source_amplitude(0, 0, 2.5, 0, p03), p03.delta() * 2.5, 1e-15);
    EXPECT_NEAR(source_amplitude(1, 0, 0, 0, p03), 0.3 / std::sqrt(0.1), 1e-14);
    EXPECT_NEAR(source_amplitude(1, 0, 0, 0, p03), 0.94868, 1e-5);
    EXPECT_THROW(source_amplitude(0, -4.0, 0, 0, p03), DepthError);
}

TEST(AdvanceTrace, Examples) {
    EXPECT_EQ(advance_trace(0.0, 0.0, 0.3), 0.0);
    EXPECT_EQ(advance_trace(1.0, 0.0, 0.1), 1.0);
    EXPECT_NEAR(advance_trace(0.5, 2.0, 0.01), 0.52, 1e-15);
}

TEST(SourceProfile, HalfLife) {
    const double delta = p03.delta();
    std::vector<double> x;
    for (int i = 0; i < 50; ++i) x.push_back(0.013 * i);
    const SourceProfile s(x, 0.0, delta);
    for (std::size_t i = 1; i < x.size(); ++i) {
        EXPECT_GT(s.decay[i], 0.0);
        EXPECT_LT(s.decay[i], s.decay[i - 1]);
    }
    const std::vector<double> pair{0.7, 0.7 + delta * std::log(2.0)};
    const SourceProfile h(pair, 0.0, delta);
    EXPECT_NEAR(h.decay[1] / h.decay[0], 0.5, 1e-13);
}

// One full generating step on a 4-node state, recomputed with dense solves.
TEST(BoussStep, HandBuiltFourNodes) {
    const Grid1D grid(0.0, 4.0, 4);
    const double dt = 0.9, dx = 1.0;
    WaveState s;
    s.zeta = {0.2, 0.1, -0.05, 0.0};
    s.q = {0.1, 0.05, 0.0, -0.02};
    s.q_trace = 0.15;
    const double f = 0.25, fdd = -0.4;
    auto solver = BoussinesqSolver::generating(grid, p03, constant_forcing(f, fdd), s);
    solver.step(dt);

    const double eps = 0.3, delta = std::sqrt(0.1), visc = dx / (2 * dt);
    std::vector<double> nodal;
    for (int i = 0; i < 4; ++i) {
        const double h = 1 + eps * s.zeta[i];
        nodal.push_back((h * h - 1) / (2 * eps) + eps * s.q[i] * s.q[i] / h);
    }
    const auto fmu = oracle::dense_solve(oracle::helmholtz_matrix(4, 0.3, dx, false), nodal);
    const double fmu0 = fmu[0];
    const double Q = eps / delta * s.q_trace * s.q_trace / (1 + eps * f) + delta * fdd + (1 + eps * f / 2) * f / delta -
                     fmu0 / delta;
    // Ghost at node 0: (f, q_trace) with boundary momentum flux fmu0; right ghost copies node 4.
    const std::vector<double> zz{f, s.zeta[0], s.zeta[1], s.zeta[2], s.zeta[3], s.zeta[3]};
    const std::vector<double> qq{s.q_trace, s.q[0], s.q[1], s.q[2], s.q[3], s.q[3]};
    const std::vector<double> ff{fmu0, fmu[0], fmu[1], fmu[2], fmu[3], fmu[3]};
    for (int i = 1; i <= 4; ++i) {
        const double mr = 0.5 * (qq[i] + qq[i + 1]) - visc * (zz[i + 1] - zz[i]);
        const double ml = 0.5 * (qq[i - 1] + qq[i]) - visc * (zz[i] - zz[i - 1]);
        const double pr = 0.5 * (ff[i] + ff[i + 1]) - visc * (qq[i + 1] - qq[i]);
        const double pl = 0.5 * (ff[i - 1] + ff[i]) - visc * (qq[i] - qq[i - 1]);
        const double x = grid.x(i);
        EXPECT_NEAR(solver.state().zeta[i - 1], zz[i] - dt / dx * (mr - ml), 1e-14) << "node " << i;
        EXPECT_NEAR(solver.state().q[i - 1], qq[i] - dt / dx * (pr - pl) + dt * Q * std::exp(-x / delta), 1e-14)
            << "node " << i;
    }
    EXPECT_NEAR(solver.state().q_trace, s.q_trace + dt * Q, 1e-14);
    EXPECT_DOUBLE_EQ(solver.state().t, dt);
}

TEST(BoussStep, RestStateIsFixedPoint) {
    const Grid1D grid(0.0, 10.0, 100);
    auto solver = BoussinesqSolver::generating(grid, p03, BoundaryForcing::zero(), WaveState::at_rest(100));
    for (int k = 0; k < 10000; ++k) solver.step(0.09);
    for (std::size_t i = 0; i < 100; ++i) {
        ASSERT_EQ(solver.state().zeta[i], 0.0);
        ASSERT_EQ(solver.state().q[i], 0.0);
    }
    EXPECT_EQ(solver.state().q_trace, 0.0);
}

TEST(BoussStep, MassBalanceAndTraceConsistency) {
    const Grid1D grid(0.0, 10.0, 100);
    auto solver = BoussinesqSolver::generating(grid, p03, sine_forcing(0.5, 5.0), WaveState::at_rest(100));
    const double dt = 0.09;
    for (int k = 0; k < 200; ++k) {
        const double before = grid.dx() * total(solver.state().zeta);
        const double qb = solver.state().q_trace;
        const auto rep = solver.step(dt);
        const double after = grid.dx() * total(solver.state().zeta);
        ASSERT_NEAR(after - before, -dt * (rep.right_mass_flux - rep.left_mass_flux), 1e-12);
        ASSERT_NEAR(solver.state().q_trace - qb - dt * rep.source_amplitude, 0.0, 1e-15);
    }
}

TEST(BoussStep, PeriodicConservesMass) {
    const Grid1D grid(-5.0, 10.0, 200);
    WaveState s;
    for (std::size_t i = 0; i < 200; ++i) {
        const double x = grid.x(i);
        s.zeta.push_back(std::exp(-4 * x * x));
        s.q.push_back(0.5 * std::exp(-4 * x * x));
    }
    auto solver = BoussinesqSolver::periodic(grid, p03, s);
    const double m0 = total(s.zeta);
    for (int k = 0; k < 500; ++k) solver.step(0.9 * grid.dx());
    EXPECT_NEAR(total(solver.state().zeta), m0, 1e-11);
}

TEST(BoussStep, WallBlocksMass) {
    const Grid1D grid(0.0, 4.0, 80);
    WaveState s = WaveState::at_rest(80);
    for (std::size_t i = 0; i < 80; ++i) s.zeta[i] = 0.2 * std::exp(-4 * std::pow(grid.x(i + 1) - 3.0, 2));
    auto solver = BoussinesqSolver::generating(grid, p03, BoundaryForcing::zero(), s, RightClosure::Wall);
    for (int k = 0; k < 100; ++k) {
        const auto rep = solver.step(0.045);
        ASSERT_EQ(rep.right_mass_flux, 0.0);
    }
}

TEST(BoussOps, SmallMuApproachesIdentity) {
    const std::size_t n = 200;
    const double dx = 0.05;
    const NeumannInverse r1(n, 1e-8, dx);
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i) f[i] = 1.5 + std::cos(0.3 * (i + 1) * dx);
    const auto v = r1.apply(f);
    for (std::size_t i = 0; i < n; ++i) EXPECT_LE(std::abs(v[i] - f[i]) / std::abs(f[i]), 1e-6);
}

TEST(BoussStep, BlowUpReportsDivergence) {
    const Grid1D grid(0.0, 10.0, 50);
    WaveState s = WaveState::at_rest(50);
    for (std::size_t i = 0; i < 50; ++i) s.zeta[i] = 0.1 * std::sin(1.0 * i);
    auto solver = BoussinesqSolver::periodic(grid, p03, s);
    bool thrown = false;
    try {
        for (int k = 0; k < 5000; ++k) solver.step(5.0 * grid.dx());
    } catch (const Error& e) {
        thrown = true;
        EXPECT_EQ(e.kind(), ErrorKind::Numeric);
    }
    EXPECT_TRUE(thrown);
}

TEST(Compatibility, ZeroData) {
    const std::vector<double> z(10, 0.0), q(10, 0.0);
    auto r = check_compatibility(z, q, BoundaryForcing::zero(), 0.1);
    EXPECT_TRUE(r.pass);
    EXPECT_EQ(r.elevation_residual, 0.0);
    EXPECT_EQ(r.flux_residual, 0.0);
    r = check_compatibility(z, q, sine_forcing(1.0, 5.0), 0.1);
    EXPECT_FALSE(r.pass);
    EXPECT_NEAR(r.flux_residual, 2 * M_PI / 5, 1e-12);
}

TEST(Compatibility, SolitonDataPasses) {
    const auto prof = soliton::soliton_profile({1.0, 0.3, 0.3, 1});
    const Grid1D grid(0.0, 10.0, 400);
    const auto data = soliton::soliton_initial_data(prof, grid, -3.0);
    std::vector<double> z{prof.zeta(3.0)}, q{prof.discharge(3.0)};
    z.insert(z.end(), data.state.zeta.begin(), data.state.zeta.end());
    q.insert(q.end(), data.state.q.begin(), data.state.q.end());
    const auto r = check_compatibility(z, q, data.forcing, grid.dx());
    EXPECT_TRUE(r.pass) << r.elevation_residual << " " << r.flux_residual << " tol " << r.tolerance;
}

TEST(BoussSolver, ShapeAndDepthChecks) {
    const Grid1D grid(0.0, 1.0, 10);
    EXPECT_THROW(BoussinesqSolver::generating(grid, p03, BoundaryForcing::zero(), WaveState::at_rest(9)), ShapeError);
    WaveState s = WaveState::at_rest(10);
    s.zeta[3] = -10.0;
    EXPECT_THROW(BoussinesqSolver::generating(grid, p03, BoundaryForcing::zero(), s), DepthError);
}
