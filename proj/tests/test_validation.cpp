#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "bwave/validation.hpp"

using namespace bwave;
using namespace bwave::validation;

TEST(Order, Examples) {
    EXPECT_NEAR(*convergence_order(0.2, 0.1, 0.1, 0.05), 1.0, 1e-15);
    const double p1 = *convergence_order(2.26e-1, 5.0 / 90, 1.87e-1, 5.0 / 120);
    EXPECT_GE(p1, 0.655);
    EXPECT_LE(p1, 0.675);
    const double p4 = *convergence_order(4.86e-2, 10.0 / 100, 2.74e-2, 10.0 / 200);
    EXPECT_GE(p4, 0.82);
    EXPECT_LE(p4, 0.835);
    EXPECT_FALSE(convergence_order(0.0, 0.1, 0.1, 0.05));
    EXPECT_FALSE(convergence_order(0.1, 0.1, 0.0, 0.05));
}

TEST(Order, ScaleInvariant) {
    const double a = *convergence_order(0.3, 0.2, 0.17, 0.1);
    const double b = *convergence_order(0.3 * 7.5, 0.2, 0.17 * 7.5, 0.1);
    EXPECT_NEAR(a, b, 1e-14);
}

TEST(Table, SingleRowHasNoOrder) {
    ErrorReport r;
    r.dx = 0.1;
    r.e_zeta = 0.2;
    r.e_q = 0.3;
    const auto t = build_table({r});
    ASSERT_EQ(t.rows.size(), 1u);
    EXPECT_FALSE(t.rows[0].order_zeta);
    EXPECT_FALSE(t.rows[0].order_q);
}

TEST(Table, ExactFirstOrder) {
    std::vector<ErrorReport> reps;
    for (double dx : {0.1, 0.05, 0.025, 0.02}) {
        ErrorReport r;
        r.dx = dx;
        r.e_zeta = 3.0 * dx;
        r.e_q = 0.5 * dx;
        reps.push_back(r);
    }
    const auto t = build_table(reps);
    for (std::size_t i = 1; i < t.rows.size(); ++i) {
        EXPECT_NEAR(*t.rows[i].order_zeta, 1.0, 1e-12);
        EXPECT_NEAR(*t.rows[i].order_q, 1.0, 1e-12);
    }
    const auto path = std::filesystem::temp_directory_path() / "bwave_table.csv";
    write_table(path, t);
    std::ifstream in(path);
    std::string header, first;
    std::getline(in, header);
    std::getline(in, first);
    EXPECT_EQ(header, "dx,e_zeta,order_zeta,e_q,order_q");
    EXPECT_NE(first.find("nan"), std::string::npos);
}

TEST(Scenario, GaussianInitialData) {
    // Each crest value includes the other bump's tail exp(-6 * 2^2).
    EXPECT_NEAR(gaussian_zeta0(-0.5, 5.0), 1.0 + std::exp(-24.0), 1e-15);
    EXPECT_NEAR(gaussian_q0(1.5, 5.0), -1.0 + std::exp(-24.0), 1e-15);
    EXPECT_LT(gaussian_zeta0(5.0, 5.0), 1e-30);
}

TEST(Scenario, Defaults) {
    const auto g = scenario_gaussian({0.3, 0.3});
    EXPECT_EQ(g.large_domain, (Interval{-5, 5}));
    EXPECT_EQ(g.small_domain, (Interval{0, 5}));
    EXPECT_EQ(g.tf, 2.0);
    EXPECT_EQ(g.reference_nx, 3600u);
    EXPECT_EQ(g.coarse_nx, (std::vector<std::size_t>{90, 120, 150, 180, 200, 300, 360}));
    EXPECT_EQ(g.courant, 0.9);
    EXPECT_NO_THROW(g.validate());

    const auto s3 = scenario_soliton({0.3, 0.3});
    EXPECT_EQ(s3.courant, 0.8);
    EXPECT_EQ(s3.crest_position, -5.0);
    EXPECT_NEAR(s3.tf, 10.0 / 1.146838847007106, 1e-12);
    EXPECT_EQ(s3.coarse_nx, (std::vector<std::size_t>{100, 200, 400, 800, 1200}));
    EXPECT_EQ(scenario_soliton({0.1, 0.1}).courant, 0.9);
    EXPECT_NO_THROW(s3.validate());

    const auto w = scenario_sinusoidal({0.3, 0.3});
    EXPECT_EQ(w.tf, 15.0);
    EXPECT_EQ(w.small_domain, (Interval{-8, 10}));
    EXPECT_EQ(*w.error_window, (Interval{-8, -6}));
    EXPECT_EQ(w.coarse_dx(100), 0.2);
    EXPECT_NO_THROW(w.validate());
}

TEST(Scenario, BuildersArePure) {
    for (auto k : {ScenarioKind::Gaussian, ScenarioKind::Soliton, ScenarioKind::Sinusoidal})
        EXPECT_EQ(make_scenario(k, {0.1, 0.1}), make_scenario(k, {0.1, 0.1}));
    EXPECT_EQ(parse_kind("soliton"), ScenarioKind::Soliton);
    EXPECT_THROW(parse_kind("tsunami"), ConfigError);
}

TEST(Scenario, NonNestedGridRejected) {
    auto g = scenario_gaussian({0.3, 0.3});
    g.coarse_nx = {7};
    EXPECT_THROW(g.validate(), ConfigError);
    g.coarse_nx = {90};
    g.reference_nx = 1000;
    EXPECT_THROW(g.validate(), ConfigError);
}

TEST(Forcing, SinusoidalValues) {
    const auto f = sine_forcing(1.0, 5.0);
    EXPECT_EQ(f(0.0).f, 0.0);
    EXPECT_NEAR(f(1.25).f, 1.0, 1e-15);
    EXPECT_NEAR(f(2.5).f, 0.0, 1e-15);
    EXPECT_NEAR(f(0.7).fddot, -std::pow(2 * M_PI / 5, 2) * std::sin(2 * M_PI * 0.7 / 5), 1e-14);
}

TEST(TimeSteps, LandOnFinalTime) {
    for (double dt : {0.1, 0.03, 0.0125, 0.7}) {
        const auto s = time_steps(2.0, dt);
        double t = 0.0;
        for (double h : s) {
            EXPECT_GT(h, 0.0);
            EXPECT_LE(h, dt * (1 + 1e-9));
            t += h;
        }
        EXPECT_NEAR(t, 2.0, 1e-12);
    }
}

namespace {

ReferenceRecord toy_reference() {
    ReferenceRecord ref;
    ref.dx = 0.1;
    ref.x = {0.0, 0.1, 0.2, 0.3, 0.4};
    ref.zeta = {{0.0, 0.5, 1.0, 0.5, 0.0}};
    ref.q = {{0.0, -0.2, 0.4, 0.1, 0.0}};
    ref.zeta_norm = 1.0;
    ref.q_norm = 0.5;
    return ref;
}

}  // namespace

TEST(ErrorNorms, IdenticalAndOffset) {
    const auto ref = toy_reference();
    const std::vector<double> x{0.2, 0.4};
    auto [ez, eq] = relative_errors(x, std::vector<double>{1.0, 0.0}, std::vector<double>{0.4, 0.0}, ref, 0, {});
    EXPECT_EQ(ez, 0.0);
    EXPECT_EQ(eq, 0.0);
    std::tie(ez, eq) = relative_errors(x, std::vector<double>{1.01, 0.01}, std::vector<double>{0.4, 0.0}, ref, 0, {});
    EXPECT_NEAR(ez, 0.01, 1e-15);
    std::tie(ez, eq) = relative_errors(x, std::vector<double>{1.0, 0.0}, std::vector<double>{0.5, 0.0}, ref, 0, {});
    EXPECT_NEAR(eq, 0.2, 1e-15);
}

TEST(ErrorNorms, WindowAndNesting) {
    const auto ref = toy_reference();
    const std::vector<double> x{0.1, 0.3};
    const auto [ez, eq] = relative_errors(x, std::vector<double>{0.0, 0.5}, std::vector<double>{-0.2, 0.1}, ref, 0,
                                          Interval{0.25, 0.35});
    EXPECT_EQ(ez, 0.0);
    EXPECT_EQ(eq, 0.0);
    const std::vector<double> off{0.15};
    EXPECT_THROW(relative_errors(off, std::vector<double>{0.0}, std::vector<double>{0.0}, ref, 0, {}), ConfigError);
}

TEST(Reference, SolitonTraceIsAnalytic) {
    auto sc = scenario_soliton({0.3, 0.3});
    sc.coarse_nx = {100};
    const auto ref = run_reference(sc, false);
    const auto prof = soliton::soliton_profile({1.0, 0.3, 0.3, 1});
    const double c = prof.speed();
    for (std::size_t k = 0; k < ref.trace.size(); k += 97)
        EXPECT_EQ(ref.trace.zeta[k], prof.zeta(5.0 - c * ref.trace.t[k]));
    EXPECT_EQ(ref.times.back(), sc.tf);
    // Crest inside the small domain at the final time.
    const auto& zf = ref.zeta.back();
    const auto it = std::max_element(zf.begin(), zf.end());
    EXPECT_NEAR(ref.x[static_cast<std::size_t>(it - zf.begin())], 5.0, 2 * ref.dx);
}

TEST(Study, SmallGaussianConverges) {
    auto sc = scenario_gaussian({0.3, 0.3});
    sc.reference_nx = 720;
    sc.coarse_nx = {45, 90, 180};
    sc.tf = 0.5;
    const auto res = run_study(sc, 1);
    ASSERT_EQ(res.reports.size(), 3u);
    EXPECT_GT(res.reports[0].e_zeta, res.reports[1].e_zeta);
    EXPECT_GT(res.reports[1].e_zeta, res.reports[2].e_zeta);
    EXPECT_GT(res.reports[0].e_q, res.reports[2].e_q);
    for (const auto& r : res.reports) {
        EXPECT_GE(r.e_zeta, 0.0);
        EXPECT_EQ(r.e_zeta, *std::max_element(r.e_zeta_t.begin(), r.e_zeta_t.end()));
    }
    // Parallel execution gives bit-identical errors.
    const auto par = run_study(sc, 3);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_EQ(par.reports[i].e_zeta, res.reports[i].e_zeta);
        EXPECT_EQ(par.reports[i].e_q, res.reports[i].e_q);
    }
}

TEST(Study, ErrorsDecreaseAlongLadders) {
    for (auto kind : {ScenarioKind::Gaussian, ScenarioKind::Soliton}) {
        const auto res = run_study(make_scenario(kind, {0.3, 0.3}), 4);
        for (std::size_t i = 1; i < res.reports.size(); ++i) {
            EXPECT_LT(res.reports[i].e_zeta, res.reports[i - 1].e_zeta) << to_string(kind) << " row " << i;
            EXPECT_LT(res.reports[i].e_q, res.reports[i - 1].e_q) << to_string(kind) << " row " << i;
        }
    }
}

TEST(Study, SinusoidalCompatibilityWarning) {
    auto sc = scenario_sinusoidal({0.3, 0.3});
    sc.coarse_nx = {100};
    sc.tf = 1.0;
    const auto res = run_study(sc, 1);
    bool warned = false;
    for (const auto& w : res.warnings) warned |= w.find("incompatible") != std::string::npos;
    EXPECT_TRUE(warned);
}

TEST(RoundTrip, FirstOrder) {
    const auto prof = soliton::soliton_profile({1.0, 0.3, 0.3, 1});
    const double e1 = soliton_round_trip_error(prof, {0.3, 0.3}, 20.0, 400, 0.8);
    const double e2 = soliton_round_trip_error(prof, {0.3, 0.3}, 20.0, 800, 0.8);
    EXPECT_NEAR(std::log2(e1 / e2), 1.0, 0.15);
}
