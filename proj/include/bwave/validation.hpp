#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "bwave/boussinesq.hpp"
#include "bwave/core.hpp"
#include "bwave/csv.hpp"
#include "bwave/soliton.hpp"

namespace bwave::validation {

enum class ScenarioKind { Gaussian, Soliton, Sinusoidal };

inline std::string to_string(ScenarioKind k) {
    switch (k) {
        case ScenarioKind::Gaussian: return "gaussian";
        case ScenarioKind::Soliton: return "soliton";
        case ScenarioKind::Sinusoidal: return "sinusoidal";
    }
    return "?";
}

inline ScenarioKind parse_kind(const std::string& s) {
    if (s == "gaussian") return ScenarioKind::Gaussian;
    if (s == "soliton") return ScenarioKind::Soliton;
    if (s == "sinusoidal") return ScenarioKind::Sinusoidal;
    throw ConfigError("unknown scenario '" + s + "' (expected gaussian, soliton or sinusoidal)");
}

struct Interval {
    double left = 0.0;
    double right = 0.0;
    friend bool operator==(const Interval&, const Interval&) = default;
};

/// A reference-versus-forced-rerun convergence study.
///
/// Coarse spacing is dx = coarse_dx_base / n for each n in coarse_nx; the small
/// domain must hold a whole number of such cells and every coarse node must be
/// a reference node.
struct Scenario {
    ScenarioKind kind = ScenarioKind::Gaussian;
    DimensionlessParams params{0.3, 0.3};
    Interval large_domain;
    Interval small_domain;
    double tf = 0.0;
    std::size_t reference_nx = 0;
    std::vector<std::size_t> coarse_nx;
    double coarse_dx_base = 0.0;
    double courant = 0.9;
    std::optional<Interval> error_window;
    bool final_time_only = false;  // compare at T_f only instead of sup over all steps

    // Soliton only.
    double zeta_max = 1.0;
    double crest_position = 0.0;

    friend bool operator==(const Scenario&, const Scenario&) = default;

    double reference_dx() const { return (large_domain.right - large_domain.left) / static_cast<double>(reference_nx); }
    double coarse_dx(std::size_t nx) const { return coarse_dx_base / static_cast<double>(nx); }

    void validate() const {
        if (!(tf > 0.0)) throw ConfigError("scenario: tf must be positive");
        if (!(courant > 0.0 && courant <= 1.0)) throw ConfigError("scenario: courant must lie in (0, 1]");
        if (reference_nx < 2) throw ConfigError("scenario: reference_nx must be at least 2");
        if (coarse_nx.empty()) throw ConfigError("scenario: coarse_nx is empty");
        if (!(small_domain.right > small_domain.left)) throw ConfigError("scenario: empty small domain");
        if (small_domain.left < large_domain.left || small_domain.right > large_domain.right)
            throw ConfigError("scenario: small domain must lie inside the large domain");
        const double fine = reference_dx();
        auto whole = [](double v) { return std::abs(v - std::round(v)) <= 1e-8 * std::max(1.0, std::abs(v)); };
        if (!whole((small_domain.left - large_domain.left) / fine))
            throw ConfigError("scenario: small-domain edge is not a reference node");
        for (std::size_t n : coarse_nx) {
            if (n == 0) throw ConfigError("scenario: coarse n_x must be positive");
            const double dx = coarse_dx(n);
            const double cells = (small_domain.right - small_domain.left) / dx;
            const double ratio = dx / fine;
            if (!whole(cells) || std::round(cells) < 2)
                throw ConfigError("scenario: small domain is not a whole number of cells for n_x=" + std::to_string(n));
            if (!whole(ratio) || std::round(ratio) < 1)
                throw ConfigError("scenario: coarse grid n_x=" + std::to_string(n) + " is not nested in the reference grid");
        }
    }
};

inline double gaussian_zeta0(double x, double L) {
    return std::exp(-6.0 * (x + 0.1 * L) * (x + 0.1 * L)) + std::exp(-6.0 * (x - 0.3 * L) * (x - 0.3 * L));
}
inline double gaussian_q0(double x, double L) {
    return std::exp(-6.0 * (x + 0.1 * L) * (x + 0.1 * L)) - std::exp(-6.0 * (x - 0.3 * L) * (x - 0.3 * L));
}

/// Two Gaussian bumps on [-5, 5]; periodic reference, comparison on [0, 5].
inline Scenario scenario_gaussian(DimensionlessParams params) {
    Scenario s;
    s.kind = ScenarioKind::Gaussian;
    s.params = params;
    s.large_domain = {-5.0, 5.0};
    s.small_domain = {0.0, 5.0};
    s.tf = 2.0;
    s.reference_nx = 3600;
    s.coarse_nx = {90, 120, 150, 180, 200, 300, 360};
    s.coarse_dx_base = 5.0;
    s.courant = 0.9;
    return s;
}

/// Solitary wave entering [0, 10] from a crest at x = -5; the reference is the
/// exact traveling wave, sampled on a grid that nests every coarse grid.
inline Scenario scenario_soliton(DimensionlessParams params) {
    Scenario s;
    s.kind = ScenarioKind::Soliton;
    s.params = params;
    s.large_domain = {-10.0, 10.0};
    s.small_domain = {0.0, 10.0};
    s.zeta_max = 1.0;
    s.crest_position = -5.0;
    const double c = soliton::soliton_speed(s.zeta_max, params.eps());
    s.tf = (s.small_domain.right - s.small_domain.left) / c;
    s.reference_nx = 4800;
    s.coarse_nx = {100, 200, 400, 800, 1200};
    s.coarse_dx_base = 10.0;
    s.courant = params.eps() > 0.2 ? 0.8 : 0.9;
    s.final_time_only = true;
    return s;
}

/// Sine wave-maker at x = -10; reference restricted to [-8, 10], errors on [-8, -6].
inline Scenario scenario_sinusoidal(DimensionlessParams params) {
    Scenario s;
    s.kind = ScenarioKind::Sinusoidal;
    s.params = params;
    s.large_domain = {-10.0, 10.0};
    s.small_domain = {-8.0, 10.0};
    s.tf = 15.0;
    s.reference_nx = 3600;
    s.coarse_nx = {100, 120, 150, 180, 200, 300, 360, 400, 600};
    s.coarse_dx_base = 20.0;
    s.courant = 0.9;
    s.error_window = Interval{-8.0, -6.0};
    s.final_time_only = true;
    return s;
}

inline Scenario make_scenario(ScenarioKind kind, DimensionlessParams params) {
    switch (kind) {
        case ScenarioKind::Gaussian: return scenario_gaussian(params);
        case ScenarioKind::Soliton: return scenario_soliton(params);
        case ScenarioKind::Sinusoidal: return scenario_sinusoidal(params);
    }
    throw ConfigError("unknown scenario kind");
}

/// Step sizes landing exactly on tf: n-1 nominal steps and a shortened last one.
inline std::vector<double> time_steps(double tf, double dt) {
    const double ratio = tf / dt;
    auto n = static_cast<std::size_t>(std::ceil(ratio - 1e-9));
    if (n == 0) n = 1;
    std::vector<double> steps(n, dt);
    steps.back() = tf - static_cast<double>(n - 1) * dt;
    if (steps.back() <= 1e-12 * dt) {
        steps.pop_back();
        steps.back() += tf - static_cast<double>(steps.size()) * dt;
    }
    return steps;
}

/// Reference fields on the small domain, sampled on the reference spacing
/// (node 0 at the small-domain left edge), plus the boundary forcing derived
/// from them.
struct ReferenceRecord {
    double dx = 0.0;
    double dt = 0.0;
    std::vector<double> x;                  // small-domain reference nodes, x[0] = left edge
    std::vector<double> times;              // snapshot times
    std::vector<std::size_t> steps;         // reference step index of each snapshot
    std::vector<std::vector<double>> zeta;  // zeta[k][j] at times[k], x[j]
    std::vector<std::vector<double>> q;
    Trace trace;                            // (zeta, q) at the left edge, every reference step
    BoundaryForcing forcing;
    double zeta_norm = 1.0;
    double q_norm = 1.0;
    std::vector<std::string> warnings;

    /// Snapshot index for a reference step, or none.
    std::optional<std::size_t> snapshot_for_step(std::size_t step) const {
        auto it = std::lower_bound(steps.begin(), steps.end(), step);
        if (it == steps.end() || *it != step) return std::nullopt;
        return static_cast<std::size_t>(it - steps.begin());
    }
};

namespace detail {

inline std::size_t node_offset(double x, double origin, double dx) {
    return static_cast<std::size_t>(std::llround((x - origin) / dx));
}

// Unknown index in a solver state holding the small-domain node j.
struct NodeMap {
    std::size_t first;  // state index of small-domain node 0
    std::size_t n;      // state size
    bool wrap;
    std::size_t operator()(std::size_t j) const { return wrap ? (first + j) % n : first + j; }
};

inline void record_snapshot(ReferenceRecord& rec, const WaveState& s, const NodeMap& map, std::size_t step) {
    std::vector<double> z(rec.x.size()), v(rec.x.size());
    for (std::size_t j = 0; j < rec.x.size(); ++j) {
        z[j] = s.zeta[map(j)];
        v[j] = s.q[map(j)];
    }
    rec.times.push_back(s.t);
    rec.steps.push_back(step);
    rec.zeta.push_back(std::move(z));
    rec.q.push_back(std::move(v));
}

inline double sup_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double a : v) m = std::max(m, std::abs(a));
    return m;
}

}  // namespace detail

/// Large-domain reference run (or exact traveling wave for the soliton case).
///
/// `all_steps` records a small-domain snapshot after every reference step;
/// otherwise only at t = 0 and t = tf.
inline ReferenceRecord run_reference(const Scenario& sc, bool all_steps) {
    sc.validate();
    ReferenceRecord rec;
    rec.dx = sc.reference_dx();
    rec.dt = sc.courant * rec.dx;
    const auto small_cells =
        static_cast<std::size_t>(std::llround((sc.small_domain.right - sc.small_domain.left) / rec.dx));
    for (std::size_t j = 0; j <= small_cells; ++j) rec.x.push_back(sc.small_domain.left + static_cast<double>(j) * rec.dx);
    const auto steps = time_steps(sc.tf, rec.dt);
    const double L = 0.5 * (sc.large_domain.right - sc.large_domain.left);
    const Grid1D large(sc.large_domain.left, sc.large_domain.right - sc.large_domain.left, sc.reference_nx);

    if (sc.kind == ScenarioKind::Soliton) {
        const auto profile = soliton::soliton_profile({sc.zeta_max, sc.params.eps(), sc.params.mu(), 1});
        const double c = profile.speed();
        auto snap = [&](double t, std::size_t step) {
            std::vector<double> z, v;
            for (double xj : rec.x) {
                z.push_back(profile.zeta(xj - sc.crest_position - c * t));
                v.push_back(profile.discharge(xj - sc.crest_position - c * t));
            }
            rec.times.push_back(t);
            rec.steps.push_back(step);
            rec.zeta.push_back(std::move(z));
            rec.q.push_back(std::move(v));
        };
        snap(0.0, 0);
        double t = 0.0;
        for (std::size_t k = 0; k < steps.size(); ++k) {
            const double xi = rec.x.front() - sc.crest_position - c * t;
            rec.trace.push(t, profile.zeta(xi), profile.discharge(xi));
            t += steps[k];
            if (all_steps || k + 1 == steps.size()) snap(k + 1 == steps.size() ? sc.tf : t, k + 1);
        }
        const Grid1D small(sc.small_domain.left, sc.small_domain.right - sc.small_domain.left, small_cells);
        rec.forcing = soliton::soliton_initial_data(profile, small, sc.crest_position).forcing;
        rec.zeta_norm = profile.zeta_max();
        rec.q_norm = std::abs(c) * profile.zeta_max();
        return rec;
    }

    std::optional<bouss::BoussinesqSolver> solver;
    detail::NodeMap map{};
    if (sc.kind == ScenarioKind::Gaussian) {
        WaveState init;
        for (std::size_t i = 0; i < large.n(); ++i) {
            init.zeta.push_back(gaussian_zeta0(large.x(i), L));
            init.q.push_back(gaussian_q0(large.x(i), L));
        }
        rec.zeta_norm = detail::sup_abs(init.zeta);
        rec.q_norm = detail::sup_abs(init.q);
        solver.emplace(bouss::BoussinesqSolver::periodic(large, sc.params, std::move(init)));
        map = {detail::node_offset(sc.small_domain.left, large.x_left(), rec.dx), large.n(), true};
    } else {
        const auto wave_maker = sine_forcing(1.0, 5.0);
        const std::vector<double> rest(large.n() + 1, 0.0);
        const auto compat = bouss::check_compatibility(rest, rest, wave_maker, rec.dx);
        if (!compat.pass)
            rec.warnings.push_back("reference run: incompatible initial/boundary data (elevation " +
                                   format_number(compat.elevation_residual) + ", flux " +
                                   format_number(compat.flux_residual) + ")");
        solver.emplace(bouss::BoussinesqSolver::generating(large, sc.params, wave_maker, WaveState::at_rest(large.n())));
        // Initial large-domain fields vanish; normalize by the forcing amplitude.
        rec.zeta_norm = 1.0;
        rec.q_norm = 1.0;
        map = {detail::node_offset(sc.small_domain.left, large.x_left(), rec.dx) - 1, large.n(), false};
    }

    auto push_trace = [&] {
        const auto& s = solver->state();
        rec.trace.push(s.t, s.zeta[map(0)], s.q[map(0)]);
    };
    detail::record_snapshot(rec, solver->state(), map, 0);
    double max_cfl = 0.0;
    for (std::size_t k = 0; k < steps.size(); ++k) {
        // The trace keeps only uniformly spaced samples; a shortened last step is not recorded.
        push_trace();
        const auto rep = solver->step(steps[k]);
        max_cfl = std::max(max_cfl, rep.max_cfl);
        if (all_steps || k + 1 == steps.size()) detail::record_snapshot(rec, solver->state(), map, k + 1);
    }
    if (steps.back() == rec.dt) push_trace();
    if (max_cfl > 1.0)
        rec.warnings.push_back("reference run: CFL number reached " + std::to_string(max_cfl));
    rec.forcing = forcing_from_trace(rec.trace, "reference trace");
    return rec;
}

struct ErrorReport {
    std::size_t nx = 0;
    double dx = 0.0;
    std::vector<double> times;
    std::vector<double> e_zeta_t;
    std::vector<double> e_q_t;
    double e_zeta = 0.0;
    double e_q = 0.0;
    double runtime_s = 0.0;
    std::vector<std::string> warnings;
    Snapshot final_state;  // coarse solution at T_f
};

/// Sup-norm difference over coincident nodes inside the window, divided by the
/// normalization.
inline std::pair<double, double> relative_errors(std::span<const double> x, std::span<const double> zeta,
                                                 std::span<const double> q, const ReferenceRecord& ref,
                                                 std::size_t snapshot, const std::optional<Interval>& window) {
    double ez = 0.0, eq = 0.0;
    const double tol = 1e-9 * ref.dx;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (window && (x[i] < window->left - tol || x[i] > window->right + tol)) continue;
        const double s = (x[i] - ref.x.front()) / ref.dx;
        const double j = std::round(s);
        if (std::abs(s - j) > 1e-6 || j < 0 || j >= static_cast<double>(ref.x.size()))
            throw ConfigError("error norms: node x=" + std::to_string(x[i]) + " is not a reference node");
        const auto jj = static_cast<std::size_t>(j);
        ez = std::max(ez, std::abs(zeta[i] - ref.zeta[snapshot][jj]));
        eq = std::max(eq, std::abs(q[i] - ref.q[snapshot][jj]));
    }
    return {ez / ref.zeta_norm, eq / ref.q_norm};
}

/// Forced rerun on the small domain at the given coarse resolution, compared
/// with the reference after every step that lands on a reference snapshot.
inline ErrorReport run_coarse(const Scenario& sc, const ReferenceRecord& ref, std::size_t nx) {
    const auto t0 = std::chrono::steady_clock::now();
    const double dx = sc.coarse_dx(nx);
    const auto cells = static_cast<std::size_t>(std::llround((sc.small_domain.right - sc.small_domain.left) / dx));
    const auto ratio = static_cast<std::size_t>(std::llround(dx / ref.dx));
    const Grid1D grid(sc.small_domain.left, sc.small_domain.right - sc.small_domain.left, cells);

    WaveState init;
    for (std::size_t i = 1; i <= cells; ++i) {
        init.zeta.push_back(ref.zeta[0][i * ratio]);
        init.q.push_back(ref.q[0][i * ratio]);
    }
    init.q_trace = ref.q[0][0];

    ErrorReport rep;
    rep.nx = nx;
    rep.dx = dx;
    {
        std::vector<double> z0(ref.zeta[0].begin(), ref.zeta[0].end());
        std::vector<double> q0(ref.q[0].begin(), ref.q[0].end());
        std::vector<double> zc, qc;
        for (std::size_t j = 0; j < z0.size(); j += ratio) {
            zc.push_back(z0[j]);
            qc.push_back(q0[j]);
        }
        const auto compat = bouss::check_compatibility(zc, qc, ref.forcing, dx);
        if (!compat.pass)
            rep.warnings.push_back("n_x=" + std::to_string(nx) + ": incompatible initial/boundary data (elevation " +
                                   format_number(compat.elevation_residual) + ", flux " +
                                   format_number(compat.flux_residual) + ")");
    }

    auto solver = bouss::BoussinesqSolver::generating(grid, sc.params, ref.forcing, std::move(init));
    const auto steps = time_steps(sc.tf, sc.courant * dx);
    const auto& x = solver.x();
    double max_cfl = 0.0;
    auto compare = [&](std::size_t ref_step) {
        const auto snap = ref.snapshot_for_step(ref_step);
        if (!snap) return;
        const auto& s = solver.state();
        const auto [ez, eq] = relative_errors(x, s.zeta, s.q, ref, *snap, sc.error_window);
        rep.times.push_back(s.t);
        rep.e_zeta_t.push_back(ez);
        rep.e_q_t.push_back(eq);
    };
    const std::size_t final_ref_step = ref.steps.back();
    for (std::size_t k = 0; k < steps.size(); ++k) {
        max_cfl = std::max(max_cfl, solver.step(steps[k]).max_cfl);
        const bool last = k + 1 == steps.size();
        if (last)
            compare(final_ref_step);
        else if (!sc.final_time_only)
            compare((k + 1) * ratio);
    }
    rep.final_state = Snapshot{solver.state().t, x, solver.state().zeta, solver.state().q};
    if (rep.times.empty()) throw ConfigError("error norms: no comparison time coincides with the reference");
    rep.e_zeta = *std::max_element(rep.e_zeta_t.begin(), rep.e_zeta_t.end());
    rep.e_q = *std::max_element(rep.e_q_t.begin(), rep.e_q_t.end());
    if (max_cfl > 1.0)
        rep.warnings.push_back("n_x=" + std::to_string(nx) + ": CFL number reached " + std::to_string(max_cfl));
    rep.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

/// Observed order between two resolutions; nullopt when either error is zero.
inline std::optional<double> convergence_order(double e_coarse, double dx_coarse, double e_other, double dx_other) {
    if (!(e_coarse > 0.0 && e_other > 0.0 && dx_coarse > 0.0 && dx_other > 0.0) || dx_coarse == dx_other)
        return std::nullopt;
    return std::log(e_coarse / e_other) / std::log(dx_coarse / dx_other);
}

struct TableRow {
    double dx = 0.0;
    double e_zeta = 0.0;
    std::optional<double> order_zeta;
    double e_q = 0.0;
    std::optional<double> order_q;
};

struct ConvergenceTable {
    std::vector<TableRow> rows;
};

/// Rows in the given order; orders are measured against the coarsest row.
inline ConvergenceTable build_table(const std::vector<ErrorReport>& reports) {
    ConvergenceTable t;
    if (reports.empty()) return t;
    const auto coarsest = std::max_element(reports.begin(), reports.end(),
                                           [](const ErrorReport& a, const ErrorReport& b) { return a.dx < b.dx; });
    for (const auto& r : reports) {
        TableRow row{r.dx, r.e_zeta, std::nullopt, r.e_q, std::nullopt};
        if (&r != &*coarsest) {
            row.order_zeta = convergence_order(coarsest->e_zeta, coarsest->dx, r.e_zeta, r.dx);
            row.order_q = convergence_order(coarsest->e_q, coarsest->dx, r.e_q, r.dx);
        }
        t.rows.push_back(row);
    }
    return t;
}

inline void write_table(const std::filesystem::path& path, const ConvergenceTable& t) {
    auto out = csv::open_for_write(path);
    out << "dx,e_zeta,order_zeta,e_q,order_q\n";
    auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string("nan"); };
    for (const auto& r : t.rows)
        out << format_number(r.dx) << ',' << format_number(r.e_zeta) << ',' << opt(r.order_zeta) << ','
            << format_number(r.e_q) << ',' << opt(r.order_q) << '\n';
    csv::finish(out, path);
}

/// Runs fn(i) for i in [0, n) on up to `workers` threads.
template <class Fn>
void parallel_for(std::size_t n, unsigned workers, Fn&& fn) {
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n)));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(n);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

struct StudyResult {
    Scenario scenario;
    ReferenceRecord reference;
    std::vector<ErrorReport> reports;
    ConvergenceTable table;
    double reference_runtime_s = 0.0;
    std::vector<std::string> warnings;
};

inline StudyResult run_study(const Scenario& sc, unsigned workers = 1) {
    StudyResult res;
    res.scenario = sc;
    const auto t0 = std::chrono::steady_clock::now();
    res.reference = run_reference(sc, !sc.final_time_only);
    res.reference_runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    res.reports.resize(sc.coarse_nx.size());
    parallel_for(sc.coarse_nx.size(), workers,
                 [&](std::size_t i) { res.reports[i] = run_coarse(sc, res.reference, sc.coarse_nx[i]); });
    res.table = build_table(res.reports);
    res.warnings = res.reference.warnings;
    for (const auto& r : res.reports) res.warnings.insert(res.warnings.end(), r.warnings.begin(), r.warnings.end());
    return res;
}

/// Max deviation from the initial soliton after it travels once around a
/// periodic domain of the given length.
inline double soliton_round_trip_error(const soliton::SolitonProfile& profile, const DimensionlessParams& params,
                                       double length, std::size_t nx, double courant) {
    const Grid1D grid(-0.5 * length, length, nx);
    WaveState init;
    for (std::size_t i = 0; i < nx; ++i) {
        init.zeta.push_back(profile.zeta(grid.x(i)));
        init.q.push_back(profile.discharge(grid.x(i)));
    }
    const WaveState start = init;
    auto solver = bouss::BoussinesqSolver::periodic(grid, params, std::move(init));
    for (double dt : time_steps(length / std::abs(profile.speed()), courant * grid.dx())) solver.step(dt);
    double err = 0.0;
    for (std::size_t i = 0; i < nx; ++i) err = std::max(err, std::abs(solver.state().zeta[i] - start.zeta[i]));
    return err;
}

}  // namespace bwave::validation
