#pragma once

// Command-line front end: config loading, run orchestration, CSV/JSON output.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "bwave/boussinesq.hpp"
#include "bwave/config.hpp"
#include "bwave/core.hpp"
#include "bwave/csv.hpp"
#include "bwave/soliton.hpp"
#include "bwave/swe.hpp"
#include "bwave/validation.hpp"

namespace bwave::cli {

enum class Command { RunSwe, RunBoussinesq, MakeSoliton, Validate };

inline std::string to_string(Command c) {
    switch (c) {
        case Command::RunSwe: return "run-swe";
        case Command::RunBoussinesq: return "run-boussinesq";
        case Command::MakeSoliton: return "make-soliton";
        case Command::Validate: return "validate";
    }
    return "?";
}

struct RunManifest {
    Command command = Command::Validate;
    std::optional<std::filesystem::path> config_path;
    std::filesystem::path output_dir = "out";
    std::vector<std::pair<std::string, std::string>> overrides;  // full keys, e.g. "model.eps"
};

inline std::vector<config::KeySpec> schema_for(Command c) {
    using config::defaulted_key;
    using config::optional_key;
    using config::required_key;
    switch (c) {
        case Command::Validate:
            return {required_key("scenario.kind"),      required_key("scenario.eps"),
                    required_key("scenario.mu"),        optional_key("scenario.tf"),
                    optional_key("scenario.reference_nx"), optional_key("scenario.coarse_nx"),
                    optional_key("scenario.courant"),   optional_key("scenario.zeta_max"),
                    defaulted_key("run.parallel", "1")};
        case Command::MakeSoliton:
            return {required_key("soliton.eps"),          required_key("soliton.mu"),
                    defaulted_key("soliton.zeta_max", "1"), defaulted_key("soliton.direction", "1"),
                    defaulted_key("soliton.half_width", "10"), defaulted_key("soliton.samples", "2001")};
        case Command::RunBoussinesq:
            return {required_key("model.eps"),
                    required_key("model.mu"),
                    defaulted_key("domain.x_left", "0"),
                    required_key("domain.length"),
                    required_key("domain.n_x"),
                    defaulted_key("domain.boundary", "generating"),
                    defaulted_key("domain.right", "extrapolate"),
                    required_key("time.tf"),
                    defaulted_key("time.courant", "0.9"),
                    defaulted_key("time.snapshot_stride", "0"),
                    defaulted_key("time.cfl_error", "false"),
                    defaulted_key("initial.kind", "rest"),
                    defaulted_key("initial.scale", "5"),
                    defaulted_key("initial.zeta_max", "1"),
                    defaulted_key("initial.x_center", "-5"),
                    defaulted_key("forcing.kind", "none"),
                    defaulted_key("forcing.amplitude", "1"),
                    defaulted_key("forcing.period", "5"),
                    optional_key("forcing.file")};
        case Command::RunSwe:
            return {defaulted_key("physics.g", "9.81"),
                    defaulted_key("physics.H0", "1"),
                    defaulted_key("domain.x_left", "0"),
                    required_key("domain.length"),
                    required_key("domain.n_x"),
                    defaulted_key("domain.right", "extrapolate"),
                    required_key("time.tf"),
                    defaulted_key("time.courant", "0.8"),
                    defaulted_key("time.snapshot_stride", "0"),
                    defaulted_key("time.cfl_error", "false"),
                    defaulted_key("forcing.kind", "none"),
                    defaulted_key("forcing.amplitude", "0.1"),
                    defaulted_key("forcing.period", "5"),
                    optional_key("forcing.file")};
    }
    return {};
}

/// Reads the config file (if any), applies overrides and checks the schema.
inline config::Config load_config(const RunManifest& m) {
    config::Config cfg = m.config_path ? config::load_file(*m.config_path) : config::Config{};
    config::apply_overrides(cfg, m.overrides, "command line");
    config::enforce_schema(cfg, schema_for(m.command), to_string(m.command));
    return cfg;
}

inline validation::Scenario scenario_from_config(const config::Config& cfg) {
    const auto kind = validation::parse_kind(cfg.get_choice("scenario.kind", {"gaussian", "soliton", "sinusoidal"}));
    auto sc = validation::make_scenario(kind, DimensionlessParams(cfg.get_double("scenario.eps"),
                                                                  cfg.get_double("scenario.mu")));
    if (cfg.contains("scenario.tf")) sc.tf = cfg.get_double("scenario.tf");
    if (cfg.contains("scenario.reference_nx")) sc.reference_nx = cfg.get_size("scenario.reference_nx");
    if (cfg.contains("scenario.coarse_nx")) sc.coarse_nx = cfg.get_size_list("scenario.coarse_nx");
    if (cfg.contains("scenario.courant")) sc.courant = cfg.get_double("scenario.courant");
    if (cfg.contains("scenario.zeta_max")) {
        if (kind != validation::ScenarioKind::Soliton)
            throw ConfigError("config: scenario.zeta_max applies to the soliton scenario only");
        sc.zeta_max = cfg.get_double("scenario.zeta_max");
        if (!cfg.contains("scenario.tf"))
            sc.tf = (sc.small_domain.right - sc.small_domain.left) / soliton::soliton_speed(sc.zeta_max, sc.params.eps());
    }
    sc.validate();
    return sc;
}

struct TimeControl {
    double tf = 0.0;
    double courant = 0.9;
    std::size_t snapshot_stride = 0;  // 0: initial and final snapshots only
    bool cfl_error = false;
};

inline TimeControl time_from_config(const config::Config& cfg) {
    TimeControl t{cfg.get_double("time.tf"), cfg.get_double("time.courant"), cfg.get_size("time.snapshot_stride"),
                  cfg.get_bool("time.cfl_error")};
    if (!(t.tf > 0.0)) throw ConfigError("config: time.tf must be positive");
    if (!(t.courant > 0.0 && t.courant <= 1.0)) throw ConfigError("config: time.courant must lie in (0, 1]");
    return t;
}

inline Grid1D grid_from_config(const config::Config& cfg) {
    return Grid1D(cfg.get_double("domain.x_left"), cfg.get_double("domain.length"), cfg.get_size("domain.n_x"));
}

struct BoussinesqRun {
    DimensionlessParams params{0.3, 0.3};
    Grid1D grid{0.0, 1.0, 2};
    bool periodic = false;
    bouss::RightClosure right = bouss::RightClosure::Extrapolate;
    TimeControl time;
    WaveState initial;
    BoundaryForcing forcing = BoundaryForcing::zero();
    double left_zeta = 0.0;  // initial elevation at x_left, for the compatibility check
};

inline BoundaryForcing forcing_from_config(const config::Config& cfg, const std::string& kind) {
    if (kind == "none") return BoundaryForcing::zero();
    if (kind == "sine") {
        const double period = cfg.get_double("forcing.period");
        if (!(period > 0.0)) throw ConfigError("config: forcing.period must be positive");
        return sine_forcing(cfg.get_double("forcing.amplitude"), period);
    }
    if (!cfg.contains("forcing.file")) throw ConfigError("config: forcing.kind = trace needs forcing.file");
    return read_trace(cfg.get_string("forcing.file"));
}

inline BoussinesqRun boussinesq_from_config(const config::Config& cfg) {
    BoussinesqRun run;
    run.params = DimensionlessParams(cfg.get_double("model.eps"), cfg.get_double("model.mu"));
    run.grid = grid_from_config(cfg);
    run.periodic = cfg.get_choice("domain.boundary", {"generating", "periodic"}) == "periodic";
    run.right = cfg.get_choice("domain.right", {"extrapolate", "wall"}) == "wall" ? bouss::RightClosure::Wall
                                                                                  : bouss::RightClosure::Extrapolate;
    run.time = time_from_config(cfg);
    const auto init = cfg.get_choice("initial.kind", {"rest", "gaussian", "soliton"});
    const auto fkind = cfg.get_choice("forcing.kind", {"none", "sine", "trace", "soliton"});
    if (run.periodic && fkind != "none") throw ConfigError("config: periodic runs take forcing.kind = none");
    if (fkind == "soliton" && init != "soliton")
        throw ConfigError("config: forcing.kind = soliton needs initial.kind = soliton");

    const std::size_t first = run.periodic ? 0 : 1;
    const std::size_t last = run.periodic ? run.grid.n() - 1 : run.grid.n();
    if (init == "rest") {
        run.initial = WaveState::at_rest(run.grid.n());
    } else if (init == "gaussian") {
        const double L = cfg.get_double("initial.scale");
        for (std::size_t i = first; i <= last; ++i) {
            run.initial.zeta.push_back(validation::gaussian_zeta0(run.grid.x(i), L));
            run.initial.q.push_back(validation::gaussian_q0(run.grid.x(i), L));
        }
    } else {
        const auto profile = soliton::soliton_profile(
            {cfg.get_double("initial.zeta_max"), run.params.eps(), run.params.mu(), 1});
        const double xc = cfg.get_double("initial.x_center");
        if (run.periodic) {
            for (std::size_t i = first; i <= last; ++i) {
                run.initial.zeta.push_back(profile.zeta(run.grid.x(i) - xc));
                run.initial.q.push_back(profile.discharge(run.grid.x(i) - xc));
            }
        } else {
            auto data = soliton::soliton_initial_data(profile, run.grid, xc);
            run.initial = std::move(data.state);
            if (fkind == "soliton") run.forcing = std::move(data.forcing);
        }
        run.left_zeta = profile.zeta(run.grid.x_left() - xc);
        run.initial.q_trace = profile.discharge(run.grid.x_left() - xc);
    }
    if (fkind != "soliton") run.forcing = forcing_from_config(cfg, fkind);
    if (init == "gaussian") {
        const double L = cfg.get_double("initial.scale");
        run.left_zeta = validation::gaussian_zeta0(run.grid.x_left(), L);
        run.initial.q_trace = validation::gaussian_q0(run.grid.x_left(), L);
    }
    return run;
}

struct SweRun {
    swe::SweParams params;
    Grid1D grid{0.0, 1.0, 2};
    swe::RightBoundary right = swe::RightBoundary::Extrapolate;
    TimeControl time;
    BoundaryForcing forcing = BoundaryForcing::zero();
};

inline SweRun swe_from_config(const config::Config& cfg) {
    SweRun run;
    run.params.g = cfg.get_double("physics.g");
    run.params.H0 = cfg.get_double("physics.H0");
    run.grid = grid_from_config(cfg);
    run.right = cfg.get_choice("domain.right", {"extrapolate", "wall"}) == "wall" ? swe::RightBoundary::Wall
                                                                                 : swe::RightBoundary::Extrapolate;
    run.time = time_from_config(cfg);
    run.params.courant = run.time.courant;
    run.params.validate();
    run.forcing = forcing_from_config(cfg, cfg.get_choice("forcing.kind", {"none", "sine", "trace"}));
    return run;
}

struct SolitonRun {
    soliton::SolitonSpec spec;
    double half_width = 10.0;
    std::size_t samples = 2001;
};

inline SolitonRun soliton_from_config(const config::Config& cfg) {
    SolitonRun run;
    const long dir = cfg.get_int("soliton.direction");
    if (dir != 1 && dir != -1) throw ConfigError("config: soliton.direction must be 1 or -1");
    run.spec = {cfg.get_double("soliton.zeta_max"), cfg.get_double("soliton.eps"), cfg.get_double("soliton.mu"),
                static_cast<int>(dir)};
    run.spec.validate();
    run.half_width = cfg.get_double("soliton.half_width");
    run.samples = cfg.get_size("soliton.samples");
    if (!(run.half_width > 0.0)) throw ConfigError("config: soliton.half_width must be positive");
    if (run.samples < 3 || run.samples % 2 == 0)
        throw ConfigError("config: soliton.samples must be odd and at least 3 so the crest is sampled");
    return run;
}

/// Warnings collected during a run; repeated messages are counted, not repeated.
class WarningLog {
public:
    explicit WarningLog(std::ostream& err) : err_(err) {}
    void add(const std::string& msg) {
        err_ << "warning: " << msg << '\n';
        messages_.push_back(msg);
    }
    const std::vector<std::string>& messages() const noexcept { return messages_; }

private:
    std::ostream& err_;
    std::vector<std::string> messages_;
};

/// Tracks the CFL monitor over a run and turns violations into warnings or errors.
struct CflMonitor {
    bool hard = false;
    double max_cfl = 0.0;
    std::size_t violations = 0;
    std::size_t first_violation = 0;

    void observe(double cfl, std::size_t step) {
        max_cfl = std::max(max_cfl, cfl);
        if (cfl <= 1.0) return;
        if (hard) throw CflError("CFL number " + std::to_string(cfl) + " exceeds 1 at step " + std::to_string(step));
        if (violations++ == 0) first_violation = step;
    }
    void report(WarningLog& log) const {
        if (violations)
            log.add("CFL number exceeded 1 in " + std::to_string(violations) + " steps (first at step " +
                    std::to_string(first_violation) + ", max " + format_number(max_cfl) + ")");
    }
};

inline std::string snapshot_name(std::size_t step) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "snapshot_%06zu.csv", step);
    return buf;
}

inline void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& j) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << j.dump(2) << '\n';
    if (!out) throw IoError("write failed: " + path.string());
}

inline nlohmann::ordered_json config_json(const config::Config& cfg) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [k, e] : cfg.entries()) j[k] = e.value;
    return j;
}

inline void run_boussinesq(const BoussinesqRun& run, const std::filesystem::path& out, WarningLog& log,
                           nlohmann::ordered_json& summary) {
    auto solver = run.periodic ? bouss::BoussinesqSolver::periodic(run.grid, run.params, run.initial)
                               : bouss::BoussinesqSolver::generating(run.grid, run.params, run.forcing, run.initial,
                                                                     run.right);
    if (!run.periodic) {
        std::vector<double> z0{run.left_zeta}, q0{run.initial.q_trace};
        z0.insert(z0.end(), run.initial.zeta.begin(), run.initial.zeta.end());
        q0.insert(q0.end(), run.initial.q.begin(), run.initial.q.end());
        const auto compat = bouss::check_compatibility(z0, q0, run.forcing, run.grid.dx());
        if (!compat.pass)
            log.add("incompatible initial/boundary data (elevation residual " +
                    format_number(compat.elevation_residual) + ", flux residual " +
                    format_number(compat.flux_residual) + ")");
    }
    const auto& x = solver.x();
    auto snapshot = [&](std::size_t step) {
        const auto& s = solver.state();
        write_snapshot(out / "snapshots" / snapshot_name(step), s.t, x, s.zeta, s.q);
    };
    Trace node1, boundary;
    auto record = [&] {
        const auto& s = solver.state();
        node1.push(s.t, s.zeta[0], s.q[0]);
        if (!run.periodic) boundary.push(s.t, run.forcing(s.t).f, s.q_trace);
    };
    const auto steps = validation::time_steps(run.time.tf, run.time.courant * run.grid.dx());
    CflMonitor cfl{run.time.cfl_error};
    snapshot(0);
    record();
    for (std::size_t k = 0; k < steps.size(); ++k) {
        const auto rep = solver.step(steps[k]);
        cfl.observe(rep.max_cfl, k + 1);
        record();
        const bool last = k + 1 == steps.size();
        if (last || (run.time.snapshot_stride && (k + 1) % run.time.snapshot_stride == 0)) snapshot(k + 1);
    }
    cfl.report(log);
    write_trace(out / "trace.csv", node1);
    if (!run.periodic) write_trace(out / "boundary.csv", boundary);
    summary["steps"] = steps.size();
    summary["dt"] = run.time.courant * run.grid.dx();
    summary["max_cfl"] = cfl.max_cfl;
}

inline void run_swe(const SweRun& run, const std::filesystem::path& out, WarningLog& log,
                    nlohmann::ordered_json& summary) {
    swe::SweSolver solver(run.grid, run.params, run.forcing, WaveState::at_rest(run.grid.n()), run.right);
    auto snapshot = [&](std::size_t step) {
        write_snapshot(out / "snapshots" / snapshot_name(step), solver.state(), run.grid);
    };
    Trace node1, boundary;
    auto record = [&] {
        const auto& s = solver.state();
        node1.push(s.t, s.zeta[0], s.q[0]);
        const auto [f, q0] = solver.boundary_state();
        boundary.push(s.t, f, q0);
    };
    const auto steps = validation::time_steps(run.time.tf, solver.nominal_dt());
    CflMonitor cfl{run.time.cfl_error};
    std::size_t supercritical = 0;
    snapshot(0);
    record();
    for (std::size_t k = 0; k < steps.size(); ++k) {
        const auto rep = solver.step(steps[k]);
        cfl.observe(rep.max_cfl, k + 1);
        if (rep.inflow_supercritical) ++supercritical;
        record();
        const bool last = k + 1 == steps.size();
        if (last || (run.time.snapshot_stride && (k + 1) % run.time.snapshot_stride == 0)) snapshot(k + 1);
    }
    cfl.report(log);
    if (supercritical)
        log.add("inflow boundary supercritical in " + std::to_string(supercritical) +
                " steps; characteristic foot clamped");
    write_trace(out / "trace.csv", node1);
    write_trace(out / "boundary.csv", boundary);
    summary["steps"] = steps.size();
    summary["dt"] = solver.nominal_dt();
    summary["max_cfl"] = cfl.max_cfl;
}

inline void run_make_soliton(const SolitonRun& run, const std::filesystem::path& out,
                             nlohmann::ordered_json& summary) {
    const auto profile = soliton::soliton_profile(run.spec);
    auto f = csv::open_for_write(out / "profile.csv");
    f << "xi,zeta,q\n";
    const std::size_t half = run.samples / 2;
    const double h = run.half_width / static_cast<double>(half);
    for (std::size_t i = 0; i < run.samples; ++i) {
        const double xi = (static_cast<double>(i) - static_cast<double>(half)) * h;
        f << format_number(xi) << ',' << format_number(profile.zeta(xi)) << ',' << format_number(profile.discharge(xi))
          << '\n';
    }
    csv::finish(f, out / "profile.csv");
    summary["speed"] = profile.speed();
    summary["radius"] = profile.radius();
}

inline void run_validate(const validation::Scenario& sc, unsigned workers, const std::filesystem::path& out,
                         WarningLog& log, nlohmann::ordered_json& summary) {
    const auto study = validation::run_study(sc, workers);
    // Single collector: all files are written here, after the workers finish.
    validation::write_table(out / "table.csv", study.table);
    write_trace(out / "reference_trace.csv", study.reference.trace);
    const auto& ref = study.reference;
    write_snapshot(out / "reference_final.csv", ref.times.back(), ref.x, ref.zeta.back(), ref.q.back());
    nlohmann::ordered_json runs = nlohmann::ordered_json::array();
    for (const auto& r : study.reports) {
        const std::string tag = "nx" + std::to_string(r.nx);
        write_snapshot(out / ("coarse_final_" + tag + ".csv"), r.final_state.t, r.final_state.x, r.final_state.zeta,
                       r.final_state.q);
        auto f = csv::open_for_write(out / ("errors_" + tag + ".csv"));
        f << "t,e_zeta,e_q\n";
        for (std::size_t k = 0; k < r.times.size(); ++k)
            f << format_number(r.times[k]) << ',' << format_number(r.e_zeta_t[k]) << ','
              << format_number(r.e_q_t[k]) << '\n';
        csv::finish(f, out / ("errors_" + tag + ".csv"));
        runs.push_back({{"nx", r.nx}, {"dx", r.dx}, {"e_zeta", r.e_zeta}, {"e_q", r.e_q}, {"runtime_s", r.runtime_s}});
    }
    for (const auto& w : study.warnings) log.add(w);

    nlohmann::ordered_json s;
    s["kind"] = validation::to_string(sc.kind);
    s["eps"] = sc.params.eps();
    s["mu"] = sc.params.mu();
    s["large_domain"] = {sc.large_domain.left, sc.large_domain.right};
    s["small_domain"] = {sc.small_domain.left, sc.small_domain.right};
    s["tf"] = sc.tf;
    s["reference_nx"] = sc.reference_nx;
    s["coarse_nx"] = sc.coarse_nx;
    s["courant"] = sc.courant;
    if (sc.error_window) s["error_window"] = {sc.error_window->left, sc.error_window->right};
    s["final_time_only"] = sc.final_time_only;
    if (sc.kind == validation::ScenarioKind::Soliton) s["zeta_max"] = sc.zeta_max;
    summary["scenario"] = s;
    summary["reference_runtime_s"] = study.reference_runtime_s;
    summary["runs"] = runs;
    for (const auto& r : study.table.rows)
        std::cout << format_number(r.dx) << "  e_zeta " << format_number(r.e_zeta) << "  e_q "
                  << format_number(r.e_q) << '\n';
}

inline int exit_code(ErrorKind k) {
    switch (k) {
        case ErrorKind::Configuration: return 2;
        case ErrorKind::Numeric: return 3;
        case ErrorKind::Io: return 4;
    }
    return 1;
}

/// Runs one manifest. Returns the process exit status; errors are reported on `err`.
inline int execute(const RunManifest& m, std::ostream& err = std::cerr) {
    const auto t0 = std::chrono::steady_clock::now();
    WarningLog log(err);
    nlohmann::ordered_json summary;
    summary["command"] = to_string(m.command);
    try {
        auto cfg = load_config(m);
        summary["config"] = config_json(cfg);
        std::error_code ec;
        std::filesystem::create_directories(m.output_dir, ec);
        if (ec || !std::filesystem::is_directory(m.output_dir))
            throw IoError("cannot create output directory " + m.output_dir.string());

        switch (m.command) {
            case Command::Validate: {
                const auto sc = scenario_from_config(cfg);
                const auto workers = cfg.get_size("run.parallel");
                if (workers == 0) throw ConfigError("config: run.parallel must be at least 1");
                run_validate(sc, static_cast<unsigned>(workers), m.output_dir, log, summary);
                break;
            }
            case Command::MakeSoliton: run_make_soliton(soliton_from_config(cfg), m.output_dir, summary); break;
            case Command::RunBoussinesq: run_boussinesq(boussinesq_from_config(cfg), m.output_dir, log, summary); break;
            case Command::RunSwe: run_swe(swe_from_config(cfg), m.output_dir, log, summary); break;
        }
        summary["status"] = "ok";
    } catch (const Error& e) {
        err << "error (" << to_string(m.command) << "): " << e.what() << '\n';
        summary["status"] = "error";
        summary["error"] = e.what();
        summary["exit_code"] = exit_code(e.kind());
        summary["warnings"] = log.messages();
        // Best effort: the summary may be unwritable for the same reason the run failed.
        if (std::filesystem::is_directory(m.output_dir)) {
            try {
                write_json(m.output_dir / "summary.json", summary);
            } catch (const Error&) {
            }
        }
        return exit_code(e.kind());
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error (" << to_string(m.command) << "): " << e.what() << '\n';
        return 4;
    }
    summary["warnings"] = log.messages();
    summary["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    try {
        write_json(m.output_dir / "summary.json", summary);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code(e.kind());
    }
    return 0;
}

/// Parses argv into a manifest and executes it.
inline int main_entry(int argc, char** argv, std::ostream& err = std::cerr) {
    CLI::App app{"1D wave solver with generating boundary conditions"};
    app.require_subcommand(1);
    RunManifest m;
    std::string config_path, scenario, nx;
    std::optional<double> eps, mu, courant, tf, zeta_max;
    std::optional<std::size_t> parallel;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "key=value config file");
        sub->add_option("--out", m.output_dir, "output directory")->capture_default_str();
    };
    auto* swe_cmd = app.add_subcommand("run-swe", "shallow water run with a generating left boundary");
    auto* bq_cmd = app.add_subcommand("run-boussinesq", "Boussinesq-Abbott run");
    auto* sol_cmd = app.add_subcommand("make-soliton", "solitary wave profile");
    auto* val_cmd = app.add_subcommand("validate", "convergence study against a fine reference");
    for (auto* sub : {swe_cmd, bq_cmd, sol_cmd, val_cmd}) common(sub);
    for (auto* sub : {bq_cmd, sol_cmd, val_cmd}) {
        sub->add_option("--eps", eps, "nonlinearity parameter");
        sub->add_option("--mu", mu, "shallowness parameter");
    }
    for (auto* sub : {swe_cmd, bq_cmd, val_cmd}) {
        sub->add_option("--nx", nx, "cell count (validate: comma-separated coarse list)");
        sub->add_option("--courant", courant, "dt/dx ratio");
        sub->add_option("--tf", tf, "final time");
    }
    for (auto* sub : {bq_cmd, sol_cmd}) sub->add_option("--zeta-max", zeta_max, "soliton crest elevation");
    val_cmd->add_option("--scenario", scenario, "gaussian | soliton | sinusoidal");
    val_cmd->add_option("--parallel", parallel, "worker threads for coarse runs");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e, std::cout, err);
        return 2;
    }

    auto num = [](double v) { return format_number(v); };
    auto add = [&](const std::string& key, const std::string& v) { m.overrides.emplace_back(key, v); };
    if (*val_cmd) {
        m.command = Command::Validate;
        if (!scenario.empty()) add("scenario.kind", scenario);
        if (eps) add("scenario.eps", num(*eps));
        if (mu) add("scenario.mu", num(*mu));
        if (!nx.empty()) add("scenario.coarse_nx", nx);
        if (courant) add("scenario.courant", num(*courant));
        if (tf) add("scenario.tf", num(*tf));
        if (parallel) add("run.parallel", std::to_string(*parallel));
    } else if (*sol_cmd) {
        m.command = Command::MakeSoliton;
        if (eps) add("soliton.eps", num(*eps));
        if (mu) add("soliton.mu", num(*mu));
        if (zeta_max) add("soliton.zeta_max", num(*zeta_max));
    } else {
        m.command = *bq_cmd ? Command::RunBoussinesq : Command::RunSwe;
        if (*bq_cmd) {
            if (eps) add("model.eps", num(*eps));
            if (mu) add("model.mu", num(*mu));
            if (zeta_max) add("initial.zeta_max", num(*zeta_max));
        }
        if (!nx.empty()) add("domain.n_x", nx);
        if (courant) add("time.courant", num(*courant));
        if (tf) add("time.tf", num(*tf));
    }
    if (!config_path.empty()) m.config_path = config_path;
    return execute(m, err);
}

}  // namespace bwave::cli
