#pragma once

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bwave/core.hpp"

namespace bwave {

/// Full-precision scientific notation; 17 significant digits round-trip doubles.
inline std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

namespace csv {

inline std::ofstream open_for_write(const std::filesystem::path& path) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    return out;
}

inline void finish(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

/// Rows of a numeric CSV whose header must equal `expected_header`.
inline std::vector<std::vector<double>> read_numeric(const std::filesystem::path& path,
                                                     std::string_view expected_header) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    std::string line;
    if (!std::getline(in, line)) throw ParseError(path.string() + ":1: empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != expected_header)
        throw ParseError(path.string() + ":1: expected header '" + std::string(expected_header) + "', got '" +
                         line + "'");
    std::size_t columns = 1;
    for (char c : expected_header) columns += (c == ',');

    std::vector<std::vector<double>> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            const char* begin = cell.c_str();
            char* end = nullptr;
            errno = 0;
            const double v = std::strtod(begin, &end);
            while (end && (*end == ' ' || *end == '\t')) ++end;
            if (end == begin || *end != '\0' || (errno == ERANGE && std::abs(v) > 1.0))
                throw ParseError(path.string() + ":" + std::to_string(lineno) + ": malformed number '" + cell +
                                 "'");
            row.push_back(v);
        }
        if (row.size() != columns)
            throw ParseError(path.string() + ":" + std::to_string(lineno) + ": expected " +
                             std::to_string(columns) + " columns, got " + std::to_string(row.size()));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace csv

struct Snapshot {
    double t = 0.0;
    std::vector<double> x;
    std::vector<double> zeta;
    std::vector<double> q;
};

inline void write_snapshot(const std::filesystem::path& path, double t, std::span<const double> x,
                           std::span<const double> zeta, std::span<const double> q) {
    if (x.size() != zeta.size() || x.size() != q.size())
        throw ShapeError("snapshot: x, zeta, q must have equal lengths");
    auto out = csv::open_for_write(path);
    out << "t,x,zeta,q\n";
    const std::string ts = format_number(t);
    for (std::size_t i = 0; i < x.size(); ++i)
        out << ts << ',' << format_number(x[i]) << ',' << format_number(zeta[i]) << ',' << format_number(q[i])
            << '\n';
    csv::finish(out, path);
}

/// Writes a state whose unknowns live on grid nodes 1..n.
inline void write_snapshot(const std::filesystem::path& path, const WaveState& state, const Grid1D& grid) {
    check_shape(state);
    if (state.size() != grid.n()) throw ShapeError("snapshot: state size does not match grid");
    const auto x = grid.nodes(1, grid.n());
    write_snapshot(path, state.t, x, state.zeta, state.q);
}

inline Snapshot read_snapshot(const std::filesystem::path& path) {
    const auto rows = csv::read_numeric(path, "t,x,zeta,q");
    Snapshot s;
    for (const auto& r : rows) {
        s.t = r[0];
        s.x.push_back(r[1]);
        s.zeta.push_back(r[2]);
        s.q.push_back(r[3]);
    }
    return s;
}

/// Time series recorded at one location (t, zeta, q per step).
struct Trace {
    std::vector<double> t;
    std::vector<double> zeta;
    std::vector<double> q;

    void push(double time, double z, double v) {
        t.push_back(time);
        zeta.push_back(z);
        q.push_back(v);
    }
    std::size_t size() const noexcept { return t.size(); }
};

inline void write_trace(const std::filesystem::path& path, const Trace& trace) {
    auto out = csv::open_for_write(path);
    out << "t,zeta,q\n";
    for (std::size_t i = 0; i < trace.size(); ++i)
        out << format_number(trace.t[i]) << ',' << format_number(trace.zeta[i]) << ','
            << format_number(trace.q[i]) << '\n';
    csv::finish(out, path);
}

inline Trace read_trace_samples(const std::filesystem::path& path) {
    Trace tr;
    for (const auto& r : csv::read_numeric(path, "t,zeta,q")) tr.push(r[0], r[1], r[2]);
    return tr;
}

/// Elevation record of a uniformly stepped trace as sampled forcing.
inline BoundaryForcing forcing_from_trace(const Trace& tr, const std::string& origin = "trace") {
    if (tr.size() < 4) throw ParseError(origin + ": need at least 4 rows, got " + std::to_string(tr.size()));
    const double t0 = tr.t.front();
    const double dt = (tr.t.back() - t0) / static_cast<double>(tr.size() - 1);
    if (!(dt > 0.0)) throw ParseError(origin + ": time column must increase");
    for (std::size_t i = 0; i < tr.size(); ++i) {
        const double expect = t0 + static_cast<double>(i) * dt;
        if (std::abs(tr.t[i] - expect) > 1e-6 * dt)
            throw ParseError(origin + ":" + std::to_string(i + 2) + ": time step is not uniform");
    }
    return BoundaryForcing::sampled(t0, dt, tr.zeta);
}

inline BoundaryForcing read_trace(const std::filesystem::path& path) {
    return forcing_from_trace(read_trace_samples(path), path.string());
}

}  // namespace bwave
