#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "bwave/error.hpp"

namespace bwave {

/// Uniform 1D mesh x_i = x_left + i*dx, i = 0..n, with dx = length/n.
///
/// Node 0 sits on the left edge of the domain. Solvers with a boundary at
/// the left edge store unknowns on nodes 1..n; periodic solvers use 0..n-1.
class Grid1D {
public:
    Grid1D(double x_left, double length, std::size_t n) : x_left_(x_left), length_(length), n_(n) {
        if (!(length > 0.0) || !std::isfinite(length))
            throw ConfigError("grid: extent must be positive, got " + std::to_string(length));
        if (n < 2) throw ConfigError("grid: need at least 2 cells, got " + std::to_string(n));
        dx_ = length / static_cast<double>(n);
    }

    double x_left() const noexcept { return x_left_; }
    double x_right() const noexcept { return x_left_ + length_; }
    double length() const noexcept { return length_; }
    std::size_t n() const noexcept { return n_; }
    double dx() const noexcept { return dx_; }

    // Computed from the index rather than accumulated, so rounding does not drift.
    double x(std::size_t i) const noexcept { return x_left_ + static_cast<double>(i) * dx_; }

    /// Coordinates of nodes first..last inclusive.
    std::vector<double> nodes(std::size_t first, std::size_t last) const {
        std::vector<double> out;
        out.reserve(last >= first ? last - first + 1 : 0);
        for (std::size_t i = first; i <= last; ++i) out.push_back(x(i));
        return out;
    }

private:
    double x_left_;
    double length_;
    std::size_t n_;
    double dx_;
};

inline Grid1D build_grid(double x_left, double length, std::size_t n) { return Grid1D(x_left, length, n); }

/// Elevation and discharge on the unknown nodes, plus the discharge trace at
/// the generating boundary (unused by periodic runs).
struct WaveState {
    std::vector<double> zeta;
    std::vector<double> q;
    double q_trace = 0.0;
    double t = 0.0;

    std::size_t size() const noexcept { return zeta.size(); }

    static WaveState at_rest(std::size_t n) {
        WaveState s;
        s.zeta.assign(n, 0.0);
        s.q.assign(n, 0.0);
        return s;
    }
};

inline void check_shape(const WaveState& s) {
    if (s.zeta.size() != s.q.size())
        throw ShapeError("state: zeta has " + std::to_string(s.zeta.size()) + " entries but q has " +
                         std::to_string(s.q.size()));
}

struct PhysicalScales {
    double g = 9.81;
    double H0 = 1.0;
    double a = 1.0;
    double L_wave = 1.0;

    void validate() const {
        if (!(g > 0.0 && H0 > 0.0 && a > 0.0 && L_wave > 0.0))
            throw ConfigError("physical scales must all be strictly positive");
    }
    double eps() const noexcept { return a / H0; }
    double mu() const noexcept { return H0 * H0 / (L_wave * L_wave); }
    double celerity() const noexcept { return std::sqrt(g * H0); }
    double time_scale() const noexcept { return L_wave / celerity(); }
    double discharge_scale() const noexcept { return a * celerity(); }
};

/// Nonlinearity eps, shallowness mu, and the boundary-layer width sqrt(mu/3).
class DimensionlessParams {
public:
    DimensionlessParams(double eps, double mu) : eps_(eps), mu_(mu) {
        if (!(eps > 0.0) || !std::isfinite(eps)) throw ConfigError("eps must be positive");
        if (!(mu > 0.0) || !std::isfinite(mu)) throw ConfigError("mu must be positive");
        delta_ = std::sqrt(mu / 3.0);
    }
    static DimensionlessParams from(const PhysicalScales& s) {
        s.validate();
        return {s.eps(), s.mu()};
    }

    double eps() const noexcept { return eps_; }
    double mu() const noexcept { return mu_; }
    double delta() const noexcept { return delta_; }

    friend bool operator==(const DimensionlessParams&, const DimensionlessParams&) = default;

private:
    double eps_;
    double mu_;
    double delta_;
};

inline WaveState nondimensionalize(const WaveState& s, const PhysicalScales& scales) {
    scales.validate();
    check_shape(s);
    const double qs = scales.discharge_scale();
    WaveState out;
    out.zeta.reserve(s.size());
    out.q.reserve(s.size());
    for (double z : s.zeta) out.zeta.push_back(z / scales.a);
    for (double v : s.q) out.q.push_back(v / qs);
    out.q_trace = s.q_trace / qs;
    out.t = s.t / scales.time_scale();
    return out;
}

inline WaveState redimensionalize(const WaveState& s, const PhysicalScales& scales) {
    scales.validate();
    check_shape(s);
    const double qs = scales.discharge_scale();
    WaveState out;
    out.zeta.reserve(s.size());
    out.q.reserve(s.size());
    for (double z : s.zeta) out.zeta.push_back(z * scales.a);
    for (double v : s.q) out.q.push_back(v * qs);
    out.q_trace = s.q_trace * qs;
    out.t = s.t * scales.time_scale();
    return out;
}

struct ForcingSample {
    double f = 0.0;
    double fddot = 0.0;
};

/// Elevation prescribed at the generating boundary, with its second time
/// derivative.
///
/// Analytic forcing wraps closed-form callables. Sampled forcing holds a
/// uniformly spaced record; f is linearly interpolated and fddot comes from
/// the three-point centered stencil on the record (one-sided second-order
/// stencils at both ends), then linearly interpolated.
class BoundaryForcing {
public:
    using Fn = std::function<double(double)>;
    enum class Mode { Analytic, Sampled };

    BoundaryForcing() : BoundaryForcing(analytic([](double) { return 0.0; }, [](double) { return 0.0; })) {}

    static BoundaryForcing analytic(Fn f, Fn fddot, Fn fdot = {}) {
        BoundaryForcing b(Mode::Analytic);
        b.f_ = std::move(f);
        b.fddot_ = std::move(fddot);
        b.fdot_ = std::move(fdot);
        return b;
    }

    static BoundaryForcing zero() { return {}; }

    static BoundaryForcing sampled(double t0, double dt, std::vector<double> values) {
        if (!(dt > 0.0)) throw ConfigError("sampled forcing: time step must be positive");
        if (values.size() < 4) throw ConfigError("sampled forcing: need at least 4 samples");
        BoundaryForcing b(Mode::Sampled);
        b.t0_ = t0;
        b.dt_ = dt;
        b.samples_ = std::move(values);
        b.second_ = second_differences(b.samples_, dt);
        return b;
    }

    Mode mode() const noexcept { return mode_; }
    double t_begin() const noexcept { return t0_; }
    double t_end() const noexcept {
        return mode_ == Mode::Sampled ? t0_ + static_cast<double>(samples_.size() - 1) * dt_ : INFINITY;
    }
    double step() const noexcept { return dt_; }
    const std::vector<double>& samples() const noexcept { return samples_; }
    const std::vector<double>& second_derivative_samples() const noexcept { return second_; }

    ForcingSample operator()(double t) const {
        if (mode_ == Mode::Analytic) return {f_(t), fddot_(t)};
        const auto [i, w] = locate(t);
        return {(1.0 - w) * samples_[i] + w * samples_[i + 1], (1.0 - w) * second_[i] + w * second_[i + 1]};
    }

    /// First time derivative; exact when supplied, otherwise a second-order
    /// difference (centered where possible).
    double fdot(double t) const {
        if (mode_ == Mode::Analytic) {
            if (fdot_) return fdot_(t);
            const double h = 1e-5 * std::max(1.0, std::abs(t));
            return (f_(t + h) - f_(t - h)) / (2.0 * h);
        }
        const auto [i, w] = locate(t);
        const std::size_t k = (w < 0.5) ? i : i + 1;
        const std::size_t n = samples_.size();
        const auto& s = samples_;
        if (k == 0) return (-3.0 * s[0] + 4.0 * s[1] - s[2]) / (2.0 * dt_);
        if (k == n - 1) return (3.0 * s[n - 1] - 4.0 * s[n - 2] + s[n - 3]) / (2.0 * dt_);
        return (s[k + 1] - s[k - 1]) / (2.0 * dt_);
    }

private:
    explicit BoundaryForcing(Mode m) : mode_(m) {}

    std::pair<std::size_t, double> locate(double t) const {
        const double s = (t - t0_) / dt_;
        const double last = static_cast<double>(samples_.size() - 1);
        constexpr double slack = 1e-9;
        if (!(s >= -slack && s <= last + slack))
            throw RangeError("forcing: t=" + std::to_string(t) + " outside recorded range [" +
                             std::to_string(t0_) + ", " + std::to_string(t_end()) + "]");
        const double c = std::clamp(s, 0.0, last);
        auto i = static_cast<std::size_t>(std::floor(c));
        if (i >= samples_.size() - 1) i = samples_.size() - 2;
        return {i, c - static_cast<double>(i)};
    }

    static std::vector<double> second_differences(const std::vector<double>& f, double dt) {
        const std::size_t n = f.size();
        const double inv = 1.0 / (dt * dt);
        std::vector<double> d(n);
        for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) * inv;
        d[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) * inv;
        d[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) * inv;
        return d;
    }

    Mode mode_;
    Fn f_, fddot_, fdot_;
    double t0_ = 0.0;
    double dt_ = 0.0;
    std::vector<double> samples_;
    std::vector<double> second_;
};

inline ForcingSample sample_forcing(const BoundaryForcing& forcing, double t) { return forcing(t); }

/// Sinusoidal wave-maker elevation amplitude*sin(2*pi*t/period).
inline BoundaryForcing sine_forcing(double amplitude, double period) {
    const double w = 2.0 * M_PI / period;
    return BoundaryForcing::analytic([=](double t) { return amplitude * std::sin(w * t); },
                                     [=](double t) { return -amplitude * w * w * std::sin(w * t); },
                                     [=](double t) { return amplitude * w * std::cos(w * t); });
}

}  // namespace bwave
