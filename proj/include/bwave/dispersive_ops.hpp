#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "bwave/error.hpp"

namespace bwave {

/// Tridiagonal matrix with rows  lower[i]*v[i-1] + diag[i]*v[i] + upper[i]*v[i+1].
/// lower[0] and upper[n-1] are ignored unless the matrix is used cyclically.
struct Tridiagonal {
    std::vector<double> lower, diag, upper;

    std::size_t size() const noexcept { return diag.size(); }

    std::vector<double> multiply(std::span<const double> v) const {
        const std::size_t n = size();
        std::vector<double> out(n);
        for (std::size_t i = 0; i < n; ++i) {
            double s = diag[i] * v[i];
            if (i > 0) s += lower[i] * v[i - 1];
            if (i + 1 < n) s += upper[i] * v[i + 1];
            out[i] = s;
        }
        return out;
    }
};

/// Thomas elimination, factored once. No pivoting: callers only hand it
/// strictly diagonally dominant matrices.
class TridiagonalLU {
public:
    TridiagonalLU() = default;
    explicit TridiagonalLU(const Tridiagonal& m) : lower_(m.lower) {
        const std::size_t n = m.size();
        inv_pivot_.resize(n);
        upper_factor_.resize(n);
        double pivot = m.diag[0];
        for (std::size_t i = 0; i < n; ++i) {
            if (i > 0) pivot = m.diag[i] - lower_[i] * upper_factor_[i - 1];
            inv_pivot_[i] = 1.0 / pivot;
            upper_factor_[i] = (i + 1 < n) ? m.upper[i] * inv_pivot_[i] : 0.0;
        }
    }

    std::size_t size() const noexcept { return inv_pivot_.size(); }

    void solve(std::span<const double> rhs, std::span<double> out) const {
        const std::size_t n = size();
        out[0] = rhs[0] * inv_pivot_[0];
        for (std::size_t i = 1; i < n; ++i) out[i] = (rhs[i] - lower_[i] * out[i - 1]) * inv_pivot_[i];
        for (std::size_t i = n - 1; i-- > 0;) out[i] -= upper_factor_[i] * out[i + 1];
    }

private:
    std::vector<double> lower_;
    std::vector<double> inv_pivot_;
    std::vector<double> upper_factor_;
};

namespace detail {

inline void check_operator_args(std::size_t n, double mu, double dx, const char* who) {
    if (n < 2) throw ConfigError(std::string(who) + ": system size must be at least 2, got " + std::to_string(n));
    if (!(mu >= 0.0) || !std::isfinite(mu)) throw ConfigError(std::string(who) + ": mu must be non-negative");
    if (!(dx > 0.0) || !std::isfinite(dx)) throw ConfigError(std::string(who) + ": dx must be positive");
}

inline void check_length(std::size_t got, std::size_t want, const char* who) {
    if (got != want)
        throw ShapeError(std::string(who) + ": expected vector of length " + std::to_string(want) + ", got " +
                         std::to_string(got));
}

/// Shared machinery for the discrete inverses of (1 - (mu/3) d_xx) on a
/// bounded node set. Interior rows use the centered three-point Laplacian.
class BoundedInverse {
public:
    std::size_t size() const noexcept { return matrix_.size(); }
    double mu() const noexcept { return mu_; }
    double dx() const noexcept { return dx_; }
    const Tridiagonal& matrix() const noexcept { return matrix_; }

    void apply(std::span<const double> rhs, std::span<double> out) const {
        check_length(rhs.size(), size(), "inverse operator");
        check_length(out.size(), size(), "inverse operator output");
        lu_.solve(rhs, out);
    }

    std::vector<double> apply(std::span<const double> rhs) const {
        std::vector<double> out(size());
        apply(rhs, out);
        return out;
    }

    /// The operator itself, (1 - (mu/3) d_xx) with the same closures.
    std::vector<double> forward(std::span<const double> v) const {
        check_length(v.size(), size(), "forward operator");
        return matrix_.multiply(v);
    }

protected:
    BoundedInverse(std::size_t n, double mu, double dx, double first_diag_extra) : mu_(mu), dx_(dx) {
        const double k = mu / (3.0 * dx * dx);
        matrix_.lower.assign(n, -k);
        matrix_.upper.assign(n, -k);
        matrix_.diag.assign(n, 1.0 + 2.0 * k);
        matrix_.lower[0] = 0.0;
        matrix_.upper[n - 1] = 0.0;
        // First row: Neumann (ghost v0 = v1) or Dirichlet (ghost v0 = 0).
        matrix_.diag[0] = 1.0 + k + first_diag_extra * k;
        // Last row: homogeneous Neumann, ghost v_{n+1} = v_n.
        matrix_.diag[n - 1] = 1.0 + k;
        lu_ = TridiagonalLU(matrix_);
    }

private:
    double mu_;
    double dx_;
    Tridiagonal matrix_;
    TridiagonalLU lu_;
};

}  // namespace detail

/// Discrete inverse of (1 - (mu/3) d_xx) with homogeneous Neumann closure at
/// both ends, acting on nodes 1..n of a grid whose node 0 is the boundary.
///
/// First row:  v1 - (mu/3)(v2 - v1)/dx^2 = f1
/// Last row:   vn - (mu/3)(v_{n-1} - vn)/dx^2 = fn
class NeumannInverse : public detail::BoundedInverse {
public:
    NeumannInverse(std::size_t n, double mu, double dx)
        : BoundedInverse((detail::check_operator_args(n, mu, dx, "R1"), n), mu, dx, 0.0) {}

    /// Boundary trace: the first entry of apply(rhs).
    double apply_boundary(std::span<const double> rhs) const { return apply(rhs).front(); }
};

/// As NeumannInverse but with a homogeneous Dirichlet first row
/// (ghost v0 = 0):  v1 - (mu/3)(v2 - 2 v1)/dx^2 = f1.
class DirichletInverse : public detail::BoundedInverse {
public:
    DirichletInverse(std::size_t n, double mu, double dx)
        : BoundedInverse((detail::check_operator_args(n, mu, dx, "R0"), n), mu, dx, 1.0) {}
};

inline NeumannInverse build_r1(std::size_t n, double mu, double dx) { return {n, mu, dx}; }
inline DirichletInverse build_r0(std::size_t n, double mu, double dx) { return {n, mu, dx}; }

inline std::vector<double> apply_r1(const NeumannInverse& op, std::span<const double> f) { return op.apply(f); }
inline double apply_r1_boundary(const NeumannInverse& op, std::span<const double> f) {
    return op.apply_boundary(f);
}
inline std::vector<double> apply_r0(const DirichletInverse& op, std::span<const double> f) { return op.apply(f); }

/// Inverse of (1 - (mu/3) d_xx) on a periodic grid of n nodes.
///
/// The cyclic system is reduced to one tridiagonal solve plus a rank-one
/// correction (Sherman-Morrison), both factored at construction.
class PeriodicInverse {
public:
    PeriodicInverse(std::size_t n, double mu, double dx) : n_(n), mu_(mu), dx_(dx) {
        detail::check_operator_args(n, mu, dx, "periodic inverse");
        if (n < 3) throw ConfigError("periodic inverse: need at least 3 nodes");
        k_ = mu / (3.0 * dx * dx);
        const double b = 1.0 + 2.0 * k_;
        const double corner = -k_;
        gamma_ = -b;
        Tridiagonal t;
        t.lower.assign(n, -k_);
        t.upper.assign(n, -k_);
        t.diag.assign(n, b);
        t.diag[0] = b - gamma_;
        t.diag[n - 1] = b - corner * corner / gamma_;
        lu_ = TridiagonalLU(t);
        std::vector<double> u(n, 0.0);
        u[0] = gamma_;
        u[n - 1] = corner;
        z_.resize(n);
        lu_.solve(u, z_);
        denom_ = 1.0 + z_[0] + corner * z_[n - 1] / gamma_;
    }

    std::size_t size() const noexcept { return n_; }
    double mu() const noexcept { return mu_; }
    double dx() const noexcept { return dx_; }

    void apply(std::span<const double> rhs, std::span<double> out) const {
        detail::check_length(rhs.size(), n_, "periodic inverse");
        detail::check_length(out.size(), n_, "periodic inverse output");
        lu_.solve(rhs, out);
        const double factor = (out[0] + (-k_) * out[n_ - 1] / gamma_) / denom_;
        for (std::size_t i = 0; i < n_; ++i) out[i] -= factor * z_[i];
    }

    std::vector<double> apply(std::span<const double> rhs) const {
        std::vector<double> out(n_);
        apply(rhs, out);
        return out;
    }

    std::vector<double> forward(std::span<const double> v) const {
        detail::check_length(v.size(), n_, "periodic forward operator");
        std::vector<double> out(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            const double left = v[(i + n_ - 1) % n_];
            const double right = v[(i + 1) % n_];
            out[i] = v[i] - k_ * (left - 2.0 * v[i] + right);
        }
        return out;
    }

private:
    std::size_t n_;
    double mu_, dx_, k_;
    double gamma_;
    double denom_;
    TridiagonalLU lu_;
    std::vector<double> z_;
};

}  // namespace bwave
