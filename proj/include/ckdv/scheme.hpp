#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "ckdv/error.hpp"
#include "ckdv/model.hpp"

namespace ckdv {

using ModeArrays = std::vector<std::vector<double>>;

/// Value at index i (possibly outside [0, n)) under the boundary policy.
inline double stencil_value(std::span<const double> v, std::ptrdiff_t i, Boundary boundary) {
    const auto n = static_cast<std::ptrdiff_t>(v.size());
    if (i >= 0 && i < n) return v[static_cast<std::size_t>(i)];
    if (boundary == Boundary::ZeroPadded) return 0.0;
    const std::ptrdiff_t r = ((i % n) + n) % n;
    return v[static_cast<std::size_t>(r)];
}

/// (v_{i+1} - v_{i-1}) / 2h
inline double central_d1(std::span<const double> v, std::size_t i, double h,
                         Boundary boundary = Boundary::Periodic) {
    const auto j = static_cast<std::ptrdiff_t>(i);
    return (stencil_value(v, j + 1, boundary) - stencil_value(v, j - 1, boundary)) / (2.0 * h);
}

/// (v_{i+2} - 2 v_{i+1} + 2 v_{i-1} - v_{i-2}) / 2h^3
inline double central_d3(std::span<const double> v, std::size_t i, double h,
                         Boundary boundary = Boundary::Periodic) {
    const auto j = static_cast<std::ptrdiff_t>(i);
    const double num = stencil_value(v, j + 2, boundary) - 2.0 * stencil_value(v, j + 1, boundary) +
                       2.0 * stencil_value(v, j - 1, boundary) - stencil_value(v, j - 2, boundary);
    return num / (2.0 * h * h * h);
}

/**
 * Evaluates the spatial flux
 *
 *   F_n = c_n D1 theta_n + sum_{m,k} g_{mkn} theta_k D1 theta_m + e_n D3 theta_n
 *
 * on every node, reusing padded copies of the mode arrays so the inner loops
 * run over contiguous memory. One evaluator per simulation; not thread-safe.
 */
class FluxEvaluator {
public:
    FluxEvaluator(const CoupledSystem& sys, const SchemeCoefficients& coeffs, const Grid& grid)
        : c_(sys.c()), e_(coeffs.e), terms_(sys.couplings()), grid_(grid) {
        grid.validate();
        coeffs.check_fresh(grid.h);
        if (coeffs.e.size() != sys.n_modes())
            throw InvalidArgument("scheme coefficients do not match the system");
        const std::size_t N = sys.n_modes();
        padded_.assign(N, std::vector<double>(grid.n_points + 4, 0.0));
        slope_.assign(N, std::vector<double>(grid.n_points, 0.0));
    }

    std::size_t n_modes() const { return c_.size(); }
    const Grid& grid() const { return grid_; }

    /// Writes F(state) into out (resized as needed). Throws DivergedError on
    /// the first non-finite entry in (mode, index) order.
    void operator()(const WaveState& state, ModeArrays& out) {
        const std::size_t N = n_modes();
        const std::size_t n = grid_.n_points;
        state.check_shape(N, n);
        out.resize(N);
        const double inv2h = 1.0 / (2.0 * grid_.h);
        const double inv2h3 = 1.0 / (2.0 * grid_.h * grid_.h * grid_.h);

        for (std::size_t mode = 0; mode < N; ++mode) {
            pad(state.theta[mode], padded_[mode]);
            const double* p = padded_[mode].data() + 2;
            double* s = slope_[mode].data();
            for (std::size_t i = 0; i < n; ++i) s[i] = (p[i + 1] - p[i - 1]) * inv2h;
        }
        for (std::size_t mode = 0; mode < N; ++mode) {
            auto& f = out[mode];
            f.resize(n);
            const double* p = padded_[mode].data() + 2;
            const double* s = slope_[mode].data();
            const double c = c_[mode];
            const double e = e_[mode];
            for (std::size_t i = 0; i < n; ++i) {
                const double d3 = (p[i + 2] - 2.0 * p[i + 1] + 2.0 * p[i - 1] - p[i - 2]) * inv2h3;
                f[i] = c * s[i] + e * d3;
            }
        }
        for (const auto& term : terms_) {
            const double* plain = state.theta[term.k].data();
            const double* s = slope_[term.m].data();
            double* f = out[term.n].data();
            const double g = term.value;
            for (std::size_t i = 0; i < n; ++i) f[i] += g * plain[i] * s[i];
        }
        for (std::size_t mode = 0; mode < N; ++mode) {
            const auto& f = out[mode];
            for (std::size_t i = 0; i < n; ++i)
                if (!std::isfinite(f[i])) throw DivergedError(mode, i);
        }
    }

    /// target = base - dt * F(source), target.t = base.t + dt.
    void update(const WaveState& base, const WaveState& source, double dt, WaveState& target) {
        (*this)(source, flux_);
        const std::size_t N = n_modes();
        target.theta.resize(N);
        for (std::size_t mode = 0; mode < N; ++mode) {
            const auto& b = base.theta[mode];
            const auto& f = flux_[mode];
            auto& out = target.theta[mode];
            out.resize(b.size());
            for (std::size_t i = 0; i < b.size(); ++i) out[i] = b[i] - dt * f[i];
        }
        target.t = base.t + dt;
    }

private:
    void pad(const std::vector<double>& v, std::vector<double>& p) const {
        const std::size_t n = v.size();
        std::copy(v.begin(), v.end(), p.begin() + 2);
        if (grid_.boundary == Boundary::Periodic) {
            p[0] = v[n - 2];
            p[1] = v[n - 1];
            p[n + 2] = v[0];
            p[n + 3] = v[1];
        } else {
            p[0] = p[1] = p[n + 2] = p[n + 3] = 0.0;
        }
    }

    std::vector<double> c_;
    std::vector<double> e_;
    std::vector<Coupling> terms_;
    Grid grid_;
    ModeArrays padded_;
    ModeArrays slope_;
    ModeArrays flux_;
};

inline ModeArrays rhs(const CoupledSystem& sys, const SchemeCoefficients& coeffs, const WaveState& state,
                      const Grid& grid) {
    FluxEvaluator flux(sys, coeffs, grid);
    ModeArrays out;
    flux(state, out);
    return out;
}

/// theta^{j+1/2} = theta^j - (dt/2) F(theta^j); dt defaults to grid.tau.
inline WaveState half_step(const CoupledSystem& sys, const SchemeCoefficients& coeffs, const WaveState& state,
                           const Grid& grid, double dt = 0.0) {
    if (dt == 0.0) dt = grid.tau;
    FluxEvaluator flux(sys, coeffs, grid);
    WaveState out;
    flux.update(state, state, 0.5 * dt, out);
    return out;
}

namespace detail {

inline void check_half_level(const WaveState& base, const WaveState& half, double dt) {
    const double expected = base.t + 0.5 * dt;
    const double slack = 1e-9 * dt + 8.0 * 2.220446049250313e-16 * std::abs(expected);
    if (!(std::abs(half.t - expected) <= slack))
        throw SequencingError("half state is at t=" + std::to_string(half.t) + ", expected base.t + tau/2 = " +
                              std::to_string(expected));
}

}  // namespace detail

/// theta^{j+1} = theta^j - dt F(theta^{j+1/2}); dt defaults to grid.tau.
inline WaveState full_step(const CoupledSystem& sys, const SchemeCoefficients& coeffs, const WaveState& base,
                           const WaveState& half, const Grid& grid, double dt = 0.0) {
    if (dt == 0.0) dt = grid.tau;
    detail::check_half_level(base, half, dt);
    FluxEvaluator flux(sys, coeffs, grid);
    WaveState out;
    flux.update(base, half, dt, out);
    return out;
}

}  // namespace ckdv
