#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "ckdv/error.hpp"
#include "ckdv/model.hpp"

namespace ckdv {

/// Parameters of the two-parameter Hirota-Satsuma one-soliton.
struct SolitonParams {
    double m = 1.0;
    double d = 0.0;
    bool allow_singular = false;

    void validate() const {
        if (!std::isfinite(m) || !std::isfinite(d)) throw InvalidArgument("non-finite soliton parameter");
        if (std::abs(d) >= 1.0 && !allow_singular)
            throw InvalidArgument("soliton parameter |d| >= 1 has poles; set allow_singular to use it");
    }

    friend bool operator==(const SolitonParams&, const SolitonParams&) = default;
};

struct SolitonValue {
    double theta1;
    double theta2;
};

inline constexpr double kSingularityFloor = 1e-12;

/**
 * Exact one-soliton of the integrable Hirota-Satsuma system.
 *
 *   l1 = m^3 t / 2 + m x,  l2 = m^3 t / 2 - m x,  D = d cos(l1) + cosh(l2)
 *   theta1 = -2 m^2 (d^2 - 1 + 2 d sin(l1) sinh(l2)) / D^2
 *   theta2 = sqrt(2 + 2 d^2) m^2 / D
 *
 * theta2 carries the factor sqrt(2 + 2 d^2); with the reciprocal factor the
 * pair does not satisfy the first equation (see test_analytic).
 */
inline SolitonValue hs_one_soliton(double x, double t, const SolitonParams& p,
                                   double floor = kSingularityFloor) {
    const double m = p.m;
    const double d = p.d;
    const double l1 = 0.5 * m * m * m * t + m * x;
    const double l2 = 0.5 * m * m * m * t - m * x;
    const double denom = d * std::cos(l1) + std::cosh(l2);
    if (!(std::abs(denom) >= floor)) throw SingularityError(x, t, d);
    const double m2 = m * m;
    const double theta1 = -2.0 * m2 * (d * d - 1.0 + 2.0 * d * std::sin(l1) * std::sinh(l2)) / (denom * denom);
    const double theta2 = std::sqrt(2.0 + 2.0 * d * d) * m2 / denom;
    return {theta1, theta2};
}

/// Mode-1 value at the origin, 2 m^2 (1 - d) / (1 + d).
inline double hs_origin_amplitude(const SolitonParams& p) {
    return 2.0 * p.m * p.m * (1.0 - p.d) / (1.0 + p.d);
}

/// m giving origin amplitude A at shape parameter d.
inline double hs_m_for_amplitude(double amplitude, double d) {
    if (!(amplitude > 0.0)) throw InvalidArgument("amplitude must be positive");
    return std::sqrt(amplitude * (1.0 + d) / (2.0 * (1.0 - d)));
}

enum class IcKind { HsSoliton, HsSolitonScaled, Box, Triangle, Custom };

inline const char* to_string(IcKind k) {
    switch (k) {
        case IcKind::HsSoliton: return "hs-soliton";
        case IcKind::HsSolitonScaled: return "hs-soliton-scaled";
        case IcKind::Box: return "box";
        case IcKind::Triangle: return "triangle";
        case IcKind::Custom: return "custom";
    }
    return "?";
}

// Full width at half maximum of 2 sech^2(x), the m = 1, d = 0 soliton.
inline const double kUnitSolitonFwhm = 2.0 * std::acosh(std::sqrt(2.0));

struct InitialCondition {
    IcKind kind = IcKind::HsSoliton;

    // HsSoliton, HsSolitonScaled
    SolitonParams soliton{};
    double width_scale = 10.0;
    double amplitude_scale = 2.0;

    // Box, Triangle: full support width; mode-2 copy scaled to mode2_height.
    double center = 0.0;
    double width = kUnitSolitonFwhm;
    double height = 2.0;
    double mode2_height = 0.0;

    // Custom: one row per mode, each of grid length.
    std::vector<std::vector<double>> samples;

    friend bool operator==(const InitialCondition&, const InitialCondition&) = default;
};

namespace detail {

inline double pulse_shape(IcKind kind, double x, double center, double width) {
    const double half = 0.5 * width;
    const double r = std::abs(x - center);
    if (kind == IcKind::Box) return r <= half ? 1.0 : 0.0;
    return r < half ? 1.0 - r / half : 0.0;
}

}  // namespace detail

/// Samples the initial condition at t = 0 on the first min(n_modes, 2) modes.
inline WaveState sample_ic(const InitialCondition& ic, const Grid& grid, std::size_t n_modes) {
    if (n_modes == 0) throw InvalidArgument("initial condition needs at least one mode");
    if (grid.n_points < 5 || !(grid.h > 0.0)) throw InvalidGrid("invalid grid for initial condition");
    WaveState state(n_modes, grid.n_points, 0.0);
    const std::size_t used = std::min<std::size_t>(n_modes, 2);

    switch (ic.kind) {
        case IcKind::HsSoliton:
        case IcKind::HsSolitonScaled: {
            ic.soliton.validate();
            const bool scaled = ic.kind == IcKind::HsSolitonScaled;
            if (scaled && !(ic.width_scale > 0.0)) throw ConfigError("width scale must be positive");
            const double w = scaled ? ic.width_scale : 1.0;
            const double a = scaled ? ic.amplitude_scale : 1.0;
            for (std::size_t i = 0; i < grid.n_points; ++i) {
                const auto v = hs_one_soliton(grid.x(i) / w, 0.0, ic.soliton);
                state.theta[0][i] = a * v.theta1;
                if (used > 1) state.theta[1][i] = a * v.theta2;
            }
            break;
        }
        case IcKind::Box:
        case IcKind::Triangle: {
            if (!(ic.width > 0.0)) throw ConfigError("pulse width must be positive");
            const double lo = ic.center - 0.5 * ic.width;
            const double hi = ic.center + 0.5 * ic.width;
            const double x_last = grid.x(grid.n_points - 1);
            if (lo < grid.x0 || hi > x_last)
                throw ConfigError("pulse support [" + std::to_string(lo) + ", " + std::to_string(hi) +
                                  "] exceeds the domain");
            for (std::size_t i = 0; i < grid.n_points; ++i) {
                const double s = detail::pulse_shape(ic.kind, grid.x(i), ic.center, ic.width);
                state.theta[0][i] = ic.height * s;
                if (used > 1) state.theta[1][i] = ic.mode2_height * s;
            }
            break;
        }
        case IcKind::Custom: {
            if (ic.samples.size() > n_modes) throw ConfigError("custom samples have more modes than the system");
            for (std::size_t n = 0; n < ic.samples.size(); ++n) {
                if (ic.samples[n].size() != grid.n_points)
                    throw ConfigError("custom samples length does not match the grid");
                state.theta[n] = ic.samples[n];
            }
            break;
        }
    }
    if (!state.finite()) throw ConfigError("initial condition is not finite on the grid");
    return state;
}

/// Rectangle-rule sum_i (1 + |x_i|) |theta_{n,i}| h per mode.
inline std::vector<double> decay_integral(const WaveState& state, const Grid& grid) {
    std::vector<double> out(state.n_modes(), 0.0);
    for (std::size_t n = 0; n < state.n_modes(); ++n) {
        double acc = 0.0;
        for (std::size_t i = 0; i < state.theta[n].size(); ++i)
            acc += (1.0 + std::abs(grid.x(i))) * std::abs(state.theta[n][i]);
        out[n] = acc * grid.h;
    }
    return out;
}

}  // namespace ckdv
