#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "ckdv/diagnostics.hpp"
#include "ckdv/error.hpp"
#include "ckdv/model.hpp"

namespace ckdv {

enum class Verdict { Pass, Marginal, Fail };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Marginal: return "marginal";
        case Verdict::Fail: return "fail";
    }
    return "?";
}

// tau within this factor of the suggestion is Marginal rather than Fail.
inline constexpr double kMarginalBand = 2.0;
// Norm growth beyond this factor of the initial norm counts as divergence.
inline constexpr double kDivergenceRatio = 1e6;

struct StabilityReport {
    double tau_suggested = 0.0;
    double tau_requested = 0.0;
    double growth_exponent_a = 0.0;
    double growth_exponent_full = 0.0;
    double rule_single = 0.0;
    double rule_coupled = 0.0;
    double alpha = 1.0;
    bool dispersionless = false;
    Verdict verdict = Verdict::Pass;
};

namespace detail {

// Largest centered slope |theta_{i+1} - theta_{i-1}| / 2h and largest |theta|
// over the modes entering equation n through a nonzero coupling.
struct CouplingExtent {
    double slope = 0.0;
    double amplitude = 0.0;
    double g = 0.0;
};

inline CouplingExtent coupling_extent(const CoupledSystem& sys, const WaveState& state, const Grid& grid,
                                      std::size_t n) {
    const std::size_t N = sys.n_modes();
    std::vector<bool> involved(N, false);
    CouplingExtent out;
    for (std::size_t m = 0; m < N; ++m)
        for (std::size_t k = 0; k < N; ++k)
            if (sys.g(m, k, n) != 0.0) {
                involved[m] = involved[k] = true;
                out.g = std::max(out.g, std::abs(sys.g(m, k, n)));
            }
    const bool periodic = grid.boundary == Boundary::Periodic;
    for (std::size_t mode = 0; mode < N; ++mode) {
        if (!involved[mode]) continue;
        const auto& v = state.theta[mode];
        const std::size_t len = v.size();
        for (std::size_t i = 0; i < len; ++i) {
            const double right = i + 1 < len ? v[i + 1] : (periodic ? v[0] : 0.0);
            const double left = i > 0 ? v[i - 1] : (periodic ? v[len - 1] : 0.0);
            out.slope = std::max(out.slope, std::abs(right - left) / (2.0 * grid.h));
            out.amplitude = std::max(out.amplitude, std::abs(v[i]));
        }
    }
    return out;
}

}  // namespace detail

/**
 * Simplified growth exponent of the one-step operator norm,
 *   a_n = 2 G_n max|theta_x| + tau (3 |e_n| / h^3)^2,
 * maximised over modes. G_n = max_{m,k} |g_mkn| and the slope runs over the
 * modes coupled into equation n.
 */
inline double growth_exponent(const CoupledSystem& sys, const SchemeCoefficients& coeffs, const WaveState& state,
                              const Grid& grid, double tau) {
    state.check_shape(sys.n_modes(), grid.n_points);
    const double h3 = grid.h * grid.h * grid.h;
    double best = 0.0;
    for (std::size_t n = 0; n < sys.n_modes(); ++n) {
        const auto ext = detail::coupling_extent(sys, state, grid, n);
        const double disp = 3.0 * std::abs(coeffs.e[n]) / h3;
        best = std::max(best, 2.0 * ext.g * ext.slope + tau * disp * disp);
    }
    return best;
}

/// Unsimplified exponent, keeping the |g| max|theta| / h and |c| / h terms.
inline double growth_exponent_full(const CoupledSystem& sys, const SchemeCoefficients& coeffs,
                                   const WaveState& state, const Grid& grid, double tau) {
    state.check_shape(sys.n_modes(), grid.n_points);
    const double h = grid.h;
    double best = 0.0;
    for (std::size_t n = 0; n < sys.n_modes(); ++n) {
        const auto ext = detail::coupling_extent(sys, state, grid, n);
        const double slope_term = 2.0 * ext.g * ext.slope;
        const double bracket = slope_term + ext.g * ext.amplitude / h + std::abs(sys.c(n)) / h +
                               3.0 * std::abs(coeffs.e[n]) / (h * h * h);
        best = std::max(best, slope_term + tau * bracket * bracket);
    }
    return best;
}

/// tau (3 e_max / h^3)^2 t0
inline double single_rule_product(double e_max, double h, double tau, double t0) {
    const double r = 3.0 * e_max / (h * h * h);
    return tau * r * r * t0;
}

/// e_max 81 tau^3 / (4 h^12) t0
inline double coupled_rule_product(double e_max, double h, double tau, double t0) {
    const double h12 = std::pow(h, 12);
    return e_max * 81.0 * tau * tau * tau / (4.0 * h12) * t0;
}

struct TimestepInputs {
    double h = 0.1;
    double t0 = 1.0;
    double alpha = 1.0;
    // Only used by the dispersionless fallback.
    double amplitude = 0.0;
};

/**
 * Time step from the dispersive stability rules. The single-mode rule gives
 * tau = alpha h^6 / (9 e_max^2 t0); the coupled rule caps
 * e_max 81 tau^3 / (4 h^12) t0 <= alpha. The smaller cap wins.
 *
 * When every e_n vanishes both rules are vacuous and the step falls back to
 * the advection bound alpha h / max_n(|c_n| + G_n A), or alpha h when that
 * denominator is zero too.
 */
inline double suggest_timestep(const CoupledSystem& sys, const SchemeCoefficients& coeffs,
                               const TimestepInputs& in) {
    if (!(in.h > 0.0)) throw InvalidArgument("suggest_timestep needs h > 0");
    if (!(in.t0 > 0.0)) throw InvalidArgument("suggest_timestep needs t0 > 0");
    if (!(in.alpha > 0.0)) throw InvalidArgument("suggest_timestep needs alpha > 0");
    if (in.amplitude < 0.0) throw InvalidArgument("suggest_timestep needs a non-negative amplitude");
    const double e_max = coeffs.max_abs_e();
    if (e_max == 0.0) {
        double speed = 0.0;
        for (std::size_t n = 0; n < sys.n_modes(); ++n)
            speed = std::max(speed, std::abs(sys.c(n)) + sys.max_coupling(n) * in.amplitude);
        return speed > 0.0 ? in.alpha * in.h / speed : in.alpha * in.h;
    }
    const double h6 = std::pow(in.h, 6);
    const double single = in.alpha * h6 / (9.0 * e_max * e_max * in.t0);
    const double coupled = std::cbrt(4.0 * in.alpha * h6 * h6 / (81.0 * e_max * in.t0));
    return std::min(single, coupled);
}

/// Pass at or below the suggestion, Marginal within kMarginalBand of it, Fail beyond.
inline Verdict check_relation(double tau, double tau_suggested) {
    if (!(tau_suggested > 0.0)) throw InvalidArgument("check_relation needs a positive suggestion");
    const double slack = 1.0 + 1e-12;
    if (tau <= tau_suggested * slack) return Verdict::Pass;
    if (tau <= kMarginalBand * tau_suggested * slack) return Verdict::Marginal;
    return Verdict::Fail;
}

inline StabilityReport stability_report(const CoupledSystem& sys, const SchemeCoefficients& coeffs,
                                        const WaveState& initial, const Grid& grid, const TimestepInputs& in) {
    StabilityReport r;
    r.alpha = in.alpha;
    r.tau_requested = grid.tau;
    r.tau_suggested = suggest_timestep(sys, coeffs, in);
    r.dispersionless = coeffs.max_abs_e() == 0.0;
    r.growth_exponent_a = growth_exponent(sys, coeffs, initial, grid, grid.tau);
    r.growth_exponent_full = growth_exponent_full(sys, coeffs, initial, grid, grid.tau);
    const double e_max = coeffs.max_abs_e();
    r.rule_single = single_rule_product(e_max, grid.h, grid.tau, in.t0);
    r.rule_coupled = coupled_rule_product(e_max, grid.h, grid.tau, in.t0);
    r.verdict = check_relation(grid.tau, r.tau_suggested);
    return r;
}

enum class MonitorStatus { Ok, Diverged };

/// Diverged on any non-finite value or when ||U|| exceeds kDivergenceRatio times
/// the initial norm (an absolute bound of kDivergenceRatio for zero initial data).
/// A non-finite entry makes the norm itself non-finite, so one pass covers both.
inline MonitorStatus monitor(const WaveState& state, double h, double initial_norm) {
    const double norm = vector_norm(state, h);
    const double limit = initial_norm > 0.0 ? kDivergenceRatio * initial_norm : kDivergenceRatio;
    return std::isfinite(norm) && norm <= limit ? MonitorStatus::Ok : MonitorStatus::Diverged;
}

}  // namespace ckdv
