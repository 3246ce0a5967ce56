#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <vector>

#include "ckdv/error.hpp"
#include "ckdv/model.hpp"

namespace ckdv {

/// Per-mode discrete L2 norms (sum_i theta_{n,i}^2 h)^(1/2).
inline std::vector<double> l2_norm(const WaveState& state, double h) {
    std::vector<double> out(state.n_modes(), 0.0);
    for (std::size_t n = 0; n < state.n_modes(); ++n) {
        double acc = 0.0;
        for (double v : state.theta[n]) acc += v * v;
        out[n] = std::sqrt(acc * h);
    }
    return out;
}

/// ||U|| = (sum_l sum_i theta_{l,i}^2 h)^(1/2) over all modes.
inline double vector_norm(const WaveState& state, double h) {
    double acc = 0.0;
    for (const auto& row : state.theta)
        for (double v : row) acc += v * v;
    return std::sqrt(acc * h);
}

/// 100 * max_i |exact - numeric| / amplitude, per mode.
inline std::vector<double> percent_error(const WaveState& numeric, const WaveState& exact, double amplitude) {
    if (!(amplitude > 0.0)) throw InvalidArgument("percent error needs a positive initial amplitude");
    if (numeric.n_modes() != exact.n_modes() || numeric.n_points() != exact.n_points())
        throw InvalidArgument("percent error needs states on the same grid");
    std::vector<double> out(numeric.n_modes(), 0.0);
    for (std::size_t n = 0; n < numeric.n_modes(); ++n) {
        double worst = 0.0;
        for (std::size_t i = 0; i < numeric.theta[n].size(); ++i)
            worst = std::max(worst, std::abs(exact.theta[n][i] - numeric.theta[n][i]));
        out[n] = 100.0 * worst / amplitude;
    }
    return out;
}

/// sum_i (0.5 theta1^2 - theta2^2) h, constant in time for the HS system.
inline double hs_conserved(const WaveState& state, double h) {
    if (state.n_modes() != 2) throw InvalidArgument("HS conserved quantity needs exactly two modes");
    double acc = 0.0;
    const auto& a = state.theta[0];
    const auto& b = state.theta[1];
    for (std::size_t i = 0; i < a.size(); ++i) acc += 0.5 * a[i] * a[i] - b[i] * b[i];
    return acc * h;
}

struct PeakOptions {
    double min_height_fraction = 0.1;
    std::size_t min_separation = 5;
    bool periodic = true;
};

/**
 * Local maxima of one mode taller than min_height_fraction * global max.
 * Candidates are accepted tallest first and must keep min_separation grid
 * points from every accepted peak. Returned indices are ascending.
 */
inline std::vector<std::size_t> find_peaks(std::span<const double> v, const PeakOptions& opt = {}) {
    const std::size_t n = v.size();
    std::vector<std::size_t> accepted;
    if (n < 3) return accepted;
    const double top = *std::max_element(v.begin(), v.end());
    if (!(top > 0.0)) return accepted;
    const double threshold = opt.min_height_fraction * top;

    auto at = [&](std::ptrdiff_t i) -> double {
        const auto len = static_cast<std::ptrdiff_t>(n);
        if (i < 0 || i >= len) {
            if (!opt.periodic) return -INFINITY;
            i = ((i % len) + len) % len;
        }
        return v[static_cast<std::size_t>(i)];
    };

    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < n; ++i) {
        const auto j = static_cast<std::ptrdiff_t>(i);
        // Plateaus count once, at their left edge.
        if (v[i] >= threshold && v[i] > at(j - 1) && v[i] >= at(j + 1)) {
            std::ptrdiff_t r = j + 1;
            while (r < j + static_cast<std::ptrdiff_t>(n) && at(r) == v[i]) ++r;
            if (at(r) < v[i]) candidates.push_back(i);
        }
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });

    auto distance = [&](std::size_t a, std::size_t b) {
        const std::size_t d = a > b ? a - b : b - a;
        return opt.periodic ? std::min(d, n - d) : d;
    };
    for (std::size_t c : candidates) {
        bool ok = true;
        for (std::size_t a : accepted)
            if (distance(a, c) < opt.min_separation) {
                ok = false;
                break;
            }
        if (ok) accepted.push_back(c);
    }
    std::sort(accepted.begin(), accepted.end());
    return accepted;
}

inline std::size_t count_solitons(const WaveState& state, std::size_t mode, const PeakOptions& opt = {}) {
    if (mode >= state.n_modes()) throw InvalidArgument("peak count mode out of range");
    return find_peaks(state.theta[mode], opt).size();
}

struct DiagnosticSample {
    std::size_t step = 0;
    double t = 0.0;
    std::vector<double> l2_per_mode;
    double vector_norm = 0.0;
    std::optional<double> conserved_hs;
    std::vector<double> max_amp_per_mode;
    std::size_t peak_count_mode1 = 0;
};

inline DiagnosticSample sample_diagnostics(const WaveState& state, const Grid& grid, std::size_t step,
                                           const PeakOptions& peaks = {}) {
    DiagnosticSample s;
    s.step = step;
    s.t = state.t;
    s.l2_per_mode = l2_norm(state, grid.h);
    double sq = 0.0;
    for (double v : s.l2_per_mode) sq += v * v;
    s.vector_norm = std::sqrt(sq);
    if (state.n_modes() == 2) s.conserved_hs = hs_conserved(state, grid.h);
    s.max_amp_per_mode.resize(state.n_modes());
    for (std::size_t n = 0; n < state.n_modes(); ++n) {
        double best = 0.0;
        for (double v : state.theta[n]) best = std::max(best, std::abs(v));
        s.max_amp_per_mode[n] = best;
    }
    PeakOptions opt = peaks;
    opt.periodic = grid.boundary == Boundary::Periodic;
    s.peak_count_mode1 = find_peaks(state.theta[0], opt).size();
    return s;
}

/// One row of a mesh-refinement table.
struct ConvergenceRow {
    double h = 0.0;
    double tau = 0.0;
    double error = 0.0;
    std::optional<double> order_estimate;
    bool diverged = false;
};

/// Fills order estimates log(err_prev / err) / log(h_prev / h) between
/// consecutive non-diverged rows.
inline void estimate_orders(std::vector<ConvergenceRow>& rows) {
    const ConvergenceRow* prev = nullptr;
    for (auto& row : rows) {
        row.order_estimate.reset();
        if (row.diverged) continue;
        if (prev && prev->error > 0.0 && row.error > 0.0)
            row.order_estimate = std::log(prev->error / row.error) / std::log(prev->h / row.h);
        prev = &row;
    }
}

}  // namespace ckdv
