#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ckdv/analytic.hpp"
#include "ckdv/config.hpp"
#include "ckdv/diagnostics.hpp"
#include "ckdv/error.hpp"
#include "ckdv/model.hpp"
#include "ckdv/scheme.hpp"
#include "ckdv/stability.hpp"

namespace ckdv {

/**
 * Single-owner time stepper. Each advance() is one half step to t + tau/2
 * followed by one full step to t + tau. A step that produces a non-finite
 * flux or blows the norm past the divergence ratio leaves the last finite
 * state in place, halts the simulation and rethrows; later advances throw
 * SequencingError.
 */
class Simulation {
public:
    using Observer = std::function<void(const Simulation&)>;

    Simulation(CoupledSystem sys, const Grid& grid, WaveState initial)
        : sys_(std::move(sys)),
          coeffs_(effective_dispersion(sys_, grid.h)),
          grid_(grid),
          flux_(sys_, coeffs_, grid_),
          state_(std::move(initial)) {
        state_.check_shape(sys_.n_modes(), grid_.n_points);
        if (!state_.finite()) throw InvalidArgument("initial state is not finite");
        initial_norm_ = vector_norm(state_, grid_.h);
    }

    const CoupledSystem& system() const { return sys_; }
    const SchemeCoefficients& coefficients() const { return coeffs_; }
    const Grid& grid() const { return grid_; }
    const WaveState& state() const { return state_; }
    std::size_t steps() const { return steps_; }
    bool halted() const { return halted_; }
    double initial_norm() const { return initial_norm_; }

    /// Calls observer after every `every`-th completed step.
    void add_observer(Observer observer, std::size_t every = 1) {
        observers_.push_back({std::move(observer), std::max<std::size_t>(every, 1)});
    }

    const WaveState& advance() { return step(grid_.tau, std::nullopt); }

    /// One step of size target - t that lands exactly on target.
    const WaveState& advance_to(double target) {
        const double dt = target - state_.t;
        if (!(dt > 0.0)) throw SequencingError("advance_to target is not ahead of the current time");
        // A step within rounding of tau reuses tau itself so that trajectories
        // split at whole steps stay bit-identical.
        const bool whole = std::abs(dt - grid_.tau) <= 1e-9 * grid_.tau;
        return step(whole ? grid_.tau : dt, target);
    }

private:
    const WaveState& step(double dt, std::optional<double> land_on) {
        if (halted_) throw SequencingError("simulation halted after divergence; no further steps");
        try {
            flux_.update(state_, state_, 0.5 * dt, half_);
            flux_.update(state_, half_, dt, next_);
        } catch (const DivergedError&) {
            halted_ = true;
            throw;
        }
        if (monitor(next_, grid_.h, initial_norm_) == MonitorStatus::Diverged) {
            halted_ = true;
            throw DivergedError("state norm exceeded " + std::to_string(kDivergenceRatio) +
                                " times the initial norm at t=" + std::to_string(next_.t));
        }
        if (land_on) next_.t = *land_on;
        std::swap(state_, next_);
        ++steps_;
        for (const auto& [fn, every] : observers_)
            if (steps_ % every == 0) fn(*this);
        return state_;
    }

    CoupledSystem sys_;
    SchemeCoefficients coeffs_;
    Grid grid_;
    FluxEvaluator flux_;
    WaveState state_;
    WaveState half_;
    WaveState next_;
    std::size_t steps_ = 0;
    bool halted_ = false;
    double initial_norm_ = 0.0;
    std::vector<std::pair<Observer, std::size_t>> observers_;
};

/// True when the system is the integrable HS system (labels ignored).
inline bool is_hs_integrable(const CoupledSystem& sys) {
    const auto hs = hs_integrable_system();
    return sys.c() == hs.c() && sys.d() == hs.d() && sys.g_dense() == hs.g_dense();
}

/// Closed-form state at time t, or nullopt when the run has no analytic oracle.
inline std::optional<WaveState> analytic_state(const RunConfig& cfg, const Grid& grid, double t) {
    if (cfg.ic.kind != IcKind::HsSoliton || !is_hs_integrable(cfg.system)) return std::nullopt;
    WaveState out(2, grid.n_points, t);
    for (std::size_t i = 0; i < grid.n_points; ++i) {
        const auto v = hs_one_soliton(grid.x(i), t, cfg.ic.soliton);
        out.theta[0][i] = v.theta1;
        out.theta[1][i] = v.theta2;
    }
    return out;
}

/// Everything fixed before the first step.
struct PreparedRun {
    RunConfig config;
    Grid grid;
    SchemeCoefficients coeffs;
    WaveState initial;
    StabilityReport stability;
    double amplitude = 0.0;  // %Error denominator, 0 if undefined
    bool has_oracle = false;
};

inline PreparedRun prepare_run(const RunConfig& cfg) {
    cfg.validate();
    PreparedRun run;
    run.config = cfg;
    run.grid.x0 = cfg.grid.x0;
    run.grid.h = cfg.grid.h;
    run.grid.n_points = cfg.grid.n_points();
    run.grid.boundary = cfg.grid.boundary;
    run.coeffs = effective_dispersion(cfg.system, cfg.grid.h);
    run.initial = sample_ic(cfg.ic, run.grid, cfg.system.n_modes());

    double peak = 0.0;
    double abs_peak = 0.0;
    for (double v : run.initial.theta[0]) peak = std::max(peak, v);
    for (const auto& row : run.initial.theta)
        for (double v : row) abs_peak = std::max(abs_peak, std::abs(v));
    run.amplitude = cfg.error_amplitude.value_or(peak);

    TimestepInputs in;
    in.h = cfg.grid.h;
    in.t0 = cfg.time.t0 > 0.0 ? cfg.time.t0 : 1.0;
    in.alpha = cfg.time.alpha;
    in.amplitude = abs_peak;
    const double suggested = suggest_timestep(cfg.system, run.coeffs, in);
    run.grid.tau = cfg.time.tau.value_or(suggested);
    run.grid.validate();
    run.stability = stability_report(cfg.system, run.coeffs, run.initial, run.grid, in);
    run.has_oracle = analytic_state(cfg, run.grid, 0.0).has_value();
    return run;
}

/// Step or time-interval recording schedule.
struct Cadence {
    std::size_t every = 0;
    double interval = 0.0;

    bool due(std::size_t step, double t_prev, double t_now) const {
        if (every > 0 && step % every == 0) return true;
        if (interval > 0.0) {
            const auto bucket = [&](double t) { return std::floor(t / interval + 1e-9); };
            if (bucket(t_now) > bucket(t_prev)) return true;
        }
        return false;
    }
};

struct ErrorSample {
    std::size_t step = 0;
    double t = 0.0;
    std::vector<double> percent;
};

enum class RunStatus { Completed, Diverged };

struct RunHooks {
    std::function<void(std::size_t step, const WaveState&)> on_snapshot;
    std::function<void(const DiagnosticSample&)> on_diagnostic;
    std::function<void(const ErrorSample&, const WaveState& exact, const WaveState& numeric)> on_error;
};

struct RunResult {
    RunStatus status = RunStatus::Completed;
    std::string message;
    Grid grid;
    WaveState initial;
    WaveState final_state;  // last finite state
    std::size_t steps = 0;
    std::size_t planned_steps = 0;
    StabilityReport stability;
    double amplitude = 0.0;
    bool has_oracle = false;
    std::vector<DiagnosticSample> diagnostics;
    std::vector<ErrorSample> errors;

    /// Largest %Error over all recorded times and modes (0 without an oracle).
    double max_percent_error() const {
        double worst = 0.0;
        for (const auto& e : errors)
            for (double v : e.percent) worst = std::max(worst, v);
        return worst;
    }
    double max_percent_error(std::size_t mode) const {
        double worst = 0.0;
        for (const auto& e : errors) worst = std::max(worst, e.percent.at(mode));
        return worst;
    }
};

/// ceil(t0 / tau) with a relative slack so exact multiples are not rounded up.
inline std::size_t planned_steps(double t0, double tau) {
    if (t0 <= 0.0) return 0;
    return static_cast<std::size_t>(std::ceil(t0 / tau * (1.0 - 1e-12)));
}

/// Runs an already prepared problem from t = 0 to t0; ignores the stability gate.
inline RunResult integrate(const PreparedRun& run, const RunHooks& hooks = {}) {
    const auto& cfg = run.config;
    RunResult res;
    res.grid = run.grid;
    res.initial = run.initial;
    res.stability = run.stability;
    res.amplitude = run.amplitude;
    res.has_oracle = run.has_oracle && run.amplitude > 0.0;

    const Cadence snapshots{cfg.output.snapshot_every, cfg.output.snapshot_interval};
    const Cadence diagnostics{cfg.output.diagnostics_every, cfg.output.diagnostics_interval};

    auto record = [&](std::size_t step, const WaveState& state, bool snap, bool diag) {
        if (snap && hooks.on_snapshot) hooks.on_snapshot(step, state);
        if (!diag) return;
        auto sample = sample_diagnostics(state, run.grid, step);
        if (hooks.on_diagnostic) hooks.on_diagnostic(sample);
        res.diagnostics.push_back(std::move(sample));
        if (res.has_oracle) {
            const auto exact = *analytic_state(cfg, run.grid, state.t);
            ErrorSample err{step, state.t, percent_error(state, exact, run.amplitude)};
            if (hooks.on_error) hooks.on_error(err, exact, state);
            res.errors.push_back(std::move(err));
        }
    };

    Simulation sim(cfg.system, run.grid, run.initial);
    record(0, sim.state(), true, true);
    const double t_end = cfg.time.t0;
    const std::size_t total = planned_steps(t_end, run.grid.tau);
    res.planned_steps = total;
    try {
        for (std::size_t j = 1; j <= total; ++j) {
            const double t_prev = sim.state().t;
            if (j < total)
                sim.advance();
            else
                sim.advance_to(t_end);
            const bool last = j == total;
            record(j, sim.state(), last || snapshots.due(j, t_prev, sim.state().t),
                   last || diagnostics.due(j, t_prev, sim.state().t));
        }
    } catch (const DivergedError& ex) {
        res.status = RunStatus::Diverged;
        res.message = ex.what();
    }
    res.steps = sim.steps();
    res.final_state = sim.state();
    return res;
}

/// prepare_run + stability gate + integrate. A Fail verdict without
/// force_unstable throws StabilityGateError before any step is taken.
inline RunResult integrate(const RunConfig& cfg, const RunHooks& hooks = {}) {
    const auto run = prepare_run(cfg);
    if (run.stability.verdict == Verdict::Fail && !cfg.force_unstable)
        throw StabilityGateError("time step " + std::to_string(run.grid.tau) + " exceeds the stability cap " +
                                 std::to_string(run.stability.tau_suggested) + " by more than " +
                                 std::to_string(kMarginalBand) + "x; pass force_unstable to run anyway");
    return integrate(run, hooks);
}

}  // namespace ckdv
