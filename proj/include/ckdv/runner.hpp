#pragma once

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ckdv/config.hpp"
#include "ckdv/error.hpp"
#include "ckdv/integrate.hpp"
#include "ckdv/io.hpp"
#include "ckdv/svg.hpp"

namespace ckdv {

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitUnstable = 3, kExitDiverged = 4 };

struct RunOutcome {
    int exit_code = kExitOk;
    std::string message;
    std::optional<RunResult> result;
};

namespace detail {

inline std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline svg::Series mode_series(const Grid& grid, const WaveState& state, std::size_t n, const std::string& name) {
    svg::Series s{name, {}, state.theta[n]};
    s.x.reserve(grid.n_points);
    for (std::size_t i = 0; i < grid.n_points; ++i) s.x.push_back(grid.x(i));
    return s;
}

inline std::string profile_plot(const Grid& grid, const WaveState& state, const std::optional<WaveState>& exact) {
    svg::Plot p;
    p.title = "profiles at t = " + format_real(state.t);
    p.x_label = "x";
    p.y_label = "theta";
    for (std::size_t n = 0; n < state.n_modes(); ++n)
        p.series.push_back(mode_series(grid, state, n, "theta" + std::to_string(n + 1)));
    if (exact)
        for (std::size_t n = 0; n < exact->n_modes(); ++n)
            p.series.push_back(mode_series(grid, *exact, n, "exact theta" + std::to_string(n + 1)));
    return svg::render(p);
}

}  // namespace detail

/**
 * Runs one configuration and writes its artifacts into out_dir:
 *
 *   snap_<step>.csv      snapshots (x,theta1,...,thetaN)
 *   snapshots.csv        step,t,file index of the snapshots
 *   final_state.csv      last finite state
 *   diagnostics.ndjson   one DiagnosticSample per line
 *   error.csv            %Error per mode (runs with an analytic solution)
 *   stability.json       StabilityReport
 *   manifest.json        echoed config, status, timestamp
 *   *.svg                plots when output.plot is set
 *
 * Everything except manifest.json is a pure function of the config.
 */
inline RunOutcome run_scenario(const RunConfig& cfg, const std::filesystem::path& out_dir) {
    namespace fs = std::filesystem;
    RunOutcome outcome;
    nlohmann::json manifest = {{"config", to_json(cfg)}, {"created", detail::utc_timestamp()}};

    std::optional<PreparedRun> prepared;
    try {
        prepared = prepare_run(cfg);
    } catch (const ConfigError& ex) {
        outcome.exit_code = kExitConfig;
        outcome.message = ex.what();
    } catch (const InvalidArgument& ex) {
        outcome.exit_code = kExitConfig;
        outcome.message = ex.what();
    } catch (const SingularityError& ex) {
        outcome.exit_code = kExitConfig;
        outcome.message = ex.what();
    }
    fs::create_directories(out_dir);
    auto finish = [&](const std::string& status) {
        manifest["status"] = status;
        manifest["exit_code"] = outcome.exit_code;
        if (!outcome.message.empty()) manifest["message"] = outcome.message;
        write_text(out_dir / "manifest.json", manifest.dump(2) + "\n");
        return outcome;
    };
    if (!prepared) return finish("config-error");

    const auto& run = *prepared;
    manifest["grid"] = {{"n_points", run.grid.n_points}, {"tau", run.grid.tau}};
    manifest["planned_steps"] = planned_steps(cfg.time.t0, run.grid.tau);
    manifest["analytic_oracle"] = run.has_oracle;
    if (!cfg.note.empty()) manifest["note"] = cfg.note;
    write_text(out_dir / "stability.json", to_json(run.stability).dump(2) + "\n");

    if (run.stability.verdict == Verdict::Fail && !cfg.force_unstable) {
        outcome.exit_code = kExitUnstable;
        outcome.message = "time step " + format_real(run.grid.tau) + " fails the stability rule (suggested " +
                          format_real(run.stability.tau_suggested) + "); use --force-unstable to override";
        return finish("stability-fail");
    }

    std::ofstream snap_index(out_dir / "snapshots.csv", std::ios::binary);
    std::ofstream diag_log(out_dir / "diagnostics.ndjson", std::ios::binary);
    std::optional<std::ofstream> error_log;
    if (run.has_oracle && run.amplitude > 0.0) {
        error_log.emplace(out_dir / "error.csv", std::ios::binary);
        *error_log << "step,t";
        for (std::size_t n = 0; n < cfg.system.n_modes(); ++n) *error_log << ",percent_error" << n + 1;
        *error_log << '\n';
    }
    snap_index << "step,t,file\n";

    const bool plot = cfg.output.plot;
    std::vector<double> conserved_t, conserved_v;
    std::optional<std::pair<WaveState, WaveState>> last_error_pair;

    RunHooks hooks;
    hooks.on_snapshot = [&](std::size_t step, const WaveState& state) {
        const auto name = snapshot_name(step);
        write_text(out_dir / name, snapshot_csv(run.grid, state));
        snap_index << step << ',' << format_real(state.t) << ',' << name << '\n';
        if (plot)
            write_text(out_dir / snapshot_name(step, ".svg"),
                       detail::profile_plot(run.grid, state, analytic_state(cfg, run.grid, state.t)));
    };
    hooks.on_diagnostic = [&](const DiagnosticSample& s) {
        diag_log << to_json(s).dump() << '\n';
        if (s.conserved_hs) {
            conserved_t.push_back(s.t);
            conserved_v.push_back(*s.conserved_hs);
        }
    };
    hooks.on_error = [&](const ErrorSample& e, const WaveState& exact, const WaveState& numeric) {
        *error_log << e.step << ',' << format_real(e.t);
        for (double v : e.percent) *error_log << ',' << format_real(v);
        *error_log << '\n';
        if (plot) last_error_pair = {exact, numeric};
    };

    auto result = integrate(run, hooks);
    write_text(out_dir / "final_state.csv", snapshot_csv(run.grid, result.final_state));

    if (plot) {
        if (!conserved_t.empty()) {
            svg::Plot p{"conserved quantity", "t", "sum (0.5 theta1^2 - theta2^2) h", {{"conserved", conserved_t, conserved_v}}};
            write_text(out_dir / "conserved.svg", svg::render(p));
        }
        if (last_error_pair) {
            const auto& [exact, numeric] = *last_error_pair;
            svg::Plot p;
            p.title = "%Error at t = " + format_real(numeric.t);
            p.x_label = "x";
            p.y_label = "100 |exact - numeric| / A";
            for (std::size_t n = 0; n < numeric.n_modes(); ++n) {
                svg::Series s = detail::mode_series(run.grid, numeric, n, "mode " + std::to_string(n + 1));
                for (std::size_t i = 0; i < s.y.size(); ++i)
                    s.y[i] = 100.0 * std::abs(exact.theta[n][i] - numeric.theta[n][i]) / run.amplitude;
                p.series.push_back(std::move(s));
            }
            write_text(out_dir / "error_final.svg", svg::render(p));
        }
    }

    manifest["steps"] = result.steps;
    manifest["final_t"] = result.final_state.t;
    if (result.has_oracle) manifest["max_percent_error"] = result.max_percent_error();
    if (result.status == RunStatus::Diverged) {
        outcome.exit_code = kExitDiverged;
        outcome.message = result.message;
    }
    const bool diverged = result.status == RunStatus::Diverged;
    outcome.result = std::move(result);
    return finish(diverged ? "diverged" : "completed");
}

/// Reparses the config echoed into a run manifest.
inline RunConfig config_from_manifest(const std::filesystem::path& manifest_path) {
    const auto doc = nlohmann::json::parse(read_text(manifest_path));
    return config_from_json(doc.at("config"));
}

}  // namespace ckdv
