#pragma once

#include <algorithm>
#include <future>
#include <vector>

#include "ckdv/config.hpp"
#include "ckdv/diagnostics.hpp"
#include "ckdv/error.hpp"
#include "ckdv/integrate.hpp"

namespace ckdv {

struct ConvergenceOptions {
    // Error samples per run; the reported error is the max over them.
    std::size_t samples = 50;
    bool parallel = true;
};

/**
 * Mesh-refinement study against the analytic oracle. Each h runs the scenario
 * to t0 with the rule-chosen tau (tau ~ h^6 keeps the time error negligible)
 * and reports the largest %Error over time and modes. Diverged rows are kept
 * but skipped by the order estimates.
 */
inline std::vector<ConvergenceRow> convergence_study(const RunConfig& scenario, const std::vector<double>& h_list,
                                                     double t0, const ConvergenceOptions& opt = {}) {
    if (h_list.empty()) throw InvalidArgument("convergence study needs at least one h");
    for (std::size_t i = 1; i < h_list.size(); ++i)
        if (!(h_list[i] < h_list[i - 1])) throw InvalidArgument("h list must be strictly decreasing");

    auto run_one = [&](double h) {
        RunConfig cfg = scenario;
        cfg.grid.h = h;
        cfg.time.t0 = t0;
        cfg.time.tau.reset();
        cfg.output.snapshot_every = 0;
        cfg.output.snapshot_interval = 0.0;
        cfg.output.diagnostics_every = 0;
        cfg.output.diagnostics_interval = t0 > 0.0 ? t0 / static_cast<double>(std::max<std::size_t>(opt.samples, 1)) : 0.0;
        const auto prepared = prepare_run(cfg);
        if (!prepared.has_oracle) throw ConfigError("convergence study needs a scenario with an analytic solution");
        const auto res = integrate(prepared);
        ConvergenceRow row;
        row.h = h;
        row.tau = prepared.grid.tau;
        row.error = res.max_percent_error();
        row.diverged = res.status == RunStatus::Diverged;
        return row;
    };

    std::vector<ConvergenceRow> rows;
    if (opt.parallel) {
        std::vector<std::future<ConvergenceRow>> jobs;
        for (double h : h_list) jobs.push_back(std::async(std::launch::async, run_one, h));
        for (auto& j : jobs) rows.push_back(j.get());
    } else {
        for (double h : h_list) rows.push_back(run_one(h));
    }
    estimate_orders(rows);
    return rows;
}

}  // namespace ckdv
