// Acceptance checks 1-9. Prints one [PASS]/[FAIL] line per criterion, with
// the measured values, and exits non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "ckdv/ckdv.hpp"
#include "hs_residual.hpp"
#include "reference_scheme.hpp"

using namespace ckdv;
namespace fs = std::filesystem;

namespace {

struct Verdict {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!detail.empty()) detail += "; ";
        detail += what + (ok ? "" : " [violated]");
        pass = pass && ok;
    }
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

int failures = 0;

void report(int id, const char* title, const std::function<Verdict()>& check) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
        v = check();
    } catch (const std::exception& ex) {
        v.pass = false;
        v.detail = std::string("exception: ") + ex.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!v.pass) ++failures;
    std::printf("[%s] C%d %s: %s (%.1f s)\n", v.pass ? "PASS" : "FAIL", id, title, v.detail.c_str(), secs);
    std::fflush(stdout);
}

RunConfig quiet(RunConfig cfg) {
    cfg.output.snapshot_interval = 0.0;
    cfg.output.snapshot_every = 0;
    return cfg;
}

// Largest |C(t) - C(0)| / |C(0)| over the recorded diagnostics.
double conserved_drift(const RunResult& r) {
    const double c0 = *r.diagnostics.front().conserved_hs;
    double worst = 0.0;
    for (const auto& s : r.diagnostics) worst = std::max(worst, std::abs(*s.conserved_hs - c0) / std::abs(c0));
    return worst;
}

// Sub-grid position of the mode-1 maximum by a parabola through the top three nodes.
double peak_position(const Grid& grid, const std::vector<double>& v) {
    const auto i = static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
    if (i == 0 || i + 1 == v.size()) return grid.x(i);
    const double a = v[i - 1], b = v[i], c = v[i + 1];
    const double denom = a - 2.0 * b + c;
    const double shift = denom == 0.0 ? 0.0 : 0.5 * (a - c) / denom;
    return grid.x(i) + shift * grid.h;
}

double max_rel_diff(const std::vector<double>& got, const std::vector<double>& want) {
    double worst = 0.0;
    for (std::size_t i = 0; i < got.size(); ++i)
        worst = std::max(worst, std::abs(got[i] - want[i]) / std::max(1.0, std::abs(want[i])));
    return worst;
}

// Runs shared between criteria 1, 3 and 5.
struct SharedRuns {
    RunResult a2, a34, a2_coarse;
};

SharedRuns& shared() {
    static SharedRuns runs = [] {
        SharedRuns s;
        s.a2 = integrate(quiet(find_preset("hs-soliton-A2")));
        s.a34 = integrate(quiet(find_preset("hs-soliton-A34")));
        auto coarse = quiet(find_preset("hs-soliton-A2"));
        coarse.grid.h = 0.2;
        s.a2_coarse = integrate(coarse);
        return s;
    }();
    return runs;
}

Verdict exact_solution_accuracy() {
    const auto& s = shared();
    Verdict v;
    const double e2 = s.a2.max_percent_error(), e34 = s.a34.max_percent_error();
    v.require(s.a2.status == RunStatus::Completed && s.a34.status == RunStatus::Completed, "both runs completed");
    v.require(e2 <= 2.0, "A=2 max %Error " + fmt("%.4g", e2) + " <= 2");
    v.require(e34 <= 6.0, "A=3.4 max %Error " + fmt("%.4g", e34) + " <= 6");
    v.require(e34 > e2, "error grows with amplitude");
    v.detail += ", h = 0.1, tau = " + fmt("%.4g", s.a2.grid.tau) + ", t0 = 1";
    return v;
}

Verdict mesh_refinement() {
    const auto rows = convergence_study(find_preset("hs-soliton-A2"), {0.4, 0.2, 0.1}, 1.0);
    Verdict v;
    std::string errs;
    bool decreasing = true;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        errs += (i ? ", " : "") + fmt("%.4g", rows[i].error);
        if (rows[i].diverged) decreasing = false;
        if (i > 0 && !(rows[i].error < rows[i - 1].error)) decreasing = false;
    }
    v.require(decreasing, "errors at h = 0.4, 0.2, 0.1: " + errs + " strictly decreasing");
    const auto order = rows.back().order_estimate;
    v.require(order && *order >= 1.5 && *order <= 2.5,
              "finest-pair order " + (order ? fmt("%.3f", *order) : std::string("n/a")) + " in [1.5, 2.5]");
    if (rows[1].order_estimate) v.detail += ", coarse-pair order " + fmt("%.3f", *rows[1].order_estimate);
    return v;
}

Verdict conservation() {
    const auto& s = shared();
    Verdict v;
    const double fine = conserved_drift(s.a2), coarse = conserved_drift(s.a2_coarse);
    v.require(fine <= 1e-3, "relative drift " + fmt("%.3e", fine) + " <= 1e-3 at h = 0.1");
    v.require(coarse / fine >= 3.0, "h = 0.2 drift " + fmt("%.3e", coarse) + " is " + fmt("%.1f", coarse / fine) +
                                         "x the h = 0.1 drift (>= 3x)");
    return v;
}

Verdict analytic_residual() {
    Verdict v;
    for (auto [m, d] : {std::pair{1.0, 0.0}, std::pair{1.0, 0.3}, std::pair{0.8, 0.5}}) {
        const auto coarse = reference::pde_residual(m, d, 4e-3);
        const auto fine = reference::pde_residual(m, d, 2e-3);
        const double worst = std::max(fine.mode1, fine.mode2);
        const double order = std::min(std::log2(coarse.mode1 / fine.mode1), std::log2(coarse.mode2 / fine.mode2));
        const double order_hi = std::max(std::log2(coarse.mode1 / fine.mode1), std::log2(coarse.mode2 / fine.mode2));
        v.require(worst <= 1e-4 && order >= 1.5 && order_hi <= 2.5,
                  "(m, d) = (" + fmt("%g", m) + ", " + fmt("%g", d) + "): residual " + fmt("%.2e", worst) +
                      ", order " + fmt("%.2f", order) + ".." + fmt("%.2f", order_hi));
    }
    return v;
}

Verdict stability_separation() {
    const auto& s = shared();
    Verdict v;
    v.require(s.a2.stability.verdict == ckdv::Verdict::Pass && s.a2.status == RunStatus::Completed,
              "tau = cap (" + fmt("%.4g", s.a2.grid.tau) + ") completes with monitor Ok");

    const double cap = s.a2.stability.tau_suggested;
    auto diverges_at = [&](double factor) {
        auto cfg = quiet(find_preset("hs-soliton-A2"));
        cfg.time.tau = factor * cap;
        cfg.force_unstable = true;
        cfg.output.diagnostics_interval = 0.1;
        return integrate(cfg).status == RunStatus::Diverged;
    };
    v.require(diverges_at(100.0), "tau = 100x cap with force_unstable diverges before t0 = 1");
    double first = 0.0;
    for (double factor : {200.0, 300.0, 500.0, 700.0, 1000.0, 2000.0})
        if (diverges_at(factor)) {
            first = factor;
            break;
        }
    v.detail += first > 0.0 ? ", smallest diverging factor tried: " + fmt("%g", first) + "x"
                            : ", no divergence up to 2000x";
    return v;
}

Verdict multisoliton() {
    auto cfg = quiet(find_preset("hs-multisoliton"));
    cfg.output.diagnostics_interval = 0.5;
    const auto r = integrate(cfg);
    Verdict v;
    v.require(r.status == RunStatus::Completed, "run completed to t0 = " + fmt("%g", cfg.time.t0));
    const auto count = r.diagnostics.back().peak_count_mode1;
    v.require(count >= 2, "final mode-1 peak count " + std::to_string(count) + " >= 2");

    const auto& u0 = r.initial.theta[0];
    const double threshold = 0.1 * *std::max_element(u0.begin(), u0.end());
    double support_right = -INFINITY;
    for (std::size_t i = 0; i < u0.size(); ++i)
        if (u0[i] >= threshold) support_right = std::max(support_right, r.grid.x(i));
    double rightmost = -INFINITY;
    for (auto i : find_peaks(r.final_state.theta[0])) rightmost = std::max(rightmost, r.grid.x(i));
    v.require(rightmost > support_right, "rightmost final peak x = " + fmt("%.2f", rightmost) +
                                             " beyond initial support edge " + fmt("%.2f", support_right));
    return v;
}

Verdict nonintegrable() {
    auto cfg = find_preset("hs-nonintegrable");
    cfg.output.snapshot_interval = 0.05;
    std::vector<double> positions;
    const auto prepared = prepare_run(cfg);
    RunHooks hooks;
    hooks.on_snapshot = [&](std::size_t, const WaveState& s) {
        positions.push_back(peak_position(prepared.grid, s.theta[0]));
    };
    const auto r = integrate(prepared, hooks);
    Verdict v;
    v.require(r.status == RunStatus::Completed && r.final_state.t == cfg.time.t0, "completed t0 = 1");
    const double a0 = r.diagnostics.front().max_amp_per_mode[0];
    double drift = 0.0;
    for (const auto& s : r.diagnostics) drift = std::max(drift, std::abs(s.max_amp_per_mode[0] - a0) / a0);
    v.require(drift <= 0.1, "peak amplitude drift " + fmt("%.2f", 100.0 * drift) + "% <= 10%");
    bool monotone = positions.size() >= 2;
    for (std::size_t i = 1; i < positions.size(); ++i) monotone = monotone && positions[i] > positions[i - 1];
    v.require(monotone, "peak position advances monotonically over " + std::to_string(positions.size()) +
                            " snapshots (" + fmt("%.3f", positions.front()) + " -> " + fmt("%.3f", positions.back()) +
                            ")");
    return v;
}

Verdict operator_oracle() {
    const auto sys = hs_integrable_system();
    const Grid grid{0.0, 1.0, 7, 0.01, Boundary::Periodic};
    const auto coeffs = effective_dispersion(sys, grid.h);
    WaveState state(2, 7, 0.0);
    state.theta[0] = {0, 0, 1, 2, 1, 0, 0};
    const reference::Pair ref{state.theta[0], state.theta[1]};

    const auto f = rhs(sys, coeffs, state, grid);
    const auto want_f = reference::hs_flux(ref, grid.h);
    const auto half = half_step(sys, coeffs, state, grid);
    const auto want_half = reference::half(ref, grid.h, grid.tau);
    const auto full = full_step(sys, coeffs, state, half, grid);
    const auto want_full = reference::full(ref, grid.h, grid.tau);

    const double worst = std::max({max_rel_diff(f[0], want_f.u), max_rel_diff(f[1], want_f.v),
                                   max_rel_diff(half.theta[0], want_half.u), max_rel_diff(half.theta[1], want_half.v),
                                   max_rel_diff(full.theta[0], want_full.u), max_rel_diff(full.theta[1], want_full.v)});
    Verdict v;
    v.require(worst <= 1e-14, "flux, half and full step vs scalar oracle: max relative difference " +
                                  fmt("%.2e", worst) + " <= 1e-14");
    return v;
}

Verdict trivial_invariants() {
    Verdict v;
    const Grid grid{-5.0, 0.1, 100, 1e-4, Boundary::Periodic};
    for (double level : {0.0, 0.75}) {
        WaveState s(2, grid.n_points, 0.0);
        s.theta[0].assign(grid.n_points, level);
        s.theta[1].assign(grid.n_points, -0.5 * level);
        Simulation sim(hs_integrable_system(), grid, s);
        for (int j = 0; j < 50; ++j) sim.advance();
        v.require(sim.state().theta == s.theta, level == 0.0 ? "zero state fixed over 50 steps" : "constant state fixed over 50 steps");
    }

    const auto sample_grid = Grid{-20.0, 0.1, 400, 1e-6, Boundary::Periodic};
    const auto soliton = sample_ic(InitialCondition{}, sample_grid, 2);
    const auto l2 = l2_norm(soliton, sample_grid.h);
    const double vn = vector_norm(soliton, sample_grid.h);
    WaveState ones(2, 2);
    for (auto& row : ones.theta) row.assign(2, 1.0);
    v.require(std::abs(vn * vn - (l2[0] * l2[0] + l2[1] * l2[1])) <= 1e-12 * vn * vn &&
                  vector_norm(ones, 1.0) == 2.0 && vector_norm(WaveState(2, 9), 0.1) == 0.0,
              "||U||^2 = sum of per-mode squared norms");

    auto cfg = find_preset("hs-soliton");
    cfg.grid.h = 0.2;
    cfg.time.t0 = 0.05;
    cfg.output.snapshot_interval = 0.025;
    cfg.output.plot = true;
    std::random_device rd;
    const auto root = fs::temp_directory_path() / ("ckdv_acceptance_" + std::to_string(rd()));
    run_scenario(cfg, root / "a");
    run_scenario(cfg, root / "b");
    std::size_t files = 0;
    bool identical = true;
    for (const auto& entry : fs::directory_iterator(root / "a")) {
        if (entry.path().filename() == "manifest.json") continue;
        ++files;
        const auto other = root / "b" / entry.path().filename();
        identical = identical && fs::exists(other) && read_text(entry.path()) == read_text(other);
    }
    fs::remove_all(root);
    v.require(identical && files > 0, "repeated runs byte-identical across " + std::to_string(files) + " files");
    return v;
}

}  // namespace

int main() {
    report(1, "exact-solution accuracy", exact_solution_accuracy);
    report(2, "mesh-refinement error decrease", mesh_refinement);
    report(3, "conservation", conservation);
    report(4, "analytic-solution residual", analytic_residual);
    report(5, "stability gate separation", stability_separation);
    report(6, "multi-soliton decay", multisoliton);
    report(7, "non-integrable robustness", nonintegrable);
    report(8, "operator unit oracle", operator_oracle);
    report(9, "trivial invariants", trivial_invariants);
    std::printf("%d of 9 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
