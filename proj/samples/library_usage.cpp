// Integrates the default two-mode soliton to t = 0.5 through the library API
// and prints the %Error against the closed-form solution.

#include <cstdio>

#include "ckdv/ckdv.hpp"

int main() {
    ckdv::RunConfig cfg = ckdv::find_preset("hs-soliton-A2");
    cfg.grid.h = 0.2;  // coarse grid: runs in well under a second
    cfg.time.t0 = 0.5;
    cfg.output.diagnostics_interval = 0.1;

    const auto prepared = ckdv::prepare_run(cfg);
    std::printf("points %zu, tau %.4e, stability %s\n", prepared.grid.n_points, prepared.grid.tau,
                ckdv::to_string(prepared.stability.verdict));

    const auto result = ckdv::integrate(prepared);
    for (const auto& e : result.errors)
        std::printf("t = %.3f  %%Error theta1 %.4f  theta2 %.4f\n", e.t, e.percent[0], e.percent[1]);
    return result.status == ckdv::RunStatus::Completed ? 0 : 1;
}
