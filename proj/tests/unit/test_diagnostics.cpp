#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ckdv/analytic.hpp"
#include "ckdv/diagnostics.hpp"

using namespace ckdv;

namespace {

Grid grid_on(double x0, double x1, double h) {
    return Grid{x0, h, static_cast<std::size_t>(std::llround((x1 - x0) / h)), 1e-5, Boundary::Periodic};
}

WaveState soliton(const Grid& grid, double m, double d) {
    InitialCondition ic;
    ic.soliton = {m, d};
    return sample_ic(ic, grid, 2);
}

WaveState filled(std::size_t modes, std::size_t n, double v) {
    WaveState s(modes, n);
    for (auto& row : s.theta) row.assign(n, v);
    return s;
}

// Trapezoid rule on a fine auxiliary mesh, evaluating the closed form directly.
double conserved_by_quadrature(double m, double d, double x0, double x1) {
    const std::size_t n = 400000;
    const double dx = (x1 - x0) / static_cast<double>(n);
    double acc = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
        const auto v = hs_one_soliton(x0 + static_cast<double>(i) * dx, 0.0, {m, d});
        const double w = (i == 0 || i == n) ? 0.5 : 1.0;
        acc += w * (0.5 * v.theta1 * v.theta1 - v.theta2 * v.theta2);
    }
    return acc * dx;
}

}  // namespace

TEST(Norms, Examples) {
    EXPECT_EQ(l2_norm(WaveState(2, 5), 0.1), std::vector<double>(2, 0.0));
    EXPECT_EQ(vector_norm(WaveState(2, 5), 0.1), 0.0);
    EXPECT_DOUBLE_EQ(l2_norm(filled(1, 4, 1.0), 0.5)[0], std::sqrt(2.0));
    EXPECT_DOUBLE_EQ(vector_norm(filled(2, 2, 1.0), 1.0), 2.0);
}

TEST(Norms, VectorNormSquaresAddUp) {
    const auto grid = grid_on(-20, 20, 0.1);
    const auto s = soliton(grid, 1.0, 0.3);
    const auto l2 = l2_norm(s, grid.h);
    const double v = vector_norm(s, grid.h);
    EXPECT_NEAR(v * v, l2[0] * l2[0] + l2[1] * l2[1], 1e-12 * v * v);
    const auto sample = sample_diagnostics(s, grid, 0);
    EXPECT_NEAR(sample.vector_norm, v, 1e-13);
}

TEST(PercentError, Examples) {
    const auto a = filled(2, 6, 0.7);
    EXPECT_EQ(percent_error(a, a, 2.0), std::vector<double>(2, 0.0));
    auto b = a;
    b.theta[0][4] += 0.02;
    const auto e = percent_error(b, a, 2.0);
    EXPECT_NEAR(e[0], 1.0, 1e-12);
    EXPECT_EQ(e[1], 0.0);
    EXPECT_THROW(percent_error(a, a, 0.0), InvalidArgument);
    EXPECT_THROW(percent_error(a, filled(2, 5, 0.7), 1.0), InvalidArgument);
}

TEST(PercentError, SymmetricAndInverselyHomogeneous) {
    const auto grid = grid_on(-10, 10, 0.1);
    const auto a = soliton(grid, 1.0, 0.0);
    const auto b = soliton(grid, 1.05, 0.1);
    for (double amp : {0.5, 2.0, 3.4}) {
        const auto ab = percent_error(a, b, amp);
        const auto ba = percent_error(b, a, amp);
        const auto ab2 = percent_error(a, b, 2.0 * amp);
        for (std::size_t n = 0; n < 2; ++n) {
            EXPECT_EQ(ab[n], ba[n]);
            EXPECT_NEAR(ab2[n], 0.5 * ab[n], 1e-12 * ab[n]);
        }
    }
}

TEST(Conserved, Examples) {
    EXPECT_EQ(hs_conserved(WaveState(2, 9), 0.1), 0.0);
    WaveState s(2, 9);
    for (std::size_t i = 0; i < 9; ++i) {
        s.theta[1][i] = 0.3 * static_cast<double>(i) - 1.0;
        s.theta[0][i] = std::sqrt(2.0) * s.theta[1][i];
    }
    EXPECT_NEAR(hs_conserved(s, 0.1), 0.0, 1e-15);
    EXPECT_THROW(hs_conserved(WaveState(1, 9), 0.1), InvalidArgument);
}

TEST(Conserved, SolitonValueMatchesQuadrature) {
    const auto grid = grid_on(-20, 20, 0.1);
    const auto s = soliton(grid, 1.0, 0.3);
    const double value = hs_conserved(s, grid.h);
    const double oracle = conserved_by_quadrature(1.0, 0.3, -20.0, 20.0);
    EXPECT_NEAR(value, oracle, 1e-9 * std::abs(oracle));
    // Frozen regression value of the grid sum (-4/3 up to rounding).
    EXPECT_NEAR(value, -1.3333333333333326, 1e-12);
}

TEST(Peaks, Basics) {
    EXPECT_EQ(count_solitons(WaveState(2, 50), 0), 0u);
    const auto grid = grid_on(-20, 20, 0.1);
    EXPECT_EQ(count_solitons(sample_ic({}, grid, 2), 0), 1u);
    EXPECT_THROW(count_solitons(WaveState(1, 10), 1), InvalidArgument);

    std::vector<double> v(60, 0.0);
    v[10] = 1.0;
    v[13] = 0.8;   // too close to v[10]
    v[30] = 0.5;
    v[45] = 0.05;  // below 10% of the global max
    EXPECT_EQ(find_peaks(v), (std::vector<std::size_t>{10, 30}));
    PeakOptions loose;
    loose.min_separation = 2;
    loose.min_height_fraction = 0.01;
    EXPECT_EQ(find_peaks(v, loose), (std::vector<std::size_t>{10, 13, 30, 45}));
}

TEST(Peaks, PlateauCountsOnce) {
    std::vector<double> v(30, 0.0);
    for (std::size_t i = 10; i < 15; ++i) v[i] = 2.0;
    EXPECT_EQ(find_peaks(v), (std::vector<std::size_t>{10}));
    std::vector<double> flat(30, 1.0);
    EXPECT_TRUE(find_peaks(flat).empty());
}

TEST(Peaks, WrapAroundUnderPeriodicBoundary) {
    std::vector<double> v(40, 0.0);
    v[0] = 1.0;
    v[38] = 0.9;  // 2 points away across the seam
    EXPECT_EQ(find_peaks(v), (std::vector<std::size_t>{0}));
    PeakOptions open;
    open.periodic = false;
    EXPECT_EQ(find_peaks(v, open), (std::vector<std::size_t>{0, 38}));
}

TEST(Peaks, TranslationInvariantOnPeriodicGrid) {
    const auto grid = grid_on(-30, 30, 0.1);
    auto s = soliton(grid, 1.0, 0.0);
    // Add two more humps.
    for (std::size_t i = 0; i < grid.n_points; ++i) {
        s.theta[0][i] += hs_one_soliton(grid.x(i) - 12.0, 0.0, {0.7, 0.0}).theta1;
        s.theta[0][i] += hs_one_soliton(grid.x(i) + 15.0, 0.0, {0.5, 0.0}).theta1;
    }
    const auto base = count_solitons(s, 0);
    EXPECT_EQ(base, 3u);
    for (std::size_t shift : {1u, 37u, 150u, 599u}) {
        auto t = s;
        for (std::size_t i = 0; i < grid.n_points; ++i)
            t.theta[0][(i + shift) % grid.n_points] = s.theta[0][i];
        EXPECT_EQ(count_solitons(t, 0), base) << shift;
    }
}

TEST(Convergence, OrderEstimates) {
    std::vector<ConvergenceRow> rows{{0.4, 1e-3, 16.0, {}, false}, {0.2, 1e-4, 4.0, {}, false},
                                     {0.1, 1e-5, 1.0, {}, false}};
    estimate_orders(rows);
    EXPECT_FALSE(rows[0].order_estimate);
    EXPECT_DOUBLE_EQ(*rows[1].order_estimate, 2.0);
    EXPECT_DOUBLE_EQ(*rows[2].order_estimate, 2.0);
    rows[1].diverged = true;
    estimate_orders(rows);
    EXPECT_FALSE(rows[1].order_estimate);
    EXPECT_DOUBLE_EQ(*rows[2].order_estimate, 2.0);  // 16 -> 1 over 0.4 -> 0.1
}
