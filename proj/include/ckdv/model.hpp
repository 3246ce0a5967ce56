#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ckdv/error.hpp"

namespace ckdv {

/// One nonzero entry of the coupling tensor, 0-based.
struct Coupling {
    std::size_t m;  // differentiated factor (theta_m)_x
    std::size_t k;  // undifferentiated factor theta_k
    std::size_t n;  // equation (mode) receiving the term
    double value;
};

/**
 * Constant-coefficient coupled KdV system
 *
 *   (theta_n)_t + c_n (theta_n)_x + sum_{k,m} g_{mkn} theta_k (theta_m)_x + d_n (theta_n)_xxx = 0
 *
 * Coefficients are stored densely; g is indexed g(m, k, n) with m the
 * differentiated factor, k the plain factor and n the equation. All indices
 * are 0-based in the API.
 */
class CoupledSystem {
public:
    CoupledSystem(std::vector<double> c, std::vector<double> d, std::vector<double> g,
                  std::string label = {})
        : c_(std::move(c)), d_(std::move(d)), g_(std::move(g)), label_(std::move(label)) {
        const std::size_t n = c_.size();
        if (n == 0) throw InvalidArgument("coupled system needs at least one mode");
        if (d_.size() != n) throw InvalidArgument("dispersion array length differs from mode count");
        if (g_.size() != n * n * n) throw InvalidArgument("coupling tensor must have N^3 entries");
        for (double v : c_)
            if (!std::isfinite(v)) throw InvalidArgument("non-finite linear velocity");
        for (double v : d_)
            if (!std::isfinite(v)) throw InvalidArgument("non-finite dispersion coefficient");
        for (double v : g_)
            if (!std::isfinite(v)) throw InvalidArgument("non-finite coupling coefficient");
    }

    /// Dense tensor from a list of nonzero entries; repeated entries add up.
    static CoupledSystem from_couplings(std::vector<double> c, std::vector<double> d,
                                        std::span<const Coupling> couplings, std::string label = {}) {
        const std::size_t n = c.size();
        std::vector<double> g(n * n * n, 0.0);
        for (const auto& e : couplings) {
            if (e.m >= n || e.k >= n || e.n >= n)
                throw InvalidArgument("coupling index out of range");
            g[(e.m * n + e.k) * n + e.n] += e.value;
        }
        return CoupledSystem(std::move(c), std::move(d), std::move(g), std::move(label));
    }

    std::size_t n_modes() const { return c_.size(); }
    const std::vector<double>& c() const { return c_; }
    const std::vector<double>& d() const { return d_; }
    const std::vector<double>& g_dense() const { return g_; }
    const std::string& label() const { return label_; }

    double c(std::size_t n) const { return c_[n]; }
    double d(std::size_t n) const { return d_[n]; }
    double g(std::size_t m, std::size_t k, std::size_t n) const {
        const std::size_t N = n_modes();
        return g_[(m * N + k) * N + n];
    }

    /// Nonzero couplings in (m, k, n) lexicographic order.
    std::vector<Coupling> couplings() const {
        std::vector<Coupling> out;
        const std::size_t N = n_modes();
        for (std::size_t m = 0; m < N; ++m)
            for (std::size_t k = 0; k < N; ++k)
                for (std::size_t n = 0; n < N; ++n)
                    if (g(m, k, n) != 0.0) out.push_back({m, k, n, g(m, k, n)});
        return out;
    }

    /// max_{m,k} |g_{mkn}| for equation n.
    double max_coupling(std::size_t n) const {
        double best = 0.0;
        const std::size_t N = n_modes();
        for (std::size_t m = 0; m < N; ++m)
            for (std::size_t k = 0; k < N; ++k) best = std::max(best, std::abs(g(m, k, n)));
        return best;
    }

    CoupledSystem with_dispersion(std::size_t n, double value, std::string label) const {
        auto d = d_;
        d.at(n) = value;
        return CoupledSystem(c_, std::move(d), g_, std::move(label));
    }

    friend bool operator==(const CoupledSystem&, const CoupledSystem&) = default;

private:
    std::vector<double> c_;
    std::vector<double> d_;
    std::vector<double> g_;
    std::string label_;
};

/// Integrable Hirota-Satsuma system:
///   (th1)_t - 0.25 (th1)_xxx - 1.5 th1 (th1)_x + 3 th2 (th2)_x = 0
///   (th2)_t + 0.5  (th2)_xxx + 1.5 th1 (th2)_x = 0
inline CoupledSystem hs_integrable_system() {
    const Coupling terms[] = {
        {0, 0, 0, -1.5},
        {1, 1, 0, 3.0},
        {1, 0, 1, 1.5},
    };
    return CoupledSystem::from_couplings({0.0, 0.0}, {-0.25, 0.5}, terms, "hs-integrable");
}

/// Same as the integrable system with the first dispersion constant moved to -0.2.
inline CoupledSystem hs_nonintegrable_system() {
    return hs_integrable_system().with_dispersion(0, -0.2, "hs-nonintegrable");
}

/// First equation of the Hirota-Satsuma system taken on its own (theta_2 == 0).
inline CoupledSystem hs_first_mode_kdv() {
    const Coupling terms[] = {{0, 0, 0, -1.5}};
    return CoupledSystem::from_couplings({0.0}, {-0.25}, terms, "kdv-hs-mode1");
}

enum class Boundary { Periodic, ZeroPadded };

inline const char* to_string(Boundary b) {
    return b == Boundary::Periodic ? "periodic" : "zero-padded";
}

/// Uniform mesh x_i = x0 + i h, i in [0, n_points), plus the time step.
struct Grid {
    double x0 = 0.0;
    double h = 0.1;
    std::size_t n_points = 0;
    double tau = 1e-6;
    Boundary boundary = Boundary::Periodic;

    void validate() const {
        if (!(h > 0.0) || !std::isfinite(h)) throw InvalidGrid("spatial step h must be positive");
        if (!(tau > 0.0) || !std::isfinite(tau)) throw InvalidGrid("time step tau must be positive");
        if (n_points < 5) throw InvalidGrid("grid needs at least 5 points for the i+-2 stencil");
        if (!std::isfinite(x0)) throw InvalidGrid("non-finite left endpoint");
    }

    double x(std::size_t i) const { return x0 + static_cast<double>(i) * h; }
    double length() const { return static_cast<double>(n_points) * h; }

    /// Index of the node closest to position x (clamped to the grid).
    std::size_t nearest(double xv) const {
        const double r = std::round((xv - x0) / h);
        if (r <= 0.0) return 0;
        if (r >= static_cast<double>(n_points - 1)) return n_points - 1;
        return static_cast<std::size_t>(r);
    }

    friend bool operator==(const Grid&, const Grid&) = default;
};

/// All mode amplitudes at one time level.
struct WaveState {
    double t = 0.0;
    std::vector<std::vector<double>> theta;

    WaveState() = default;
    WaveState(std::size_t n_modes, std::size_t n_points, double time = 0.0)
        : t(time), theta(n_modes, std::vector<double>(n_points, 0.0)) {}

    std::size_t n_modes() const { return theta.size(); }
    std::size_t n_points() const { return theta.empty() ? 0 : theta.front().size(); }

    std::span<const double> mode(std::size_t n) const { return theta[n]; }
    std::span<double> mode(std::size_t n) { return theta[n]; }

    bool finite() const {
        for (const auto& row : theta)
            for (double v : row)
                if (!std::isfinite(v)) return false;
        return true;
    }

    void check_shape(std::size_t n_modes_expected, std::size_t n_points_expected) const {
        if (n_modes() != n_modes_expected)
            throw InvalidArgument("state has " + std::to_string(n_modes()) + " modes, expected " +
                                  std::to_string(n_modes_expected));
        for (const auto& row : theta)
            if (row.size() != n_points_expected)
                throw InvalidArgument("state mode length does not match the grid");
    }

    friend bool operator==(const WaveState&, const WaveState&) = default;
};

/// Effective dispersion e_n = d_n - c_n h^2 / 6, tied to the h it was built for.
struct SchemeCoefficients {
    std::vector<double> e;
    double h = 0.0;

    double max_abs_e() const {
        double best = 0.0;
        for (double v : e) best = std::max(best, std::abs(v));
        return best;
    }

    void check_fresh(double grid_h) const {
        if (h != grid_h)
            throw InvalidArgument("scheme coefficients were built for h=" + std::to_string(h) +
                                  " but the grid uses h=" + std::to_string(grid_h));
    }
};

inline SchemeCoefficients effective_dispersion(const CoupledSystem& sys, double h) {
    if (!(h > 0.0) || !std::isfinite(h)) throw InvalidGrid("effective dispersion needs h > 0");
    SchemeCoefficients out;
    out.h = h;
    out.e.resize(sys.n_modes());
    for (std::size_t n = 0; n < sys.n_modes(); ++n) out.e[n] = sys.d(n) - sys.c(n) * h * h / 6.0;
    return out;
}

}  // namespace ckdv
