#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ckdv/diagnostics.hpp"
#include "ckdv/error.hpp"
#include "ckdv/model.hpp"
#include "ckdv/stability.hpp"

namespace ckdv {

/// 17 significant digits, enough to round-trip any double.
inline std::string format_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Zero-padded step index used in snapshot file names.
inline std::string snapshot_name(std::size_t step, const char* ext = ".csv") {
    char buf[32];
    std::snprintf(buf, sizeof buf, "snap_%09zu", step);
    return std::string(buf) + ext;
}

/// CSV with header x,theta1,...,thetaN and one row per node.
inline std::string snapshot_csv(const Grid& grid, const WaveState& state) {
    std::string out = "x";
    for (std::size_t n = 0; n < state.n_modes(); ++n) out += ",theta" + std::to_string(n + 1);
    out += '\n';
    for (std::size_t i = 0; i < state.n_points(); ++i) {
        out += format_real(grid.x(i));
        for (std::size_t n = 0; n < state.n_modes(); ++n) {
            out += ',';
            out += format_real(state.theta[n][i]);
        }
        out += '\n';
    }
    return out;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open " + path.string() + " for writing");
    f << text;
    if (!f) throw Error("failed writing " + path.string());
}

inline std::string read_text(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open " + path.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

struct Snapshot {
    std::vector<double> x;
    std::vector<std::vector<double>> theta;
};

inline Snapshot parse_snapshot_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line.rfind("x", 0) != 0) throw ConfigError("snapshot is missing its x,theta header");
    std::size_t modes = 0;
    for (char ch : line)
        if (ch == ',') ++modes;
    Snapshot snap;
    snap.theta.assign(modes, {});
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        std::vector<double> values;
        while (std::getline(row, cell, ',')) values.push_back(std::stod(cell));
        if (values.size() != modes + 1) throw ConfigError("snapshot row has the wrong number of columns");
        snap.x.push_back(values[0]);
        for (std::size_t n = 0; n < modes; ++n) snap.theta[n].push_back(values[n + 1]);
    }
    return snap;
}

inline Snapshot read_snapshot(const std::filesystem::path& path) { return parse_snapshot_csv(read_text(path)); }

struct SnapshotDiff {
    double max_x_diff = 0.0;
    std::vector<double> max_abs_diff;  // per mode
    double max_abs() const {
        double worst = 0.0;
        for (double v : max_abs_diff) worst = std::max(worst, v);
        return worst;
    }
};

inline SnapshotDiff compare_snapshots(const Snapshot& a, const Snapshot& b) {
    if (a.theta.size() != b.theta.size() || a.x.size() != b.x.size())
        throw ConfigError("snapshots differ in shape");
    SnapshotDiff d;
    for (std::size_t i = 0; i < a.x.size(); ++i) d.max_x_diff = std::max(d.max_x_diff, std::abs(a.x[i] - b.x[i]));
    d.max_abs_diff.assign(a.theta.size(), 0.0);
    for (std::size_t n = 0; n < a.theta.size(); ++n)
        for (std::size_t i = 0; i < a.x.size(); ++i)
            d.max_abs_diff[n] = std::max(d.max_abs_diff[n], std::abs(a.theta[n][i] - b.theta[n][i]));
    return d;
}

inline nlohmann::json to_json(const DiagnosticSample& s) {
    nlohmann::json j = {{"step", s.step},
                        {"t", s.t},
                        {"l2_per_mode", s.l2_per_mode},
                        {"vector_norm", s.vector_norm},
                        {"max_amp_per_mode", s.max_amp_per_mode},
                        {"peak_count_mode1", s.peak_count_mode1}};
    if (s.conserved_hs) j["conserved_hs"] = *s.conserved_hs;
    return j;
}

inline nlohmann::json to_json(const StabilityReport& r) {
    return {{"tau_suggested", r.tau_suggested},
            {"tau_requested", r.tau_requested},
            {"alpha", r.alpha},
            {"growth_exponent_a", r.growth_exponent_a},
            {"growth_exponent_full", r.growth_exponent_full},
            {"rule_single", r.rule_single},
            {"rule_coupled", r.rule_coupled},
            {"dispersionless", r.dispersionless},
            {"verdict", to_string(r.verdict)}};
}

/// Delimited convergence table: h,tau,error,order,diverged.
inline std::string convergence_csv(const std::vector<ConvergenceRow>& rows) {
    std::string out = "h,tau,error_percent,order,diverged\n";
    for (const auto& r : rows) {
        out += format_real(r.h) + ',' + format_real(r.tau) + ',' + format_real(r.error) + ',';
        if (r.order_estimate) out += format_real(*r.order_estimate);
        out += r.diverged ? ",1\n" : ",0\n";
    }
    return out;
}

}  // namespace ckdv
