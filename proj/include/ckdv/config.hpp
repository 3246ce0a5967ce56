#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ckdv/analytic.hpp"
#include "ckdv/error.hpp"
#include "ckdv/model.hpp"

namespace ckdv {

struct GridSpec {
    double x0 = -20.0;
    double x1 = 20.0;
    double h = 0.1;
    Boundary boundary = Boundary::Periodic;

    /// Node count: (x1 - x0) / h for periodic grids (x1 is identified with
    /// x0), one more for zero-padded grids, which keep both endpoints.
    std::size_t n_points() const {
        if (!(h > 0.0)) throw ConfigError("grid.h must be positive");
        if (!(x1 > x0)) throw ConfigError("grid.x1 must exceed grid.x0");
        const double cells = (x1 - x0) / h;
        const double rounded = std::round(cells);
        if (std::abs(cells - rounded) > 1e-9 * std::max(1.0, std::abs(cells)))
            throw ConfigError("(x1 - x0) / h must be an integer");
        const auto n = static_cast<std::size_t>(rounded);
        const std::size_t points = boundary == Boundary::Periodic ? n : n + 1;
        if (points < 5) throw ConfigError("grid needs at least 5 points for the i+-2 stencil");
        return points;
    }

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct TimeSpec {
    double t0 = 1.0;
    std::optional<double> tau;  // empty: chosen by the stability rule
    double alpha = 1.0;

    friend bool operator==(const TimeSpec&, const TimeSpec&) = default;
};

/// Recording cadence. Each of snapshots and diagnostics may be keyed by step
/// count or by time interval (0 disables that key). Step 0 and the final step
/// are always recorded.
struct OutputSpec {
    std::string directory = "out";
    std::size_t snapshot_every = 0;
    double snapshot_interval = 0.0;
    std::size_t diagnostics_every = 0;
    double diagnostics_interval = 0.0;
    bool plot = false;

    friend bool operator==(const OutputSpec&, const OutputSpec&) = default;
};

struct RunConfig {
    std::string scenario;
    CoupledSystem system = hs_integrable_system();
    GridSpec grid;
    TimeSpec time;
    InitialCondition ic;
    OutputSpec output;
    std::optional<double> error_amplitude;  // default: mode-1 peak of the initial state
    bool force_unstable = false;
    std::string note;

    void validate() const {
        grid.n_points();
        if (!(time.t0 >= 0.0) || !std::isfinite(time.t0)) throw ConfigError("time.t0 must be >= 0");
        if (time.tau && !(*time.tau > 0.0)) throw ConfigError("time.tau must be positive");
        if (!(time.alpha > 0.0)) throw ConfigError("time.alpha must be positive");
        if (output.snapshot_interval < 0.0 || output.diagnostics_interval < 0.0)
            throw ConfigError("output intervals must be non-negative");
        if (error_amplitude && !(*error_amplitude > 0.0)) throw ConfigError("error_amplitude must be positive");
    }

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// ---------------------------------------------------------------------------
// JSON mapping. Coupling entries are written 1-based as [m, k, n, value].

namespace detail {

using nlohmann::json;

inline json system_to_json(const CoupledSystem& sys) {
    json couplings = json::array();
    for (const auto& c : sys.couplings()) couplings.push_back({c.m + 1, c.k + 1, c.n + 1, c.value});
    return {{"label", sys.label()}, {"c", sys.c()}, {"d", sys.d()}, {"couplings", couplings}};
}

inline CoupledSystem system_from_json(const json& j) {
    if (j.is_string()) {
        const auto name = j.get<std::string>();
        if (name == "hs-integrable") return hs_integrable_system();
        if (name == "hs-nonintegrable") return hs_nonintegrable_system();
        if (name == "kdv-hs-mode1") return hs_first_mode_kdv();
        throw ConfigError("unknown system preset '" + name + "'");
    }
    if (!j.is_object()) throw ConfigError("system must be a preset name or an object");
    auto c = j.at("c").get<std::vector<double>>();
    auto d = j.at("d").get<std::vector<double>>();
    if (c.size() != d.size()) throw ConfigError("system.c and system.d differ in length");
    std::vector<Coupling> terms;
    for (const auto& e : j.value("couplings", json::array())) {
        if (!e.is_array() || e.size() != 4) throw ConfigError("couplings entries are [m, k, n, value]");
        const auto m = e[0].get<long>(), k = e[1].get<long>(), n = e[2].get<long>();
        const auto N = static_cast<long>(c.size());
        if (m < 1 || k < 1 || n < 1 || m > N || k > N || n > N)
            throw ConfigError("coupling index out of range (indices are 1-based)");
        terms.push_back({static_cast<std::size_t>(m - 1), static_cast<std::size_t>(k - 1),
                         static_cast<std::size_t>(n - 1), e[3].get<double>()});
    }
    try {
        return CoupledSystem::from_couplings(std::move(c), std::move(d), terms, j.value("label", std::string{}));
    } catch (const InvalidArgument& ex) {
        throw ConfigError(ex.what());
    }
}

inline Boundary boundary_from_string(const std::string& s) {
    if (s == "periodic") return Boundary::Periodic;
    if (s == "zero-padded" || s == "zero") return Boundary::ZeroPadded;
    throw ConfigError("unknown boundary '" + s + "'");
}

inline IcKind ic_kind_from_string(const std::string& s) {
    for (auto k : {IcKind::HsSoliton, IcKind::HsSolitonScaled, IcKind::Box, IcKind::Triangle, IcKind::Custom})
        if (s == to_string(k)) return k;
    throw ConfigError("unknown initial condition kind '" + s + "'");
}

inline json ic_to_json(const InitialCondition& ic) {
    json j = {{"kind", to_string(ic.kind)}};
    switch (ic.kind) {
        case IcKind::HsSolitonScaled:
            j["width_scale"] = ic.width_scale;
            j["amplitude_scale"] = ic.amplitude_scale;
            [[fallthrough]];
        case IcKind::HsSoliton:
            j["m"] = ic.soliton.m;
            j["d"] = ic.soliton.d;
            if (ic.soliton.allow_singular) j["allow_singular"] = true;
            break;
        case IcKind::Box:
        case IcKind::Triangle:
            j["center"] = ic.center;
            j["width"] = ic.width;
            j["height"] = ic.height;
            j["mode2_height"] = ic.mode2_height;
            break;
        case IcKind::Custom:
            j["samples"] = ic.samples;
            break;
    }
    return j;
}

inline InitialCondition ic_from_json(const json& j) {
    InitialCondition ic;
    ic.kind = ic_kind_from_string(j.at("kind").get<std::string>());
    ic.soliton.m = j.value("m", ic.soliton.m);
    ic.soliton.d = j.value("d", ic.soliton.d);
    ic.soliton.allow_singular = j.value("allow_singular", false);
    ic.width_scale = j.value("width_scale", ic.width_scale);
    ic.amplitude_scale = j.value("amplitude_scale", ic.amplitude_scale);
    ic.center = j.value("center", ic.center);
    ic.width = j.value("width", ic.width);
    ic.height = j.value("height", ic.height);
    ic.mode2_height = j.value("mode2_height", ic.mode2_height);
    if (j.contains("samples")) ic.samples = j.at("samples").get<std::vector<std::vector<double>>>();
    return ic;
}

}  // namespace detail

inline nlohmann::json to_json(const RunConfig& cfg) {
    using nlohmann::json;
    json time = {{"t0", cfg.time.t0}, {"alpha", cfg.time.alpha}};
    time["tau"] = cfg.time.tau ? json(*cfg.time.tau) : json("auto");
    json j = {
        {"system", detail::system_to_json(cfg.system)},
        {"grid",
         {{"x0", cfg.grid.x0}, {"x1", cfg.grid.x1}, {"h", cfg.grid.h}, {"boundary", to_string(cfg.grid.boundary)}}},
        {"time", time},
        {"ic", detail::ic_to_json(cfg.ic)},
        {"output",
         {{"directory", cfg.output.directory},
          {"snapshot_every", cfg.output.snapshot_every},
          {"snapshot_interval", cfg.output.snapshot_interval},
          {"diagnostics_every", cfg.output.diagnostics_every},
          {"diagnostics_interval", cfg.output.diagnostics_interval},
          {"plot", cfg.output.plot}}},
        {"force_unstable", cfg.force_unstable},
    };
    if (!cfg.scenario.empty()) j["scenario"] = cfg.scenario;
    if (cfg.error_amplitude) j["error_amplitude"] = *cfg.error_amplitude;
    if (!cfg.note.empty()) j["note"] = cfg.note;
    return j;
}

/// Parses a fully specified config object (no preset resolution).
inline RunConfig config_from_json(const nlohmann::json& j) {
    using nlohmann::json;
    try {
        RunConfig cfg;
        cfg.scenario = j.value("scenario", std::string{});
        if (j.contains("system")) cfg.system = detail::system_from_json(j.at("system"));
        if (j.contains("grid")) {
            const auto& g = j.at("grid");
            cfg.grid.x0 = g.value("x0", cfg.grid.x0);
            cfg.grid.x1 = g.value("x1", cfg.grid.x1);
            cfg.grid.h = g.value("h", cfg.grid.h);
            if (g.contains("boundary")) cfg.grid.boundary = detail::boundary_from_string(g.at("boundary").get<std::string>());
        }
        if (j.contains("time")) {
            const auto& t = j.at("time");
            cfg.time.t0 = t.value("t0", cfg.time.t0);
            cfg.time.alpha = t.value("alpha", cfg.time.alpha);
            if (t.contains("tau")) {
                const auto& tau = t.at("tau");
                if (tau.is_string()) {
                    if (tau.get<std::string>() != "auto") throw ConfigError("time.tau must be a number or \"auto\"");
                    cfg.time.tau.reset();
                } else {
                    cfg.time.tau = tau.get<double>();
                }
            }
        }
        if (j.contains("ic")) cfg.ic = detail::ic_from_json(j.at("ic"));
        if (j.contains("output")) {
            const auto& o = j.at("output");
            cfg.output.directory = o.value("directory", cfg.output.directory);
            cfg.output.snapshot_every = o.value("snapshot_every", cfg.output.snapshot_every);
            cfg.output.snapshot_interval = o.value("snapshot_interval", cfg.output.snapshot_interval);
            cfg.output.diagnostics_every = o.value("diagnostics_every", cfg.output.diagnostics_every);
            cfg.output.diagnostics_interval = o.value("diagnostics_interval", cfg.output.diagnostics_interval);
            cfg.output.plot = o.value("plot", cfg.output.plot);
        }
        if (j.contains("error_amplitude")) cfg.error_amplitude = j.at("error_amplitude").get<double>();
        cfg.force_unstable = j.value("force_unstable", false);
        cfg.note = j.value("note", std::string{});
        cfg.validate();
        return cfg;
    } catch (const json::exception& ex) {
        throw ConfigError(std::string("config: ") + ex.what());
    }
}

}  // namespace ckdv
