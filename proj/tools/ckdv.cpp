// Command-line driver: run, sweep, converge, compare and presets.
//
// Exit codes: 0 ok, 1 compare mismatch, 2 config error, 3 stability gate,
// 4 divergence.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <future>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ckdv/ckdv.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Overrides {
    bool force_unstable = false;
    std::optional<double> alpha;
    std::string out;
};

void add_override_flags(CLI::App* cmd, Overrides& o) {
    cmd->add_flag("--force-unstable", o.force_unstable, "Step even when the stability check fails");
    cmd->add_option("--alpha", o.alpha, "Safety factor for the automatic time step")->check(CLI::PositiveNumber);
    cmd->add_option("--out", o.out, "Output directory (overrides output.directory)");
}

/// A config argument is a JSON file path or the name of a built-in scenario.
json load_document(const std::string& arg) {
    if (fs::exists(arg)) {
        try {
            return json::parse(ckdv::read_text(arg));
        } catch (const json::parse_error& ex) {
            throw ckdv::ConfigError(arg + ": " + ex.what());
        }
    }
    for (const auto& [name, cfg] : ckdv::scenario_presets())
        if (name == arg) return json{{"scenario", name}};
    throw ckdv::ConfigError("'" + arg + "' is neither a file nor a scenario name");
}

ckdv::RunConfig apply(ckdv::RunConfig cfg, const Overrides& o) {
    if (o.force_unstable) cfg.force_unstable = true;
    if (o.alpha) cfg.time.alpha = *o.alpha;
    if (!o.out.empty()) cfg.output.directory = o.out;
    return cfg;
}

void report(const std::string& label, const ckdv::RunOutcome& r) {
    std::ostringstream line;
    line << label << ": ";
    switch (r.exit_code) {
        case ckdv::kExitOk: line << "completed"; break;
        case ckdv::kExitConfig: line << "config error"; break;
        case ckdv::kExitUnstable: line << "stability check failed"; break;
        case ckdv::kExitDiverged: line << "diverged"; break;
        default: line << "exit " << r.exit_code;
    }
    if (r.result) {
        line << ", " << r.result->steps << " steps to t = " << r.result->final_state.t;
        if (r.result->has_oracle) line << ", max %Error " << r.result->max_percent_error();
    }
    if (!r.message.empty()) line << " (" << r.message << ")";
    std::cout << line.str() << std::endl;
}

int cmd_run(const std::string& config_arg, const Overrides& o) {
    const auto cfg = apply(ckdv::resolve_config(load_document(config_arg)), o);
    const auto outcome = ckdv::run_scenario(cfg, cfg.output.directory);
    report(cfg.output.directory, outcome);
    return outcome.exit_code;
}

// "ic.m=0.8,1.0" -> path /ic/m and literal values (JSON where it parses).
std::pair<json::json_pointer, std::vector<json>> parse_vary(const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0) throw ckdv::ConfigError("--vary expects key=v1,v2,...: " + spec);
    std::string key = spec.substr(0, eq);
    std::replace(key.begin(), key.end(), '.', '/');
    std::vector<json> values;
    std::stringstream rest(spec.substr(eq + 1));
    std::string item;
    while (std::getline(rest, item, ',')) {
        if (item.empty()) continue;
        json v = json::parse(item, nullptr, false);
        values.push_back(v.is_discarded() ? json(item) : v);
    }
    if (values.empty()) throw ckdv::ConfigError("--vary " + spec + " lists no values");
    return {json::json_pointer("/" + key), values};
}

std::string value_label(const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

int cmd_sweep(const std::string& config_arg, const std::vector<std::string>& vary, const Overrides& o, unsigned jobs) {
    const json base = load_document(config_arg);
    std::vector<std::pair<json::json_pointer, std::vector<json>>> axes;
    for (const auto& v : vary) axes.push_back(parse_vary(v));

    // Cartesian product of the axes; each point gets its own directory.
    struct Point {
        std::string label;
        ckdv::RunConfig cfg;
    };
    std::vector<Point> points;
    std::vector<std::size_t> idx(axes.size(), 0);
    const auto root = o.out.empty() ? ckdv::resolve_config(base).output.directory : o.out;
    while (true) {
        json doc = base;
        std::string label;
        for (std::size_t a = 0; a < axes.size(); ++a) {
            const auto& [ptr, values] = axes[a];
            doc[ptr] = values[idx[a]];
            if (!label.empty()) label += '_';
            std::string key = ptr.to_string().substr(1);
            std::replace(key.begin(), key.end(), '/', '.');
            label += key + "=" + value_label(values[idx[a]]);
        }
        if (label.empty()) label = "base";
        Overrides per = o;
        per.out = (fs::path(root) / label).string();
        points.push_back({label, apply(ckdv::resolve_config(doc), per)});
        std::size_t a = 0;
        for (; a < axes.size(); ++a) {
            if (++idx[a] < axes[a].second.size()) break;
            idx[a] = 0;
        }
        if (a == axes.size()) break;
    }

    // Runs are independent; keep at most `jobs` in flight.
    std::vector<ckdv::RunOutcome> outcomes(points.size());
    const std::size_t width = std::max(1u, jobs);
    for (std::size_t start = 0; start < points.size(); start += width) {
        std::vector<std::future<ckdv::RunOutcome>> batch;
        const std::size_t stop = std::min(points.size(), start + width);
        for (std::size_t i = start; i < stop; ++i)
            batch.push_back(std::async(std::launch::async, [&, i] {
                return ckdv::run_scenario(points[i].cfg, points[i].cfg.output.directory);
            }));
        for (std::size_t i = start; i < stop; ++i) outcomes[i] = batch[i - start].get();
    }

    int worst = ckdv::kExitOk;
    json summary = json::array();
    for (std::size_t i = 0; i < points.size(); ++i) {
        report(points[i].label, outcomes[i]);
        worst = std::max(worst, outcomes[i].exit_code);
        json row = {{"label", points[i].label},
                    {"directory", points[i].cfg.output.directory},
                    {"exit_code", outcomes[i].exit_code}};
        if (outcomes[i].result && outcomes[i].result->has_oracle)
            row["max_percent_error"] = outcomes[i].result->max_percent_error();
        summary.push_back(row);
    }
    fs::create_directories(root);
    ckdv::write_text(fs::path(root) / "sweep.json", summary.dump(2) + "\n");
    return worst;
}

int cmd_converge(const std::string& config_arg, const std::vector<double>& h_list, std::optional<double> t0,
                 const Overrides& o) {
    const auto cfg = apply(ckdv::resolve_config(load_document(config_arg)), o);
    auto sorted = h_list;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    const auto rows = ckdv::convergence_study(cfg, sorted, t0.value_or(cfg.time.t0));
    const auto table = ckdv::convergence_csv(rows);
    fs::create_directories(cfg.output.directory);
    ckdv::write_text(fs::path(cfg.output.directory) / "convergence.csv", table);
    std::printf("%10s %12s %14s %8s\n", "h", "tau", "max %Error", "order");
    for (const auto& r : rows) {
        std::printf("%10.4g %12.4e %14.6g ", r.h, r.tau, r.error);
        if (r.order_estimate)
            std::printf("%8.3f", *r.order_estimate);
        else
            std::printf("%8s", "-");
        std::printf("%s\n", r.diverged ? "  diverged" : "");
    }
    return std::any_of(rows.begin(), rows.end(), [](const auto& r) { return r.diverged; }) ? ckdv::kExitDiverged
                                                                                           : ckdv::kExitOk;
}

int cmd_compare(const std::string& a, const std::string& b, double tol) {
    const auto diff = ckdv::compare_snapshots(ckdv::read_snapshot(a), ckdv::read_snapshot(b));
    std::cout << "max |dx| = " << ckdv::format_real(diff.max_x_diff) << '\n';
    for (std::size_t n = 0; n < diff.max_abs_diff.size(); ++n)
        std::cout << "max |d theta" << n + 1 << "| = " << ckdv::format_real(diff.max_abs_diff[n]) << '\n';
    const bool same = diff.max_abs() <= tol && diff.max_x_diff <= tol;
    std::cout << (same ? "match" : "differ") << " (tolerance " << ckdv::format_real(tol) << ")\n";
    return same ? 0 : 1;
}

int cmd_presets(const std::string& dump) {
    for (const auto& [name, cfg] : ckdv::scenario_presets()) {
        if (!dump.empty()) {
            if (name == dump) {
                std::cout << ckdv::to_json(cfg).dump(2) << '\n';
                return 0;
            }
            continue;
        }
        std::cout << name;
        if (!cfg.note.empty()) std::cout << "  -- " << cfg.note;
        std::cout << '\n';
    }
    if (!dump.empty()) throw ckdv::ConfigError("unknown scenario '" + dump + "'");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Explicit finite-difference solver for coupled KdV systems"};
    app.require_subcommand(1);

    std::string config_arg, snap_a, snap_b, dump;
    std::vector<std::string> vary;
    std::vector<double> h_list;
    std::optional<double> t0;
    double tol = 0.0;
    unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
    Overrides run_o, sweep_o, conv_o;

    auto* run = app.add_subcommand("run", "Integrate one configuration and write its outputs");
    run->add_option("config", config_arg, "JSON config file or scenario name")->required();
    add_override_flags(run, run_o);

    auto* sweep = app.add_subcommand("sweep", "Run a grid of parameter variations concurrently");
    sweep->add_option("config", config_arg, "JSON config file or scenario name")->required();
    sweep->add_option("--vary", vary, "key=v1,v2,... (dotted key into the config, repeatable)")->required();
    sweep->add_option("-j,--jobs", jobs, "Concurrent runs")->check(CLI::PositiveNumber);
    add_override_flags(sweep, sweep_o);

    auto* conv = app.add_subcommand("converge", "Mesh-refinement study against the analytic solution");
    conv->add_option("config", config_arg, "JSON config file or scenario name")->required();
    conv->add_option("--h-list", h_list, "Grid spacings, e.g. 0.4,0.2,0.1")->delimiter(',')->required();
    conv->add_option("--t0", t0, "Final time (default: the config's)");
    add_override_flags(conv, conv_o);

    auto* cmp = app.add_subcommand("compare", "Compare two snapshot CSV files");
    cmp->add_option("a", snap_a)->required()->check(CLI::ExistingFile);
    cmp->add_option("b", snap_b)->required()->check(CLI::ExistingFile);
    cmp->add_option("--tol", tol, "Largest acceptable absolute difference")->check(CLI::NonNegativeNumber);

    auto* presets = app.add_subcommand("presets", "List built-in scenarios");
    presets->add_option("--dump", dump, "Print the full config of one scenario");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : ckdv::kExitConfig;
    }

    try {
        if (*run) return cmd_run(config_arg, run_o);
        if (*sweep) return cmd_sweep(config_arg, vary, sweep_o, jobs);
        if (*conv) return cmd_converge(config_arg, h_list, t0, conv_o);
        if (*cmp) return cmd_compare(snap_a, snap_b, tol);
        if (*presets) return cmd_presets(dump);
    } catch (const ckdv::ConfigError& ex) {
        std::cerr << "config error: " << ex.what() << '\n';
        return ckdv::kExitConfig;
    } catch (const ckdv::InvalidArgument& ex) {
        std::cerr << "invalid argument: " << ex.what() << '\n';
        return ckdv::kExitConfig;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return 1;
    }
    return 0;
}
