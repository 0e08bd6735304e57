// openconvoy: run platooning scenarios, sweep packet error rates, and compute
// convoy metrics from trace files.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "openconvoy/errors.hpp"
#include "openconvoy/metrics.hpp"
#include "openconvoy/sim/scenario.hpp"
#include "openconvoy/sim/scenario_io.hpp"
#include "openconvoy/sim/trace.hpp"

namespace fs = std::filesystem;
using namespace openconvoy;

namespace {

constexpr const char* kVersion = "0.1.0";

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t hash = 0xCBF29CE484222325ULL;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001B3ULL;
    }
    return hash;
}

std::string hex64(std::uint64_t value) {
    char buffer[20];
    std::snprintf(buffer, sizeof(buffer), "%016llx",
                  static_cast<unsigned long long>(value));
    return buffer;
}

std::string iso8601_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buffer[32];
    std::tm tm_utc{};
    gmtime_r(&t, &tm_utc);
    std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buffer;
}

std::string format_per(double per) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%g", per);
    return buffer;
}

std::string default_output_root() {
    if (const char* env = std::getenv("OPENCONVOY_OUT"); env != nullptr && *env) {
        return env;
    }
    return "out";
}

struct ScenarioSource {
    sim::ScenarioConfig config;
    std::string path;  // "<builtin>" when the bundled scenario is used
    std::string raw_text;
};

ScenarioSource load_scenario(const std::string& scenario_arg) {
    ScenarioSource source;
    if (scenario_arg.empty() || scenario_arg == "paper-repro") {
        source.path = "<builtin:paper-repro>";
        source.raw_text = sim::paper_repro_scenario_json();
        source.config = sim::paper_repro_scenario();
        return source;
    }
    std::ifstream in(scenario_arg);
    if (!in) throw ConfigError("cannot open scenario file: " + scenario_arg);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    source.path = scenario_arg;
    source.raw_text = buffer.str();
    source.config = sim::load_scenario_json(source.raw_text, scenario_arg);
    return source;
}

struct Overrides {
    std::optional<double> per;
    std::optional<std::uint64_t> seed;
    std::optional<double> duration_s;
    std::optional<double> gap_m;
    std::optional<std::string> transport;
};

void apply_overrides(sim::ScenarioConfig& config, const Overrides& overrides) {
    if (overrides.per) config.follower_per = {*overrides.per};
    if (overrides.seed) config.seed = *overrides.seed;
    if (overrides.duration_s) config.duration_s = *overrides.duration_s;
    if (overrides.gap_m) config.convoy.desired_gap_m = *overrides.gap_m;
    if (overrides.transport) {
        if (*overrides.transport == "virtual") {
            config.transport = sim::TransportMode::virtual_clock;
        } else if (*overrides.transport == "multicast") {
            config.transport = sim::TransportMode::multicast;
        } else {
            throw ConfigError("--transport must be 'virtual' or 'multicast'",
                              "transport");
        }
    }
    config.validate();
}

void write_file(const fs::path& path, const std::string& contents) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << contents;
    if (!out.good()) throw std::runtime_error("short write to " + path.string());
}

void write_manifest(const fs::path& run_dir, const ScenarioSource& source,
                    const sim::ScenarioConfig& effective,
                    const std::vector<double>& per_levels,
                    const std::vector<std::uint64_t>& seeds) {
    const std::string effective_json = sim::scenario_to_json(effective);
    nlohmann::json manifest;
    manifest["tool_version"] = kVersion;
    manifest["scenario_file"] = source.path;
    manifest["scenario_file_hash"] = hex64(fnv1a64(source.raw_text));
    manifest["config_hash"] = hex64(fnv1a64(effective_json));
    manifest["effective_config"] = nlohmann::json::parse(effective_json);
    manifest["per_levels"] = per_levels;
    manifest["seeds"] = seeds;
    manifest["output_dir"] = run_dir.string();
    manifest["started_at"] = iso8601_now();
    write_file(run_dir / "manifest.json", manifest.dump(2) + "\n");
}

std::string series_csv(const std::vector<metrics::MetricSeries>& series) {
    std::ostringstream out;
    out << "# schema=1\n";
    out << "time_s";
    for (const auto& s : series) out << ',' << s.label;
    out << "\n";
    if (series.empty()) return out.str();
    for (std::size_t i = 0; i < series.front().times_s.size(); ++i) {
        char cell[32];
        std::snprintf(cell, sizeof(cell), "%.17g", series.front().times_s[i]);
        out << cell;
        for (const auto& s : series) {
            std::snprintf(cell, sizeof(cell), "%.17g", s.values[i]);
            out << ',' << cell;
        }
        out << "\n";
    }
    return out.str();
}

void write_run_metrics(const fs::path& dir, const sim::Trace& trace,
                       double desired_gap_m) {
    const auto errors = metrics::platooning_error(trace, desired_gap_m);
    write_file(dir / "platooning_error.csv", series_csv(errors));
    write_file(dir / "speed_difference.csv",
               series_csv({metrics::speed_difference(trace)}));

    const metrics::RunMetrics summary = metrics::run_metrics(trace, desired_gap_m);
    std::ostringstream out;
    out << "# schema=1\n";
    out << "metric,value\n";
    for (std::size_t f = 0; f < summary.p95_error_per_follower_m.size(); ++f) {
        out << "p95_platooning_error_veh" << (f + 1) << "_m,"
            << summary.p95_error_per_follower_m[f] << "\n";
    }
    out << "p95_platooning_error_worst_m," << summary.worst_p95_error_m << "\n";
    out << "mean_speed_difference_mps," << summary.mean_speed_difference_mps << "\n";
    write_file(dir / "metrics_summary.csv", out.str());
}

std::string per_label(const sim::ScenarioConfig& config) {
    const double first = config.follower_per.front();
    for (double per : config.follower_per) {
        if (per != first) return "mixed";
    }
    return format_per(first);
}

// One simulation cell: trace + manifest + metric files under its directory.
sim::Trace execute_cell(const ScenarioSource& source, const sim::ScenarioConfig& config,
                        const fs::path& out_root, bool quiet = false) {
    const fs::path dir =
        out_root / config.name / per_label(config) / std::to_string(config.seed);
    fs::create_directories(dir);
    write_manifest(dir, source, config, {config.follower_per.front()}, {config.seed});
    const sim::RunResult result = sim::run_scenario(config);
    write_file(dir / "trace.csv", sim::trace_to_csv(result.trace));
    write_run_metrics(dir, result.trace, config.convoy.desired_gap_m);
    if (!quiet) {
        std::cout << "wrote " << (dir / "trace.csv").string() << " ("
                  << result.trace.rows.size() << " rows)\n";
    }
    return result.trace;
}

int cmd_run(const std::string& scenario_arg, const Overrides& overrides,
            const std::string& out_arg) {
    ScenarioSource source = load_scenario(scenario_arg);
    apply_overrides(source.config, overrides);
    const fs::path out_root = out_arg.empty() ? default_output_root() : out_arg;
    const sim::Trace trace = execute_cell(source, source.config, out_root);
    const metrics::RunMetrics m =
        metrics::run_metrics(trace, source.config.convoy.desired_gap_m);
    std::cout << "p95 platooning error (worst follower): " << m.worst_p95_error_m
              << " m\nmean speed difference: " << m.mean_speed_difference_mps
              << " m/s\n";
    return 0;
}

int cmd_sweep(const std::string& scenario_arg, const Overrides& overrides,
              std::vector<double> per_levels, int seed_count,
              std::uint64_t seed_base, const std::string& out_arg) {
    if (per_levels.empty()) {
        throw ConfigError("--per-list must not be empty", "per-list");
    }
    for (double per : per_levels) {
        if (!(per >= 0.0 && per <= 1.0)) {
            throw ConfigError("per level out of [0, 1]: " + format_per(per),
                              "per-list");
        }
    }
    if (seed_count < 1) throw ConfigError("--seeds must be >= 1", "seeds");

    ScenarioSource source = load_scenario(scenario_arg);
    apply_overrides(source.config, overrides);
    const fs::path out_root = out_arg.empty() ? default_output_root() : out_arg;

    std::vector<std::uint64_t> seeds;
    for (int i = 0; i < seed_count; ++i) {
        seeds.push_back(seed_base + static_cast<std::uint64_t>(i));
    }

    const fs::path sweep_dir = out_root / source.config.name;
    fs::create_directories(sweep_dir);
    write_manifest(sweep_dir, source, source.config, per_levels, seeds);

    std::map<metrics::SweepKey, sim::Trace> traces;
    for (double per : per_levels) {
        for (std::uint64_t seed : seeds) {
            sim::ScenarioConfig config = source.config;
            config.follower_per = {per};
            config.seed = seed;
            try {
                traces.emplace(metrics::SweepKey{per, seed},
                               execute_cell(source, config, out_root, true));
            } catch (const std::exception& e) {
                throw std::runtime_error("sweep cell (per=" + format_per(per) +
                                         ", seed=" + std::to_string(seed) +
                                         ") failed: " + e.what());
            }
        }
    }

    const metrics::SweepSummary summary =
        metrics::sweep_aggregate(traces, source.config.convoy.desired_gap_m);
    std::ostringstream out;
    out << "# schema=1\n";
    out << "per,mean_speed_difference_mps,p95_platooning_error_m,seed_count\n";
    for (const auto& row : summary.rows) {
        out << format_per(row.per) << ',' << row.mean_speed_difference_mps << ','
            << row.p95_platooning_error_m << ',' << row.seed_count << "\n";
    }
    write_file(sweep_dir / "summary.csv", out.str());
    std::cout << "wrote " << (sweep_dir / "summary.csv").string() << " ("
              << summary.rows.size() << " levels x " << seed_count << " seeds)\n";
    return 0;
}

int cmd_metrics(const std::string& trace_path, double desired_gap_m,
                const std::string& out_arg) {
    const sim::Trace trace = sim::read_trace_csv_file(trace_path);
    if (trace.rows.empty()) throw MalformedTraceError("trace has no data rows");
    const fs::path out_dir = out_arg.empty() ? fs::path(trace_path).parent_path()
                                             : fs::path(out_arg);
    if (!out_dir.empty()) fs::create_directories(out_dir);
    write_run_metrics(out_dir.empty() ? fs::path(".") : out_dir, trace, desired_gap_m);
    const metrics::RunMetrics m = metrics::run_metrics(trace, desired_gap_m);
    std::cout << "p95 platooning error (worst follower): " << m.worst_p95_error_m
              << " m\nmean speed difference: " << m.mean_speed_difference_mps
              << " m/s\n";
    return 0;
}

int cmd_validate(const std::string& scenario_arg) {
    const ScenarioSource source = load_scenario(scenario_arg);
    std::cout << "OK " << source.config.name << " ("
              << source.config.convoy.vehicle_count << " vehicles, "
              << source.config.duration_s << " s)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cooperative-driving platooning simulator and metrics toolkit"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    std::string scenario;
    std::string out_dir;
    std::string trace_path;
    Overrides overrides;
    std::vector<double> per_levels;
    int seed_count = 1;
    std::uint64_t seed_base = 1;
    double gap = 15.0;

    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--scenario", scenario,
                        "Scenario JSON file, or 'paper-repro' for the bundled one");
        cmd->add_option("--out", out_dir, "Output root (default $OPENCONVOY_OUT or ./out)");
        cmd->add_option_function<double>(
               "--per", [&](double v) { overrides.per = v; },
               "Override packet error rate for every follower")
            ->check(CLI::Range(0.0, 1.0).description("in [0, 1]"));
        cmd->add_option_function<std::uint64_t>(
            "--seed", [&](std::uint64_t v) { overrides.seed = v; }, "Master RNG seed");
        cmd->add_option_function<double>(
            "--duration", [&](double v) { overrides.duration_s = v; },
            "Simulated duration in seconds");
        cmd->add_option_function<double>(
            "--gap", [&](double v) { overrides.gap_m = v; }, "Desired gap in meters");
        cmd->add_option_function<std::string>(
               "--transport", [&](std::string v) { overrides.transport = v; },
               "Transport: virtual (deterministic) or multicast (real sockets)")
            ->check(CLI::IsMember({"virtual", "multicast"}));
    };

    CLI::App* run = app.add_subcommand("run", "Run one scenario and write its trace");
    add_common(run);

    CLI::App* sweep =
        app.add_subcommand("sweep", "Run a PER x seed grid and aggregate metrics");
    add_common(sweep);
    sweep->add_option("--per-list", per_levels, "PER levels, e.g. 0,0.1,0.2")
        ->delimiter(',')
        ->check([](const std::string& token) {
            return token.empty() ? std::string("per level must not be empty")
                                 : std::string();
        });
    sweep->add_option("--seeds", seed_count, "Number of seeds per level");
    sweep->add_option("--seed-base", seed_base, "First seed value (default 1)");

    CLI::App* metrics_cmd =
        app.add_subcommand("metrics", "Recompute metrics from a trace CSV");
    metrics_cmd->add_option("--trace", trace_path, "Trace CSV path")->required();
    metrics_cmd->add_option("--gap", gap, "Desired gap in meters (default 15)");
    metrics_cmd->add_option("--out", out_dir, "Directory for metric CSVs");

    CLI::App* validate =
        app.add_subcommand("validate", "Validate a scenario file and exit");
    validate->add_option("--scenario", scenario,
                         "Scenario JSON file, or 'paper-repro'");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(scenario, overrides, out_dir);
        if (sweep->parsed()) {
            return cmd_sweep(scenario, overrides, per_levels, seed_count, seed_base,
                             out_dir);
        }
        if (metrics_cmd->parsed()) return cmd_metrics(trace_path, gap, out_dir);
        if (validate->parsed()) return cmd_validate(scenario);
    } catch (const ConfigError& e) {
        std::cerr << "error: OC_CONFIG: " << e.what() << "\n";
        return 2;
    } catch (const TransportError& e) {
        std::cerr << "error: OC_TRANSPORT: " << e.what() << "\n";
        return 3;
    } catch (const MalformedTraceError& e) {
        std::cerr << "error: OC_TRACE: " << e.what() << "\n";
        return 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: OC_CONFIG: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: OC_INTERNAL: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
