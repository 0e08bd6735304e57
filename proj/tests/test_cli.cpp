// End-to-end checks of the openconvoy binary: exit codes, artifact layout,
// and the determinism contract, all through the real subcommands.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "openconvoy/sim/trace.hpp"

namespace fs = std::filesystem;

namespace {

int failures = 0;

void check(bool ok, const std::string& what) {
    if (!ok) {
        ++failures;
        std::cerr << "FAIL: " << what << "\n";
    }
}

struct CommandResult {
    int exit_code = -1;
    std::string output;  // stdout + stderr
};

CommandResult run_command(const std::string& command) {
    const std::string log = (fs::temp_directory_path() / "openconvoy_cli_log").string();
    const int status = std::system((command + " >" + log + " 2>&1").c_str());
    CommandResult result;
    result.exit_code = WEXITSTATUS(status);
    std::ifstream in(log);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    result.output = buffer.str();
    return result;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace

int main(int argc, char** argv) {
    std::string cli;
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--cli") cli = argv[i + 1];
    }
    if (cli.empty()) {
        std::cerr << "usage: test_cli --cli <path-to-openconvoy>\n";
        return 2;
    }

    const fs::path root = fs::temp_directory_path() / "openconvoy_cli_test";
    fs::remove_all(root);
    fs::create_directories(root);

    // run: bundled scenario, short, writes trace + manifest + metrics.
    const fs::path out_a = root / "a";
    auto run = run_command(cli + " run --per 0 --duration 5 --seed 7 --out " +
                           out_a.string());
    check(run.exit_code == 0, "run exits 0: " + run.output);
    const fs::path cell = out_a / "paper-repro" / "0" / "7";
    check(fs::exists(cell / "trace.csv"), "trace.csv written");
    check(fs::exists(cell / "manifest.json"), "manifest.json written");
    check(fs::exists(cell / "metrics_summary.csv"), "metrics_summary.csv written");
    check(slurp(cell / "manifest.json").find("config_hash") != std::string::npos,
          "manifest carries the config hash");

    // The trace parses under the library reader.
    try {
        const auto trace = openconvoy::sim::read_trace_csv_file((cell / "trace.csv").string());
        check(trace.vehicle_count == 3, "trace has three vehicles");
        check(trace.rows.size() == 100, "5 s at 0.05 s control period = 100 rows");
    } catch (const std::exception& e) {
        check(false, std::string("trace parses: ") + e.what());
    }

    // Determinism: same seed, fresh directory, byte-identical trace.
    const fs::path out_b = root / "b";
    auto rerun = run_command(cli + " run --per 0 --duration 5 --seed 7 --out " +
                             out_b.string());
    check(rerun.exit_code == 0, "rerun exits 0");
    check(slurp(cell / "trace.csv") ==
              slurp(out_b / "paper-repro" / "0" / "7" / "trace.csv"),
          "same seed gives byte-identical traces");

    // Out-of-range PER is rejected before any run, naming the flag.
    auto bad_per = run_command(cli + " run --per 2.0 --out " + (root / "c").string());
    check(bad_per.exit_code != 0, "per 2.0 exits nonzero");
    check(bad_per.output.find("--per") != std::string::npos,
          "per 2.0 diagnostic names the option: " + bad_per.output);
    check(!fs::exists(root / "c" / "paper-repro"), "failed run writes nothing");

    // validate: builtin OK, broken file diagnosed with its line.
    auto ok = run_command(cli + " validate --scenario paper-repro");
    check(ok.exit_code == 0 && ok.output.find("OK") == 0, "validate paper-repro");

    const fs::path broken = root / "broken.json";
    std::ofstream(broken) << "{\n  \"vehicle_count\": 3,\n  oops\n}\n";
    auto bad = run_command(cli + " validate --scenario " + broken.string());
    check(bad.exit_code == 2, "broken scenario exits 2");
    check(bad.output.find("OC_CONFIG") != std::string::npos,
          "broken scenario reports OC_CONFIG: " + bad.output);
    check(bad.output.find(":3") != std::string::npos,
          "diagnostic carries the line number: " + bad.output);

    auto missing = run_command(cli + " validate --scenario " +
                               (root / "nope.json").string());
    check(missing.exit_code == 2, "missing scenario exits 2");

    // metrics: recompute from the archived trace without re-simulation.
    const fs::path metrics_dir = root / "metrics";
    auto metrics = run_command(cli + " metrics --trace " +
                               (cell / "trace.csv").string() + " --gap 15 --out " +
                               metrics_dir.string());
    check(metrics.exit_code == 0, "metrics exits 0: " + metrics.output);
    check(fs::exists(metrics_dir / "platooning_error.csv"), "error series written");
    check(fs::exists(metrics_dir / "speed_difference.csv"), "speed series written");

    const fs::path empty = root / "empty.csv";
    std::ofstream(empty).close();
    auto empty_result = run_command(cli + " metrics --trace " + empty.string());
    check(empty_result.exit_code == 4, "empty trace exits 4 (OC_TRACE)");
    check(empty_result.output.find("OC_TRACE") != std::string::npos,
          "empty trace reports OC_TRACE");

    // sweep: cross product of levels and seeds, one summary row per level.
    const fs::path sweep_out = root / "sweep";
    auto sweep = run_command(cli + " sweep --per-list 0,0.5 --seeds 2 --duration 4" +
                             " --out " + sweep_out.string());
    check(sweep.exit_code == 0, "sweep exits 0: " + sweep.output);
    const std::string summary = slurp(sweep_out / "paper-repro" / "summary.csv");
    check(summary.find("# schema=1") == 0, "summary carries schema comment");
    int data_lines = 0;
    for (std::size_t pos = summary.find('\n'); pos != std::string::npos;
         pos = summary.find('\n', pos + 1)) {
        ++data_lines;
    }
    check(data_lines == 4, "summary = schema + header + 2 level rows");
    for (const char* cell_dir : {"0/1", "0/2", "0.5/1", "0.5/2"}) {
        check(fs::exists(sweep_out / "paper-repro" / cell_dir / "trace.csv"),
              std::string("sweep cell written: ") + cell_dir);
    }

    auto empty_sweep = run_command(cli + " sweep --per-list '' --out " +
                                   (root / "d").string());
    check(empty_sweep.exit_code != 0, "empty per-list value is a usage error");
    auto missing_list = run_command(cli + " sweep --out " + (root / "d").string());
    check(missing_list.exit_code != 0, "missing per-list is a usage error");
    check(missing_list.output.find("per-list") != std::string::npos,
          "missing per-list diagnostic names the flag: " + missing_list.output);

    if (failures == 0) {
        std::cout << "test_cli: all checks passed\n";
        return 0;
    }
    std::cerr << "test_cli: " << failures << " check(s) failed\n";
    return 1;
}
