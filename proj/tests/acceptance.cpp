// Acceptance suite: every release criterion, one pass/fail line each.
//
//   1. codec round-trip identity + fuzz robustness          (< 5 s)
//   2. spacing solver vs full-resolution grid search        (< 30 s)
//   3. plant sanity: straight line + circle closure
//   4. zero-loss convergence of the bundled scenario
//   5. degradation trend across the PER sweep (Spearman)    (< 10 min)
//   6. severe-loss divergence at PER 0.6
//   7. byte-identical traces across two CLI invocations
//   8. metrics oracles and hand-built fixtures
//   9. loopback multicast exchange between two processes    (skip if unsupported)

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "openconvoy/angles.hpp"
#include "openconvoy/control.hpp"
#include "openconvoy/errors.hpp"
#include "openconvoy/metrics.hpp"
#include "openconvoy/net/codec.hpp"
#include "openconvoy/net/multicast.hpp"
#include "openconvoy/policy.hpp"
#include "openconvoy/sim/plant.hpp"
#include "openconvoy/sim/scenario.hpp"
#include "openconvoy/sim/scenario_io.hpp"

namespace fs = std::filesystem;
using namespace openconvoy;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
    bool pass = false;
    bool skipped = false;
    std::string detail;
};

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// ---------------------------------------------------------------- criterion 1

model::VehicleState random_state(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> lat(-90.0, 90.0);
    std::uniform_real_distribution<double> lon(-180.0, 180.0);
    std::uniform_real_distribution<double> alt(-100.0, 4000.0);
    std::uniform_real_distribution<double> speed(0.0, 60.0);
    std::uniform_real_distribution<double> heading(0.0, kTwoPi);
    std::uniform_real_distribution<double> accel(-10.0, 10.0);
    model::VehicleState s;
    s.vehicle_id = static_cast<model::VehicleId>(rng() % 16);
    s.timestamp_us = rng();
    s.sequence = static_cast<std::uint32_t>(rng());
    s.position = geo::GeoPoint{lat(rng), lon(rng), alt(rng)};
    s.speed_mps = speed(rng);
    s.heading_rad = heading(rng);
    s.accel_mps2 = accel(rng);
    return s;
}

Outcome criterion_codec() {
    const auto start = Clock::now();
    std::mt19937_64 rng(1001);
    for (int i = 0; i < 1000; ++i) {
        const model::VehicleState s = random_state(rng);
        const auto decoded = net::decode_bsm(net::encode_bsm(s));
        const auto* back = std::get_if<model::VehicleState>(&decoded);
        if (back == nullptr) return {false, false, "round-trip decode failed"};
        if (back->vehicle_id != s.vehicle_id || back->timestamp_us != s.timestamp_us ||
            back->sequence != s.sequence ||
            back->position.latitude_deg != s.position.latitude_deg ||
            back->position.longitude_deg != s.position.longitude_deg ||
            back->position.altitude_m != s.position.altitude_m ||
            back->speed_mps != s.speed_mps || back->heading_rad != s.heading_rad ||
            back->accel_mps2 != s.accel_mps2) {
            return {false, false, "round-trip mismatch at case " + std::to_string(i)};
        }
    }
    std::uniform_int_distribution<std::size_t> len(0, 256);
    for (int i = 0; i < 10000; ++i) {
        std::vector<std::uint8_t> junk(len(rng));
        for (auto& b : junk) b = static_cast<std::uint8_t>(rng());
        (void)net::decode_bsm(junk);  // must never crash or throw
    }
    const double elapsed = seconds_since(start);
    if (elapsed >= 5.0) {
        return {false, false, "took " + std::to_string(elapsed) + " s (budget 5 s)"};
    }
    char detail[96];
    std::snprintf(detail, sizeof(detail),
                  "1000 round-trips exact, 10000 fuzz frames, %.2f s", elapsed);
    return {true, false, detail};
}

// ---------------------------------------------------------------- criterion 2

Outcome criterion_solver_oracle() {
    const auto start = Clock::now();
    const geo::GeoPoint origin{28.6024, -81.2001, 0.0};
    std::mt19937_64 rng(2002);
    std::uniform_real_distribution<double> pos(-40.0, 40.0);
    std::uniform_real_distribution<double> ahead(5.0, 60.0);
    std::uniform_real_distribution<double> heading(0.0, kTwoPi);
    std::uniform_real_distribution<double> vmax_dist(1.0, 5.0);
    std::uniform_real_distribution<double> dt_dist(0.05, 0.5);
    std::uniform_int_distribution<int> pred_count(1, 3);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    constexpr double kSpeedStep = 0.01;
    constexpr double kHeadingStep = 0.001;
    const int heading_steps = static_cast<int>(kTwoPi / kHeadingStep) + 1;
    std::vector<double> sin_table(static_cast<std::size_t>(heading_steps));
    std::vector<double> cos_table(static_cast<std::size_t>(heading_steps));
    for (int i = 0; i < heading_steps; ++i) {
        sin_table[static_cast<std::size_t>(i)] = std::sin(i * kHeadingStep);
        cos_table[static_cast<std::size_t>(i)] = std::cos(i * kHeadingStep);
    }

    for (int instance = 0; instance < 100; ++instance) {
        const model::VehicleId ego_id = 3;
        auto make = [&](model::VehicleId id, geo::EnuPoint at, double h,
                        std::uint32_t seq) {
            model::VehicleState s;
            s.vehicle_id = id;
            s.timestamp_us = 0;
            s.sequence = seq;
            s.position = geo::geodetic_from_enu(origin, at);
            s.speed_mps = 1.0;
            s.heading_rad = wrap_two_pi(h);
            return s;
        };
        model::StateStore store(ego_id, 10, 1000000,
                                make(ego_id, {pos(rng), pos(rng), 0.0}, heading(rng), 0));
        const int preds = pred_count(rng);
        for (int p = 0; p < preds; ++p) {
            if (store.insert(make(static_cast<model::VehicleId>(p),
                                  {pos(rng), pos(rng) + ahead(rng), 0.0}, heading(rng),
                                  1),
                             policy::rx_gate_all_predecessor) !=
                model::InsertResult::accepted) {
                return {false, false, "instance setup failed"};
            }
        }
        model::ConvoyConfig config;
        config.vehicle_count = 4;
        config.ego_index = ego_id;
        config.v_max_mps = vmax_dist(rng);
        const double dt = dt_dist(rng);
        const auto snap = store.snapshot(0);

        const auto cmd = policy::solve_targets(snap, config, origin, dt);
        if (!cmd.valid) return {false, false, "solver returned invalid"};
        const double solved_cost = policy::sigma_platooning_cost(
            cmd.target_speed_mps, cmd.target_heading_rad, snap, config, origin, dt);

        // Goal geometry for the inlined cost, spot-checked against the library
        // sigma below so the fast grid minimizes the very same function.
        const geo::EnuPoint ego_enu =
            geo::enu_from_geodetic(origin, snap.latest(ego_id)->position);
        std::vector<geo::EnuPoint> goals;
        for (int p = 0; p < preds; ++p) {
            const auto pred = snap.fresh_latest(static_cast<model::VehicleId>(p));
            goals.push_back(policy::predecessor_goal_point(
                *pred, ego_id, p, config.desired_gap_m, origin));
        }
        const auto inline_cost = [&](double v, double sin_h, double cos_h) {
            const double pe = ego_enu.east_m + dt * v * sin_h;
            const double pn = ego_enu.north_m + dt * v * cos_h;
            double cost = 0.0;
            for (const auto& g : goals) {
                const double de = g.east_m - pe;
                const double dn = g.north_m - pn;
                cost += de * de + dn * dn;
            }
            return cost;
        };
        for (int check = 0; check < 25; ++check) {
            const double v = unit(rng) * config.v_max_mps;
            const double h = unit(rng) * kTwoPi;
            const double lib =
                policy::sigma_platooning_cost(v, h, snap, config, origin, dt);
            const double fast = inline_cost(v, std::sin(h), std::cos(h));
            if (std::abs(lib - fast) > 1e-9 * (1.0 + lib)) {
                return {false, false, "inlined cost diverged from sigma"};
            }
        }

        double best = std::numeric_limits<double>::infinity();
        for (double v = 0.0; v <= config.v_max_mps + 1e-12; v += kSpeedStep) {
            for (int ih = 0; ih < heading_steps; ++ih) {
                const double cost = inline_cost(v, sin_table[static_cast<std::size_t>(ih)],
                                                cos_table[static_cast<std::size_t>(ih)]);
                if (cost < best) best = cost;
            }
        }
        if (solved_cost > best + 1e-6) {
            char detail[128];
            std::snprintf(detail, sizeof(detail),
                          "grid beat the solver by %.3g at instance %d",
                          solved_cost - best, instance);
            return {false, false, detail};
        }
    }
    const double elapsed = seconds_since(start);
    if (elapsed >= 30.0) {
        return {false, false, "took " + std::to_string(elapsed) + " s (budget 30 s)"};
    }
    char detail[96];
    std::snprintf(detail, sizeof(detail),
                  "100 instances at 0.01 m/s x 0.001 rad, %.1f s", elapsed);
    return {true, false, detail};
}

// ---------------------------------------------------------------- criterion 3

Outcome criterion_plant() {
    sim::PlantParams params;
    params.speed_lag_s = 0.0;
    sim::Pose pose{geo::EnuPoint{0.0, 0.0, 0.0}, 0.0, 1.0};
    for (int i = 0; i < 1000; ++i) {
        pose = sim::bicycle_step(pose, control::Actuation{1.0, 0.0}, params, 0.05);
        if (std::abs(pose.position.east_m) > 1e-9) {
            return {false, false, "straight line drifted east"};
        }
        const double expected_north = 0.05 * (i + 1);
        if (std::abs(pose.position.north_m - expected_north) > 1e-9 * (i + 1)) {
            return {false, false, "straight line lost distance"};
        }
    }

    params.wheelbase_m = 0.3;
    params.max_steer_rad = 0.5;
    const double steer = 0.3;
    const double speed = 1.0;
    const double radius = params.wheelbase_m / std::tan(steer);
    const double period = kTwoPi * radius / speed;
    const double dt = 0.002;
    const int steps = static_cast<int>(std::round(period / dt));
    sim::Pose circle{geo::EnuPoint{0.0, 0.0, 0.0}, 0.0, speed};
    for (int i = 0; i < steps; ++i) {
        circle = sim::bicycle_step(circle, control::Actuation{speed, steer}, params, dt);
    }
    const double closure =
        std::hypot(circle.position.east_m, circle.position.north_m);
    if (closure >= 0.01 * radius) {
        char detail[96];
        std::snprintf(detail, sizeof(detail), "circle closure %.4f m vs radius %.3f m",
                      closure, radius);
        return {false, false, detail};
    }
    char detail[96];
    std::snprintf(detail, sizeof(detail),
                  "straight line exact, circle closure %.2f%% of radius",
                  100.0 * closure / radius);
    return {true, false, detail};
}

// ---------------------------------------------------------------- criterion 4

bool in_settling_window(double t, const std::vector<double>& jumps) {
    for (double jump : jumps) {
        if (t >= jump && t < jump + 15.0) return true;
    }
    return false;
}

std::vector<double> profile_jump_times(const sim::ScenarioConfig& config) {
    // The convoy starts from standstill, so t = 0 is the first speed jump.
    std::vector<double> jumps{0.0};
    for (std::size_t i = 1; i < config.leader_profile.size(); ++i) {
        if (config.leader_profile[i].speed_mps !=
            config.leader_profile[i - 1].speed_mps) {
            jumps.push_back(config.leader_profile[i - 1].until_s);
        }
    }
    return jumps;
}

Outcome criterion_zero_loss_convergence() {
    const auto start = Clock::now();
    sim::ScenarioConfig config = sim::paper_repro_scenario();
    config.follower_per = {0.0};
    const auto result = sim::run_scenario(config);
    const double elapsed = seconds_since(start);
    const std::vector<double> jumps = profile_jump_times(config);

    double worst = 0.0;
    for (const sim::TraceRow& row : result.trace.rows) {
        if (in_settling_window(row.time_s, jumps)) continue;
        for (const sim::FollowerTick& f : row.followers) {
            worst = std::max(worst, std::abs(f.gap_m - config.convoy.desired_gap_m));
        }
    }
    const double bound = 0.10 * config.convoy.desired_gap_m;  // 1.5 m at 15 m
    if (worst > bound) {
        char detail[128];
        std::snprintf(detail, sizeof(detail),
                      "steady-state error %.3f m exceeds %.1f m", worst, bound);
        return {false, false, detail};
    }
    if (elapsed >= 10.0) {
        return {false, false, "run took " + std::to_string(elapsed) + " s (budget 10 s)"};
    }
    char detail[128];
    std::snprintf(detail, sizeof(detail),
                  "worst steady-state error %.3f m <= %.1f m, run %.2f s", worst,
                  bound, elapsed);
    return {true, false, detail};
}

// ------------------------------------------------------- criteria 5 and 6

double spearman_rho(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    const auto ranks = [](const std::vector<double>& values) {
        const std::size_t n = values.size();
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        std::vector<double> rank(n);
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
            const double mean_rank = (static_cast<double>(i) + static_cast<double>(j)) /
                                     2.0 + 1.0;
            for (std::size_t k = i; k <= j; ++k) rank[order[k]] = mean_rank;
            i = j + 1;
        }
        return rank;
    };
    const std::vector<double> rx = ranks(x);
    const std::vector<double> ry = ranks(y);
    const double mean = (static_cast<double>(n) + 1.0) / 2.0;
    double num = 0.0, dx = 0.0, dy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        num += (rx[i] - mean) * (ry[i] - mean);
        dx += (rx[i] - mean) * (rx[i] - mean);
        dy += (ry[i] - mean) * (ry[i] - mean);
    }
    return num / std::sqrt(dx * dy);
}

struct SweepOutcome {
    Outcome trend;
    Outcome divergence;
};

SweepOutcome criteria_sweep() {
    const auto start = Clock::now();
    const std::vector<double> levels{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
    const int seed_count = 20;

    sim::ScenarioConfig base = sim::paper_repro_scenario();
    std::map<metrics::SweepKey, sim::Trace> traces;
    std::map<double, std::vector<double>> p95_by_level;
    for (double per : levels) {
        for (int s = 0; s < seed_count; ++s) {
            sim::ScenarioConfig config = base;
            config.follower_per = {per};
            config.seed = static_cast<std::uint64_t>(s + 1);
            auto result = sim::run_scenario(config);
            const auto run = metrics::run_metrics(result.trace,
                                                  config.convoy.desired_gap_m);
            p95_by_level[per].push_back(run.worst_p95_error_m);
            traces.emplace(metrics::SweepKey{per, config.seed},
                           std::move(result.trace));
        }
    }
    const metrics::SweepSummary summary =
        metrics::sweep_aggregate(traces, base.convoy.desired_gap_m);

    std::vector<double> pers, speed_means, p95_means;
    for (const auto& row : summary.rows) {
        pers.push_back(row.per);
        speed_means.push_back(row.mean_speed_difference_mps);
        p95_means.push_back(row.p95_platooning_error_m);
    }
    const double rho_speed = spearman_rho(pers, speed_means);
    const double rho_error = spearman_rho(pers, p95_means);
    const double elapsed = seconds_since(start);

    SweepOutcome out;
    char detail[160];
    if (rho_speed < 0.8 || rho_error < 0.8) {
        std::snprintf(detail, sizeof(detail),
                      "Spearman rho: speed %.3f, p95 error %.3f (need >= 0.8)",
                      rho_speed, rho_error);
        out.trend = {false, false, detail};
    } else if (elapsed >= 600.0) {
        out.trend = {false, false,
                     "sweep took " + std::to_string(elapsed) + " s (budget 600 s)"};
    } else {
        std::snprintf(detail, sizeof(detail),
                      "Spearman rho: speed %.3f, p95 error %.3f over 7 levels x 20 "
                      "seeds, %.0f s",
                      rho_speed, rho_error, elapsed);
        out.trend = {true, false, detail};
    }

    const auto median = [](std::vector<double> values) {
        std::sort(values.begin(), values.end());
        const std::size_t n = values.size();
        return n % 2 == 1 ? values[n / 2]
                          : 0.5 * (values[n / 2 - 1] + values[n / 2]);
    };
    const double at_zero = median(p95_by_level[0.0]);
    const double at_sixty = median(p95_by_level[0.6]);
    if (at_sixty >= 2.0 * at_zero) {
        std::snprintf(detail, sizeof(detail),
                      "median p95 error: %.3f m at PER 0.6 vs %.3f m at PER 0 "
                      "(factor %.1f)",
                      at_sixty, at_zero, at_sixty / at_zero);
        out.divergence = {true, false, detail};
    } else {
        std::snprintf(detail, sizeof(detail),
                      "median p95 at PER 0.6 = %.3f m, at PER 0 = %.3f m: factor "
                      "%.2f < 2",
                      at_sixty, at_zero, at_sixty / at_zero);
        out.divergence = {false, false, detail};
    }
    return out;
}

// ---------------------------------------------------------------- criterion 7

Outcome criterion_cli_determinism(const std::string& cli) {
    if (cli.empty()) return {false, false, "no --cli path provided"};
    const fs::path root = fs::temp_directory_path() / "openconvoy_acceptance";
    fs::remove_all(root);
    fs::create_directories(root);
    const std::string common = " run --per 0.3 --duration 20 --seed 11 --out ";
    const auto invoke = [&](const std::string& dir) {
        const std::string command =
            cli + common + dir + " > " + dir + "_log 2>&1";
        return std::system(command.c_str());
    };
    const fs::path dir_a = root / "a";
    const fs::path dir_b = root / "b";
    if (invoke(dir_a.string()) != 0 || invoke(dir_b.string()) != 0) {
        return {false, false, "CLI invocation failed"};
    }
    const auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream buffer;
        buffer << in.rdbuf();
        return buffer.str();
    };
    const std::string a = slurp(dir_a / "paper-repro" / "0.3" / "11" / "trace.csv");
    const std::string b = slurp(dir_b / "paper-repro" / "0.3" / "11" / "trace.csv");
    if (a.empty() || a != b) {
        return {false, false, "trace files differ or are empty"};
    }
    return {true, false, "two invocations, byte-identical trace.csv"};
}

// ---------------------------------------------------------------- criterion 8

Outcome criterion_metrics_oracles() {
    std::mt19937_64 rng(8008);
    std::uniform_real_distribution<double> value(-100.0, 100.0);
    std::uniform_int_distribution<int> size(1, 500);
    for (int i = 0; i < 300; ++i) {
        std::vector<double> values(static_cast<std::size_t>(size(rng)));
        for (auto& v : values) v = value(rng);
        // Selection oracle: smallest value with ceil(0.95 N) at or below it.
        const std::size_t need = static_cast<std::size_t>(
            std::ceil(0.95 * static_cast<double>(values.size())));
        double oracle = std::numeric_limits<double>::infinity();
        for (double candidate : values) {
            std::size_t at_or_below = 0;
            for (double v : values) {
                if (v <= candidate) ++at_or_below;
            }
            if (at_or_below >= need) oracle = std::min(oracle, candidate);
        }
        if (metrics::percentile_95(values) != oracle) {
            return {false, false, "percentile_95 disagreed with the oracle"};
        }
    }

    // Hand-built fixture: gaps and speeds with exact hand-computed answers.
    sim::Trace trace;
    trace.vehicle_count = 3;
    const double gaps[3][2] = {{15.0, 17.3}, {12.0, 15.0}, {16.5, 13.75}};
    const double speeds[3][3] = {{1.0, 1.2, 0.8}, {2.0, 2.0, 2.0}, {0.5, 1.75, 1.0}};
    for (int i = 0; i < 3; ++i) {
        sim::TraceRow row;
        row.time_s = i * 0.05;
        for (double speed : speeds[i]) {
            sim::VehicleTick v;
            v.speed_mps = speed;
            row.vehicles.push_back(v);
        }
        for (double gap : gaps[i]) {
            sim::FollowerTick f;
            f.gap_m = gap;
            row.followers.push_back(f);
        }
        trace.rows.push_back(row);
    }
    const auto errors = metrics::platooning_error(trace, 15.0);
    // Expected values written as the defining arithmetic so the comparison is
    // bit-exact (|17.3 - 15.0| is not the literal 2.3 in binary floats).
    const double expected_errors[2][3] = {{15.0 - 15.0, 15.0 - 12.0, 16.5 - 15.0},
                                          {17.3 - 15.0, 15.0 - 15.0, 15.0 - 13.75}};
    for (int f = 0; f < 2; ++f) {
        for (int i = 0; i < 3; ++i) {
            if (errors[static_cast<std::size_t>(f)].values[static_cast<std::size_t>(i)] !=
                expected_errors[f][i]) {
                return {false, false, "platooning error fixture mismatch"};
            }
        }
    }
    const auto speed_diff = metrics::speed_difference(trace);
    const double expected_diff[3] = {0.4, 0.0, 1.25};
    for (int i = 0; i < 3; ++i) {
        if (std::abs(speed_diff.values[static_cast<std::size_t>(i)] -
                     expected_diff[i]) > 1e-12) {
            return {false, false, "speed difference fixture mismatch"};
        }
    }
    return {true, false, "percentile oracle (300 cases) + exact fixtures"};
}

// ---------------------------------------------------------------- criterion 9

Outcome criterion_multicast_loopback() {
    net::MulticastConfig config;
    config.port = 47011;  // keep clear of any concurrently running default
    if (!net::MulticastTransport::available(config)) {
        return {false, true, "no multicast-capable interface on this host"};
    }
    constexpr int kFrames = 120;

    const pid_t child = fork();
    if (child < 0) return {false, false, "fork failed"};
    if (child == 0) {
        // Child: vehicle 1 broadcasts kFrames states, then exits.
        try {
            net::MulticastTransport tx(config, 1);
            usleep(200 * 1000);  // let the parent join the group
            model::VehicleState s;
            s.vehicle_id = 1;
            s.position = geo::GeoPoint{28.6, -81.2, 0.0};
            for (int i = 0; i < kFrames; ++i) {
                s.sequence = static_cast<std::uint32_t>(i + 1);
                s.timestamp_us = static_cast<std::uint64_t>(i) * 1000;
                tx.send(net::encode_bsm(s));
                usleep(2 * 1000);
            }
            usleep(100 * 1000);
            _exit(0);
        } catch (...) {
            _exit(3);
        }
    }

    // Parent: vehicle 0 listens, also transmits a few frames of its own to
    // prove the self-filter.
    Outcome outcome{false, false, ""};
    try {
        net::MulticastTransport rx(config, 0);
        net::ReceivePipeline pipeline(net::LossModel{.per = 0.0, .rng_seed = 1});
        model::VehicleState own;
        own.vehicle_id = 0;
        own.position = geo::GeoPoint{28.6, -81.2, 0.0};
        int received = 0;
        std::uint32_t last_sequence = 0;
        bool wrong_sender = false;
        const auto deadline = Clock::now() + std::chrono::seconds(10);
        int own_sent = 0;
        while (Clock::now() < deadline && received < kFrames) {
            if (own_sent < 10) {
                own.sequence = static_cast<std::uint32_t>(++own_sent);
                rx.send(net::encode_bsm(own));
            }
            const auto datagram = rx.recv(50);
            if (!datagram) continue;
            const auto state = pipeline.process(*datagram);
            if (!state) continue;
            if (state->vehicle_id != 1) {
                wrong_sender = true;
                break;
            }
            if (state->sequence > last_sequence) {
                last_sequence = state->sequence;
                ++received;
            }
        }
        int status = 0;
        waitpid(child, &status, 0);
        if (wrong_sender) {
            outcome = {false, false, "received a frame not sent by the peer"};
        } else if (WIFEXITED(status) && WEXITSTATUS(status) != 0) {
            outcome = {false, false,
                       "sender process exited " + std::to_string(WEXITSTATUS(status))};
        } else if (received < 100) {
            outcome = {false, false,
                       "received only " + std::to_string(received) + "/120 frames"};
        } else if (rx.self_filtered() == 0) {
            outcome = {false, false, "self-frames were not filtered"};
        } else {
            outcome = {true, false,
                       "received " + std::to_string(received) + "/120 frames, " +
                           std::to_string(rx.self_filtered()) +
                           " self-frames filtered"};
        }
    } catch (const TransportError& e) {
        int status = 0;
        waitpid(child, &status, 0);
        outcome = {false, true, std::string("transport unavailable: ") + e.what()};
    }
    return outcome;
}

}  // namespace

int main(int argc, char** argv) {
    std::string cli;
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--cli") cli = argv[i + 1];
    }

    struct Criterion {
        const char* name;
        std::function<Outcome()> run;
    };

    SweepOutcome sweep_results;  // criteria 5 and 6 share one sweep
    bool sweep_done = false;
    const auto ensure_sweep = [&]() {
        if (!sweep_done) {
            sweep_results = criteria_sweep();
            sweep_done = true;
        }
    };

    const std::vector<Criterion> criteria = {
        {"1 codec round-trip identity and fuzz robustness", criterion_codec},
        {"2 spacing solver matches full-resolution grid search",
         criterion_solver_oracle},
        {"3 plant straight-line and circle-closure sanity", criterion_plant},
        {"4 zero-loss convergence of the bundled scenario",
         criterion_zero_loss_convergence},
        {"5 degradation trend across the PER sweep",
         [&]() {
             ensure_sweep();
             return sweep_results.trend;
         }},
        {"6 severe-loss divergence at PER 0.6",
         [&]() {
             ensure_sweep();
             return sweep_results.divergence;
         }},
        {"7 byte-identical traces across CLI invocations",
         [&]() { return criterion_cli_determinism(cli); }},
        {"8 metrics oracles and hand-built fixtures", criterion_metrics_oracles},
        {"9 loopback multicast between two processes", criterion_multicast_loopback},
    };

    int failed = 0;
    for (const Criterion& criterion : criteria) {
        Outcome outcome;
        try {
            outcome = criterion.run();
        } catch (const std::exception& e) {
            outcome = {false, false, std::string("exception: ") + e.what()};
        }
        const char* verdict = outcome.skipped ? "SKIP" : (outcome.pass ? "PASS" : "FAIL");
        std::cout << "[" << verdict << "] criterion " << criterion.name;
        if (!outcome.detail.empty()) std::cout << " — " << outcome.detail;
        std::cout << "\n";
        if (!outcome.pass && !outcome.skipped) ++failed;
    }
    if (failed != 0) {
        std::cout << failed << " criterion(s) failed\n";
        return 1;
    }
    std::cout << "all criteria passed\n";
    return 0;
}
