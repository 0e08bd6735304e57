#include <chrono>
#include <cmath>
#include <memory>
#include <optional>
#include <thread>

#include "openconvoy/angles.hpp"
#include "openconvoy/errors.hpp"
#include "openconvoy/policy.hpp"
#include "openconvoy/sim/scenario.hpp"

namespace openconvoy::sim {

namespace {

constexpr double kMicrosPerSecond = 1e6;

std::uint64_t to_micros(double seconds) {
    return static_cast<std::uint64_t>(std::llround(seconds * kMicrosPerSecond));
}

// One simulated vehicle: plant ground truth plus everything the real stack
// would own (state store, receive pipeline, controller state, ENU anchor).
struct VehicleAgent {
    int index = 0;
    Pose pose;
    double last_accel_mps2 = 0.0;
    std::unique_ptr<model::StateStore> store;
    std::unique_ptr<net::ReceivePipeline> pipeline;
    std::unique_ptr<net::MulticastTransport> transport;  // multicast mode only
    std::optional<geo::GeoPoint> enu_anchor;  // leader's first received position
    policy::TargetCommand held_command;       // last valid solver output
    bool has_goal = false;
    double prev_speed_error = 0.0;
    std::uint32_t next_sequence = 1;
    ReceiverStats stats;
};

model::VehicleState state_from_pose(const VehicleAgent& agent,
                                    const geo::GeoPoint& origin,
                                    std::uint64_t now_us, std::uint32_t sequence) {
    return model::VehicleState{
        .vehicle_id = static_cast<model::VehicleId>(agent.index),
        .timestamp_us = now_us,
        .position = geo::geodetic_from_enu(origin, agent.pose.position),
        .speed_mps = agent.pose.speed_mps,
        .heading_rad = agent.pose.heading_rad,
        .accel_mps2 = agent.last_accel_mps2,
        .sequence = sequence,
    };
}

// Hands one raw datagram through a receiver's loss gate, decoder, and store.
void receive_frame(VehicleAgent& receiver, std::span<const std::uint8_t> frame,
                   const policy::RxGateFn& rx_gate) {
    ++receiver.stats.sent_to;
    auto state = receiver.pipeline->process(frame);
    const net::RxCounters& c = receiver.pipeline->counters();
    receiver.stats.dropped_loss = c.dropped_loss;
    receiver.stats.foreign = c.foreign;
    receiver.stats.malformed = c.malformed;
    if (!state) return;
    switch (receiver.store->insert(*state, rx_gate)) {
        case model::InsertResult::accepted:
            ++receiver.stats.delivered;
            if (!receiver.enu_anchor && state->vehicle_id == 0) {
                receiver.enu_anchor = state->position;
            }
            break;
        case model::InsertResult::rejected_gate:
            ++receiver.stats.rejected_gate;
            break;
        case model::InsertResult::rejected_sequence:
            ++receiver.stats.rejected_sequence;
            break;
    }
}

}  // namespace

void ScenarioConfig::validate() const {
    try {
        convoy.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what(), "convoy");
    }
    if (!(control_period_s > 0.0)) {
        throw ConfigError("control_period_s must be > 0", "control_period_s");
    }
    if (!(duration_s > 0.0)) throw ConfigError("duration_s must be > 0", "duration_s");
    const std::uint64_t dt_us = to_micros(control_period_s);
    const std::uint64_t broadcast_us = to_micros(convoy.broadcast_period_s);
    if (dt_us == 0) throw ConfigError("control_period_s too small", "control_period_s");
    if (broadcast_us % dt_us != 0) {
        throw ConfigError(
            "broadcast_period_s must be an integer multiple of control_period_s",
            "broadcast_period_s");
    }
    if (leader_profile.empty()) {
        throw ConfigError("leader_profile must have at least one step", "leader_profile");
    }
    double previous = 0.0;
    for (const LeaderProfileStep& step : leader_profile) {
        if (!(step.until_s > previous)) {
            throw ConfigError("leader_profile until_s must be strictly increasing",
                              "leader_profile");
        }
        if (!(step.speed_mps >= 0.0)) {
            throw ConfigError("leader_profile speed_mps must be >= 0", "leader_profile");
        }
        previous = step.until_s;
    }
    if (plants.empty()) throw ConfigError("plants must not be empty", "plants");
    if (plants.size() != 1 &&
        plants.size() != static_cast<std::size_t>(convoy.vehicle_count)) {
        throw ConfigError("plants must hold one entry or one per vehicle", "plants");
    }
    for (const PlantParams& plant : plants) {
        try {
            plant.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what(), "plants");
        }
    }
    if (convoy.vehicle_count > 1) {
        if (follower_per.empty()) {
            throw ConfigError("follower_per must not be empty", "follower_per");
        }
        if (follower_per.size() != 1 &&
            follower_per.size() != static_cast<std::size_t>(convoy.vehicle_count - 1)) {
            throw ConfigError("follower_per must hold one entry or one per follower",
                              "follower_per");
        }
    }
    for (double per : follower_per) {
        if (!(per >= 0.0 && per <= 1.0)) {
            throw ConfigError("packet error rate must be in [0, 1]", "follower_per");
        }
    }
    if (!initial_poses.empty() &&
        initial_poses.size() != static_cast<std::size_t>(convoy.vehicle_count)) {
        throw ConfigError("initial_poses must hold one pose per vehicle",
                          "initial_poses");
    }
    try {
        geo::validate(origin);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what(), "origin");
    }
    // Policy names resolve now so a bad scenario fails before any stepping.
    policy::rx_gate_by_name(rx_gate_name);
    policy::tx_gate_by_name(tx_gate_name);
    policy::spacing_policy_by_name(spacing_name);
}

double ScenarioConfig::leader_speed_at(double time_s) const {
    for (const LeaderProfileStep& step : leader_profile) {
        if (time_s < step.until_s) return step.speed_mps;
    }
    return leader_profile.back().speed_mps;
}

const PlantParams& ScenarioConfig::plant_for(int vehicle) const {
    if (plants.size() == 1) return plants.front();
    return plants.at(static_cast<std::size_t>(vehicle));
}

double ScenarioConfig::per_for_follower(int vehicle) const {
    if (follower_per.size() == 1) return follower_per.front();
    return follower_per.at(static_cast<std::size_t>(vehicle - 1));
}

RunResult run_scenario(const ScenarioConfig& config) {
    config.validate();

    const int count = config.convoy.vehicle_count;
    const std::uint64_t dt_us = to_micros(config.control_period_s);
    const std::uint64_t broadcast_us = to_micros(config.convoy.broadcast_period_s);
    const std::uint64_t staleness_us = to_micros(config.convoy.staleness_horizon_s);
    const std::uint64_t ticks = to_micros(config.duration_s) / dt_us;
    const double dt = config.control_period_s;
    const bool use_multicast = config.transport == TransportMode::multicast;

    const policy::RxGateFn rx_gate = policy::rx_gate_by_name(config.rx_gate_name);
    const policy::TxGateFn tx_gate = policy::tx_gate_by_name(config.tx_gate_name);
    const policy::SpacingSolverFn solver =
        policy::spacing_policy_by_name(config.spacing_name);

    std::vector<VehicleAgent> agents(static_cast<std::size_t>(count));
    for (int v = 0; v < count; ++v) {
        VehicleAgent& agent = agents[static_cast<std::size_t>(v)];
        agent.index = v;
        if (!config.initial_poses.empty()) {
            const InitialPose& init = config.initial_poses[static_cast<std::size_t>(v)];
            agent.pose = Pose{init.position, wrap_two_pi(init.heading_rad),
                              init.speed_mps};
        } else {
            // In line behind the leader at exactly the desired gap, at rest.
            // The ramp from standstill counts as the first leader speed jump.
            agent.pose = Pose{
                geo::EnuPoint{0.0, -config.convoy.desired_gap_m * v, 0.0},
                0.0,
                0.0,
            };
        }
        const model::VehicleState initial =
            state_from_pose(agent, config.origin, 0, 0);
        agent.store = std::make_unique<model::StateStore>(
            static_cast<model::VehicleId>(v), config.convoy.buffer_depth, staleness_us,
            initial);
        const double per = v == 0 ? 0.0 : config.per_for_follower(v);
        agent.pipeline = std::make_unique<net::ReceivePipeline>(net::LossModel{
            .per = per,
            .rng_seed = net::derive_stream_seed(config.seed,
                                                static_cast<std::uint64_t>(v)),
        });
        if (use_multicast) {
            agent.transport = std::make_unique<net::MulticastTransport>(
                config.multicast, static_cast<model::VehicleId>(v));
        }
        agent.held_command.target_heading_rad = agent.pose.heading_rad;
        agent.held_command.goal = agent.pose.position;
    }

    RunResult result;
    result.trace.vehicle_count = count;
    result.trace.rows.reserve(ticks);

    const auto wall_start = std::chrono::steady_clock::now();

    for (std::uint64_t tick = 0; tick < ticks; ++tick) {
        const std::uint64_t now_us = tick * dt_us;
        const double now_s = static_cast<double>(now_us) / kMicrosPerSecond;

        // Current states, one per vehicle, from ground truth at this tick.
        std::vector<model::VehicleState> states;
        states.reserve(static_cast<std::size_t>(count));
        for (VehicleAgent& agent : agents) {
            states.push_back(state_from_pose(agent, config.origin, now_us,
                                             agent.next_sequence++));
        }

        // Broadcast phase: every B seconds each vehicle consults its Tx gate
        // and, when open, emits its encoded state through the lossy channel.
        // All deliveries land before any control decision this tick.
        if (now_us % broadcast_us == 0) {
            for (int sender = 0; sender < count; ++sender) {
                VehicleAgent& tx = agents[static_cast<std::size_t>(sender)];
                if (!tx_gate(tx.store->snapshot(now_us))) continue;
                const net::FrameBytes frame =
                    net::encode_bsm(states[static_cast<std::size_t>(sender)]);
                if (use_multicast) {
                    tx.transport->send(frame);
                } else {
                    for (int rx = 0; rx < count; ++rx) {
                        if (rx == sender) continue;
                        receive_frame(agents[static_cast<std::size_t>(rx)], frame,
                                      rx_gate);
                    }
                }
            }
            if (use_multicast) {
                // Give the kernel a moment to loop datagrams back, then drain.
                std::this_thread::sleep_for(std::chrono::milliseconds(2));
                for (VehicleAgent& agent : agents) {
                    for (const auto& datagram : agent.transport->poll()) {
                        receive_frame(agent, datagram, rx_gate);
                    }
                }
            }
        }

        // Control phase: snapshot, solve targets, run both controllers, step
        // the plant. The trace row records poses and commands at this tick.
        TraceRow row;
        row.time_s = now_s;
        row.vehicles.resize(static_cast<std::size_t>(count));
        row.followers.resize(static_cast<std::size_t>(count - 1));

        for (int v = 0; v < count; ++v) {
            VehicleAgent& agent = agents[static_cast<std::size_t>(v)];
            const model::VehicleState& own = states[static_cast<std::size_t>(v)];
            agent.store->update_own(own);

            control::Actuation actuation;
            if (v == 0) {
                // The leader tracks its speed profile and holds its heading.
                const double target = config.leader_speed_at(now_s);
                const auto speed = control::pd_speed_control(
                    target, own, config.pd, agent.prev_speed_error, dt);
                agent.prev_speed_error = speed.error_mps;
                actuation = control::Actuation{speed.applied_speed_mps, 0.0};
            } else {
                const model::StoreSnapshot snap = agent.store->snapshot(now_us);
                policy::TargetCommand command;
                if (agent.enu_anchor) {
                    model::ConvoyConfig convoy = config.convoy;
                    convoy.ego_index = v;
                    command = solver(snap, convoy, *agent.enu_anchor, dt);
                }
                if (command.valid) {
                    agent.held_command = command;
                    agent.has_goal = true;
                } else {
                    command = agent.held_command;  // hold last command
                }
                // Forward-only actuation: when the aim point falls behind the
                // ego (a few centimeters of overshoot flip the solved bearing
                // by pi), brake along the current heading instead of steering
                // around to it.
                if (std::abs(wrap_pi(command.target_heading_rad - own.heading_rad)) >
                    kPi / 2.0) {
                    command.target_speed_mps = 0.0;
                    command.target_heading_rad = own.heading_rad;
                    command.goal = geo::enu_from_geodetic(
                        agent.enu_anchor ? *agent.enu_anchor : config.origin,
                        own.position);
                }
                const auto speed = control::pd_speed_control(
                    command.target_speed_mps, own, config.pd, agent.prev_speed_error,
                    dt);
                agent.prev_speed_error = speed.error_mps;
                double steer = 0.0;
                if (agent.has_goal && agent.enu_anchor) {
                    const geo::EnuPoint ego_enu =
                        geo::enu_from_geodetic(*agent.enu_anchor, own.position);
                    steer = control::stanley_heading_control(
                        command.target_heading_rad, command.goal, ego_enu, own,
                        config.stanley);
                }
                actuation = control::Actuation{speed.applied_speed_mps, steer};
            }

            VehicleTick& out = row.vehicles[static_cast<std::size_t>(v)];
            out.east_m = agent.pose.position.east_m;
            out.north_m = agent.pose.position.north_m;
            out.speed_mps = agent.pose.speed_mps;
            out.heading_rad = agent.pose.heading_rad;
            out.cmd_speed_mps = actuation.speed_mps;
            out.cmd_steer_rad = actuation.steer_rad;

            const Pose next =
                bicycle_step(agent.pose, actuation, config.plant_for(v), dt);
            agent.last_accel_mps2 = (next.speed_mps - agent.pose.speed_mps) / dt;
            agent.pose = next;
        }

        for (int v = 1; v < count; ++v) {
            FollowerTick& follower = row.followers[static_cast<std::size_t>(v - 1)];
            const VehicleTick& self = row.vehicles[static_cast<std::size_t>(v)];
            const VehicleTick& ahead = row.vehicles[static_cast<std::size_t>(v - 1)];
            follower.gap_m =
                std::hypot(ahead.east_m - self.east_m, ahead.north_m - self.north_m);
            const ReceiverStats& stats = agents[static_cast<std::size_t>(v)].stats;
            follower.rx_delivered = stats.delivered;
            follower.rx_dropped = stats.dropped_total();
        }

        result.trace.rows.push_back(std::move(row));

        if (use_multicast) {
            std::this_thread::sleep_until(
                wall_start + std::chrono::microseconds((tick + 1) * dt_us));
        }
    }

    result.receivers.reserve(agents.size());
    for (const VehicleAgent& agent : agents) result.receivers.push_back(agent.stats);
    return result;
}

}  // namespace openconvoy::sim
