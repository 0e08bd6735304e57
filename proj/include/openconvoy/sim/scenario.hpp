#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "openconvoy/control.hpp"
#include "openconvoy/geo.hpp"
#include "openconvoy/model.hpp"
#include "openconvoy/net/multicast.hpp"
#include "openconvoy/sim/plant.hpp"
#include "openconvoy/sim/trace.hpp"

namespace openconvoy::sim {

/// One segment of the leader's piecewise-constant speed schedule.
struct LeaderProfileStep {
    double until_s = 0.0;
    double speed_mps = 0.0;
};

struct InitialPose {
    geo::EnuPoint position;
    double heading_rad = 0.0;
    double speed_mps = 0.0;
};

enum class TransportMode {
    virtual_clock,  // in-process channel, deterministic, bit-reproducible
    multicast,      // real IPv6 UDP sockets, wall-clock paced
};

struct ScenarioConfig {
    std::string name = "scenario";
    model::ConvoyConfig convoy;
    control::PdGains pd;
    control::StanleyGains stanley;
    std::vector<PlantParams> plants;  // one shared entry or one per vehicle
    std::vector<LeaderProfileStep> leader_profile = {{60.0, 1.0}, {120.0, 2.0},
                                                     {180.0, 1.0}};
    std::vector<double> follower_per;  // one shared entry or one per follower
    double control_period_s = 0.05;
    double duration_s = 180.0;
    std::uint64_t seed = 1;
    geo::GeoPoint origin{28.6024, -81.2001, 0.0};
    std::vector<InitialPose> initial_poses;  // empty = in-line at desired gap
    std::string rx_gate_name = "all_predecessor";
    std::string tx_gate_name = "tx_always";
    std::string spacing_name = "platooning";
    TransportMode transport = TransportMode::virtual_clock;
    net::MulticastConfig multicast;

    /// Throws ConfigError naming the offending field. Checks, among others,
    /// that the broadcast period is an integer multiple of the control period.
    void validate() const;

    double leader_speed_at(double time_s) const;
    const PlantParams& plant_for(int vehicle) const;
    double per_for_follower(int vehicle) const;  // vehicle in [1, count)
};

/// Per-receiver message accounting for a whole run. Every frame sent to a
/// receiver lands in exactly one bucket:
///   sent_to = dropped_loss + foreign + malformed
///           + rejected_gate + rejected_sequence + delivered
struct ReceiverStats {
    std::uint64_t sent_to = 0;
    std::uint64_t dropped_loss = 0;
    std::uint64_t foreign = 0;
    std::uint64_t malformed = 0;
    std::uint64_t rejected_gate = 0;
    std::uint64_t rejected_sequence = 0;
    std::uint64_t delivered = 0;

    std::uint64_t dropped_total() const {
        return dropped_loss + foreign + malformed + rejected_gate + rejected_sequence;
    }
};

struct RunResult {
    Trace trace;
    std::vector<ReceiverStats> receivers;  // indexed by vehicle
};

/// Closes the loop: sense -> gate -> solve spacing -> control -> actuate ->
/// broadcast, at a fixed control step. Identical config and seed produce a
/// bit-identical trace in virtual-clock mode.
RunResult run_scenario(const ScenarioConfig& config);

}  // namespace openconvoy::sim
