#include "openconvoy/policy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "openconvoy/angles.hpp"

namespace openconvoy::policy {

namespace {

struct GoalSet {
    geo::EnuPoint ego;
    std::vector<geo::EnuPoint> goals;  // one per fresh predecessor
};

// Ego ENU position plus the goal points of every fresh predecessor in the
// snapshot, all on the tangent plane at `origin`.
GoalSet collect_goals(const model::StoreSnapshot& snapshot,
                      const model::ConvoyConfig& config, const geo::GeoPoint& origin) {
    const model::VehicleState* ego = snapshot.latest(snapshot.own_id);
    if (ego == nullptr) {
        throw std::invalid_argument("snapshot is missing the ego vehicle's own state");
    }
    GoalSet set;
    set.ego = geo::enu_from_geodetic(origin, ego->position);
    const int ego_index = static_cast<int>(snapshot.own_id);
    for (const auto& [source, _] : snapshot.buffers) {
        const int pred_index = static_cast<int>(source);
        if (pred_index >= ego_index) continue;
        auto pred = snapshot.fresh_latest(source);
        if (!pred) continue;
        set.goals.push_back(predecessor_goal_point(*pred, ego_index, pred_index,
                                                   config.desired_gap_m, origin));
    }
    return set;
}

}  // namespace

bool rx_gate_all_predecessor(model::VehicleId ego, model::VehicleId sender) {
    return sender < ego;
}

bool tx_gate_always(const model::StoreSnapshot&) { return true; }

geo::EnuPoint predecessor_goal_point(const model::VehicleState& predecessor,
                                     int ego_index, int pred_index,
                                     double desired_gap_m,
                                     const geo::GeoPoint& origin) {
    if (!std::isfinite(predecessor.heading_rad)) {
        throw std::invalid_argument("predecessor heading is not finite");
    }
    const geo::EnuPoint pos = geo::enu_from_geodetic(origin, predecessor.position);
    const double back = static_cast<double>(ego_index - pred_index) * desired_gap_m;
    return geo::EnuPoint{
        .east_m = pos.east_m - back * std::sin(predecessor.heading_rad),
        .north_m = pos.north_m - back * std::cos(predecessor.heading_rad),
        .up_m = pos.up_m,
    };
}

double sigma_platooning_cost(double speed_mps, double heading_rad,
                             const model::StoreSnapshot& snapshot,
                             const model::ConvoyConfig& config,
                             const geo::GeoPoint& origin, double dt_s) {
    if (!(dt_s > 0.0)) throw std::invalid_argument("dt must be > 0");
    const GoalSet set = collect_goals(snapshot, config, origin);
    const double projected_east = set.ego.east_m + dt_s * speed_mps * std::sin(heading_rad);
    const double projected_north =
        set.ego.north_m + dt_s * speed_mps * std::cos(heading_rad);
    double cost = 0.0;
    for (const geo::EnuPoint& goal : set.goals) {
        const double de = goal.east_m - projected_east;
        const double dn = goal.north_m - projected_north;
        cost += de * de + dn * dn;
    }
    return cost;
}

TargetCommand solve_targets(const model::StoreSnapshot& snapshot,
                            const model::ConvoyConfig& config,
                            const geo::GeoPoint& origin, double dt_s) {
    if (!(dt_s > 0.0)) throw std::invalid_argument("dt must be > 0");
    const GoalSet set = collect_goals(snapshot, config, origin);
    if (set.goals.empty()) return TargetCommand{};

    // The cost is sum_j ||G_j - P||^2 over the projected point P, minimized at
    // the goal centroid; the reachable P closest to it lies along the bearing
    // from the ego, at min(distance, v_max * dt).
    geo::EnuPoint centroid{};
    for (const geo::EnuPoint& goal : set.goals) {
        centroid.east_m += goal.east_m;
        centroid.north_m += goal.north_m;
        centroid.up_m += goal.up_m;
    }
    const double count = static_cast<double>(set.goals.size());
    centroid.east_m /= count;
    centroid.north_m /= count;
    centroid.up_m /= count;

    const double distance = geo::horizontal_distance(set.ego, centroid);
    TargetCommand command;
    command.valid = true;
    command.goal = centroid;
    if (distance < 1e-9) {
        // Zero-error equilibrium (up to tangent-plane round-off): the argmin
        // heading is arbitrary, so keep the current one and stand still.
        const model::VehicleState* ego = snapshot.latest(snapshot.own_id);
        command.target_speed_mps = 0.0;
        command.target_heading_rad = ego->heading_rad;
    } else {
        command.target_speed_mps = std::clamp(distance / dt_s, 0.0, config.v_max_mps);
        command.target_heading_rad = geo::bearing_enu(set.ego, centroid);
    }
    return command;
}

RxGateFn rx_gate_by_name(std::string_view name) {
    if (name == "all_predecessor") return rx_gate_all_predecessor;
    throw std::invalid_argument("unknown rx gate: " + std::string(name));
}

TxGateFn tx_gate_by_name(std::string_view name) {
    if (name == "tx_always") return tx_gate_always;
    throw std::invalid_argument("unknown tx gate: " + std::string(name));
}

SpacingSolverFn spacing_policy_by_name(std::string_view name) {
    if (name == "platooning") return solve_targets;
    throw std::invalid_argument("unknown spacing policy: " + std::string(name));
}

}  // namespace openconvoy::policy
