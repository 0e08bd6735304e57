#pragma once

#include <functional>
#include <string_view>

#include "openconvoy/geo.hpp"
#include "openconvoy/model.hpp"

namespace openconvoy::policy {

/// Solved per-step targets. When no usable predecessor state exists, `valid`
/// is false and the caller holds its previous command.
struct TargetCommand {
    double target_speed_mps = 0.0;    // >= 0 when valid
    double target_heading_rad = 0.0;  // [0, 2*pi) when valid
    bool valid = false;
    geo::EnuPoint goal;  // aim point the targets steer toward (goal centroid)
};

/// Rx gate: admit a message iff the sender precedes the ego in the platoon.
bool rx_gate_all_predecessor(model::VehicleId ego, model::VehicleId sender);

/// Tx gate: broadcast unconditionally every period.
bool tx_gate_always(const model::StoreSnapshot& snapshot);

/// Point at the correct following distance behind a predecessor: its ENU
/// position displaced (ego_index - pred_index) * desired_gap backwards along
/// the predecessor's heading.
geo::EnuPoint predecessor_goal_point(const model::VehicleState& predecessor,
                                     int ego_index, int pred_index,
                                     double desired_gap_m,
                                     const geo::GeoPoint& origin);

/// Platooning spacing objective: sum over fresh predecessors of the squared
/// horizontal distance between each predecessor's goal point and the ego
/// position projected one control step forward under candidate (v, heading).
/// Stale or absent predecessors contribute nothing.
/// Throws std::invalid_argument when the snapshot lacks the ego's own state.
double sigma_platooning_cost(double speed_mps, double heading_rad,
                             const model::StoreSnapshot& snapshot,
                             const model::ConvoyConfig& config,
                             const geo::GeoPoint& origin, double dt_s);

/// Closed-form minimizer of sigma_platooning_cost: aim at the centroid of the
/// fresh predecessors' goal points, speed clamped to [0, v_max]. At the
/// zero-error equilibrium the ego keeps its current heading with zero speed.
TargetCommand solve_targets(const model::StoreSnapshot& snapshot,
                            const model::ConvoyConfig& config,
                            const geo::GeoPoint& origin, double dt_s);

// Named registries so scenario files can select policies without the engine
// knowing concrete implementations. Unknown names throw std::invalid_argument.
using RxGateFn = std::function<bool(model::VehicleId, model::VehicleId)>;
using TxGateFn = std::function<bool(const model::StoreSnapshot&)>;
using SpacingSolverFn = std::function<TargetCommand(
    const model::StoreSnapshot&, const model::ConvoyConfig&, const geo::GeoPoint&,
    double)>;

RxGateFn rx_gate_by_name(std::string_view name);        // "all_predecessor"
TxGateFn tx_gate_by_name(std::string_view name);        // "tx_always"
SpacingSolverFn spacing_policy_by_name(std::string_view name);  // "platooning"

}  // namespace openconvoy::policy
