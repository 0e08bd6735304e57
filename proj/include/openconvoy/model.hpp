#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <vector>

#include "openconvoy/geo.hpp"

namespace openconvoy::model {

using VehicleId = std::uint8_t;  // vehicle 0 is the leader

/// One broadcast-equivalent snapshot of a vehicle's motion state.
struct VehicleState {
    VehicleId vehicle_id = 0;
    std::uint64_t timestamp_us = 0;  // microseconds since run start (or epoch)
    geo::GeoPoint position;
    double speed_mps = 0.0;    // >= 0
    double heading_rad = 0.0;  // [0, 2*pi), 0 = north, clockwise positive
    double accel_mps2 = 0.0;
    std::uint32_t sequence = 0;  // per-sender counter

    bool is_valid() const;
};

/// Predicate deciding whether a message from `sender` is stored by `ego`.
using RxGate = std::function<bool(VehicleId ego, VehicleId sender)>;

enum class InsertResult {
    accepted,
    rejected_gate,      // Rx gate returned 0
    rejected_sequence,  // duplicate or out-of-order sequence for the source
};

/// Point-in-time copy of a store's buffers. Unaffected by later inserts.
struct StoreSnapshot {
    VehicleId own_id = 0;
    std::uint64_t taken_at_us = 0;
    std::uint64_t staleness_horizon_us = 0;
    std::map<VehicleId, std::vector<VehicleState>> buffers;  // sorted by timestamp

    /// Most recent state from `source`, or nullopt when the buffer is empty
    /// or its head is older than the staleness horizon at capture time.
    std::optional<VehicleState> fresh_latest(VehicleId source) const;

    /// Most recent state regardless of staleness.
    const VehicleState* latest(VehicleId source) const;

    std::vector<VehicleId> sources() const;
};

/// Per-vehicle store of the most recent states from each accepted source,
/// bounded ring buffers keyed by sender id. The ego's own latest state is
/// always present. Single writer (the receive path), concurrent readers via
/// snapshot().
class StateStore {
public:
    StateStore(VehicleId own_id, std::size_t buffer_depth,
               std::uint64_t staleness_horizon_us, const VehicleState& initial_own);

    /// Stores `incoming` when the Rx gate admits the sender and the sequence
    /// number is newer than the stored head for that source. The oldest entry
    /// is evicted once a buffer exceeds its depth. Rejection leaves the store
    /// untouched.
    InsertResult insert(const VehicleState& incoming, const RxGate& rx_gate);

    /// Refreshes the ego's own entry, bypassing the Rx gate (a vehicle always
    /// trusts its own sensors). Sequence-checked like any other source.
    void update_own(const VehicleState& own_state);

    /// Most recent state from `source` younger than the staleness horizon
    /// relative to `now_us`; nullopt otherwise.
    std::optional<VehicleState> latest(VehicleId source, std::uint64_t now_us) const;

    StoreSnapshot snapshot(std::uint64_t now_us) const;

    VehicleId own_id() const { return own_id_; }
    std::size_t buffer_depth() const { return buffer_depth_; }
    std::uint64_t staleness_horizon_us() const { return staleness_horizon_us_; }

private:
    InsertResult append_locked(const VehicleState& state);

    VehicleId own_id_;
    std::size_t buffer_depth_;
    std::uint64_t staleness_horizon_us_;
    std::map<VehicleId, std::deque<VehicleState>> buffers_;
    mutable std::mutex mutex_;
};

/// Convoy-level configuration shared by every module. Controller gains and
/// plant parameters live with their owning modules (control, sim) and are
/// carried alongside this in the scenario configuration.
struct ConvoyConfig {
    int vehicle_count = 3;  // n + 1
    int ego_index = 0;
    double desired_gap_m = 15.0;
    double broadcast_period_s = 0.1;
    double staleness_horizon_s = 0.3;  // 3 broadcast periods
    std::size_t buffer_depth = 10;
    double v_max_mps = 3.0;  // clamp on solved target speed

    void validate() const;  // throws std::invalid_argument naming the field
};

}  // namespace openconvoy::model
