#include "openconvoy/model.hpp"

#include <cmath>
#include <stdexcept>

#include "openconvoy/angles.hpp"

namespace openconvoy::model {

bool VehicleState::is_valid() const {
    if (!std::isfinite(speed_mps) || speed_mps < 0.0) return false;
    if (!std::isfinite(heading_rad) || heading_rad < 0.0 || heading_rad >= kTwoPi) {
        return false;
    }
    if (!std::isfinite(accel_mps2)) return false;
    try {
        geo::validate(position);
    } catch (const std::invalid_argument&) {
        return false;
    }
    return true;
}

std::optional<VehicleState> StoreSnapshot::fresh_latest(VehicleId source) const {
    auto it = buffers.find(source);
    if (it == buffers.end() || it->second.empty()) return std::nullopt;
    const VehicleState& head = it->second.back();
    if (head.timestamp_us + staleness_horizon_us < taken_at_us) return std::nullopt;
    return head;
}

const VehicleState* StoreSnapshot::latest(VehicleId source) const {
    auto it = buffers.find(source);
    if (it == buffers.end() || it->second.empty()) return nullptr;
    return &it->second.back();
}

std::vector<VehicleId> StoreSnapshot::sources() const {
    std::vector<VehicleId> ids;
    ids.reserve(buffers.size());
    for (const auto& [id, _] : buffers) ids.push_back(id);
    return ids;
}

StateStore::StateStore(VehicleId own_id, std::size_t buffer_depth,
                       std::uint64_t staleness_horizon_us,
                       const VehicleState& initial_own)
    : own_id_(own_id),
      buffer_depth_(buffer_depth == 0 ? 1 : buffer_depth),
      staleness_horizon_us_(staleness_horizon_us) {
    buffers_[own_id_].push_back(initial_own);
}

InsertResult StateStore::append_locked(const VehicleState& state) {
    auto& buffer = buffers_[state.vehicle_id];
    if (!buffer.empty() && state.sequence <= buffer.back().sequence) {
        return InsertResult::rejected_sequence;
    }
    buffer.push_back(state);
    while (buffer.size() > buffer_depth_) buffer.pop_front();
    return InsertResult::accepted;
}

InsertResult StateStore::insert(const VehicleState& incoming, const RxGate& rx_gate) {
    std::lock_guard lock(mutex_);
    if (!rx_gate(own_id_, incoming.vehicle_id)) return InsertResult::rejected_gate;
    return append_locked(incoming);
}

void StateStore::update_own(const VehicleState& own_state) {
    std::lock_guard lock(mutex_);
    VehicleState state = own_state;
    state.vehicle_id = own_id_;
    append_locked(state);
}

std::optional<VehicleState> StateStore::latest(VehicleId source,
                                               std::uint64_t now_us) const {
    std::lock_guard lock(mutex_);
    auto it = buffers_.find(source);
    if (it == buffers_.end() || it->second.empty()) return std::nullopt;
    const VehicleState& head = it->second.back();
    if (head.timestamp_us + staleness_horizon_us_ < now_us) return std::nullopt;
    return head;
}

StoreSnapshot StateStore::snapshot(std::uint64_t now_us) const {
    std::lock_guard lock(mutex_);
    StoreSnapshot snap;
    snap.own_id = own_id_;
    snap.taken_at_us = now_us;
    snap.staleness_horizon_us = staleness_horizon_us_;
    for (const auto& [id, buffer] : buffers_) {
        snap.buffers.emplace(id, std::vector<VehicleState>(buffer.begin(), buffer.end()));
    }
    return snap;
}

void ConvoyConfig::validate() const {
    if (vehicle_count < 1) throw std::invalid_argument("vehicle_count must be >= 1");
    if (ego_index < 0 || ego_index >= vehicle_count) {
        throw std::invalid_argument("ego_index must be in [0, vehicle_count)");
    }
    if (!(desired_gap_m > 0.0)) throw std::invalid_argument("desired_gap_m must be > 0");
    if (!(broadcast_period_s > 0.0)) {
        throw std::invalid_argument("broadcast_period_s must be > 0");
    }
    if (!(staleness_horizon_s > 0.0)) {
        throw std::invalid_argument("staleness_horizon_s must be > 0");
    }
    if (buffer_depth < 1) throw std::invalid_argument("buffer_depth must be >= 1");
    if (!(v_max_mps > 0.0)) throw std::invalid_argument("v_max_mps must be > 0");
}

}  // namespace openconvoy::model
