#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "openconvoy/model.hpp"
#include "openconvoy/net/codec.hpp"
#include "openconvoy/net/loss.hpp"

namespace openconvoy::net {

struct MulticastConfig {
    std::string group = "ff02::1:7f01";  // link-local scope
    std::uint16_t port = 47001;
    std::string interface_name;  // empty = first multicast-capable interface
};

/// Counters along one receiver's path. Conservation per receiver:
/// frames_seen = dropped_loss + foreign + malformed + decoded.
struct RxCounters {
    std::uint64_t frames_seen = 0;  // datagrams from other senders
    std::uint64_t dropped_loss = 0;
    std::uint64_t foreign = 0;
    std::uint64_t malformed = 0;
    std::uint64_t decoded = 0;  // handed onward to the state store
};

/// Receiver-side frame handling shared by both transports: loss gate first
/// (the modeled radio), then decode. Returns the state on success; counters
/// record every other outcome. Never throws on bad input bytes.
class ReceivePipeline {
public:
    explicit ReceivePipeline(const LossModel& model) : gate_(model) {}

    std::optional<model::VehicleState> process(std::span<const std::uint8_t> bytes);

    const RxCounters& counters() const { return counters_; }

private:
    LossGate gate_;
    RxCounters counters_;
};

/// IPv6 UDP multicast endpoint: one socket joined to the group, loopback
/// delivery enabled so multiple processes on one host hear each other.
/// Frames whose vehicle_id octet matches `own_id` are filtered on receive.
class MulticastTransport {
public:
    MulticastTransport(const MulticastConfig& config, model::VehicleId own_id);
    ~MulticastTransport();
    MulticastTransport(const MulticastTransport&) = delete;
    MulticastTransport& operator=(const MulticastTransport&) = delete;

    /// Sends one datagram to the group. Throws TransportError on failure.
    void send(std::span<const std::uint8_t> frame);

    /// Drains pending datagrams without blocking; self-frames filtered.
    std::vector<std::vector<std::uint8_t>> poll();

    /// Waits up to `timeout_ms` for one datagram from another sender.
    std::optional<std::vector<std::uint8_t>> recv(int timeout_ms);

    std::uint64_t self_filtered() const { return self_filtered_; }

    /// True when a transport can be opened with this configuration on this
    /// host (used to skip multicast tests where the network lacks support).
    static bool available(const MulticastConfig& config);

private:
    std::optional<std::vector<std::uint8_t>> read_one();

    int fd_ = -1;
    unsigned int interface_index_ = 0;
    model::VehicleId own_id_ = 0;
    std::string group_;
    std::uint16_t port_ = 0;
    std::uint64_t self_filtered_ = 0;
};

}  // namespace openconvoy::net
