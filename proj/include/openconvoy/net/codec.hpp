#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "openconvoy/model.hpp"

namespace openconvoy::net {

// Fixed-layout BSM-style datagram, 68 octets, big-endian throughout:
//   0   magic "OCVY"            4 octets
//   4   version 0x01            1 octet
//   5   vehicle_id              1 octet
//   6   flags (reserved, 0)     2 octets
//   8   sequence                4 octets
//   12  timestamp_us            8 octets
//   20  latitude_deg            8 octets IEEE-754 double
//   28  longitude_deg           8
//   36  altitude_m              8
//   44  speed_mps               8
//   52  heading_rad             8
//   60  accel_mps2              8
inline constexpr std::size_t kFrameSize = 68;
inline constexpr std::array<std::uint8_t, 4> kMagic = {'O', 'C', 'V', 'Y'};
inline constexpr std::uint8_t kWireVersion = 0x01;

using FrameBytes = std::array<std::uint8_t, kFrameSize>;

struct DecodeError {
    enum class Kind {
        foreign_frame,    // wrong magic: not ours, dropped silently at transport
        malformed_frame,  // wrong length/version or non-finite payload
    };
    Kind kind;
    std::string detail;
};

using DecodeResult = std::variant<model::VehicleState, DecodeError>;

/// Encodes a state into the fixed wire layout.
/// Throws std::invalid_argument when any float field is non-finite.
FrameBytes encode_bsm(const model::VehicleState& state);

/// Inverse of encode_bsm on well-formed frames.
DecodeResult decode_bsm(std::span<const std::uint8_t> bytes);

}  // namespace openconvoy::net
