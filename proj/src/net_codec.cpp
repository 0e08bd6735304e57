#include "openconvoy/net/codec.hpp"

#include <bit>
#include <cmath>
#include <cstring>

namespace openconvoy::net {

namespace {

void put_u16(std::uint8_t* out, std::uint16_t value) {
    out[0] = static_cast<std::uint8_t>(value >> 8);
    out[1] = static_cast<std::uint8_t>(value);
}

void put_u32(std::uint8_t* out, std::uint32_t value) {
    for (int i = 0; i < 4; ++i) {
        out[i] = static_cast<std::uint8_t>(value >> (8 * (3 - i)));
    }
}

void put_u64(std::uint8_t* out, std::uint64_t value) {
    for (int i = 0; i < 8; ++i) {
        out[i] = static_cast<std::uint8_t>(value >> (8 * (7 - i)));
    }
}

void put_f64(std::uint8_t* out, double value) {
    put_u64(out, std::bit_cast<std::uint64_t>(value));
}

std::uint32_t get_u32(const std::uint8_t* in) {
    std::uint32_t value = 0;
    for (int i = 0; i < 4; ++i) value = (value << 8) | in[i];
    return value;
}

std::uint64_t get_u64(const std::uint8_t* in) {
    std::uint64_t value = 0;
    for (int i = 0; i < 8; ++i) value = (value << 8) | in[i];
    return value;
}

double get_f64(const std::uint8_t* in) {
    return std::bit_cast<double>(get_u64(in));
}

}  // namespace

FrameBytes encode_bsm(const model::VehicleState& state) {
    const double floats[] = {state.position.latitude_deg, state.position.longitude_deg,
                             state.position.altitude_m,   state.speed_mps,
                             state.heading_rad,           state.accel_mps2};
    for (double value : floats) {
        if (!std::isfinite(value)) {
            throw std::invalid_argument("cannot encode non-finite state field");
        }
    }
    FrameBytes frame{};
    std::memcpy(frame.data(), kMagic.data(), kMagic.size());
    frame[4] = kWireVersion;
    frame[5] = state.vehicle_id;
    put_u16(frame.data() + 6, 0);  // reserved flags
    put_u32(frame.data() + 8, state.sequence);
    put_u64(frame.data() + 12, state.timestamp_us);
    for (std::size_t i = 0; i < 6; ++i) {
        put_f64(frame.data() + 20 + 8 * i, floats[i]);
    }
    return frame;
}

DecodeResult decode_bsm(std::span<const std::uint8_t> bytes) {
    if (bytes.size() != kFrameSize) {
        return DecodeError{DecodeError::Kind::malformed_frame,
                           "expected 68 octets, got " + std::to_string(bytes.size())};
    }
    if (std::memcmp(bytes.data(), kMagic.data(), kMagic.size()) != 0) {
        return DecodeError{DecodeError::Kind::foreign_frame, "magic mismatch"};
    }
    if (bytes[4] != kWireVersion) {
        return DecodeError{DecodeError::Kind::malformed_frame,
                           "unsupported version " + std::to_string(bytes[4])};
    }
    model::VehicleState state;
    state.vehicle_id = bytes[5];
    state.sequence = get_u32(bytes.data() + 8);
    state.timestamp_us = get_u64(bytes.data() + 12);
    double floats[6];
    for (std::size_t i = 0; i < 6; ++i) {
        floats[i] = get_f64(bytes.data() + 20 + 8 * i);
        if (!std::isfinite(floats[i])) {
            return DecodeError{DecodeError::Kind::malformed_frame,
                               "non-finite float field " + std::to_string(i)};
        }
    }
    state.position.latitude_deg = floats[0];
    state.position.longitude_deg = floats[1];
    state.position.altitude_m = floats[2];
    state.speed_mps = floats[3];
    state.heading_rad = floats[4];
    state.accel_mps2 = floats[5];
    return state;
}

}  // namespace openconvoy::net
