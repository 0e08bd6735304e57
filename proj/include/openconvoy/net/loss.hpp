#pragma once

#include <cstdint>
#include <random>

namespace openconvoy::net {

/// Receiver-side packet-error model: each frame is dropped independently with
/// probability `per`, from a seeded deterministic stream.
struct LossModel {
    double per = 0.0;  // [0, 1]
    std::uint64_t rng_seed = 0;
};

/// Derives an independent substream seed from a master seed (splitmix64 over
/// master + stream golden-ratio offsets). Changing one receiver's settings
/// cannot perturb another receiver's draw sequence.
std::uint64_t derive_stream_seed(std::uint64_t master_seed, std::uint64_t stream_id);

class LossGate {
public:
    explicit LossGate(const LossModel& model);

    /// One Bernoulli(1 - per) draw; true = deliver. Same seed, same sequence.
    bool deliver();

    double per() const { return per_; }

private:
    double per_;
    std::mt19937_64 rng_;
};

}  // namespace openconvoy::net
