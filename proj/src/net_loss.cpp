#include "openconvoy/net/loss.hpp"

#include <stdexcept>

namespace openconvoy::net {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_stream_seed(std::uint64_t master_seed, std::uint64_t stream_id) {
    return splitmix64(master_seed + 0x9E3779B97F4A7C15ULL * (stream_id + 1));
}

LossGate::LossGate(const LossModel& model) : per_(model.per), rng_(model.rng_seed) {
    if (!(model.per >= 0.0 && model.per <= 1.0)) {
        throw std::invalid_argument("packet error rate must be in [0, 1]");
    }
}

bool LossGate::deliver() {
    // Top 53 bits of the generator, mapped to [0, 1). mt19937_64 output is
    // pinned by the standard, so accept/drop sequences replay across platforms.
    const double draw =
        static_cast<double>(rng_() >> 11) * (1.0 / 9007199254740992.0);
    return draw >= per_;
}

}  // namespace openconvoy::net
