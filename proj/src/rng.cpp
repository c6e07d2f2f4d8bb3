#include "starqcr/rng.hpp"

namespace starqcr {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// splitmix64 output function (Vigna). State advances by kGolden per step, so
// the index-th output can be computed directly from seed + (index+1)*kGolden.
std::uint64_t splitmix64_mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed) {
    for (auto& word : state_) {
        seed += kGolden;
        word = splitmix64_mix(seed);
    }
}

std::uint64_t RandomStream::derive(std::uint64_t seed, std::uint64_t index) {
    return splitmix64_mix(seed + (index + 1) * kGolden);
}

RandomStream RandomStream::for_trial(std::uint64_t master_seed, std::uint64_t trial_index) {
    return RandomStream(derive(master_seed, trial_index));
}

std::uint64_t RandomStream::next_u64() {
    // xoshiro256++
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double RandomStream::next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

bool RandomStream::bernoulli(double p) {
    return next_unit() < p;
}

}  // namespace starqcr
