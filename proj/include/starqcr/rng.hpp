#pragma once

#include <array>
#include <cstdint>

namespace starqcr {

/// Deterministic random stream (xoshiro256++ seeded through splitmix64).
///
/// Monte Carlo trials never share a stream: each trial derives its own
/// substream from (master seed, trial index), so results are bit-identical
/// regardless of how trials are distributed over workers. Uniform doubles
/// are produced from raw bits rather than std:: distributions, which keeps
/// sequences reproducible across standard library implementations.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed);

    /// index-th output of the splitmix64 sequence anchored at `seed`.
    /// Used to derive child seeds for runs, extractions and trials.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t index);

    static RandomStream for_trial(std::uint64_t master_seed, std::uint64_t trial_index);

    std::uint64_t next_u64();

    /// Uniform double in [0, 1).
    double next_unit();

    /// True with probability p. Exact at p = 0 and p = 1.
    bool bernoulli(double p);

private:
    std::array<std::uint64_t, 4> state_;
};

}  // namespace starqcr
