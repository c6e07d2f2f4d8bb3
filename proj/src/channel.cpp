#include "starqcr/channel.hpp"

#include <string>

#include "starqcr/errors.hpp"

namespace starqcr {

namespace {

void check_probability(double value, const char* name) {
    if (!(value >= 0.0 && value <= 1.0)) {
        throw ConfigError(std::string(name) + " = " + std::to_string(value) +
                          " outside [0, 1]");
    }
}

}  // namespace

ChannelNoise::ChannelNoise(double survival, double flip_fidelity)
    : survival_(survival), flip_fidelity_(flip_fidelity) {
    check_probability(survival, "channel survival probability");
    check_probability(flip_fidelity, "channel flip fidelity");
}

ChannelNoise ChannelNoise::from_error_rates(double loss, double flip) {
    check_probability(loss, "channel loss probability");
    check_probability(flip, "channel flip probability");
    return ChannelNoise(1.0 - loss, 1.0 - flip);
}

TransmissionDistribution transmission_distribution(const ChannelNoise& noise) {
    const double survival = noise.survival();
    const double fidelity = noise.flip_fidelity();
    return {1.0 - survival, survival * (1.0 - fidelity), survival * fidelity};
}

TransmissionOutcome sample_transmission(const ChannelNoise& noise, RandomStream& rng) {
    // Two independent draws, loss first. A lost qubit still consumes the flip
    // draw so the stream position after a transmission never depends on the
    // outcome.
    const bool survived = rng.bernoulli(noise.survival());
    const bool clean = rng.bernoulli(noise.flip_fidelity());
    if (!survived) {
        return TransmissionOutcome::Lost;
    }
    return clean ? TransmissionOutcome::DeliveredClean : TransmissionOutcome::DeliveredFlipped;
}

LinkEntanglement establish_link(const ChannelNoise& noise, RandomStream& rng) {
    switch (sample_transmission(noise, rng)) {
        case TransmissionOutcome::Lost:
            return LinkEntanglement::lost();
        case TransmissionOutcome::DeliveredClean:
            return LinkEntanglement::delivered(false);
        case TransmissionOutcome::DeliveredFlipped:
            return LinkEntanglement::delivered(true);
    }
    return LinkEntanglement::lost();  // unreachable
}

EndToEndPair entanglement_swap(const LinkEntanglement& a, const LinkEntanglement& b) {
    // Pauli corrections from the Bell measurement are applied perfectly, so
    // only channel-induced X errors survive; they cancel pairwise.
    const bool present = a.present && b.present;
    const bool x_error = present && (a.x_error != b.x_error);
    return {present, x_error};
}

ParityResult parity_check(const EndToEndPair& pair) {
    if (!pair.present) {
        return ParityResult::FailedAbsent;
    }
    return pair.x_error ? ParityResult::FailedParity : ParityResult::Fulfilled;
}

}  // namespace starqcr
