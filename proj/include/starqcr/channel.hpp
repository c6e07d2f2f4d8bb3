#pragma once

#include "starqcr/rng.hpp"

namespace starqcr {

/// Parameters of one lossy bit-flip channel.
///
/// A transmitted qubit is lost with probability 1 - survival; a delivered
/// qubit carries an X error with probability 1 - flip_fidelity. The channel
/// is a probabilistic mixture of identity, Pauli-X and erasure, so every
/// downstream operation works on the classical event distribution instead of
/// density matrices.
class ChannelNoise {
public:
    ChannelNoise() = default;  // noiseless
    ChannelNoise(double survival, double flip_fidelity);

    /// Construction from error probabilities (loss = 1 - survival,
    /// flip = 1 - flip_fidelity), the parameterization scenario files use.
    static ChannelNoise from_error_rates(double loss, double flip);

    double survival() const { return survival_; }
    double flip_fidelity() const { return flip_fidelity_; }
    double loss() const { return 1.0 - survival_; }
    double flip() const { return 1.0 - flip_fidelity_; }
    bool noiseless() const { return survival_ == 1.0 && flip_fidelity_ == 1.0; }

    bool operator==(const ChannelNoise&) const = default;

private:
    double survival_ = 1.0;
    double flip_fidelity_ = 1.0;
};

enum class TransmissionOutcome {
    Lost,
    DeliveredClean,
    DeliveredFlipped,
};

struct TransmissionDistribution {
    double p_lost = 0.0;
    double p_flip = 0.0;
    double p_ok = 1.0;
};

/// One node<->switch Bell pair tracked in the Pauli frame relative to
/// |phi+>. x_error is normalized to false whenever the link is absent.
struct LinkEntanglement {
    bool present = false;
    bool x_error = false;

    static LinkEntanglement lost() { return {false, false}; }
    static LinkEntanglement delivered(bool flipped) { return {true, flipped}; }

    bool operator==(const LinkEntanglement&) const = default;
};

/// Heralded user-to-user pair after entanglement swapping at the switch.
struct EndToEndPair {
    bool present = false;
    bool x_error = false;

    bool operator==(const EndToEndPair&) const = default;
};

enum class ParityResult {
    Fulfilled,
    FailedParity,
    FailedAbsent,
};

/// Mixture weights of the channel: {lost, delivered-with-flip, delivered-ok}.
/// Sums to 1 within 1e-15.
TransmissionDistribution transmission_distribution(const ChannelNoise& noise);

/// Stochastic realization of one transmission. Consumes exactly two draws
/// (loss first, then flip) regardless of outcome, so trajectories replay
/// deterministically.
TransmissionOutcome sample_transmission(const ChannelNoise& noise, RandomStream& rng);

LinkEntanglement establish_link(const ChannelNoise& noise, RandomStream& rng);

/// Bell measurement at the switch. The pair survives only if both links are
/// present; channel-induced X errors combine by parity. Commutative.
EndToEndPair entanglement_swap(const LinkEntanglement& a, const LinkEntanglement& b);

/// Z-basis parity check on the end-to-end pair. Destructive: the pair is
/// consumed whatever the result.
ParityResult parity_check(const EndToEndPair& pair);

}  // namespace starqcr
