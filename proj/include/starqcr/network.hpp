#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "starqcr/channel.hpp"

namespace starqcr {

/// User nodes are numbered 1..node_count; quantum channel i connects node i
/// to the central switch. The switch itself has no id.
using NodeId = int;

/// Rooted star network: one designated root node plus per-channel noise.
class StarNetwork {
public:
    StarNetwork(int node_count, NodeId root, std::vector<ChannelNoise> channels);

    static StarNetwork noiseless(int node_count = 3, NodeId root = 1);
    static StarNetwork uniform(int node_count, NodeId root, const ChannelNoise& noise);

    int node_count() const { return node_count_; }
    NodeId root() const { return root_; }
    bool contains(NodeId node) const { return node >= 1 && node <= node_count_; }
    const ChannelNoise& channel(NodeId node) const;
    const std::vector<ChannelNoise>& channels() const { return channels_; }

    /// All nodes except the root, ascending.
    std::vector<NodeId> leaves() const;

    /// Same channels, different root designation.
    StarNetwork rerooted(NodeId new_root) const;

    std::string describe() const;

    bool operator==(const StarNetwork&) const = default;

private:
    int node_count_;
    NodeId root_;
    std::vector<ChannelNoise> channels_;
};

/// One end-to-end entanglement request: a prioritized leaf and an optional
/// backup leaf served only when the prioritized leaf's qubit is lost.
struct SlotRequest {
    NodeId primary_leaf = 0;
    std::optional<NodeId> backup_leaf;

    bool operator==(const SlotRequest&) const = default;
};

/// Throws ConfigError if the request does not fit the network.
void validate_request(const StarNetwork& network, const SlotRequest& request);

enum class SlotOutcome {
    FulfilledPrimary = 0,
    FulfilledBackup,
    FailedRootLoss,
    FailedLeafLoss,
    FailedParity,
};

inline constexpr int kSlotOutcomeCount = 5;

const char* to_string(SlotOutcome outcome);

/// Per-variant outcome counts over a batch of independent slots.
class TrialTally {
public:
    void add(SlotOutcome outcome);
    std::uint64_t trials() const { return trials_; }
    std::uint64_t count(SlotOutcome outcome) const;
    double rate(SlotOutcome outcome) const;
    TrialTally& operator+=(const TrialTally& other);

    bool operator==(const TrialTally&) const = default;

private:
    std::uint64_t trials_ = 0;
    std::uint64_t counts_[kSlotOutcomeCount] = {};
};

/// One time slot. Every node establishes a link (ascending node order, two
/// draws each), then the switch serves the request:
///   root link lost                  -> FailedRootLoss
///   primary leaf link present       -> swap + parity check
///   primary lost, backup present    -> swap + parity check on the backup
///   otherwise                       -> FailedLeafLoss
/// Unused links are discarded at the end of the slot.
SlotOutcome run_slot(const StarNetwork& network, const SlotRequest& request, RandomStream& rng);

/// Aggregates `trials` independent slots; trial t runs on the substream
/// derived from (master_seed, t). Bit-identical for any worker count.
TrialTally run_trials(const StarNetwork& network, const SlotRequest& request,
                      std::uint64_t trials, std::uint64_t master_seed, int workers = 1);

/// One point of a mixed-priority boundary sweep. `fraction` is the per-slot
/// probability that the pair's first leaf was prioritized; y counts fulfilled
/// slots that served the first leaf, x those that served the second.
struct BoundarySample {
    double fraction = 0.0;
    double x = 0.0;
    double y = 0.0;
    double se_x = 0.0;
    double se_y = 0.0;

    bool operator==(const BoundarySample&) const = default;
};

/// Boundary sweep between the dedicated-rate corners: for each fraction p,
/// every slot independently prioritizes pair.first with probability p (the
/// other leaf as backup) and pair.second otherwise.
std::vector<BoundarySample> sweep_mixed(const StarNetwork& network,
                                        std::pair<NodeId, NodeId> pair,
                                        const std::vector<double>& fractions,
                                        std::uint64_t trials, std::uint64_t master_seed,
                                        int workers = 1);

}  // namespace starqcr
