#include "starqcr/network.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <thread>

#include "starqcr/errors.hpp"
#include "starqcr/qcr.hpp"

namespace starqcr {

namespace {

std::string format_rate(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%g", value);
    return buffer;
}

// Splits [0, trials) into `workers` contiguous chunks, runs `body(begin, end)`
// on each and combines the per-chunk results in chunk order. Trials own their
// substreams and the accumulator is a commutative sum, so the result is
// independent of scheduling.
template <typename Body>
auto parallel_reduce(std::uint64_t trials, int workers, Body body) {
    using Part = decltype(body(std::uint64_t{0}, std::uint64_t{0}));
    if (workers <= 1 || trials < 2) {
        return body(0, trials);
    }
    const auto chunk_count = std::min<std::uint64_t>(static_cast<std::uint64_t>(workers), trials);
    std::vector<Part> parts(chunk_count);
    std::vector<std::thread> threads;
    threads.reserve(chunk_count);
    const std::uint64_t base = trials / chunk_count;
    const std::uint64_t extra = trials % chunk_count;
    std::uint64_t begin = 0;
    for (std::uint64_t i = 0; i < chunk_count; ++i) {
        const std::uint64_t end = begin + base + (i < extra ? 1 : 0);
        threads.emplace_back([&, i, begin, end] { parts[i] = body(begin, end); });
        begin = end;
    }
    for (auto& thread : threads) {
        thread.join();
    }
    Part total{};
    for (const auto& part : parts) {
        total += part;
    }
    return total;
}

// Fulfilled-slot counters of one boundary-sweep batch, keyed by which leaf of
// the pair was actually served.
struct ServedCounts {
    std::uint64_t first = 0;
    std::uint64_t second = 0;

    ServedCounts& operator+=(const ServedCounts& other) {
        first += other.first;
        second += other.second;
        return *this;
    }
};

}  // namespace

StarNetwork::StarNetwork(int node_count, NodeId root, std::vector<ChannelNoise> channels)
    : node_count_(node_count), root_(root), channels_(std::move(channels)) {
    if (node_count_ < 3) {
        throw ConfigError("network needs at least 3 nodes, got " + std::to_string(node_count_));
    }
    if (!contains(root_)) {
        throw ConfigError("root node " + std::to_string(root_) + " outside 1.." +
                          std::to_string(node_count_));
    }
    if (channels_.size() != static_cast<std::size_t>(node_count_)) {
        throw ConfigError("expected one channel per node (" + std::to_string(node_count_) +
                          "), got " + std::to_string(channels_.size()));
    }
}

StarNetwork StarNetwork::noiseless(int node_count, NodeId root) {
    return StarNetwork(node_count, root, std::vector<ChannelNoise>(node_count));
}

StarNetwork StarNetwork::uniform(int node_count, NodeId root, const ChannelNoise& noise) {
    return StarNetwork(node_count, root, std::vector<ChannelNoise>(node_count, noise));
}

const ChannelNoise& StarNetwork::channel(NodeId node) const {
    if (!contains(node)) {
        throw ConfigError("node " + std::to_string(node) + " outside 1.." +
                          std::to_string(node_count_));
    }
    return channels_[static_cast<std::size_t>(node - 1)];
}

std::vector<NodeId> StarNetwork::leaves() const {
    std::vector<NodeId> result;
    result.reserve(static_cast<std::size_t>(node_count_ - 1));
    for (NodeId node = 1; node <= node_count_; ++node) {
        if (node != root_) {
            result.push_back(node);
        }
    }
    return result;
}

StarNetwork StarNetwork::rerooted(NodeId new_root) const {
    return StarNetwork(node_count_, new_root, channels_);
}

std::string StarNetwork::describe() const {
    std::string text = "nodes=" + std::to_string(node_count_) + " root=" + std::to_string(root_);
    text += " loss=[";
    for (std::size_t i = 0; i < channels_.size(); ++i) {
        text += (i ? "," : "") + format_rate(channels_[i].loss());
    }
    text += "] flip=[";
    for (std::size_t i = 0; i < channels_.size(); ++i) {
        text += (i ? "," : "") + format_rate(channels_[i].flip());
    }
    text += "]";
    return text;
}

void validate_request(const StarNetwork& network, const SlotRequest& request) {
    if (!network.contains(request.primary_leaf)) {
        throw ConfigError("primary leaf " + std::to_string(request.primary_leaf) +
                          " is not a node of the network");
    }
    if (request.primary_leaf == network.root()) {
        throw ConfigError("primary leaf must differ from the root node " +
                          std::to_string(network.root()));
    }
    if (request.backup_leaf) {
        if (!network.contains(*request.backup_leaf)) {
            throw ConfigError("backup leaf " + std::to_string(*request.backup_leaf) +
                              " is not a node of the network");
        }
        if (*request.backup_leaf == network.root()) {
            throw ConfigError("backup leaf must differ from the root node " +
                              std::to_string(network.root()));
        }
        if (*request.backup_leaf == request.primary_leaf) {
            throw ConfigError("backup leaf must differ from the primary leaf " +
                              std::to_string(request.primary_leaf));
        }
    }
}

const char* to_string(SlotOutcome outcome) {
    switch (outcome) {
        case SlotOutcome::FulfilledPrimary: return "fulfilled_primary";
        case SlotOutcome::FulfilledBackup: return "fulfilled_backup";
        case SlotOutcome::FailedRootLoss: return "failed_root_loss";
        case SlotOutcome::FailedLeafLoss: return "failed_leaf_loss";
        case SlotOutcome::FailedParity: return "failed_parity";
    }
    return "unknown";
}

void TrialTally::add(SlotOutcome outcome) {
    ++trials_;
    ++counts_[static_cast<int>(outcome)];
}

std::uint64_t TrialTally::count(SlotOutcome outcome) const {
    return counts_[static_cast<int>(outcome)];
}

double TrialTally::rate(SlotOutcome outcome) const {
    if (trials_ == 0) {
        return 0.0;
    }
    return static_cast<double>(count(outcome)) / static_cast<double>(trials_);
}

TrialTally& TrialTally::operator+=(const TrialTally& other) {
    trials_ += other.trials_;
    for (int i = 0; i < kSlotOutcomeCount; ++i) {
        counts_[i] += other.counts_[i];
    }
    return *this;
}

SlotOutcome run_slot(const StarNetwork& network, const SlotRequest& request, RandomStream& rng) {
    // Every node transmits each slot; draws happen in ascending node order so
    // a trial's stream consumption is a fixed function of the topology.
    std::vector<LinkEntanglement> links;
    links.reserve(static_cast<std::size_t>(network.node_count()));
    for (NodeId node = 1; node <= network.node_count(); ++node) {
        links.push_back(establish_link(network.channel(node), rng));
    }
    const auto link = [&](NodeId node) { return links[static_cast<std::size_t>(node - 1)]; };

    const LinkEntanglement root_link = link(network.root());
    if (!root_link.present) {
        // Backup cannot help without the root qubit.
        return SlotOutcome::FailedRootLoss;
    }

    NodeId served = 0;
    bool via_backup = false;
    if (link(request.primary_leaf).present) {
        served = request.primary_leaf;
    } else if (request.backup_leaf && link(*request.backup_leaf).present) {
        served = *request.backup_leaf;
        via_backup = true;
    } else {
        return SlotOutcome::FailedLeafLoss;
    }

    const EndToEndPair pair = entanglement_swap(root_link, link(served));
    if (parity_check(pair) != ParityResult::Fulfilled) {
        return SlotOutcome::FailedParity;
    }
    return via_backup ? SlotOutcome::FulfilledBackup : SlotOutcome::FulfilledPrimary;
}

TrialTally run_trials(const StarNetwork& network, const SlotRequest& request,
                      std::uint64_t trials, std::uint64_t master_seed, int workers) {
    validate_request(network, request);
    if (trials == 0) {
        throw ConfigError("trials must be >= 1");
    }
    if (workers < 1) {
        throw ConfigError("workers must be >= 1");
    }
    return parallel_reduce(trials, workers, [&](std::uint64_t begin, std::uint64_t end) {
        TrialTally tally;
        for (std::uint64_t t = begin; t < end; ++t) {
            RandomStream rng = RandomStream::for_trial(master_seed, t);
            tally.add(run_slot(network, request, rng));
        }
        return tally;
    });
}

std::vector<BoundarySample> sweep_mixed(const StarNetwork& network,
                                        std::pair<NodeId, NodeId> pair,
                                        const std::vector<double>& fractions,
                                        std::uint64_t trials, std::uint64_t master_seed,
                                        int workers) {
    validate_request(network, SlotRequest{pair.first, pair.second});
    validate_request(network, SlotRequest{pair.second, pair.first});
    if (trials == 0) {
        throw ConfigError("trials must be >= 1");
    }
    if (workers < 1) {
        throw ConfigError("workers must be >= 1");
    }
    for (double p : fractions) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw ConfigError("sweep fraction " + std::to_string(p) + " outside [0, 1]");
        }
    }

    std::vector<BoundarySample> samples;
    samples.reserve(fractions.size());
    for (std::size_t i = 0; i < fractions.size(); ++i) {
        const double p = fractions[i];
        const std::uint64_t sweep_seed = RandomStream::derive(master_seed, i);
        const SlotRequest first_priority{pair.first, pair.second};
        const SlotRequest second_priority{pair.second, pair.first};

        // Priority draw first, then the slot's channel draws. Primary
        // successes serve the prioritized leaf, backup successes the other.
        const ServedCounts counts =
            parallel_reduce(trials, workers, [&](std::uint64_t begin, std::uint64_t end) {
                ServedCounts part;
                for (std::uint64_t t = begin; t < end; ++t) {
                    RandomStream rng = RandomStream::for_trial(sweep_seed, t);
                    const bool first_is_primary = rng.bernoulli(p);
                    const SlotRequest& request = first_is_primary ? first_priority : second_priority;
                    switch (run_slot(network, request, rng)) {
                        case SlotOutcome::FulfilledPrimary:
                            (first_is_primary ? part.first : part.second) += 1;
                            break;
                        case SlotOutcome::FulfilledBackup:
                            (first_is_primary ? part.second : part.first) += 1;
                            break;
                        default:
                            break;
                    }
                }
                return part;
            });

        const double served_first = static_cast<double>(counts.first) / static_cast<double>(trials);
        const double served_second = static_cast<double>(counts.second) / static_cast<double>(trials);
        samples.push_back({p, served_second, served_first,
                           standard_error(served_second, trials),
                           standard_error(served_first, trials)});
    }
    return samples;
}

}  // namespace starqcr
