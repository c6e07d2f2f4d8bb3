#include "starqcr/tomography.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

#include "starqcr/errors.hpp"

namespace starqcr {

namespace {

double swap_success_factor(const ChannelNoise& a, const ChannelNoise& b) {
    const double fa = a.flip_fidelity();
    const double fb = b.flip_fidelity();
    // Parity survives when neither or both qubits flipped.
    return fa * fb + (1.0 - fa) * (1.0 - fb);
}

std::string format_point(double value, double se) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.6g (se %.3g)", value, se);
    return buffer;
}

// Delta-method ratio estimate with the denominator guarded at 3 sigma.
// The se form sqrt((se_num/den)^2 + (num se_den/den^2)^2) equals
// r sqrt((se_num/num)^2 + (se_den/den)^2) and stays defined at num = 0.
LossEstimate ratio_estimate(NodeId channel, NodeId source_root,
                            const char* num_name, double num, double se_num,
                            const char* den_name, double den, double se_den) {
    if (!(den - 3.0 * se_den > 0.0)) {
        throw InferenceError("loss of channel QC" + std::to_string(channel) + " undefined: " +
                             num_name + " / " + den_name + " has denominator " +
                             format_point(den, se_den) +
                             ", statistically indistinguishable from zero");
    }
    const double raw = num / den;
    const double term_num = se_num / den;
    const double term_den = num * se_den / (den * den);
    const double se = std::sqrt(term_num * term_num + term_den * term_den);
    return {channel, std::clamp(raw, 0.0, 1.0), raw, se, source_root};
}

// Inverse-variance weighted combination. Exact (zero-variance) estimates
// dominate: if any are present the combination is their mean with se 0.
LossEstimate combine_estimates(NodeId channel, const std::vector<LossEstimate>& estimates) {
    double exact_sum = 0.0;
    std::size_t exact_count = 0;
    for (const auto& estimate : estimates) {
        if (estimate.se == 0.0) {
            exact_sum += estimate.raw_loss;
            ++exact_count;
        }
    }
    double raw = 0.0;
    double se = 0.0;
    if (exact_count > 0) {
        raw = exact_sum / static_cast<double>(exact_count);
    } else {
        double weight_sum = 0.0;
        double weighted = 0.0;
        for (const auto& estimate : estimates) {
            const double weight = 1.0 / (estimate.se * estimate.se);
            weight_sum += weight;
            weighted += weight * estimate.raw_loss;
        }
        raw = weighted / weight_sum;
        se = std::sqrt(1.0 / weight_sum);
    }
    return {channel, std::clamp(raw, 0.0, 1.0), raw, se, 0};
}

}  // namespace

double SlotDistribution::probability(SlotOutcome outcome) const {
    switch (outcome) {
        case SlotOutcome::FulfilledPrimary: return fulfilled_primary;
        case SlotOutcome::FulfilledBackup: return fulfilled_backup;
        case SlotOutcome::FailedRootLoss: return failed_root_loss;
        case SlotOutcome::FailedLeafLoss: return failed_leaf_loss;
        case SlotOutcome::FailedParity: return failed_parity;
    }
    return 0.0;
}

double SlotDistribution::total() const {
    return fulfilled_primary + fulfilled_backup + failed_root_loss + failed_leaf_loss +
           failed_parity;
}

AnalyticPoints closed_form_points(const ChannelNoise& root_noise,
                                  const ChannelNoise& leaf_j_noise,
                                  const ChannelNoise& leaf_k_noise) {
    const double s_root = root_noise.survival();
    const double s_j = leaf_j_noise.survival();
    const double s_k = leaf_k_noise.survival();
    const double parity_j = swap_success_factor(root_noise, leaf_j_noise);
    const double parity_k = swap_success_factor(root_noise, leaf_k_noise);

    const double a_y = s_root * s_j * parity_j;
    const double b_x = s_root * (1.0 - s_j) * s_k * parity_k;
    const double c_y = s_root * s_j * (1.0 - s_k) * parity_j;
    const double d_x = s_root * s_k * parity_k;

    AnalyticPoints points;
    points.a = {0.0, a_y};
    points.b = {b_x, a_y};
    points.c = {d_x, c_y};
    points.d = {d_x, 0.0};
    return points;
}

SlotDistribution enumerate_exact(const StarNetwork& network, const SlotRequest& request) {
    validate_request(network, request);

    // Three atoms per relevant channel; channels not involved in the slot
    // integrate out to 1.
    enum Atom { kLost = 0, kFlip = 1, kOk = 2 };
    const auto atom_probabilities = [&](NodeId node) {
        const auto dist = transmission_distribution(network.channel(node));
        return std::array<double, 3>{dist.p_lost, dist.p_flip, dist.p_ok};
    };

    const auto root_atoms = atom_probabilities(network.root());
    const auto primary_atoms = atom_probabilities(request.primary_leaf);
    const bool has_backup = request.backup_leaf.has_value();
    const auto backup_atoms =
        has_backup ? atom_probabilities(*request.backup_leaf) : std::array<double, 3>{0, 0, 1};

    SlotDistribution dist;
    for (int root = 0; root < 3; ++root) {
        for (int primary = 0; primary < 3; ++primary) {
            for (int backup = 0; backup < 3; ++backup) {
                const double probability =
                    root_atoms[root] * primary_atoms[primary] * backup_atoms[backup];
                if (probability == 0.0) {
                    continue;
                }
                if (root == kLost) {
                    dist.failed_root_loss += probability;
                } else if (primary != kLost) {
                    const bool parity_ok = (root == kFlip) == (primary == kFlip);
                    (parity_ok ? dist.fulfilled_primary : dist.failed_parity) += probability;
                } else if (has_backup && backup != kLost) {
                    const bool parity_ok = (root == kFlip) == (backup == kFlip);
                    (parity_ok ? dist.fulfilled_backup : dist.failed_parity) += probability;
                } else {
                    dist.failed_leaf_loss += probability;
                }
            }
        }
    }
    return dist;
}

AnalyticPoints enumerated_points(const StarNetwork& network, NodeId root,
                                 std::pair<NodeId, NodeId> pair) {
    const StarNetwork rooted = network.rerooted(root);
    const SlotDistribution toward_j = enumerate_exact(rooted, {pair.first, pair.second});
    const SlotDistribution toward_k = enumerate_exact(rooted, {pair.second, pair.first});

    AnalyticPoints points;
    points.a = {0.0, toward_j.fulfilled_primary};
    points.b = {toward_j.fulfilled_backup, points.a.y};
    points.d = {toward_k.fulfilled_primary, 0.0};
    points.c = {points.d.x, toward_k.fulfilled_backup};
    return points;
}

LeafLossPair infer_leaf_losses(const CapacityRegion& region) {
    LeafLossPair pair;
    pair.leaf_j = ratio_estimate(region.leaf_j, region.root, "B.x", region.b.x, region.b.se_x,
                                 "D.x", region.d.x, region.d.se_x);
    pair.leaf_k = ratio_estimate(region.leaf_k, region.root, "C.y", region.c.y, region.c.se_y,
                                 "A.y", region.a.y, region.a.se_y);
    return pair;
}

std::pair<double, double> infer_leaf_losses(const AnalyticPoints& points) {
    const LossEstimate j = ratio_estimate(0, 0, "B.x", points.b.x, 0.0, "D.x", points.d.x, 0.0);
    const LossEstimate k = ratio_estimate(0, 0, "C.y", points.c.y, 0.0, "A.y", points.a.y, 0.0);
    return {j.loss, k.loss};
}

const ChannelTomography& TomographyReport::channel(NodeId id) const {
    for (const auto& entry : channels) {
        if (entry.channel == id) {
            return entry;
        }
    }
    throw ConfigError("no tomography entry for channel " + std::to_string(id));
}

bool TomographyReport::any_success() const {
    return std::any_of(channels.begin(), channels.end(),
                       [](const ChannelTomography& c) { return c.ok(); });
}

bool TomographyReport::all_success() const {
    return std::all_of(channels.begin(), channels.end(),
                       [](const ChannelTomography& c) { return c.ok(); });
}

std::vector<std::pair<NodeId, std::pair<NodeId, NodeId>>> tomography_schedule(int node_count) {
    std::vector<std::pair<NodeId, std::pair<NodeId, NodeId>>> schedule;
    // Root at N1: pair consecutive leaves so channels 2..n are all covered;
    // an odd leftover leaf is paired with its predecessor.
    std::vector<NodeId> leaves;
    for (NodeId node = 2; node <= node_count; ++node) {
        leaves.push_back(node);
    }
    for (std::size_t i = 0; i + 1 < leaves.size(); i += 2) {
        schedule.push_back({1, {leaves[i], leaves[i + 1]}});
    }
    if (leaves.size() % 2 == 1 && leaves.size() > 1) {
        schedule.push_back({1, {leaves[leaves.size() - 2], leaves.back()}});
    }
    // Re-root at N2 so channel 1 takes a leaf role.
    schedule.push_back({2, {1, 3}});
    return schedule;
}

TomographyReport full_tomography(const StarNetwork& network, std::uint64_t trials,
                                 std::uint64_t master_seed, int workers) {
    if (trials == 0) {
        throw ConfigError("trials must be >= 1");
    }

    TomographyReport report;
    report.trials = trials;
    report.master_seed = master_seed;
    report.channels.resize(static_cast<std::size_t>(network.node_count()));
    for (NodeId node = 1; node <= network.node_count(); ++node) {
        report.channels[static_cast<std::size_t>(node - 1)].channel = node;
    }
    auto& channels = report.channels;
    const auto record = [&](NodeId channel, LossEstimate estimate) {
        channels[static_cast<std::size_t>(channel - 1)].estimates.push_back(estimate);
    };
    const auto record_failure = [&](NodeId channel, const std::string& message) {
        channels[static_cast<std::size_t>(channel - 1)].failures.push_back(message);
    };

    const auto schedule = tomography_schedule(network.node_count());
    for (std::size_t e = 0; e < schedule.size(); ++e) {
        const auto& [root, pair] = schedule[e];
        const std::uint64_t extraction_seed = RandomStream::derive(master_seed, e);
        const CapacityRegion region =
            estimate_reference_points(network, root, pair, trials, extraction_seed, workers);
        try {
            record(region.leaf_j, ratio_estimate(region.leaf_j, region.root, "B.x", region.b.x,
                                                 region.b.se_x, "D.x", region.d.x, region.d.se_x));
        } catch (const InferenceError& error) {
            record_failure(region.leaf_j, error.what());
        }
        try {
            record(region.leaf_k, ratio_estimate(region.leaf_k, region.root, "C.y", region.c.y,
                                                 region.c.se_y, "A.y", region.a.y, region.a.se_y));
        } catch (const InferenceError& error) {
            record_failure(region.leaf_k, error.what());
        }
    }

    for (auto& entry : channels) {
        if (!entry.estimates.empty()) {
            entry.combined = combine_estimates(entry.channel, entry.estimates);
        }
    }
    return report;
}

}  // namespace starqcr
