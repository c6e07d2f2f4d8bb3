#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "starqcr/qcr.hpp"

namespace starqcr {

/// Exact reference-point coordinates computed in closed form. Shares the
/// structure of an estimated region: a.x = 0, d.y = 0, b.y = a.y, c.x = d.x.
struct AnalyticPoints {
    Point2 a, b, c, d;

    bool operator==(const AnalyticPoints&) const = default;
};

/// Exact probability of each slot outcome for one request.
struct SlotDistribution {
    double fulfilled_primary = 0.0;
    double fulfilled_backup = 0.0;
    double failed_root_loss = 0.0;
    double failed_leaf_loss = 0.0;
    double failed_parity = 0.0;

    double probability(SlotOutcome outcome) const;
    double total() const;
};

/// Closed-form reference points for a rooted triple. With survival s and
/// flip fidelity f per channel (root = 1, leaf j on the y axis, leaf k on
/// the x axis):
///   A = (0, s1 sj [f1 fj + (1-f1)(1-fj)])
///   B = (s1 (1-sj) sk [f1 fk + (1-f1)(1-fk)], A.y)
///   D = (s1 sk [f1 fk + (1-f1)(1-fk)], 0)
///   C = (D.x, s1 sj (1-sk) [f1 fj + (1-f1)(1-fj)])
AnalyticPoints closed_form_points(const ChannelNoise& root_noise,
                                  const ChannelNoise& leaf_j_noise,
                                  const ChannelNoise& leaf_k_noise);

/// Independent brute-force oracle: sums the slot semantics over the full
/// joint event space, each relevant channel contributing its three atoms
/// {lost, delivered-with-flip, delivered-ok}. Exact; probabilities sum to 1
/// within 1e-12.
SlotDistribution enumerate_exact(const StarNetwork& network, const SlotRequest& request);

/// Reference points assembled from two enumerate_exact evaluations; the
/// brute-force counterpart of closed_form_points.
AnalyticPoints enumerated_points(const StarNetwork& network, NodeId root,
                                 std::pair<NodeId, NodeId> pair);

/// Inferred loss probability (1 - survival) of one channel.
struct LossEstimate {
    NodeId channel = 0;
    double loss = 0.0;      // clamped to [0, 1]
    double raw_loss = 0.0;  // unclamped ratio, kept for diagnostics
    double se = 0.0;
    NodeId source_root = 0;  // 0 for combined estimates

    bool operator==(const LossEstimate&) const = default;
};

struct LeafLossPair {
    LossEstimate leaf_j;
    LossEstimate leaf_k;
};

/// Loss inference from reference-point ratios: loss(j) = B.x / D.x and
/// loss(k) = C.y / A.y, with first-order (delta method) error propagation.
/// Bit-flip rates cancel in both ratios. Throws InferenceError naming the
/// offending point when a denominator's 3-sigma lower bound is not positive.
LeafLossPair infer_leaf_losses(const CapacityRegion& region);

/// Exact flavor for closed-form points: returns (loss j, loss k).
std::pair<double, double> infer_leaf_losses(const AnalyticPoints& points);

/// Everything learned about one channel across the rooted extractions.
struct ChannelTomography {
    NodeId channel = 0;
    std::vector<LossEstimate> estimates;
    std::optional<LossEstimate> combined;  // inverse-variance weighted
    std::vector<std::string> failures;     // inference-undefined diagnostics

    bool ok() const { return combined.has_value(); }
};

struct TomographyReport {
    std::vector<ChannelTomography> channels;  // ascending by channel id
    std::uint64_t trials = 0;
    std::uint64_t master_seed = 0;

    const ChannelTomography& channel(NodeId id) const;
    bool any_success() const;
    bool all_success() const;
};

/// Rooted extraction schedule covering every channel in the leaf role at
/// least once, as (root, pair) entries. For n = 3 this is
/// {(1, (2, 3)), (2, (1, 3))}.
std::vector<std::pair<NodeId, std::pair<NodeId, NodeId>>> tomography_schedule(int node_count);

/// Full per-channel loss tomography: runs estimate_reference_points for each
/// scheduled rooting, infers leaf losses per region and combines repeated
/// measurements of the same channel by inverse-variance weighting. Channels
/// whose inference is undefined are reported as failures without aborting
/// the others.
TomographyReport full_tomography(const StarNetwork& network, std::uint64_t trials,
                                 std::uint64_t master_seed, int workers = 1);

}  // namespace starqcr
