#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "starqcr/network.hpp"

namespace starqcr {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    bool operator==(const Point2&) const = default;
};

/// One capacity-region reference point with binomial standard errors.
struct QcrPoint {
    double x = 0.0;
    double y = 0.0;
    double se_x = 0.0;
    double se_y = 0.0;

    bool operator==(const QcrPoint&) const = default;
};

struct RegionMeta {
    std::uint64_t trials = 0;
    std::uint64_t master_seed = 0;
    std::string network;

    bool operator==(const RegionMeta&) const = default;
};

/// Estimated capacity region for one rooting: the four reference points,
/// optional boundary sweep samples and run metadata. By construction
/// a.x = 0, d.y = 0, b.y = a.y and c.x = d.x. Leaf j is served on the y axis,
/// leaf k on the x axis.
struct CapacityRegion {
    NodeId root = 0;
    NodeId leaf_j = 0;
    NodeId leaf_k = 0;
    QcrPoint a, b, c, d;
    std::vector<BoundarySample> boundary;
    RegionMeta meta;

    bool operator==(const CapacityRegion&) const = default;
};

/// Binomial standard error sqrt(p_hat (1 - p_hat) / n). Rejects n = 0.
double standard_error(double p_hat, std::uint64_t n);

/// Extracts the four reference points from two trial batches with derived
/// seeds: (primary = j, backup = k) yields A and B, the mirrored request
/// yields D and C. Enabling backup cannot change the primary success rate,
/// so one batch supplies both its points.
CapacityRegion estimate_reference_points(const StarNetwork& network, NodeId root,
                                         std::pair<NodeId, NodeId> pair,
                                         std::uint64_t trials, std::uint64_t master_seed,
                                         int workers = 1);

/// Boundary vertices in drawing order: A, B, boundary samples sorted by x,
/// C, D. Coincident vertices (within 1e-12 in both coordinates) are merged
/// and samples that would break the monotone frontier are dropped; along the
/// result x never decreases and y never increases, with the one vertical
/// C-D edge allowed.
std::vector<Point2> region_polyline(const CapacityRegion& region);

}  // namespace starqcr
