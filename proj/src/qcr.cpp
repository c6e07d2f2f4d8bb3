#include "starqcr/qcr.hpp"

#include <algorithm>
#include <cmath>

#include "starqcr/errors.hpp"

namespace starqcr {

namespace {

constexpr double kMergeTolerance = 1e-12;

bool coincident(const Point2& a, const Point2& b) {
    return std::abs(a.x - b.x) <= kMergeTolerance && std::abs(a.y - b.y) <= kMergeTolerance;
}

// Frontier progress: x may only grow and y may only shrink, and at least one
// of them must move. Keeps the vertical C-D edge and the horizontal A-B
// plateau while rejecting backtracking vertices.
bool progresses(const Point2& from, const Point2& to) {
    if (coincident(from, to)) {
        return false;
    }
    return to.x >= from.x - kMergeTolerance && to.y <= from.y + kMergeTolerance;
}

}  // namespace

double standard_error(double p_hat, std::uint64_t n) {
    if (n == 0) {
        throw ConfigError("standard error undefined for n = 0");
    }
    if (!(p_hat >= 0.0 && p_hat <= 1.0)) {
        throw ConfigError("rate estimate " + std::to_string(p_hat) + " outside [0, 1]");
    }
    return std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(n));
}

CapacityRegion estimate_reference_points(const StarNetwork& network, NodeId root,
                                         std::pair<NodeId, NodeId> pair,
                                         std::uint64_t trials, std::uint64_t master_seed,
                                         int workers) {
    if (trials == 0) {
        throw ConfigError("trials must be >= 1");
    }
    const StarNetwork rooted = network.rerooted(root);
    const auto [leaf_j, leaf_k] = pair;
    validate_request(rooted, SlotRequest{leaf_j, leaf_k});
    validate_request(rooted, SlotRequest{leaf_k, leaf_j});

    // Independent seeds for the two request batches.
    const std::uint64_t seed_jk = RandomStream::derive(master_seed, 0);
    const std::uint64_t seed_kj = RandomStream::derive(master_seed, 1);

    const TrialTally toward_j = run_trials(rooted, {leaf_j, leaf_k}, trials, seed_jk, workers);
    const TrialTally toward_k = run_trials(rooted, {leaf_k, leaf_j}, trials, seed_kj, workers);

    const double a_y = toward_j.rate(SlotOutcome::FulfilledPrimary);
    const double b_x = toward_j.rate(SlotOutcome::FulfilledBackup);
    const double d_x = toward_k.rate(SlotOutcome::FulfilledPrimary);
    const double c_y = toward_k.rate(SlotOutcome::FulfilledBackup);

    const double se_a = standard_error(a_y, trials);
    const double se_b = standard_error(b_x, trials);
    const double se_d = standard_error(d_x, trials);
    const double se_c = standard_error(c_y, trials);

    CapacityRegion region;
    region.root = root;
    region.leaf_j = leaf_j;
    region.leaf_k = leaf_k;
    region.a = {0.0, a_y, 0.0, se_a};
    region.b = {b_x, a_y, se_b, se_a};
    region.c = {d_x, c_y, se_d, se_c};
    region.d = {d_x, 0.0, se_d, 0.0};
    region.meta = {trials, master_seed, rooted.describe()};
    return region;
}

std::vector<Point2> region_polyline(const CapacityRegion& region) {
    const Point2 a{region.a.x, region.a.y};
    const Point2 b{region.b.x, region.b.y};
    const Point2 c{region.c.x, region.c.y};
    const Point2 d{region.d.x, region.d.y};

    std::vector<Point2> samples;
    samples.reserve(region.boundary.size());
    for (const auto& sample : region.boundary) {
        samples.push_back({sample.x, sample.y});
    }
    std::sort(samples.begin(), samples.end(), [](const Point2& lhs, const Point2& rhs) {
        return lhs.x != rhs.x ? lhs.x < rhs.x : lhs.y > rhs.y;
    });

    std::vector<Point2> vertices;
    vertices.push_back(a);
    if (!coincident(a, b)) {
        vertices.push_back(b);
    }
    // Samples are droppable; the reference corners are not. A sample is kept
    // only if the frontier still progresses through it and onward to C.
    for (const auto& sample : samples) {
        if (coincident(vertices.back(), sample) || coincident(sample, c)) {
            continue;
        }
        if (progresses(vertices.back(), sample) && progresses(sample, c)) {
            vertices.push_back(sample);
        }
    }
    if (!coincident(vertices.back(), c)) {
        vertices.push_back(c);
    }
    if (!coincident(vertices.back(), d)) {
        vertices.push_back(d);
    }
    return vertices;
}

}  // namespace starqcr
