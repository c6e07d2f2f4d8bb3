// Acceptance gate: ten end-to-end checks at desk scale (10^4 trials per
// run). Prints exactly one [PASS]/[FAIL] line per criterion and exits with
// the number of failures, so a zero exit code is the green light.
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "starqcr/channel.hpp"
#include "starqcr/network.hpp"
#include "starqcr/qcr.hpp"
#include "starqcr/report.hpp"
#include "starqcr/rng.hpp"
#include "starqcr/tomography.hpp"

namespace {

using namespace starqcr;
namespace fs = std::filesystem;

constexpr std::uint64_t kTrials = 10000;
constexpr int kWorkers = 4;

// 3 sigma for a binomial rate of 0.15 (or 0.85) at 10^4 trials.
const double kPlateauTolerance = 3.0 * 0.00357;

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string fmt(double value) { return format_number(value); }

StarNetwork heterogeneous_network() {
    return StarNetwork(3, 1,
                       {ChannelNoise::from_error_rates(0.1, 0.1),
                        ChannelNoise::from_error_rates(0.1, 0.1),
                        ChannelNoise::from_error_rates(0.3, 0.3)});
}

Outcome oracle_equivalence() {
    RandomStream rng(901);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        std::vector<ChannelNoise> channels;
        for (int c = 0; c < 3; ++c) {
            channels.emplace_back(rng.next_unit(), rng.next_unit());
        }
        const StarNetwork network(3, 1, channels);
        const AnalyticPoints closed =
            closed_form_points(channels[0], channels[1], channels[2]);
        const AnalyticPoints exact = enumerated_points(network, 1, {2, 3});
        const double diffs[] = {closed.a.x - exact.a.x, closed.a.y - exact.a.y,
                                closed.b.x - exact.b.x, closed.b.y - exact.b.y,
                                closed.c.x - exact.c.x, closed.c.y - exact.c.y,
                                closed.d.x - exact.d.x, closed.d.y - exact.d.y};
        for (double diff : diffs) {
            worst = std::max(worst, std::abs(diff));
        }
    }
    return {worst <= 1e-12,
            "worst coordinate gap " + fmt(worst) + " over 1000 random configurations"};
}

Outcome flip_invariance() {
    RandomStream rng(902);
    double worst = 0.0;
    int accepted = 0;
    while (accepted < 500) {
        const double s1 = rng.next_unit(), s2 = rng.next_unit(), s3 = rng.next_unit();
        const ChannelNoise c1(s1, rng.next_unit());
        const ChannelNoise c2(s2, rng.next_unit());
        const ChannelNoise c3(s3, rng.next_unit());
        const AnalyticPoints p = closed_form_points(c1, c2, c3);
        if (p.d.x <= 0.01 || p.a.y <= 0.0) {
            continue;
        }
        ++accepted;
        worst = std::max(worst, std::abs(p.b.x / p.d.x - (1.0 - s2)));
        worst = std::max(worst, std::abs(p.c.y / p.a.y - (1.0 - s3)));
    }
    return {worst <= 1e-12,
            "worst ratio error " + fmt(worst) + " over 500 configurations with random flip rates"};
}

Outcome lossy_leaf_plateau() {
    const StarNetwork network(3, 1,
                              {ChannelNoise(), ChannelNoise(0.85, 1.0), ChannelNoise()});
    const CapacityRegion region =
        estimate_reference_points(network, 1, {2, 3}, kTrials, 903, kWorkers);
    return {std::abs(region.b.x - 0.15) <= kPlateauTolerance,
            "B.x = " + fmt(region.b.x) + " +- " + fmt(region.b.se_x) + ", exact 0.15"};
}

Outcome plateau_with_flips() {
    const StarNetwork network(3, 1,
                              {ChannelNoise(), ChannelNoise(0.85, 0.85), ChannelNoise()});
    const CapacityRegion region =
        estimate_reference_points(network, 1, {2, 3}, kTrials, 904, kWorkers);
    return {std::abs(region.b.x - 0.15) <= kPlateauTolerance,
            "B.x = " + fmt(region.b.x) + " +- " + fmt(region.b.se_x) +
                " with flip rate 0.15 on the same leaf"};
}

Outcome root_loss_signature() {
    const StarNetwork network(3, 1,
                              {ChannelNoise(0.85, 1.0), ChannelNoise(), ChannelNoise()});
    const CapacityRegion region =
        estimate_reference_points(network, 1, {2, 3}, kTrials, 905, kWorkers);
    const bool scaled = std::abs(region.a.y - 0.85) <= kPlateauTolerance &&
                        std::abs(region.d.x - 0.85) <= kPlateauTolerance;
    const bool absent = region.b.x == 0.0 && region.c.y == 0.0;
    return {scaled && absent, "A.y = " + fmt(region.a.y) + ", D.x = " + fmt(region.d.x) +
                                  ", B.x = " + fmt(region.b.x) + ", C.y = " + fmt(region.c.y)};
}

Outcome homogeneous_tomography() {
    const StarNetwork network = StarNetwork::uniform(3, 1, ChannelNoise(0.9, 1.0));
    const CapacityRegion region =
        estimate_reference_points(network, 1, {2, 3}, kTrials, 906, kWorkers);
    const LeafLossPair losses = infer_leaf_losses(region);
    const bool pass = std::abs(losses.leaf_j.loss - 0.10) <= 3.0 * losses.leaf_j.se &&
                      std::abs(losses.leaf_k.loss - 0.10) <= 3.0 * losses.leaf_k.se;
    return {pass, "loss(2) = " + fmt(losses.leaf_j.loss) + " +- " + fmt(losses.leaf_j.se) +
                      ", loss(3) = " + fmt(losses.leaf_k.loss) + " +- " +
                      fmt(losses.leaf_k.se) + ", true 0.1"};
}

Outcome heterogeneous_tomography() {
    const CapacityRegion region = estimate_reference_points(heterogeneous_network(), 1, {2, 3},
                                                            kTrials, 907, kWorkers);
    const LeafLossPair losses = infer_leaf_losses(region);
    const bool pass = std::abs(losses.leaf_j.loss - 0.10) <= 3.0 * losses.leaf_j.se &&
                      std::abs(losses.leaf_k.loss - 0.30) <= 3.0 * losses.leaf_k.se;
    return {pass, "loss(2) = " + fmt(losses.leaf_j.loss) + " +- " + fmt(losses.leaf_j.se) +
                      " (true 0.1), loss(3) = " + fmt(losses.leaf_k.loss) + " +- " +
                      fmt(losses.leaf_k.se) + " (true 0.3)"};
}

Outcome rerooting_recovery() {
    const TomographyReport report =
        full_tomography(heterogeneous_network(), kTrials, 908, kWorkers);
    const double truth[] = {0.1, 0.1, 0.3};
    bool pass = true;
    std::string detail;
    for (NodeId id = 1; id <= 3; ++id) {
        const ChannelTomography& channel = report.channel(id);
        if (!channel.combined) {
            pass = false;
            detail += (detail.empty() ? "" : ", ") + ("QC" + std::to_string(id)) + " undefined";
            continue;
        }
        if (std::abs(channel.combined->loss - truth[id - 1]) > 3.0 * channel.combined->se) {
            pass = false;
        }
        detail += (detail.empty() ? "" : ", ") + ("QC" + std::to_string(id)) + " = " +
                  fmt(channel.combined->loss) + " +- " + fmt(channel.combined->se);
    }
    return {pass, detail};
}

int run_command(const std::string& command) {
    const int status = std::system(command.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

Outcome worker_determinism() {
    const char* cli = std::getenv("STARQCR_CLI");
    if (cli == nullptr) {
        return {false, "STARQCR_CLI is not set"};
    }
    const fs::path dir =
        fs::temp_directory_path() / ("starqcr_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const fs::path config = dir / "determinism.cfg";
    {
        std::ofstream out(config);
        out << "scenario.id = determinism\n"
            << "channel.1.loss = 0.1\nchannel.1.flip = 0.1\n"
            << "channel.2.loss = 0.1\nchannel.2.flip = 0.1\n"
            << "channel.3.loss = 0.3\nchannel.3.flip = 0.3\n"
            << "trials = 10000\nseed = 90210\n";
    }
    const std::string base = std::string(cli) + " points --config " + config.string();
    const int exit1 =
        run_command(base + " --workers 1 --out " + (dir / "w1").string() + " >/dev/null 2>&1");
    const int exit8 =
        run_command(base + " --workers 8 --out " + (dir / "w8").string() + " >/dev/null 2>&1");
    if (exit1 != 0 || exit8 != 0) {
        return {false, "CLI exited with " + std::to_string(exit1) + " and " +
                           std::to_string(exit8)};
    }
    const std::string csv1 = read_file(dir / "w1" / "points.csv");
    const std::string csv8 = read_file(dir / "w8" / "points.csv");
    return {!csv1.empty() && csv1 == csv8,
            "points.csv identical across 1 and 8 workers (" +
                std::to_string(csv1.size()) + " bytes)"};
}

Outcome noiseless_exactness() {
    const StarNetwork network = StarNetwork::noiseless();
    CapacityRegion region =
        estimate_reference_points(network, 1, {2, 3}, kTrials, 910, kWorkers);
    bool pass = region.a == QcrPoint{0.0, 1.0, 0.0, 0.0} &&
                region.d == QcrPoint{1.0, 0.0, 0.0, 0.0} && region.b.x == 0.0 &&
                region.b.se_x == 0.0 && region.c.y == 0.0 && region.c.se_y == 0.0;

    std::vector<double> fractions;
    for (int i = 0; i <= 10; ++i) {
        fractions.push_back(static_cast<double>(i) / 10.0);
    }
    region.boundary = sweep_mixed(network, {2, 3}, fractions, kTrials, 911, kWorkers);
    for (const BoundarySample& sample : region.boundary) {
        pass = pass && sample.x + sample.y == 1.0;
    }
    const std::vector<Point2> polyline = region_polyline(region);
    pass = pass && polyline.front() == Point2{0.0, 1.0} && polyline.back() == Point2{1.0, 0.0};
    for (const Point2& vertex : polyline) {
        pass = pass && vertex.x + vertex.y == 1.0;
    }
    return {pass, "A = (0, 1), D = (1, 0), every boundary sample exactly on x + y = 1"};
}

}  // namespace

int main() {
    struct Criterion {
        const char* label;
        Outcome (*check)();
    };
    const Criterion criteria[] = {
        {"closed-form points match exhaustive enumeration", oracle_equivalence},
        {"inferred loss ratios are invariant to bit-flip rates", flip_invariance},
        {"single lossy leaf: backup rate B.x sits at the loss rate", lossy_leaf_plateau},
        {"adding leaf flips leaves the B.x plateau unchanged", plateau_with_flips},
        {"lossy root scales A and D and removes B and C", root_loss_signature},
        {"homogeneous 10% leaf losses recovered from one rooting", homogeneous_tomography},
        {"heterogeneous losses recovered under flip noise", heterogeneous_tomography},
        {"re-rooting recovers all three channel losses", rerooting_recovery},
        {"worker count does not change output bytes", worker_determinism},
        {"noiseless network saturates the ideal frontier exactly", noiseless_exactness},
    };

    int failures = 0;
    int index = 1;
    for (const Criterion& criterion : criteria) {
        Outcome outcome;
        try {
            outcome = criterion.check();
        } catch (const std::exception& error) {
            outcome = {false, std::string("exception: ") + error.what()};
        }
        std::printf("[%s] %2d. %s (%s)\n", outcome.pass ? "PASS" : "FAIL", index,
                    criterion.label, outcome.detail.c_str());
        failures += outcome.pass ? 0 : 1;
        ++index;
    }
    std::printf("acceptance: %d/10 criteria passed\n", 10 - failures);
    return failures;
}
