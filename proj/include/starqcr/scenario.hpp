#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "starqcr/network.hpp"

namespace starqcr {

/// Per-channel error probabilities as scenario files state them:
/// loss = 1 - survival, flip = 1 - flip fidelity.
struct ChannelErrorRates {
    double loss = 0.0;
    double flip = 0.0;

    bool operator==(const ChannelErrorRates&) const = default;
};

/// One simulation scenario, parsed from a flat `key = value` file with
/// dotted keys:
///
///   scenario.id = lossy_leaf
///   network.nodes = 3
///   network.root = 1
///   channel.2.loss = 0.15
///   channel.2.flip = 0.0
///   trials = 10000
///   seed = 42
///   pair = 2,3
///   sweep.fractions = 0.0,0.25,0.5,0.75,1.0
///   output.dir = out
///
/// Channels default to noiseless; `#` starts a comment.
struct ScenarioConfig {
    std::string scenario_id = "scenario";
    int node_count = 3;
    NodeId root = 1;
    std::vector<ChannelErrorRates> channels{{}, {}, {}};  // one entry per node
    std::uint64_t trials = 10000;
    std::uint64_t master_seed = 1;
    std::optional<std::pair<NodeId, NodeId>> pair;
    std::optional<std::vector<double>> sweep_fractions;
    std::string output_dir = ".";

    StarNetwork build_network() const;

    /// Configured pair, or the two lowest-id leaves in ascending order.
    std::pair<NodeId, NodeId> effective_pair() const;

    /// Configured fractions, or the default grid 0.0, 0.1, ..., 1.0.
    std::vector<double> effective_fractions() const;

    bool operator==(const ScenarioConfig&) const = default;
};

/// Parses scenario text. Throws ConfigError naming the key and line of the
/// first problem.
ScenarioConfig parse_scenario(std::string_view text);

ScenarioConfig load_scenario(const std::filesystem::path& path);

/// Canonical text form; parse(serialize(config)) == config.
std::string serialize_scenario(const ScenarioConfig& config);

}  // namespace starqcr
