#include "starqcr/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "starqcr/errors.hpp"

namespace starqcr {

namespace {

struct RawEntry {
    std::string value;
    int line = 0;
    bool consumed = false;
};

std::string_view trim(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) {
        text.remove_prefix(1);
    }
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) {
        text.remove_suffix(1);
    }
    return text;
}

[[noreturn]] void fail(const std::string& message, int line) {
    throw ConfigError(message + " (line " + std::to_string(line) + ")");
}

template <typename T>
T parse_integer(const std::string& key, const RawEntry& entry) {
    T value{};
    const std::string_view text = entry.value;
    const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
    if (result.ec != std::errc{} || result.ptr != text.data() + text.size()) {
        fail(key + " = " + entry.value + " is not a valid integer", entry.line);
    }
    return value;
}

double parse_double(const std::string& key, const RawEntry& entry, std::string_view text) {
    double value{};
    const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
    if (result.ec != std::errc{} || result.ptr != text.data() + text.size()) {
        fail(key + ": '" + std::string(text) + "' is not a valid number", entry.line);
    }
    return value;
}

double parse_probability(const std::string& key, const RawEntry& entry) {
    const double value = parse_double(key, entry, entry.value);
    if (!(value >= 0.0 && value <= 1.0)) {
        fail(key + " = " + entry.value + " outside [0, 1]", entry.line);
    }
    return value;
}

std::vector<std::string_view> split(std::string_view text, char separator) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = text.find(separator, start);
        if (pos == std::string_view::npos) {
            parts.push_back(trim(text.substr(start)));
            return parts;
        }
        parts.push_back(trim(text.substr(start, pos - start)));
        start = pos + 1;
    }
}

bool valid_identifier(std::string_view text) {
    if (text.empty()) {
        return false;
    }
    return std::all_of(text.begin(), text.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '_' || c == '-' || c == '.';
    });
}

std::string format_full(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

}  // namespace

StarNetwork ScenarioConfig::build_network() const {
    if (channels.size() != static_cast<std::size_t>(node_count)) {
        throw ConfigError("scenario lists " + std::to_string(channels.size()) +
                          " channels for " + std::to_string(node_count) + " nodes");
    }
    std::vector<ChannelNoise> noise;
    noise.reserve(channels.size());
    for (const auto& rates : channels) {
        noise.push_back(ChannelNoise::from_error_rates(rates.loss, rates.flip));
    }
    return StarNetwork(node_count, root, std::move(noise));
}

std::pair<NodeId, NodeId> ScenarioConfig::effective_pair() const {
    if (pair) {
        return *pair;
    }
    std::pair<NodeId, NodeId> result{0, 0};
    for (NodeId node = 1; node <= node_count; ++node) {
        if (node == root) {
            continue;
        }
        if (result.first == 0) {
            result.first = node;
        } else {
            result.second = node;
            break;
        }
    }
    return result;
}

std::vector<double> ScenarioConfig::effective_fractions() const {
    if (sweep_fractions) {
        return *sweep_fractions;
    }
    std::vector<double> grid;
    grid.reserve(11);
    for (int i = 0; i <= 10; ++i) {
        grid.push_back(static_cast<double>(i) / 10.0);
    }
    return grid;
}

ScenarioConfig parse_scenario(std::string_view text) {
    std::map<std::string, RawEntry, std::less<>> entries;

    int line_number = 0;
    std::size_t offset = 0;
    while (offset <= text.size()) {
        const std::size_t newline = text.find('\n', offset);
        std::string_view line = text.substr(
            offset, newline == std::string_view::npos ? std::string_view::npos : newline - offset);
        ++line_number;
        offset = newline == std::string_view::npos ? text.size() + 1 : newline + 1;

        const std::size_t comment = line.find('#');
        if (comment != std::string_view::npos) {
            line = line.substr(0, comment);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const std::size_t equals = line.find('=');
        if (equals == std::string_view::npos) {
            fail("expected 'key = value', got '" + std::string(line) + "'", line_number);
        }
        const std::string key{trim(line.substr(0, equals))};
        const std::string value{trim(line.substr(equals + 1))};
        if (key.empty()) {
            fail("missing key before '='", line_number);
        }
        if (value.empty()) {
            fail("missing value for key '" + key + "'", line_number);
        }
        if (entries.contains(key)) {
            fail("duplicate key '" + key + "' (first set on line " +
                     std::to_string(entries[key].line) + ")",
                 line_number);
        }
        entries[key] = RawEntry{value, line_number, false};
    }

    ScenarioConfig config;
    const auto take = [&](const std::string& key) -> RawEntry* {
        auto it = entries.find(key);
        if (it == entries.end()) {
            return nullptr;
        }
        it->second.consumed = true;
        return &it->second;
    };

    if (const RawEntry* entry = take("scenario.id")) {
        if (!valid_identifier(entry->value)) {
            fail("scenario.id must be alphanumeric/._- , got '" + entry->value + "'", entry->line);
        }
        config.scenario_id = entry->value;
    }
    if (const RawEntry* entry = take("network.nodes")) {
        config.node_count = parse_integer<int>("network.nodes", *entry);
        if (config.node_count < 3) {
            fail("network.nodes must be >= 3", entry->line);
        }
    }
    config.channels.assign(static_cast<std::size_t>(config.node_count), ChannelErrorRates{});
    if (const RawEntry* entry = take("network.root")) {
        config.root = parse_integer<NodeId>("network.root", *entry);
        if (config.root < 1 || config.root > config.node_count) {
            fail("network.root = " + entry->value + " outside 1.." +
                     std::to_string(config.node_count),
                 entry->line);
        }
    }
    for (NodeId node = 1; node <= config.node_count; ++node) {
        const std::string prefix = "channel." + std::to_string(node) + ".";
        if (const RawEntry* entry = take(prefix + "loss")) {
            config.channels[static_cast<std::size_t>(node - 1)].loss =
                parse_probability(prefix + "loss", *entry);
        }
        if (const RawEntry* entry = take(prefix + "flip")) {
            config.channels[static_cast<std::size_t>(node - 1)].flip =
                parse_probability(prefix + "flip", *entry);
        }
    }
    if (const RawEntry* entry = take("trials")) {
        config.trials = parse_integer<std::uint64_t>("trials", *entry);
        if (config.trials == 0) {
            fail("trials must be >= 1", entry->line);
        }
    }
    if (const RawEntry* entry = take("seed")) {
        config.master_seed = parse_integer<std::uint64_t>("seed", *entry);
    }
    if (const RawEntry* entry = take("pair")) {
        const auto parts = split(entry->value, ',');
        if (parts.size() != 2) {
            fail("pair must be two comma-separated leaves, e.g. 2,3", entry->line);
        }
        RawEntry part_entry{std::string(parts[0]), entry->line, true};
        const NodeId first = parse_integer<NodeId>("pair", part_entry);
        part_entry.value = std::string(parts[1]);
        const NodeId second = parse_integer<NodeId>("pair", part_entry);
        for (NodeId leaf : {first, second}) {
            if (leaf < 1 || leaf > config.node_count) {
                fail("pair leaf " + std::to_string(leaf) + " outside 1.." +
                         std::to_string(config.node_count),
                     entry->line);
            }
            if (leaf == config.root) {
                fail("pair leaf " + std::to_string(leaf) + " equals the root node", entry->line);
            }
        }
        if (first == second) {
            fail("pair leaves must be distinct", entry->line);
        }
        config.pair = {first, second};
    }
    if (const RawEntry* entry = take("sweep.fractions")) {
        std::vector<double> fractions;
        for (const auto part : split(entry->value, ',')) {
            const double fraction = parse_double("sweep.fractions", *entry, part);
            if (!(fraction >= 0.0 && fraction <= 1.0)) {
                fail("sweep fraction " + std::string(part) + " outside [0, 1]", entry->line);
            }
            fractions.push_back(fraction);
        }
        if (fractions.empty()) {
            fail("sweep.fractions must list at least one value", entry->line);
        }
        config.sweep_fractions = std::move(fractions);
    }
    if (const RawEntry* entry = take("output.dir")) {
        config.output_dir = entry->value;
    }

    for (const auto& [key, entry] : entries) {
        if (!entry.consumed) {
            fail("unknown key '" + key + "'", entry.line);
        }
    }
    return config;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
    std::ifstream stream(path);
    if (!stream) {
        throw ConfigError("cannot open scenario file '" + path.string() + "'");
    }
    std::ostringstream buffer;
    buffer << stream.rdbuf();
    try {
        return parse_scenario(buffer.str());
    } catch (const ConfigError& error) {
        throw ConfigError(path.string() + ": " + error.what());
    }
}

std::string serialize_scenario(const ScenarioConfig& config) {
    std::ostringstream out;
    out << "scenario.id = " << config.scenario_id << "\n";
    out << "network.nodes = " << config.node_count << "\n";
    out << "network.root = " << config.root << "\n";
    for (std::size_t i = 0; i < config.channels.size(); ++i) {
        out << "channel." << (i + 1) << ".loss = " << format_full(config.channels[i].loss) << "\n";
        out << "channel." << (i + 1) << ".flip = " << format_full(config.channels[i].flip) << "\n";
    }
    out << "trials = " << config.trials << "\n";
    out << "seed = " << config.master_seed << "\n";
    if (config.pair) {
        out << "pair = " << config.pair->first << "," << config.pair->second << "\n";
    }
    if (config.sweep_fractions) {
        out << "sweep.fractions = ";
        for (std::size_t i = 0; i < config.sweep_fractions->size(); ++i) {
            out << (i ? "," : "") << format_full((*config.sweep_fractions)[i]);
        }
        out << "\n";
    }
    out << "output.dir = " << config.output_dir << "\n";
    return out.str();
}

}  // namespace starqcr
