#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "starqcr/errors.hpp"
#include "starqcr/qcr.hpp"
#include "starqcr/report.hpp"
#include "starqcr/rng.hpp"
#include "starqcr/scenario.hpp"
#include "starqcr/tomography.hpp"

namespace {

using namespace starqcr;

struct CliOptions {
    std::string config_path;
    std::optional<std::uint64_t> trials;
    std::optional<std::uint64_t> seed;
    std::optional<int> root;
    std::optional<std::string> pair_text;
    std::optional<std::string> out_dir;
    int workers = 1;
    bool inject_analytic_bias = false;
};

std::pair<NodeId, NodeId> parse_pair_flag(const std::string& text) {
    const std::size_t comma = text.find(',');
    if (comma == std::string::npos) {
        throw ConfigError("--pair expects two comma-separated leaves, e.g. 2,3");
    }
    const auto parse_leaf = [&](std::size_t begin, std::size_t end) {
        NodeId leaf = 0;
        const char* first = text.data() + begin;
        const char* last = text.data() + end;
        const auto result = std::from_chars(first, last, leaf);
        if (result.ec != std::errc{} || result.ptr != last) {
            throw ConfigError("--pair: '" + text.substr(begin, end - begin) +
                              "' is not a node id");
        }
        return leaf;
    };
    return {parse_leaf(0, comma), parse_leaf(comma + 1, text.size())};
}

ScenarioConfig load_with_overrides(const CliOptions& options) {
    ScenarioConfig config = load_scenario(options.config_path);
    if (options.trials) {
        if (*options.trials == 0) {
            throw ConfigError("--trials must be >= 1");
        }
        config.trials = *options.trials;
    }
    if (options.seed) {
        config.master_seed = *options.seed;
    }
    if (options.root) {
        if (*options.root < 1 || *options.root > config.node_count) {
            throw ConfigError("--root " + std::to_string(*options.root) + " outside 1.." +
                              std::to_string(config.node_count));
        }
        config.root = *options.root;
    }
    if (options.pair_text) {
        config.pair = parse_pair_flag(*options.pair_text);
    }
    if (config.pair) {
        for (NodeId leaf : {config.pair->first, config.pair->second}) {
            if (leaf < 1 || leaf > config.node_count) {
                throw ConfigError("pair leaf " + std::to_string(leaf) + " outside 1.." +
                                  std::to_string(config.node_count));
            }
            if (leaf == config.root) {
                throw ConfigError("pair leaf " + std::to_string(leaf) +
                                  " equals the root node");
            }
        }
        if (config.pair->first == config.pair->second) {
            throw ConfigError("pair leaves must be distinct");
        }
    }
    if (options.out_dir) {
        config.output_dir = *options.out_dir;
    }
    return config;
}

std::filesystem::path prepare_output_dir(const ScenarioConfig& config) {
    const std::filesystem::path dir = config.output_dir;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw ConfigError("cannot create output directory '" + dir.string() +
                          "': " + ec.message());
    }
    return dir;
}

std::string pair_label(std::pair<NodeId, NodeId> pair) {
    return std::to_string(pair.first) + "-" + std::to_string(pair.second);
}

int cmd_points(const CliOptions& options) {
    const ScenarioConfig config = load_with_overrides(options);
    const StarNetwork network = config.build_network();
    const auto pair = config.effective_pair();
    const CapacityRegion region = estimate_reference_points(
        network, config.root, pair, config.trials, config.master_seed, options.workers);

    CsvWriter csv({"scenario_id", "root", "pair", "point", "x", "y", "se_x", "se_y", "trials",
                   "seed"});
    const struct {
        const QcrPoint& point;
        const char* name;
    } rows[] = {{region.a, "A"}, {region.b, "B"}, {region.c, "C"}, {region.d, "D"}};
    for (const auto& row : rows) {
        csv.add_row({config.scenario_id, std::to_string(config.root), pair_label(pair), row.name,
                     format_number(row.point.x), format_number(row.point.y),
                     format_number(row.point.se_x), format_number(row.point.se_y),
                     std::to_string(config.trials), std::to_string(config.master_seed)});
    }
    const auto path = prepare_output_dir(config) / "points.csv";
    csv.write_file(path);

    for (const auto& row : rows) {
        std::printf("%s: x = %s +- %s, y = %s +- %s\n", row.name,
                    format_number(row.point.x).c_str(), format_number(row.point.se_x).c_str(),
                    format_number(row.point.y).c_str(), format_number(row.point.se_y).c_str());
    }
    std::printf("wrote %s\n", path.string().c_str());
    return 0;
}

int cmd_region(const CliOptions& options) {
    const ScenarioConfig config = load_with_overrides(options);
    const StarNetwork network = config.build_network();
    const auto pair = config.effective_pair();
    const auto fractions = config.effective_fractions();

    CapacityRegion region = estimate_reference_points(
        network, config.root, pair, config.trials, config.master_seed, options.workers);
    // Sweep seed is derived past the two reference-point runs so all three
    // batches use disjoint substreams.
    const std::uint64_t sweep_seed = RandomStream::derive(config.master_seed, 2);
    region.boundary = sweep_mixed(network, pair, fractions, config.trials, sweep_seed,
                                  options.workers);

    CsvWriter csv({"scenario_id", "fraction", "x", "y", "se_x", "se_y"});
    for (const auto& sample : region.boundary) {
        csv.add_row({config.scenario_id, format_number(sample.fraction),
                     format_number(sample.x), format_number(sample.y),
                     format_number(sample.se_x), format_number(sample.se_y)});
    }
    const auto dir = prepare_output_dir(config);
    const auto csv_path = dir / "region.csv";
    const auto svg_path = dir / "region.svg";
    csv.write_file(csv_path);
    write_text_file(svg_path, render_region_svg(region));

    std::printf("%zu boundary samples, pair %s, root %d\n", region.boundary.size(),
                pair_label(pair).c_str(), config.root);
    std::printf("wrote %s\n", csv_path.string().c_str());
    std::printf("wrote %s\n", svg_path.string().c_str());
    return 0;
}

std::string sanitize_cell(std::string text) {
    for (char& c : text) {
        if (c == ',' || c == '\n') {
            c = ';';
        }
    }
    return text;
}

int cmd_tomography(const CliOptions& options) {
    const ScenarioConfig config = load_with_overrides(options);
    const StarNetwork network = config.build_network();
    const TomographyReport report =
        full_tomography(network, config.trials, config.master_seed, options.workers);

    CsvWriter csv({"channel", "loss_estimate", "se", "source_root", "combined", "status"});
    for (const auto& channel : report.channels) {
        for (const auto& estimate : channel.estimates) {
            csv.add_row({std::to_string(channel.channel), format_number(estimate.loss),
                         format_number(estimate.se), std::to_string(estimate.source_root), "no",
                         "ok"});
        }
        for (const auto& failure : channel.failures) {
            csv.add_row({std::to_string(channel.channel), "", "", "", "no",
                         sanitize_cell(failure)});
        }
        if (channel.combined) {
            csv.add_row({std::to_string(channel.channel), format_number(channel.combined->loss),
                         format_number(channel.combined->se), "0", "yes", "ok"});
        } else {
            csv.add_row({std::to_string(channel.channel), "", "", "0", "yes",
                         "inference-undefined"});
        }
    }
    const auto path = prepare_output_dir(config) / "tomography.csv";
    csv.write_file(path);

    for (const auto& channel : report.channels) {
        if (channel.combined) {
            std::printf("QC%d: loss = %s +- %s\n", channel.channel,
                        format_number(channel.combined->loss).c_str(),
                        format_number(channel.combined->se).c_str());
        } else {
            std::printf("QC%d: inference undefined\n", channel.channel);
        }
    }
    std::printf("wrote %s\n", path.string().c_str());
    if (!report.any_success()) {
        std::fprintf(stderr, "error: no channel loss could be inferred\n");
        return 1;
    }
    return 0;
}

int cmd_validate(const CliOptions& options) {
    const ScenarioConfig config = load_with_overrides(options);
    const StarNetwork network = config.build_network();
    const auto pair = config.effective_pair();

    const CapacityRegion mc = estimate_reference_points(
        network, config.root, pair, config.trials, config.master_seed, options.workers);
    AnalyticPoints closed = closed_form_points(network.channel(config.root),
                                               network.channel(pair.first),
                                               network.channel(pair.second));
    if (options.inject_analytic_bias) {
        closed.b.x += 0.02;
    }
    const AnalyticPoints exact = enumerated_points(network, config.root, pair);

    struct Coordinate {
        const char* point;
        const char* axis;
        double estimate;
        double se;
        double closed;
        double exact;
    };
    const Coordinate coords[] = {
        {"A", "x", mc.a.x, mc.a.se_x, closed.a.x, exact.a.x},
        {"A", "y", mc.a.y, mc.a.se_y, closed.a.y, exact.a.y},
        {"B", "x", mc.b.x, mc.b.se_x, closed.b.x, exact.b.x},
        {"B", "y", mc.b.y, mc.b.se_y, closed.b.y, exact.b.y},
        {"C", "x", mc.c.x, mc.c.se_x, closed.c.x, exact.c.x},
        {"C", "y", mc.c.y, mc.c.se_y, closed.c.y, exact.c.y},
        {"D", "x", mc.d.x, mc.d.se_x, closed.d.x, exact.d.x},
        {"D", "y", mc.d.y, mc.d.se_y, closed.d.y, exact.d.y},
    };

    CsvWriter csv({"scenario_id", "point", "coordinate", "mc", "closed_form", "enumeration",
                   "z"});
    bool ok = true;
    for (const auto& coord : coords) {
        const double diff = coord.estimate - coord.closed;
        const double z = coord.se > 0.0
                             ? diff / coord.se
                             : (diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
        const bool agree = std::abs(coord.closed - coord.exact) <= 1e-12;
        if (std::abs(z) > 4.0 || !agree) {
            ok = false;
        }
        csv.add_row({config.scenario_id, coord.point, coord.axis, format_number(coord.estimate),
                     format_number(coord.closed), format_number(coord.exact),
                     format_number(z)});
        std::printf("%s.%s: mc = %s, closed form = %s, enumeration = %s, z = %s%s\n",
                    coord.point, coord.axis, format_number(coord.estimate).c_str(),
                    format_number(coord.closed).c_str(), format_number(coord.exact).c_str(),
                    format_number(z).c_str(), agree ? "" : " [closed form != enumeration]");
    }
    const auto path = prepare_output_dir(config) / "validate.csv";
    csv.write_file(path);
    std::printf("wrote %s\n", path.string().c_str());
    if (!ok) {
        std::fprintf(stderr,
                     "error: validation failed (|z| > 4 or closed form deviates from "
                     "enumeration)\n");
        return 1;
    }
    std::printf("validation passed\n");
    return 0;
}

void add_common_options(CLI::App* cmd, CliOptions& options, bool with_target) {
    cmd->add_option("--config", options.config_path, "Scenario file")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--trials", options.trials, "Override trial count");
    cmd->add_option("--seed", options.seed, "Override master seed");
    if (with_target) {
        cmd->add_option("--root", options.root, "Override root node");
        cmd->add_option("--pair", options.pair_text, "Override leaf pair, e.g. 2,3");
    }
    cmd->add_option("--out", options.out_dir, "Output directory");
    cmd->add_option("--workers", options.workers, "Worker threads (results are independent of this)")
        ->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Entanglement capacity regions and loss tomography for star networks"};
    app.require_subcommand(1);

    CliOptions options;
    CLI::App* points = app.add_subcommand("points", "Estimate the four reference points");
    add_common_options(points, options, true);
    CLI::App* region = app.add_subcommand("region", "Sweep the capacity-region boundary");
    add_common_options(region, options, true);
    CLI::App* tomography =
        app.add_subcommand("tomography", "Infer per-channel loss from region points");
    add_common_options(tomography, options, false);
    CLI::App* validate =
        app.add_subcommand("validate", "Cross-check Monte Carlo, closed form and enumeration");
    add_common_options(validate, options, true);
    validate->add_flag("--inject-analytic-bias", options.inject_analytic_bias)->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& help) {
        return app.exit(help);
    } catch (const CLI::ParseError& error) {
        std::fprintf(stderr, "error: %s\n", error.what());
        return 2;
    }

    try {
        if (points->parsed()) {
            return cmd_points(options);
        }
        if (region->parsed()) {
            return cmd_region(options);
        }
        if (tomography->parsed()) {
            return cmd_tomography(options);
        }
        return cmd_validate(options);
    } catch (const InferenceError& error) {
        std::fprintf(stderr, "error: %s\n", error.what());
        return 1;
    } catch (const ConfigError& error) {
        std::fprintf(stderr, "error: %s\n", error.what());
        return 2;
    } catch (const std::exception& error) {
        std::fprintf(stderr, "error: %s\n", error.what());
        return 2;
    }
}
