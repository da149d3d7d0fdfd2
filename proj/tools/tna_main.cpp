// tna: command-line front end for the transition network analysis pipeline.
//
// Exit codes: 0 success, 2 input data error, 3 configuration error,
// 4 internal error.

#include <algorithm>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tna/error.hpp"
#include "tna/pipeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitConfig = 3;
constexpr int kExitInternal = 4;

struct CliState {
    tna::RunConfig config;
    std::string presets_dir = "data/presets";
    std::string simulate_target;
    std::string simulate_out;
    std::string aoi_map_out;
    std::string config_path;
};

// Config file support: simple "key = value" lines ('#' comments allowed),
// keys named like the long flags without the leading dashes. Values fill in
// any option not already given on the command line, giving the documented
// precedence: flags > config file > defaults. Implemented by injecting
// synthetic arguments before the CLI parse; unknown keys fail the parse like
// unknown flags would.
std::vector<std::string> apply_config_file(const std::vector<std::string>& args) {
    std::string path;
    std::vector<bool> is_config_token(args.size(), false);
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
            is_config_token[i] = is_config_token[i + 1] = true;
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            is_config_token[i] = true;
        }
    }
    if (path.empty()) {
        return args;
    }

    std::ifstream in(path);
    if (!in) {
        throw tna::ConfigError("cannot open config file: " + path);
    }

    std::set<std::string> given;
    for (const auto& arg : args) {
        if (arg.rfind("--", 0) == 0) {
            given.insert(arg.substr(0, arg.find('=')));
        }
    }

    std::vector<std::string> out;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (!is_config_token[i]) out.push_back(args[i]);
    }

    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw tna::ConfigError("config line " + std::to_string(line_no) +
                                   ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw tna::ConfigError("config line " + std::to_string(line_no) + ": empty key");
        }
        const std::string flag = "--" + key;
        if (given.contains(flag)) {
            continue;  // command line wins
        }
        if (value == "true" || value == "yes" || value == "on") {
            out.push_back(flag);
        } else if (value == "false" || value == "no" || value == "off") {
            // absent flag
        } else {
            out.push_back(flag);
            out.push_back(value);
        }
    }
    return out;
}

void add_input_options(CLI::App* sub, CliState& state, bool stages = true) {
    sub->add_option("--fixations", state.config.fixations_path, "Fixation log (CSV or JSONL)")
        ->required();
    sub->add_option("--aoi-map", state.config.aoi_map_path, "AOI map file")->required();
    if (stages) {
        sub->add_option("--stages", state.config.stages_path, "Stage annotations CSV");
    }
    sub->add_option("--input-format", state.config.input_format,
                    "Fixation log format: auto|csv|jsonl")
        ->default_str("auto");
    sub->add_option("--gap-ms", state.config.gap_ms,
                    "Max inter-fixation gap for merging, in ms")
        ->default_val(300);
}

void add_analysis_options(CLI::App* sub, CliState& state) {
    sub->add_option("--alpha", state.config.alpha, "Laplace smoothing constant")
        ->default_val(0.5);
    sub->add_flag_callback(
        "--no-entropy-renormalize",
        [&state] { state.config.entropy_renormalize = false; },
        "Keep raw smoothed probabilities when computing off-diagonal entropy");
}

void add_output_options(CLI::App* sub, CliState& state) {
    sub->add_option("--out-dir", state.config.out_dir, "Output directory")->default_str("out");
    sub->add_option("--format", state.config.formats, "Output formats (csv,json,dot)")
        ->delimiter(',');
    sub->add_flag("--full-precision", state.config.full_precision,
                  "Emit full-precision floats in JSON outputs");
}

void add_group_by(CLI::App* sub, CliState& state) {
    sub->add_option("--group-by", state.config.group_by,
                    "Grouping keys (subset of participant,role,stage)")
        ->delimiter(',');
}

bool wants(const tna::RunConfig& config, const char* fmt) {
    for (const auto& f : config.formats) {
        if (f == fmt) return true;
    }
    return false;
}

int cmd_validate(CliState& state) {
    const tna::ValidationReport report = tna::run_validate(state.config);
    std::cout << report.to_text();
    return report.ok ? kExitOk : kExitInput;
}

int cmd_analyze(CliState& state) {
    const tna::MetricsTable table = tna::run_analyze(state.config);
    if (wants(state.config, "csv")) {
        const auto path = state.config.out_dir / "metrics.csv";
        tna::write_text_file(path, tna::metrics_to_csv(table));
        std::cerr << "wrote " << path.string() << "\n";
    }
    if (wants(state.config, "json")) {
        const auto path = state.config.out_dir / "metrics.json";
        tna::write_text_file(path, tna::metrics_to_json(table, state.config.full_precision));
        std::cerr << "wrote " << path.string() << "\n";
    }
    std::cout << table.rows.size() << " metric rows\n";
    return kExitOk;
}

int cmd_compare(CliState& state) {
    const tna::ComparisonReport report = tna::run_compare(state.config);
    std::cout << tna::comparison_to_text(report);
    if (wants(state.config, "csv")) {
        const auto path = state.config.out_dir / "comparison.csv";
        tna::write_text_file(path, tna::comparison_to_csv(report));
        std::cerr << "wrote " << path.string() << "\n";
    }
    if (wants(state.config, "json")) {
        const auto path = state.config.out_dir / "comparison.json";
        tna::write_text_file(path,
                             tna::comparison_to_json(report, state.config.full_precision));
        std::cerr << "wrote " << path.string() << "\n";
    }
    return kExitOk;
}

int cmd_network(CliState& state) {
    const auto networks = tna::run_network(state.config);
    std::size_t written = 0;
    for (const auto& scoped : networks) {
        if (scoped.network.nodes.empty()) {
            std::cerr << "warning: empty scope cell, omitting "
                      << tna::network_file_stem(scoped.scope) << "\n";
            continue;
        }
        const std::string stem = tna::network_file_stem(scoped.scope);
        if (wants(state.config, "dot")) {
            tna::write_text_file(state.config.out_dir / (stem + ".dot"),
                                 tna::export_dot(scoped.network));
            ++written;
        }
        if (wants(state.config, "json")) {
            tna::write_text_file(
                state.config.out_dir / (stem + ".json"),
                tna::export_json(scoped.network, state.config.full_precision ? 17 : 6));
            ++written;
        }
    }
    std::cout << written << " network files in " << state.config.out_dir.string() << "\n";
    return kExitOk;
}

int cmd_motifs(CliState& state) {
    const auto rows = tna::run_motifs(state.config);
    if (wants(state.config, "csv")) {
        tna::write_text_file(state.config.out_dir / "motifs.csv", tna::motifs_to_csv(rows));
    }
    if (wants(state.config, "json")) {
        tna::write_text_file(state.config.out_dir / "motifs.json", tna::motifs_to_json(rows));
    }
    std::cout << rows.size() << " motifs\n";
    return kExitOk;
}

int cmd_simulate(CliState& state) {
    const tna::GeneratorSpec spec =
        tna::resolve_generator_spec(state.simulate_target, state.presets_dir, state.config);
    const auto records = tna::generate(spec);
    std::ostringstream csv;
    tna::write_fixation_csv(csv, records);
    tna::write_text_file(state.simulate_out, csv.str());
    std::cerr << "wrote " << state.simulate_out << "\n";
    if (!state.aoi_map_out.empty()) {
        std::ostringstream map;
        tna::write_aoi_map(map, tna::aoi_map_for(spec));
        tna::write_text_file(state.aoi_map_out, map.str());
        std::cerr << "wrote " << state.aoi_map_out << "\n";
    }
    std::cout << records.size() << " fixations\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Transition network analysis for eye-tracking fixation logs"};
    app.require_subcommand(1);
    CliState state;

    auto add_config_option = [&state](CLI::App* sub) {
        sub->add_option("--config", state.config_path,
                        "Config file (key = value lines matching the long flags)");
    };

    auto* validate = app.add_subcommand("validate", "Parse inputs and report counts");
    add_input_options(validate, state);
    add_config_option(validate);

    auto* analyze = app.add_subcommand("analyze", "Compute per-cell TNA metrics");
    add_input_options(analyze, state);
    add_analysis_options(analyze, state);
    add_group_by(analyze, state);
    add_output_options(analyze, state);
    add_config_option(analyze);

    auto* compare = app.add_subcommand("compare", "Group comparison with Kruskal-Wallis");
    add_input_options(compare, state);
    add_analysis_options(compare, state);
    compare->add_option("--metric", state.config.compare_metric,
                        "Metric to compare: entropy|self_loop|both")
        ->default_str("both");
    compare->add_option("--group-by", state.config.group_by, "Comparison key: role or stage")
        ->delimiter(',');
    add_output_options(compare, state);
    add_config_option(compare);

    auto* network = app.add_subcommand("network", "Export weighted directed graphs");
    add_input_options(network, state);
    add_analysis_options(network, state);
    network->add_option("--min-prob", state.config.min_prob,
                        "Minimum edge probability to include")
        ->default_val(0.0);
    add_group_by(network, state);
    add_output_options(network, state);
    add_config_option(network);

    auto* motifs = app.add_subcommand("motifs", "Enumerate dyadic and triadic motifs");
    add_input_options(motifs, state);
    add_analysis_options(motifs, state);
    motifs->add_option("--threshold", state.config.motif_threshold,
                       "Minimum edge probability for motif membership")
        ->default_val(0.15);
    motifs->add_option("--min-prob", state.config.min_prob,
                       "Edge inclusion threshold applied before motif search")
        ->default_val(0.0);
    add_group_by(motifs, state);
    add_output_options(motifs, state);
    add_config_option(motifs);

    auto* simulate = app.add_subcommand("simulate", "Generate a synthetic fixation log");
    simulate->add_option("target", state.simulate_target,
                         "Preset name (e.g. cpr-stage5) or generator spec JSON path")
        ->required();
    simulate->add_option("--out", state.simulate_out, "Output fixation CSV path")->required();
    simulate->add_option("--seed", state.config.seed,
                         "Seed override (0 keeps the spec's seed)");
    simulate->add_option("--presets-dir", state.presets_dir, "Preset directory")
        ->default_str("data/presets");
    simulate->add_option("--aoi-map-out", state.aoi_map_out,
                         "Also write the matching AOI map here");
    add_config_option(simulate);

    try {
        std::vector<std::string> args(argv + 1, argv + argc);
        args = apply_config_file(args);
        std::reverse(args.begin(), args.end());  // CLI11 consumes reversed argv
        app.parse(std::move(args));
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    } catch (const tna::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }

    try {
        if (validate->parsed()) return cmd_validate(state);
        if (analyze->parsed()) {
            if (!analyze->count("--format")) state.config.formats = {"csv", "json"};
            return cmd_analyze(state);
        }
        if (compare->parsed()) {
            if (!compare->count("--group-by")) state.config.group_by = {"role"};
            if (!compare->count("--format")) state.config.formats = {"csv", "json"};
            return cmd_compare(state);
        }
        if (network->parsed()) {
            if (!network->count("--group-by")) state.config.group_by = {"role"};
            if (!network->count("--format")) state.config.formats = {"dot", "json"};
            return cmd_network(state);
        }
        if (motifs->parsed()) {
            if (!motifs->count("--group-by")) state.config.group_by = {"role"};
            if (!motifs->count("--format")) state.config.formats = {"csv", "json"};
            return cmd_motifs(state);
        }
        if (simulate->parsed()) return cmd_simulate(state);
        std::cerr << "no subcommand\n";
        return kExitConfig;
    } catch (const tna::ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const tna::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}
