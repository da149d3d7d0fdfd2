#include "tna/pipeline.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include "internal/json_writer.hpp"
#include "tna/csv.hpp"
#include "tna/error.hpp"
#include "tna/format.hpp"

namespace tna {

namespace {

constexpr std::array<std::string_view, 3> kGroupKeys = {"participant", "role", "stage"};
constexpr std::array<std::string_view, 3> kFormats = {"csv", "json", "dot"};

bool contains(const std::vector<std::string>& vec, std::string_view value) {
    return std::find(vec.begin(), vec.end(), value) != vec.end();
}

std::string sanitize_for_filename(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_' || c == '-') {
            out.push_back(c);
        } else {
            out.push_back('-');
        }
    }
    return out.empty() ? "x" : out;
}

std::ifstream open_input(const std::filesystem::path& path, const char* what) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError(std::string("cannot open ") + what + ": " + path.string());
    }
    return in;
}

int out_digits(bool full_precision) { return full_precision ? 17 : 6; }

std::string opt_double_csv(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string{};
}

}  // namespace

void RunConfig::validate() const {
    for (const auto& key : group_by) {
        if (std::find(kGroupKeys.begin(), kGroupKeys.end(), key) == kGroupKeys.end()) {
            throw ConfigError("unknown group-by key '" + key +
                              "' (expected participant|role|stage)");
        }
    }
    for (const auto& fmt : formats) {
        if (std::find(kFormats.begin(), kFormats.end(), fmt) == kFormats.end()) {
            throw ConfigError("unknown output format '" + fmt + "' (expected csv|json|dot)");
        }
    }
    if (!(alpha >= 0.0)) {
        throw ConfigError("alpha must be non-negative");
    }
    if (gap_ms < 0) {
        throw ConfigError("gap-ms must be non-negative");
    }
    if (!(min_prob >= 0.0 && min_prob < 1.0)) {
        throw ConfigError("min-prob must be in [0, 1)");
    }
    if (!(motif_threshold > 0.0 && motif_threshold <= 1.0)) {
        throw ConfigError("motif threshold must be in (0, 1]");
    }
    if (compare_metric != "entropy" && compare_metric != "self_loop" &&
        compare_metric != "both") {
        throw ConfigError("metric must be entropy|self_loop|both");
    }
    if (input_format != "auto" && input_format != "csv" && input_format != "jsonl") {
        throw ConfigError("input-format must be auto|csv|jsonl");
    }
}

LogFormat RunConfig::resolved_input_format() const {
    if (input_format == "csv") return LogFormat::Csv;
    if (input_format == "jsonl") return LogFormat::Jsonl;
    return fixations_path.extension() == ".jsonl" ? LogFormat::Jsonl : LogFormat::Csv;
}

Corpus load_corpus(const RunConfig& config) {
    Corpus corpus;
    {
        auto in = open_input(config.fixations_path, "fixation log");
        corpus.records = parse_fixation_log(in, config.resolved_input_format());
    }
    {
        auto in = open_input(config.aoi_map_path, "AOI map");
        corpus.aoi_map = parse_aoi_map(in);
    }
    if (!config.stages_path.empty()) {
        auto in = open_input(config.stages_path, "stage table");
        corpus.stages = parse_stage_annotations(in);
    }
    return corpus;
}

SequenceBundle build_sequences(const Corpus& corpus, const RunConfig& config,
                               bool split_stages) {
    // partition records per (session, participant); map keys give a
    // deterministic partition order
    std::map<std::pair<std::string, std::string>, std::vector<FixationRecord>> partitions;
    for (const auto& rec : corpus.records) {
        partitions[{rec.session_id, rec.participant_id}].push_back(rec);
    }

    SequenceBundle bundle;
    for (auto& [key, records] : partitions) {
        std::stable_sort(records.begin(), records.end(),
                         [](const FixationRecord& a, const FixationRecord& b) {
                             return a.start_ms < b.start_ms;
                         });
        std::vector<MergedFixation> merged = merge_fixations(records, config.gap_ms);
        bundle.n_merged += merged.size();
        for (const auto& fx : merged) {
            if (!corpus.aoi_map.label_for(fx.aoi)) {
                ++bundle.unmapped_inventory[fx.aoi];
            }
        }
        MappingResult mapped = build_aoi_sequence(std::move(merged), corpus.aoi_map);
        bundle.dropped_unmapped += mapped.dropped_unmapped;
        mapped.sequence.session_id = key.first;
        mapped.sequence.participant_id = key.second;
        if (!records.empty()) {
            mapped.sequence.role = records.front().role;
        }
        if (split_stages) {
            for (auto& part : segment_by_stage(mapped.sequence, corpus.stages)) {
                bundle.sequences.push_back(std::move(part));
            }
        } else {
            bundle.sequences.push_back(std::move(mapped.sequence));
        }
    }
    std::sort(bundle.sequences.begin(), bundle.sequences.end(),
              [](const AoiSequence& a, const AoiSequence& b) {
                  return std::tie(a.participant_id, a.session_id, a.stage_label) <
                         std::tie(b.participant_id, b.session_id, b.stage_label);
              });
    return bundle;
}

// ---------------------------------------------------------------------------
// validate

ValidationReport run_validate(const RunConfig& config) {
    config.validate();
    ValidationReport report;
    Corpus corpus;
    try {
        corpus = load_corpus(config);
    } catch (const ParseError& e) {
        report.ok = false;
        report.errors.push_back(e.what());
        return report;
    }

    report.n_records = corpus.records.size();
    std::set<std::string> sessions;
    std::set<std::pair<std::string, std::string>> participants;
    for (const auto& rec : corpus.records) {
        if (rec.kind == EventKind::Fixation) {
            ++report.n_fixations;
        } else {
            ++report.n_saccades;
        }
        sessions.insert(rec.session_id);
        participants.insert({rec.session_id, rec.participant_id});
    }
    report.n_sessions = sessions.size();
    report.n_participants = participants.size();
    report.n_aois = corpus.aoi_map.aoi_order.size();
    report.n_map_entries = corpus.aoi_map.entries.size();
    report.n_stage_annotations = corpus.stages.size();

    try {
        SequenceBundle bundle = build_sequences(corpus, config, !corpus.stages.empty());
        report.n_merged = bundle.n_merged;
        report.dropped_unmapped = bundle.dropped_unmapped;
        report.unmapped_inventory = std::move(bundle.unmapped_inventory);
        for (const auto& seq : bundle.sequences) {
            if (seq.fixations.empty()) continue;
            ++report.n_sequences;
            report.n_in_stage += seq.fixations.size();
            report.n_transitions += seq.fixations.size() - 1;
        }
    } catch (const std::exception& e) {
        report.ok = false;
        report.errors.push_back(e.what());
    }
    return report;
}

std::string ValidationReport::to_text() const {
    std::ostringstream out;
    out << "validation " << (ok ? "OK" : "FAILED") << "\n";
    for (const auto& err : errors) {
        out << "error: " << err << "\n";
    }
    if (!ok) {
        return out.str();
    }
    out << "records:            " << n_records << " (" << n_fixations << " fixations, "
        << n_saccades << " saccades)\n";
    out << "sessions:           " << n_sessions << "\n";
    out << "participants:       " << n_participants << "\n";
    out << "aoi labels:         " << n_aois << " (" << n_map_entries << " object mappings)\n";
    out << "stage annotations:  " << n_stage_annotations << "\n";
    out << "merged fixations:   " << n_merged << "\n";
    out << "analysed sequences: " << n_sequences << " (" << n_in_stage
        << " fixations in scope)\n";
    out << "transitions:        " << n_transitions
        << " (= in-scope fixations - non-empty sequences: " << n_in_stage << " - "
        << n_sequences << ")\n";
    out << "dropped unmapped:   " << dropped_unmapped << "\n";
    if (!unmapped_inventory.empty()) {
        out << "unmapped object ids:\n";
        for (const auto& [object_id, count] : unmapped_inventory) {
            out << "  " << object_id << ": " << count << "\n";
        }
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// analyze

namespace {

struct CellKey {
    std::string participant;
    std::string role;
    std::string stage;

    bool operator<(const CellKey& other) const {
        return std::tie(participant, role, stage) <
               std::tie(other.participant, other.role, other.stage);
    }
};

CellKey cell_key_for(const AoiSequence& seq, const std::vector<std::string>& group_by) {
    CellKey key;
    if (contains(group_by, "participant")) key.participant = seq.participant_id;
    if (contains(group_by, "role")) key.role = std::string(to_string(seq.role));
    if (contains(group_by, "stage")) key.stage = seq.stage_label.value_or("");
    return key;
}

std::map<CellKey, TransitionCounts> pool_cells(const SequenceBundle& bundle,
                                               const std::vector<std::string>& aoi_order,
                                               const std::vector<std::string>& group_by) {
    std::map<CellKey, TransitionCounts> cells;
    for (const auto& seq : bundle.sequences) {
        const auto transitions = extract_transitions(seq);
        TransitionCounts counts = count_transitions(transitions, seq, aoi_order);
        CellKey key = cell_key_for(seq, group_by);
        auto it = cells.find(key);
        if (it == cells.end()) {
            cells.emplace(std::move(key), std::move(counts));
        } else {
            it->second.add(counts);
        }
    }
    return cells;
}

}  // namespace

MetricsTable run_analyze(const RunConfig& config) {
    config.validate();
    const Corpus corpus = load_corpus(config);
    const bool split_stages = contains(config.group_by, "stage");
    if (split_stages && corpus.stages.empty()) {
        throw ConfigError("group-by stage requires a stage annotations file");
    }
    const SequenceBundle bundle = build_sequences(corpus, config, split_stages);

    const AnalysisConfig analysis{{config.alpha, false}, config.entropy_renormalize};
    MetricsTable table;
    table.aoi_order = corpus.aoi_map.aoi_order;
    for (const auto& [key, counts] : pool_cells(bundle, table.aoi_order, config.group_by)) {
        MetricsRow row;
        row.participant_id = key.participant;
        row.role_label = key.role;
        row.stage_label = key.stage;
        if (counts.total_fixations() == 0) {
            row.skipped = true;
        } else {
            row.metrics = analyze_counts(counts, analysis);
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

std::string metrics_to_csv(const MetricsTable& table) {
    std::string out =
        "participant_id,role,stage,entropy,self_loop,cross_scan,n_fixations,n_transitions,"
        "n_active_aois,skipped";
    for (const auto& label : table.aoi_order) {
        out += ',' + csv::escape("entropy[" + label + "]");
    }
    out += '\n';
    for (const auto& row : table.rows) {
        std::vector<std::string> fields;
        fields.push_back(csv::escape(row.participant_id));
        fields.push_back(csv::escape(row.role_label));
        fields.push_back(csv::escape(row.stage_label));
        if (row.skipped) {
            fields.insert(fields.end(), {"", "", "", "", "", "", "true"});
            for (std::size_t i = 0; i < table.aoi_order.size(); ++i) fields.emplace_back();
        } else {
            const TnaMetrics& m = row.metrics;
            fields.push_back(opt_double_csv(m.entropy));
            fields.push_back(format_double(m.self_loop));
            fields.push_back(format_double(m.cross_scan));
            fields.push_back(std::to_string(m.n_fixations));
            fields.push_back(std::to_string(m.n_transitions));
            fields.push_back(std::to_string(m.n_active_aois));
            fields.push_back("false");
            for (const auto& h : m.per_aoi_entropy) {
                fields.push_back(opt_double_csv(h));
            }
        }
        out += csv::join(fields) + '\n';
    }
    return out;
}

std::string metrics_to_json(const MetricsTable& table, bool full_precision) {
    internal::JsonWriter w(out_digits(full_precision));
    w.raw("{");
    w.key("aoi_order");
    w.raw("[");
    for (std::size_t i = 0; i < table.aoi_order.size(); ++i) {
        if (i) w.raw(",");
        w.string(table.aoi_order[i]);
    }
    w.raw("],");
    w.key("rows");
    w.raw("[");
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        if (r) w.raw(",");
        w.raw("{");
        w.key("cross_scan");
        row.skipped ? w.null() : w.number(row.metrics.cross_scan);
        w.raw(",");
        w.key("entropy");
        (row.skipped || !row.metrics.entropy) ? w.null() : w.number(*row.metrics.entropy);
        w.raw(",");
        w.key("n_active_aois");
        row.skipped ? w.null() : w.integer(static_cast<std::int64_t>(row.metrics.n_active_aois));
        w.raw(",");
        w.key("n_fixations");
        row.skipped ? w.null() : w.integer(row.metrics.n_fixations);
        w.raw(",");
        w.key("n_transitions");
        row.skipped ? w.null() : w.integer(row.metrics.n_transitions);
        w.raw(",");
        w.key("participant");
        w.string(row.participant_id);
        w.raw(",");
        w.key("per_aoi_entropy");
        w.raw("[");
        if (!row.skipped) {
            for (std::size_t i = 0; i < row.metrics.per_aoi_entropy.size(); ++i) {
                if (i) w.raw(",");
                const auto& h = row.metrics.per_aoi_entropy[i];
                h ? w.number(*h) : w.null();
            }
        }
        w.raw("],");
        w.key("role");
        w.string(row.role_label);
        w.raw(",");
        w.key("self_loop");
        row.skipped ? w.null() : w.number(row.metrics.self_loop);
        w.raw(",");
        w.key("skipped");
        w.boolean(row.skipped);
        w.raw(",");
        w.key("stage");
        w.string(row.stage_label);
        w.raw("}");
    }
    w.raw("],");
    w.key("schema");
    w.string("tna-metrics/1");
    w.raw("}");
    std::string out = std::move(w).str();
    out += '\n';
    return out;
}

// ---------------------------------------------------------------------------
// compare

ComparisonReport run_compare(const RunConfig& config) {
    config.validate();
    const bool by_stage = contains(config.group_by, "stage") && !contains(config.group_by, "role");

    RunConfig inner = config;
    inner.group_by = {"participant", "role"};
    if (by_stage) {
        inner.group_by.push_back("stage");
    }
    const MetricsTable table = run_analyze(inner);

    std::vector<std::string> metrics;
    if (config.compare_metric == "both") {
        metrics = {"entropy", "self_loop"};
    } else {
        metrics = {config.compare_metric};
    }

    ComparisonReport report;
    report.group_key = by_stage ? "stage" : "role";
    for (const auto& metric : metrics) {
        std::map<std::string, std::vector<double>> by_group;
        for (const auto& row : table.rows) {
            if (row.skipped) continue;
            const std::string& group = by_stage ? row.stage_label : row.role_label;
            if (metric == "entropy") {
                if (row.metrics.entropy) {
                    by_group[group].push_back(*row.metrics.entropy);
                }
            } else {
                by_group[group].push_back(row.metrics.self_loop);
            }
        }
        if (by_group.size() < 2) {
            throw ParseError("compare needs at least 2 " + report.group_key +
                             " groups with data, found " + std::to_string(by_group.size()));
        }
        std::vector<GroupSample> samples;
        for (const auto& [group, values] : by_group) {
            report.groups.push_back(
                {metric, group, summarize(values), values.size()});
            samples.push_back(GroupSample{group, values});
        }
        report.tests.push_back({metric, kruskal_wallis(samples)});
    }
    return report;
}

std::string comparison_to_csv(const ComparisonReport& report) {
    std::string out = "metric,group,median,q1,q3\n";
    for (const auto& g : report.groups) {
        out += csv::join({csv::escape(g.metric), csv::escape(g.group),
                          format_double(g.stats.median), format_double(g.stats.q1),
                          format_double(g.stats.q3)}) +
               '\n';
    }
    out += "metric,KW_h,df,p\n";
    for (const auto& t : report.tests) {
        out += csv::join({csv::escape(t.metric), format_double(t.kw.h_statistic),
                          std::to_string(t.kw.df), format_double(t.kw.p_value)}) +
               '\n';
    }
    return out;
}

std::string comparison_to_json(const ComparisonReport& report, bool full_precision) {
    internal::JsonWriter w(out_digits(full_precision));
    w.raw("{");
    w.key("group_key");
    w.string(report.group_key);
    w.raw(",");
    w.key("groups");
    w.raw("[");
    for (std::size_t i = 0; i < report.groups.size(); ++i) {
        const auto& g = report.groups[i];
        if (i) w.raw(",");
        w.raw("{");
        w.key("group");
        w.string(g.group);
        w.raw(",");
        w.key("median");
        w.number(g.stats.median);
        w.raw(",");
        w.key("metric");
        w.string(g.metric);
        w.raw(",");
        w.key("n");
        w.integer(static_cast<std::int64_t>(g.n));
        w.raw(",");
        w.key("q1");
        w.number(g.stats.q1);
        w.raw(",");
        w.key("q3");
        w.number(g.stats.q3);
        w.raw("}");
    }
    w.raw("],");
    w.key("schema");
    w.string("tna-comparison/1");
    w.raw(",");
    w.key("tests");
    w.raw("[");
    for (std::size_t i = 0; i < report.tests.size(); ++i) {
        const auto& t = report.tests[i];
        if (i) w.raw(",");
        w.raw("{");
        w.key("df");
        w.integer(t.kw.df);
        w.raw(",");
        w.key("h");
        w.number(t.kw.h_statistic);
        w.raw(",");
        w.key("metric");
        w.string(t.metric);
        w.raw(",");
        w.key("p");
        w.number(t.kw.p_value);
        w.raw(",");
        w.key("tie_correction");
        w.number(t.kw.tie_correction);
        w.raw("}");
    }
    w.raw("]}");
    std::string out = std::move(w).str();
    out += '\n';
    return out;
}

std::string comparison_to_text(const ComparisonReport& report) {
    // Table-style rendering: one row per metric, one column per group.
    std::vector<std::string> group_names;
    for (const auto& g : report.groups) {
        if (std::find(group_names.begin(), group_names.end(), g.group) == group_names.end()) {
            group_names.push_back(g.group);
        }
    }
    std::sort(group_names.begin(), group_names.end());

    auto cell = [&](const std::string& metric, const std::string& group) -> std::string {
        for (const auto& g : report.groups) {
            if (g.metric == metric && g.group == group) {
                return format_double(g.stats.median, 3) + " (" +
                       format_double(g.stats.q1, 3) + "-" + format_double(g.stats.q3, 3) + ")";
            }
        }
        return "-";
    };

    std::vector<std::string> metric_names;
    for (const auto& t : report.tests) {
        metric_names.push_back(t.metric);
    }

    std::vector<std::vector<std::string>> grid;
    std::vector<std::string> header = {"metric"};
    header.insert(header.end(), group_names.begin(), group_names.end());
    header.push_back("KW p");
    grid.push_back(header);
    for (const auto& metric : metric_names) {
        std::vector<std::string> line = {metric};
        for (const auto& group : group_names) {
            line.push_back(cell(metric, group));
        }
        for (const auto& t : report.tests) {
            if (t.metric == metric) {
                std::string p = format_double(t.kw.p_value, 4);
                if (t.kw.p_value < 0.01) p += "**";
                line.push_back(p);
            }
        }
        grid.push_back(line);
    }

    std::vector<std::size_t> widths(grid.front().size(), 0);
    for (const auto& line : grid) {
        for (std::size_t i = 0; i < line.size(); ++i) {
            widths[i] = std::max(widths[i], line[i].size());
        }
    }
    std::string out = "TNA metrics by " + report.group_key + ", median (Q1-Q3)\n";
    for (const auto& line : grid) {
        for (std::size_t i = 0; i < line.size(); ++i) {
            out += line[i];
            if (i + 1 < line.size()) {
                out.append(widths[i] - line[i].size() + 2, ' ');
            }
        }
        out += '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------
// network / motifs

std::vector<ScopedNetwork> run_network(const RunConfig& config) {
    config.validate();
    const Corpus corpus = load_corpus(config);
    const bool split_stages = contains(config.group_by, "stage");
    if (split_stages && corpus.stages.empty()) {
        throw ConfigError("group-by stage requires a stage annotations file");
    }
    const SequenceBundle bundle = build_sequences(corpus, config, split_stages);

    std::vector<ScopedNetwork> out;
    const SmoothingConfig smoothing{config.alpha, false};
    for (const auto& [key, counts] : pool_cells(bundle, corpus.aoi_map.aoi_order,
                                                config.group_by)) {
        NetworkScope scope{key.participant, key.role, key.stage};
        const TransitionMatrix p = smooth_and_normalize(counts, smoothing);
        out.push_back(ScopedNetwork{
            scope, build_network(p, counts, config.min_prob, scope,
                                 config.entropy_renormalize)});
    }
    return out;
}

std::vector<MotifRow> run_motifs(const RunConfig& config) {
    std::vector<MotifRow> rows;
    for (const auto& scoped : run_network(config)) {
        for (auto& motif : find_motifs(scoped.network, config.motif_threshold)) {
            rows.push_back(MotifRow{scoped.scope, std::move(motif)});
        }
    }
    return rows;
}

std::string motifs_to_csv(const std::vector<MotifRow>& rows) {
    std::string out = "participant,role,stage,kind,members,min_edge_prob\n";
    for (const auto& row : rows) {
        std::string members;
        for (std::size_t i = 0; i < row.motif.members.size(); ++i) {
            if (i) members += '|';
            members += row.motif.members[i];
        }
        out += csv::join({csv::escape(row.scope.participant_id),
                          csv::escape(row.scope.role_label),
                          csv::escape(row.scope.stage_label),
                          std::string(to_string(row.motif.kind)), csv::escape(members),
                          format_double(row.motif.min_edge_prob)}) +
               '\n';
    }
    return out;
}

std::string motifs_to_json(const std::vector<MotifRow>& rows) {
    internal::JsonWriter w(6);
    w.raw("{");
    w.key("motifs");
    w.raw("[");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& row = rows[i];
        if (i) w.raw(",");
        w.raw("{");
        w.key("kind");
        w.string(std::string(to_string(row.motif.kind)));
        w.raw(",");
        w.key("members");
        w.raw("[");
        for (std::size_t m = 0; m < row.motif.members.size(); ++m) {
            if (m) w.raw(",");
            w.string(row.motif.members[m]);
        }
        w.raw("],");
        w.key("min_edge_prob");
        w.number(row.motif.min_edge_prob);
        w.raw(",");
        w.key("scope");
        w.raw("{");
        w.key("participant");
        w.string(row.scope.participant_id);
        w.raw(",");
        w.key("role");
        w.string(row.scope.role_label);
        w.raw(",");
        w.key("stage");
        w.string(row.scope.stage_label);
        w.raw("}}");
    }
    w.raw("],");
    w.key("schema");
    w.string("tna-motifs/1");
    w.raw("}");
    std::string out = std::move(w).str();
    out += '\n';
    return out;
}

std::string network_file_stem(const NetworkScope& scope) {
    std::string stem = "tna";
    if (!scope.participant_id.empty()) stem += "_" + sanitize_for_filename(scope.participant_id);
    if (!scope.role_label.empty()) stem += "_" + sanitize_for_filename(scope.role_label);
    if (!scope.stage_label.empty()) stem += "_" + sanitize_for_filename(scope.stage_label);
    return stem;
}

// ---------------------------------------------------------------------------
// simulate

GeneratorSpec resolve_generator_spec(const std::string& preset_or_path,
                                     const std::filesystem::path& presets_dir,
                                     const RunConfig& config) {
    GeneratorSpec spec;
    const std::filesystem::path preset_path = presets_dir / (preset_or_path + ".json");
    if (std::filesystem::exists(preset_path)) {
        spec = load_generator_spec_file(preset_path);
    } else if (std::filesystem::exists(preset_or_path)) {
        spec = load_generator_spec_file(preset_or_path);
    } else {
        throw ParseError("no preset '" + preset_or_path + "' under " + presets_dir.string() +
                         " and no spec file at that path");
    }
    if (config.seed != 0) {
        spec.seed = config.seed;
    }
    return spec;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ConfigError("cannot write " + path.string());
    }
    out << content;
}

}  // namespace tna
