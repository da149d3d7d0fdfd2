#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tna/metrics.hpp"
#include "tna/network.hpp"
#include "tna/stats.hpp"
#include "tna/synth.hpp"

namespace tna {

/// Shared run configuration for all subcommands. Flags override a config
/// file, which overrides these defaults.
struct RunConfig {
    std::filesystem::path fixations_path;
    std::filesystem::path aoi_map_path;
    std::filesystem::path stages_path;  // empty: no stage stratification

    std::string input_format = "auto";  // auto | csv | jsonl
    double alpha = 0.5;
    std::int64_t gap_ms = 300;
    bool entropy_renormalize = true;
    std::vector<std::string> group_by = {"participant", "role"};  // subset of participant|role|stage
    std::filesystem::path out_dir = "out";
    std::vector<std::string> formats = {"csv", "json"};  // outputs: csv|json|dot
    double min_prob = 0.0;        // network edge inclusion threshold
    double motif_threshold = 0.15;
    std::string compare_metric = "both";  // entropy | self_loop | both
    std::uint64_t seed = 0;
    bool full_precision = false;

    void validate() const;  // throws ConfigError
    LogFormat resolved_input_format() const;
};

// ---------------------------------------------------------------------------
// validate

struct ValidationReport {
    bool ok = true;
    std::vector<std::string> errors;

    std::size_t n_records = 0;
    std::size_t n_fixations = 0;
    std::size_t n_saccades = 0;
    std::size_t n_participants = 0;
    std::size_t n_sessions = 0;
    std::size_t n_aois = 0;
    std::size_t n_map_entries = 0;
    std::size_t n_stage_annotations = 0;
    std::size_t n_merged = 0;
    std::size_t n_sequences = 0;       // contiguous (participant x stage) sequences
    std::size_t n_in_stage = 0;        // merged fixations inside some analysed sequence
    std::size_t n_transitions = 0;
    std::size_t dropped_unmapped = 0;
    std::map<std::string, std::size_t> unmapped_inventory;  // object_id -> dropped count

    std::string to_text() const;  // human-readable report
};

ValidationReport run_validate(const RunConfig& config);

// ---------------------------------------------------------------------------
// analyze

struct MetricsRow {
    std::string participant_id;  // empty when participant not in group_by
    std::string role_label;
    std::string stage_label;
    bool skipped = false;        // cell had no fixations
    TnaMetrics metrics;
};

struct MetricsTable {
    std::vector<std::string> aoi_order;
    std::vector<MetricsRow> rows;  // sorted by (participant, role, stage)
};

/// One row per group_by cell. Cells coarser than a participant pool their
/// count matrices before smoothing. Cells with no fixations become skipped
/// rows rather than errors.
MetricsTable run_analyze(const RunConfig& config);

std::string metrics_to_csv(const MetricsTable& table);
std::string metrics_to_json(const MetricsTable& table, bool full_precision);

// ---------------------------------------------------------------------------
// compare

struct ComparisonReport {
    struct GroupRow {
        std::string metric;
        std::string group;
        SummaryStats stats;
        std::size_t n = 0;
    };
    struct TestRow {
        std::string metric;
        KwResult kw;
    };
    std::string group_key;  // "role" or "stage"
    std::vector<GroupRow> groups;
    std::vector<TestRow> tests;
};

/// Groups per-participant metric values by role (default) or stage and runs
/// the Kruskal-Wallis omnibus test per metric.
ComparisonReport run_compare(const RunConfig& config);

std::string comparison_to_csv(const ComparisonReport& report);
std::string comparison_to_json(const ComparisonReport& report, bool full_precision);
/// Table-2-style text rendering; appends ** to p-values below 0.01. Marker
/// appears only here, never in the machine-readable outputs.
std::string comparison_to_text(const ComparisonReport& report);

// ---------------------------------------------------------------------------
// network / motifs

struct ScopedNetwork {
    NetworkScope scope;
    TnaNetwork network;
};

/// Pools counts per scope cell (scope keys = group_by minus "participant"
/// unless explicitly included) and builds one network per non-empty cell,
/// deterministically ordered.
std::vector<ScopedNetwork> run_network(const RunConfig& config);

struct MotifRow {
    NetworkScope scope;
    Motif motif;
};

std::vector<MotifRow> run_motifs(const RunConfig& config);

std::string motifs_to_csv(const std::vector<MotifRow>& rows);
std::string motifs_to_json(const std::vector<MotifRow>& rows);

/// File stem for a scope cell: "tna" + non-empty scope parts, sanitized.
std::string network_file_stem(const NetworkScope& scope);

// ---------------------------------------------------------------------------
// simulate

/// Resolves a preset name ("cpr-stage5") against presets_dir or falls back to
/// reading the argument as a spec file path. config.seed, when non-zero,
/// overrides the spec's seed.
GeneratorSpec resolve_generator_spec(const std::string& preset_or_path,
                                     const std::filesystem::path& presets_dir,
                                     const RunConfig& config);

// ---------------------------------------------------------------------------
// shared plumbing

/// Parsed inputs the subcommands work from.
struct Corpus {
    std::vector<FixationRecord> records;
    AoiMap aoi_map;
    std::vector<StageAnnotation> stages;
};

Corpus load_corpus(const RunConfig& config);

/// Per-participant AOI sequences (optionally split by stage), sorted
/// deterministically. The unit every grouping is assembled from.
struct SequenceBundle {
    std::vector<AoiSequence> sequences;
    std::size_t n_merged = 0;
    std::size_t dropped_unmapped = 0;
    std::map<std::string, std::size_t> unmapped_inventory;
};

SequenceBundle build_sequences(const Corpus& corpus, const RunConfig& config, bool split_stages);

void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace tna
