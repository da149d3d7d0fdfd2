#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "tna/error.hpp"
#include "tna/pipeline.hpp"

using namespace tna;

namespace {

const std::filesystem::path kData = TNA_DATA_DIR;

struct TempDir {
    std::filesystem::path path;
    explicit TempDir(const std::string& name) {
        path = std::filesystem::temp_directory_path() / ("tna_test_" + name);
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

std::filesystem::path write_file(const std::filesystem::path& dir, const std::string& name,
                                 const std::string& content) {
    const auto path = dir / name;
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path;
}

RunConfig demo_config() {
    RunConfig config;
    config.fixations_path = kData / "demo" / "demo_fixations.csv";
    config.aoi_map_path = kData / "demo" / "demo_aoi_map.txt";
    config.stages_path = kData / "demo" / "demo_stages.csv";
    return config;
}

// a tiny two-participant corpus exercised by several cases below
RunConfig tiny_config(const TempDir& dir) {
    RunConfig config;
    config.fixations_path = write_file(
        dir.path, "fix.csv",
        "session_id,participant_id,role,start_ms,end_ms,object_id,kind\n"
        "s1,p1,CPR,0,100,a,fixation\n"
        "s1,p1,CPR,500,600,b,fixation\n"
        "s1,p1,CPR,1000,1100,a,fixation\n"
        "s1,p2,Airway,0,100,b,fixation\n"
        "s1,p2,Airway,350,600,b,fixation\n"
        "s1,p2,Airway,30000,30100,c,fixation\n");
    config.aoi_map_path = write_file(dir.path, "map.txt", "aois: X|Y\na,X\nb,X\nc,Y\n");
    config.stages_path = write_file(dir.path, "stages.csv",
                                    "session_id,stage_label,start_ms,end_ms\n"
                                    "s1,early,0,20000\n"
                                    "s1,late,20000,60000\n");
    return config;
}

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("run config validation") {
    RunConfig config = demo_config();
    CHECK_NOTHROW(config.validate());
    RunConfig bad = config;
    bad.group_by = {"sessions"};
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = config;
    bad.formats = {"xml"};
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = config;
    bad.alpha = -1;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = config;
    bad.min_prob = 1.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = config;
    bad.compare_metric = "median";
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("input format resolution") {
    RunConfig config;
    config.fixations_path = "log.jsonl";
    CHECK(config.resolved_input_format() == LogFormat::Jsonl);
    config.fixations_path = "log.csv";
    CHECK(config.resolved_input_format() == LogFormat::Csv);
    config.input_format = "jsonl";
    CHECK(config.resolved_input_format() == LogFormat::Jsonl);
}

TEST_CASE("validate reports counts and the transition identity") {
    TempDir dir("validate");
    RunConfig config = tiny_config(dir);
    ValidationReport report = run_validate(config);
    CHECK(report.ok);
    CHECK(report.n_records == 6);
    CHECK(report.n_fixations == 6);
    CHECK(report.n_participants == 2);
    // p1: a,b,a (no merges: gaps 400 > 300); p2: b+b merge (gap 250), then c
    CHECK(report.n_merged == 5);
    CHECK(report.dropped_unmapped == 0);
    // sequences after stage split: p1 early(3), p2 early(1), p2 late(1)
    CHECK(report.n_sequences == 3);
    CHECK(report.n_transitions == report.n_in_stage - report.n_sequences);
    const std::string text = report.to_text();
    CHECK(text.find("validation OK") != std::string::npos);
}

TEST_CASE("validate surfaces unmapped object inventory") {
    TempDir dir("unmapped");
    RunConfig config = tiny_config(dir);
    config.aoi_map_path = write_file(dir.path, "map2.txt", "aois: X|Y\na,X\nc,Y\n");
    ValidationReport report = run_validate(config);
    CHECK(report.ok);
    CHECK(report.dropped_unmapped == 2);  // both b-dwells (p1's and p2's merged one)
    REQUIRE(report.unmapped_inventory.count("b"));
    CHECK(report.unmapped_inventory.at("b") == 2);
}

TEST_CASE("validate reports parse failures instead of throwing") {
    TempDir dir("badinput");
    RunConfig config = tiny_config(dir);
    config.fixations_path = write_file(dir.path, "bad.csv", "not,a,header\n");
    ValidationReport report = run_validate(config);
    CHECK(!report.ok);
    REQUIRE(!report.errors.empty());
    CHECK(report.to_text().find("FAILED") != std::string::npos);
}

TEST_CASE("analyze produces one row per participant by default") {
    RunConfig config = demo_config();
    MetricsTable table = run_analyze(config);
    CHECK(table.rows.size() == 40);
    CHECK(table.aoi_order.size() == 7);
    for (const auto& row : table.rows) {
        CHECK(!row.skipped);
        CHECK(!row.participant_id.empty());
        CHECK(!row.role_label.empty());
        CHECK(row.stage_label.empty());
        CHECK(row.metrics.n_fixations > 0);
    }
    // deterministic ordering by participant then role then stage
    for (std::size_t i = 1; i < table.rows.size(); ++i) {
        CHECK(table.rows[i - 1].participant_id <= table.rows[i].participant_id);
    }
}

TEST_CASE("analyze with stage grouping doubles the rows") {
    RunConfig config = demo_config();
    config.group_by = {"participant", "role", "stage"};
    MetricsTable table = run_analyze(config);
    CHECK(table.rows.size() == 80);
    for (const auto& row : table.rows) {
        CHECK((row.stage_label == "stage1" || row.stage_label == "stage5"));
    }
}

TEST_CASE("analyze grouped by role pools counts before smoothing") {
    RunConfig config = demo_config();
    config.group_by = {"role"};
    MetricsTable table = run_analyze(config);
    REQUIRE(table.rows.size() == 4);
    std::int64_t total = 0;
    for (const auto& row : table.rows) {
        CHECK(row.participant_id.empty());
        total += row.metrics.n_fixations;
    }
    // pooled cells cover every merged fixation exactly once
    RunConfig per_participant = demo_config();
    MetricsTable fine = run_analyze(per_participant);
    std::int64_t fine_total = 0;
    for (const auto& row : fine.rows) fine_total += row.metrics.n_fixations;
    CHECK(total == fine_total);
}

TEST_CASE("stage grouping without a stage file is a config error") {
    TempDir dir("nostages");
    RunConfig config = tiny_config(dir);
    config.stages_path.clear();
    config.group_by = {"participant", "stage"};
    CHECK_THROWS_AS(run_analyze(config), ConfigError);
}

TEST_CASE("cells without fixations come back as skipped rows") {
    TempDir dir("skipped");
    RunConfig config = tiny_config(dir);
    config.group_by = {"participant", "stage"};
    MetricsTable table = run_analyze(config);
    // p1 has no fixations in 'late': the cell exists and is skipped
    bool found_skipped = false;
    for (const auto& row : table.rows) {
        if (row.participant_id == "p1" && row.stage_label == "late") {
            found_skipped = true;
            CHECK(row.skipped);
        }
    }
    CHECK(found_skipped);
    const std::string csv = metrics_to_csv(table);
    CHECK(csv.find(",true") != std::string::npos);
}

TEST_CASE("metrics CSV carries the documented columns") {
    TempDir dir("csvpaths");
    RunConfig config = tiny_config(dir);
    MetricsTable table = run_analyze(config);
    const std::string csv = metrics_to_csv(table);
    CHECK(csv.rfind("participant_id,role,stage,entropy,self_loop,cross_scan,n_fixations,"
                    "n_transitions,n_active_aois,skipped,entropy[X],entropy[Y]",
                    0) == 0);
    CHECK(csv.find("p1,CPR") != std::string::npos);
}

TEST_CASE("metrics JSON is canonical and parseable") {
    TempDir dir("json");
    RunConfig config = tiny_config(dir);
    MetricsTable table = run_analyze(config);
    const std::string text = metrics_to_json(table, false);
    CHECK(metrics_to_json(table, false) == text);
    auto parsed = nlohmann::json::parse(text);
    CHECK(parsed.at("schema") == "tna-metrics/1");
    CHECK(parsed.at("rows").size() == table.rows.size());
    // full precision differs in digits only
    const std::string full = metrics_to_json(table, true);
    auto parsed_full = nlohmann::json::parse(full);
    CHECK(parsed_full.at("rows").size() == table.rows.size());
}

TEST_CASE("compare groups by role and flags the demo separation") {
    RunConfig config = demo_config();
    ComparisonReport report = run_compare(config);
    CHECK(report.group_key == "role");
    CHECK(report.groups.size() == 8);  // 2 metrics x 4 roles
    REQUIRE(report.tests.size() == 2);
    for (const auto& t : report.tests) {
        CHECK(t.kw.df == 3);
        CHECK(t.kw.p_value < 0.01);
    }
    const std::string text = comparison_to_text(report);
    CHECK(text.find("**") != std::string::npos);
    const std::string csv = comparison_to_csv(report);
    CHECK(csv.find("**") == std::string::npos);  // markers are formatting-only
    CHECK(csv.find("metric,group,median,q1,q3") == 0);
    CHECK(csv.find("metric,KW_h,df,p") != std::string::npos);
    const std::string json = comparison_to_json(report, false);
    auto parsed = nlohmann::json::parse(json);
    CHECK(parsed.at("tests").size() == 2);
}

TEST_CASE("compare by stage uses stage groups") {
    RunConfig config = demo_config();
    config.group_by = {"stage"};
    config.compare_metric = "entropy";
    ComparisonReport report = run_compare(config);
    CHECK(report.group_key == "stage");
    CHECK(report.tests.size() == 1);
    CHECK(report.groups.size() == 2);
}

TEST_CASE("compare with a single group errors") {
    TempDir dir("onegroup");
    RunConfig config = tiny_config(dir);
    config.fixations_path = write_file(
        dir.path, "solo.csv",
        "session_id,participant_id,role,start_ms,end_ms,object_id,kind\n"
        "s1,p1,CPR,0,100,a,fixation\n"
        "s1,p1,CPR,500,600,b,fixation\n");
    CHECK_THROWS_AS(run_compare(config), ParseError);
}

TEST_CASE("identical groups give p near 1") {
    TempDir dir("samegroups");
    RunConfig config = tiny_config(dir);
    // two roles with the same pair of per-participant self-loop values:
    // ranks tie across groups, H collapses to 0
    auto participant = [](const std::string& pid, const std::string& role,
                          const std::string& objects) {
        std::string rows;
        std::int64_t t = 0;
        for (char obj : objects) {
            rows += "s1," + pid + "," + role + "," + std::to_string(t) + "," +
                    std::to_string(t + 100) + "," + std::string(1, obj) + ",fixation\n";
            t += 500;
        }
        return rows;
    };
    config.fixations_path = write_file(
        dir.path, "same.csv",
        "session_id,participant_id,role,start_ms,end_ms,object_id,kind\n" +
            participant("p1", "CPR", "aca") + participant("p2", "CPR", "aac") +
            participant("p3", "Defib", "aca") + participant("p4", "Defib", "aac"));
    config.compare_metric = "self_loop";
    ComparisonReport report = run_compare(config);
    CHECK(report.tests[0].kw.p_value > 0.99);
}

TEST_CASE("network cells follow group_by and file stems are deterministic") {
    RunConfig config = demo_config();
    config.group_by = {"role"};
    auto networks = run_network(config);
    REQUIRE(networks.size() == 4);
    CHECK(network_file_stem(networks[0].scope) == "tna_Airway");

    config.group_by = {"role", "stage"};
    networks = run_network(config);
    CHECK(networks.size() == 8);
    bool saw = false;
    for (const auto& scoped : networks) {
        if (network_file_stem(scoped.scope) == "tna_CPR_stage1") saw = true;
        CHECK(!scoped.network.nodes.empty());
    }
    CHECK(saw);
    CHECK(network_file_stem(NetworkScope{"p 1", "CPR", ""}) == "tna_p-1_CPR");
}

TEST_CASE("empty scope cells yield empty networks for the CLI to omit") {
    TempDir dir("emptycell");
    RunConfig config = tiny_config(dir);
    config.group_by = {"role", "stage"};
    auto networks = run_network(config);
    // p1 (CPR) has nothing in 'late': the CPR/late cell exists but is empty
    bool found_empty = false;
    for (const auto& scoped : networks) {
        if (scoped.scope.role_label == "CPR" && scoped.scope.stage_label == "late") {
            found_empty = true;
            CHECK(scoped.network.nodes.empty());
            CHECK(scoped.network.edges.empty());
        }
    }
    CHECK(found_empty);
}

TEST_CASE("aggregate networks pool counts before smoothing") {
    RunConfig config = demo_config();
    config.group_by = {"role"};
    config.alpha = 0.0;
    auto networks = run_network(config);
    // with alpha 0 each emitted row is the pooled ML estimate: row sums of
    // outgoing edge probabilities are 1 for active rows
    for (const auto& scoped : networks) {
        std::map<std::string, double> row_sums;
        for (const auto& e : scoped.network.edges) {
            row_sums[e.from] += e.probability;
        }
        for (const auto& [from, sum] : row_sums) {
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("motif report on the demo corpus finds the expected clinical structures") {
    RunConfig config = demo_config();
    config.group_by = {"role"};
    auto rows = run_motifs(config);
    bool defib_dyad = false;
    for (const auto& row : rows) {
        if (row.scope.role_label == "Defib" && row.motif.kind == MotifKind::Dyad &&
            row.motif.members ==
                std::vector<std::string>{"Equipment - Defib", "Patient Vitals Monitor"}) {
            defib_dyad = true;
        }
    }
    CHECK(defib_dyad);

    config.group_by = {"role", "stage"};
    rows = run_motifs(config);
    bool cpr_triad = false;
    for (const auto& row : rows) {
        if (row.scope.role_label == "CPR" && row.scope.stage_label == "stage1" &&
            row.motif.kind == MotifKind::Triad &&
            row.motif.members == std::vector<std::string>{"Equipment - CPR",
                                                          "Other Team Members", "Patient"}) {
            cpr_triad = true;
        }
    }
    CHECK(cpr_triad);

    const std::string csv = motifs_to_csv(rows);
    CHECK(csv.rfind("participant,role,stage,kind,members,min_edge_prob", 0) == 0);
    auto parsed = nlohmann::json::parse(motifs_to_json(rows));
    CHECK(parsed.at("motifs").size() == rows.size());
}

TEST_CASE("resolve_generator_spec prefers presets and honors seed overrides") {
    RunConfig config;
    GeneratorSpec preset = resolve_generator_spec("cpr-stage5", kData / "presets", config);
    CHECK(preset.length > 0);
    config.seed = 999;
    GeneratorSpec overridden = resolve_generator_spec("cpr-stage5", kData / "presets", config);
    CHECK(overridden.seed == 999);
    CHECK_THROWS_AS(resolve_generator_spec("no-such-preset", kData / "presets", config),
                    ParseError);
}

}  // TEST_SUITE
