#include <doctest.h>

#include <sstream>

#include "tna/error.hpp"
#include "tna/ingest.hpp"

using namespace tna;

namespace {

std::vector<FixationRecord> parse_csv(const std::string& text) {
    std::istringstream in(text);
    return parse_fixation_log(in, LogFormat::Csv);
}

const std::string kHeader = "session_id,participant_id,role,start_ms,end_ms,object_id,kind\n";

}  // namespace

TEST_SUITE("ingest") {

TEST_CASE("csv row maps fields directly") {
    auto records = parse_csv(kHeader + "s1,p1,CPR,0,200,hands,fixation\n");
    REQUIRE(records.size() == 1);
    const auto& r = records[0];
    CHECK(r.session_id == "s1");
    CHECK(r.participant_id == "p1");
    CHECK(r.role == Role::CPR);
    CHECK(r.start_ms == 0);
    CHECK(r.end_ms == 200);
    CHECK(r.object_id == "hands");
    CHECK(r.kind == EventKind::Fixation);
}

TEST_CASE("unknown role is an error with line number") {
    try {
        parse_csv(kHeader + "s1,p1,CPR,0,200,hands,fixation\ns1,p2,Nurse,0,100,bvm,fixation\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
        CHECK(e.field() == "role");
        CHECK(std::string(e.what()).find("Nurse") != std::string::npos);
    }
}

TEST_CASE("missing column is named") {
    std::istringstream in("session_id,participant_id,role,start_ms,end_ms,object_id\n");
    try {
        parse_fixation_log(in, LogFormat::Csv);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.field() == "kind");
    }
}

TEST_CASE("end before start is an error") {
    CHECK_THROWS_AS(parse_csv(kHeader + "s1,p1,CPR,300,200,hands,fixation\n"), ParseError);
}

TEST_CASE("negative start is an error") {
    CHECK_THROWS_AS(parse_csv(kHeader + "s1,p1,CPR,-5,200,hands,fixation\n"), ParseError);
}

TEST_CASE("sub-millisecond timestamps truncate") {
    auto records = parse_csv(kHeader + "s1,p1,CPR,123.7,456.2,hands,fixation\n");
    CHECK(records[0].start_ms == 123);
    CHECK(records[0].end_ms == 456);
}

TEST_CASE("absurd timestamps are rejected, not wrapped") {
    CHECK_THROWS_AS(parse_csv(kHeader + "s1,p1,CPR,0,1e30,hands,fixation\n"), ParseError);
    CHECK_THROWS_AS(parse_csv(kHeader + "s1,p1,CPR,nan,5,hands,fixation\n"), ParseError);
}

TEST_CASE("whitespace around fields is trimmed") {
    auto records = parse_csv(kHeader + " s1 , p1 , CPR , 0 , 200 , hands , fixation \n");
    CHECK(records[0].session_id == "s1");
    CHECK(records[0].object_id == "hands");
}

TEST_CASE("quoted fields keep commas") {
    auto records = parse_csv(kHeader + "s1,p1,CPR,0,200,\"obj,with,commas\",fixation\n");
    CHECK(records[0].object_id == "obj,with,commas");
}

TEST_CASE("saccades are parsed, not filtered") {
    auto records = parse_csv(kHeader + "s1,p1,CPR,0,200,hands,fixation\ns1,p1,CPR,200,230,,saccade\n");
    REQUIRE(records.size() == 2);
    CHECK(records[1].kind == EventKind::Saccade);
}

TEST_CASE("jsonl parses identical field names") {
    std::istringstream in(
        R"({"session_id":"s1","participant_id":"p1","role":"Defib","start_ms":10,"end_ms":80,"object_id":"paddles","kind":"fixation"})"
        "\n\n"
        R"({"session_id":"s1","participant_id":"p1","role":"Defib","start_ms":90.9,"end_ms":120,"object_id":"paddles","kind":"saccade"})"
        "\n");
    auto records = parse_fixation_log(in, LogFormat::Jsonl);
    REQUIRE(records.size() == 2);
    CHECK(records[0].role == Role::Defib);
    CHECK(records[1].start_ms == 90);  // truncated
    CHECK(records[1].kind == EventKind::Saccade);
}

TEST_CASE("jsonl missing key names the field") {
    std::istringstream in(R"({"session_id":"s1","participant_id":"p1","role":"CPR"})" "\n");
    try {
        parse_fixation_log(in, LogFormat::Jsonl);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.field() == "start_ms");
        CHECK(e.line() == 1);
    }
}

TEST_CASE("csv round-trip reproduces field values") {
    const std::string body =
        kHeader +
        "s1,p1,CPR,0,200,hands,fixation\n"
        "s1,p1,CPR,210,240,,saccade\n"
        "s2,p9,TeamLead,5,77,\"odd,id\",fixation\n";
    auto first = parse_csv(body);
    std::ostringstream out;
    write_fixation_csv(out, first);
    auto second = parse_csv(out.str());
    CHECK(first == second);

    // parse -> validate -> parse is idempotent through jsonl as well
    std::ostringstream jout;
    write_fixation_jsonl(jout, first);
    std::istringstream jin(jout.str());
    CHECK(parse_fixation_log(jin, LogFormat::Jsonl) == first);
}

TEST_CASE("large mixed log parses with exact record count") {
    // 55,670 fixations + 22,660 saccades = 78,330 records
    std::string body;
    body.reserve(80u * 78330u);
    body += kHeader;
    std::int64_t t = 0;
    for (int i = 0; i < 55670; ++i) {
        body += "s1,p1,CPR," + std::to_string(t) + "," + std::to_string(t + 100) +
                ",obj,fixation\n";
        t += 150;
    }
    for (int i = 0; i < 22660; ++i) {
        body += "s1,p1,CPR," + std::to_string(t) + "," + std::to_string(t + 20) + ",,saccade\n";
        t += 30;
    }
    auto records = parse_csv(body);
    CHECK(records.size() == 78330);
}

TEST_CASE("aoi map: order header plus entries") {
    std::istringstream in(
        "aois: Equipment - Airway|Equipment - CPR|Equipment - Defib|Equipment - Meds & IV|"
        "Patient Vitals Monitor|Other Team Members|Patient\n"
        "bvm,Equipment - Airway\n"
        "paddles,Equipment - Defib\n");
    AoiMap map = parse_aoi_map(in);
    CHECK(map.aoi_order.size() == 7);
    CHECK(map.aoi_order == default_aoi_order());
    CHECK(map.label_for("bvm") == "Equipment - Airway");
    CHECK(!map.label_for("unknown_prop").has_value());
    CHECK(map.index_of("Patient") == 6);
}

TEST_CASE("aoi map: empty entries table is valid") {
    std::istringstream in("aois: A|B\n");
    AoiMap map = parse_aoi_map(in);
    CHECK(map.entries.empty());
    CHECK(map.aoi_order.size() == 2);
}

TEST_CASE("aoi map: undeclared label is an error") {
    std::istringstream in("aois: A|B\nbvm,Airway\n");
    CHECK_THROWS_AS(parse_aoi_map(in), ParseError);
}

TEST_CASE("aoi map: conflicting duplicate is an error, identical duplicate is not") {
    std::istringstream bad("aois: A|B\nx,A\nx,B\n");
    CHECK_THROWS_AS(parse_aoi_map(bad), ParseError);
    std::istringstream ok("aois: A|B\nx,A\nx,A\n");
    CHECK(parse_aoi_map(ok).entries.size() == 1);
}

TEST_CASE("aoi map: fewer than two labels is an error") {
    std::istringstream in("aois: A\n");
    CHECK_THROWS_AS(parse_aoi_map(in), ParseError);
}

TEST_CASE("aoi map round-trip") {
    std::istringstream in("aois: A|B\nx,A\ny,B\nz,A\n");
    AoiMap map = parse_aoi_map(in);
    std::ostringstream out;
    write_aoi_map(out, map);
    std::istringstream in2(out.str());
    AoiMap map2 = parse_aoi_map(in2);
    CHECK(map.aoi_order == map2.aoi_order);
    CHECK(map.entries == map2.entries);
}

TEST_CASE("stage annotations parse and sort per session") {
    std::istringstream in(
        "session_id,stage_label,start_ms,end_ms\n"
        "s1,stage5,480000,600000\n"
        "s1,stage1,0,120000\n");
    auto stages = parse_stage_annotations(in);
    REQUIRE(stages.size() == 2);
    CHECK(stages[0].stage_label == "stage1");
    CHECK(stages[1].stage_label == "stage5");
}

TEST_CASE("overlapping stages are an error") {
    std::istringstream in(
        "session_id,stage_label,start_ms,end_ms\n"
        "s1,a,0,100\n"
        "s1,b,50,150\n");
    CHECK_THROWS_AS(parse_stage_annotations(in), ParseError);
}

TEST_CASE("same windows in different sessions do not overlap") {
    std::istringstream in(
        "session_id,stage_label,start_ms,end_ms\n"
        "s1,a,0,100\n"
        "s2,a,0,100\n");
    CHECK(parse_stage_annotations(in).size() == 2);
}

TEST_CASE("stage end must exceed start") {
    std::istringstream in("session_id,stage_label,start_ms,end_ms\ns1,a,100,100\n");
    CHECK_THROWS_AS(parse_stage_annotations(in), ParseError);
}

TEST_CASE("empty stage file disables stratification") {
    std::istringstream in("");
    CHECK(parse_stage_annotations(in).empty());
}

}  // TEST_SUITE
