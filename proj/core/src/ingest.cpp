#include "tna/ingest.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <charconv>
#include <set>

#include <nlohmann/json.hpp>

#include "tna/csv.hpp"
#include "tna/error.hpp"

namespace tna {

namespace {

constexpr std::array<Role, 4> kRoles = {Role::Airway, Role::CPR, Role::Defib, Role::TeamLead};

const std::array<std::string_view, 7> kFixationColumns = {
    "session_id", "participant_id", "role", "start_ms", "end_ms", "object_id", "kind"};

// Integer milliseconds; decimal input is truncated toward zero.
std::int64_t parse_ms(const std::string& text, long line, const std::string& field) {
    if (text.empty()) {
        throw ParseError("empty timestamp", line, field);
    }
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec == std::errc() && ptr == text.data() + text.size()) {
        return value;
    }
    // fall back for decimal values such as "123.7"
    try {
        std::size_t used = 0;
        double d = std::stod(text, &used);
        constexpr double limit = 9.0e18;  // stay inside int64 after truncation
        if (used != text.size() || !std::isfinite(d) || d < -limit || d > limit) {
            throw std::invalid_argument(text);
        }
        return static_cast<std::int64_t>(std::trunc(d));
    } catch (const std::exception&) {
        throw ParseError("not a millisecond timestamp: '" + text + "'", line, field);
    }
}

EventKind parse_kind(const std::string& text, long line) {
    if (text == "fixation") return EventKind::Fixation;
    if (text == "saccade") return EventKind::Saccade;
    throw ParseError("unknown kind '" + text + "' (expected fixation|saccade)", line, "kind");
}

void check_record(FixationRecord& rec, long line) {
    if (rec.start_ms < 0) {
        throw ParseError("start_ms must be non-negative", line, "start_ms");
    }
    if (rec.end_ms < rec.start_ms) {
        throw ParseError("end_ms < start_ms", line, "end_ms");
    }
}

std::vector<FixationRecord> parse_fixation_csv(std::istream& in) {
    csv::Reader reader(in);
    auto header = reader.next();
    if (!header) {
        throw ParseError("missing header row '" + std::string(kFixationCsvHeader) + "'", 1);
    }
    for (std::size_t i = 0; i < kFixationColumns.size(); ++i) {
        if (i >= header->fields.size()) {
            throw ParseError("missing column", header->line, std::string(kFixationColumns[i]));
        }
        if (header->fields[i] != kFixationColumns[i]) {
            throw ParseError("expected column '" + std::string(kFixationColumns[i]) +
                                 "', found '" + header->fields[i] + "'",
                             header->line, std::string(kFixationColumns[i]));
        }
    }
    if (header->fields.size() > kFixationColumns.size()) {
        throw ParseError("unexpected extra column '" + header->fields[kFixationColumns.size()] +
                             "'",
                         header->line);
    }

    std::vector<FixationRecord> records;
    while (auto row = reader.next()) {
        if (row->fields.size() != kFixationColumns.size()) {
            throw ParseError("expected " + std::to_string(kFixationColumns.size()) +
                                 " fields, found " + std::to_string(row->fields.size()),
                             row->line);
        }
        FixationRecord rec;
        rec.session_id = row->fields[0];
        rec.participant_id = row->fields[1];
        try {
            rec.role = parse_role(row->fields[2]);
        } catch (const ParseError& e) {
            throw ParseError(e.what(), row->line, "role");
        }
        rec.start_ms = parse_ms(row->fields[3], row->line, "start_ms");
        rec.end_ms = parse_ms(row->fields[4], row->line, "end_ms");
        rec.object_id = row->fields[5];
        rec.kind = parse_kind(row->fields[6], row->line);
        check_record(rec, row->line);
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<FixationRecord> parse_fixation_jsonl(std::istream& in) {
    std::vector<FixationRecord> records;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string trimmed = csv::trim(line);
        if (trimmed.empty()) {
            continue;
        }
        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(trimmed);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("invalid JSON: ") + e.what(), line_no);
        }
        if (!obj.is_object()) {
            throw ParseError("expected a JSON object per line", line_no);
        }
        auto require = [&](const char* key) -> const nlohmann::json& {
            auto it = obj.find(key);
            if (it == obj.end()) {
                throw ParseError("missing key", line_no, key);
            }
            return *it;
        };
        auto str = [&](const char* key) {
            const auto& v = require(key);
            if (!v.is_string()) throw ParseError("expected string", line_no, key);
            return v.get<std::string>();
        };
        auto ms = [&](const char* key) {
            const auto& v = require(key);
            if (v.is_number_integer()) return v.get<std::int64_t>();
            if (v.is_number()) return static_cast<std::int64_t>(std::trunc(v.get<double>()));
            throw ParseError("expected number", line_no, key);
        };
        FixationRecord rec;
        rec.session_id = str("session_id");
        rec.participant_id = str("participant_id");
        try {
            rec.role = parse_role(str("role"));
        } catch (const ParseError& e) {
            throw ParseError(e.what(), line_no, "role");
        }
        rec.start_ms = ms("start_ms");
        rec.end_ms = ms("end_ms");
        rec.object_id = str("object_id");
        rec.kind = parse_kind(str("kind"), line_no);
        check_record(rec, line_no);
        records.push_back(std::move(rec));
    }
    return records;
}

}  // namespace

Role parse_role(std::string_view text) {
    if (text == "Airway") return Role::Airway;
    if (text == "CPR") return Role::CPR;
    if (text == "Defib") return Role::Defib;
    if (text == "TeamLead") return Role::TeamLead;
    throw ParseError("unknown role '" + std::string(text) +
                     "' (expected Airway|CPR|Defib|TeamLead)");
}

std::string_view to_string(Role role) {
    switch (role) {
        case Role::Airway: return "Airway";
        case Role::CPR: return "CPR";
        case Role::Defib: return "Defib";
        case Role::TeamLead: return "TeamLead";
    }
    return "?";
}

std::span<const Role> all_roles() { return kRoles; }

std::optional<std::string_view> AoiMap::label_for(std::string_view object_id) const {
    auto it = entries.find(object_id);
    if (it == entries.end()) {
        return std::nullopt;
    }
    return std::string_view(it->second);
}

std::size_t AoiMap::index_of(std::string_view label) const {
    for (std::size_t i = 0; i < aoi_order.size(); ++i) {
        if (aoi_order[i] == label) return i;
    }
    throw std::invalid_argument("AOI label not in aoi_order: " + std::string(label));
}

void AoiMap::validate() const {
    std::set<std::string_view> seen;
    for (const auto& label : aoi_order) {
        if (!seen.insert(label).second) {
            throw ParseError("duplicate AOI label in order declaration: '" + label + "'");
        }
    }
    if (seen.size() < 2) {
        throw ParseError("aoi_order must declare at least 2 distinct labels");
    }
    for (const auto& [object_id, label] : entries) {
        if (!seen.contains(label)) {
            throw ParseError("label '" + label + "' for object '" + object_id +
                             "' is not declared in the aois: header");
        }
    }
}

const std::vector<std::string>& default_aoi_order() {
    static const std::vector<std::string> order = {
        "Equipment - Airway",
        "Equipment - CPR",
        "Equipment - Defib",
        "Equipment - Meds & IV",
        "Patient Vitals Monitor",
        "Other Team Members",
        "Patient",
    };
    return order;
}

std::vector<FixationRecord> parse_fixation_log(std::istream& in, LogFormat format) {
    return format == LogFormat::Csv ? parse_fixation_csv(in) : parse_fixation_jsonl(in);
}

AoiMap parse_aoi_map(std::istream& in) {
    std::string first;
    long line_no = 0;
    // the order declaration may be preceded by blank lines only
    while (std::getline(in, first)) {
        ++line_no;
        if (!csv::trim(first).empty()) break;
        first.clear();
    }
    std::string header = csv::trim(first);
    constexpr std::string_view prefix = "aois:";
    if (!header.starts_with(prefix)) {
        throw ParseError("expected order declaration 'aois: <label1>|<label2>|...'", line_no);
    }
    AoiMap map;
    std::string labels = header.substr(prefix.size());
    std::size_t pos = 0;
    while (pos <= labels.size()) {
        std::size_t bar = labels.find('|', pos);
        std::string label = csv::trim(std::string_view(labels).substr(
            pos, bar == std::string::npos ? std::string::npos : bar - pos));
        if (!label.empty()) {
            map.aoi_order.push_back(std::move(label));
        }
        if (bar == std::string::npos) break;
        pos = bar + 1;
    }

    csv::Reader reader(in);
    while (auto row = reader.next()) {
        long line = row->line + line_no;  // reader restarts counting after the header
        if (row->fields.size() != 2) {
            throw ParseError("expected 'object_id,aoi_label'", line);
        }
        const std::string& object_id = row->fields[0];
        const std::string& label = row->fields[1];
        auto [it, inserted] = map.entries.emplace(object_id, label);
        if (!inserted && it->second != label) {
            throw ParseError("object '" + object_id + "' mapped to both '" + it->second +
                                 "' and '" + label + "'",
                             line, "object_id");
        }
    }
    map.validate();
    return map;
}

std::vector<StageAnnotation> parse_stage_annotations(std::istream& in) {
    csv::Reader reader(in);
    auto header = reader.next();
    if (!header) {
        return {};  // empty file: stage stratification disabled
    }
    const std::array<std::string_view, 4> cols = {"session_id", "stage_label", "start_ms",
                                                  "end_ms"};
    for (std::size_t i = 0; i < cols.size(); ++i) {
        if (i >= header->fields.size() || header->fields[i] != cols[i]) {
            throw ParseError("missing or misplaced column", header->line, std::string(cols[i]));
        }
    }
    if (header->fields.size() > cols.size()) {
        throw ParseError("unexpected extra column '" + header->fields[cols.size()] + "'",
                         header->line);
    }
    std::vector<StageAnnotation> stages;
    while (auto row = reader.next()) {
        if (row->fields.size() != cols.size()) {
            throw ParseError("expected 'session_id,stage_label,start_ms,end_ms'", row->line);
        }
        StageAnnotation st;
        st.session_id = row->fields[0];
        st.stage_label = row->fields[1];
        st.start_ms = parse_ms(row->fields[2], row->line, "start_ms");
        st.end_ms = parse_ms(row->fields[3], row->line, "end_ms");
        if (st.end_ms <= st.start_ms) {
            throw ParseError("stage end_ms must be greater than start_ms", row->line, "end_ms");
        }
        stages.push_back(std::move(st));
    }
    std::stable_sort(stages.begin(), stages.end(), [](const auto& a, const auto& b) {
        return a.session_id != b.session_id ? a.session_id < b.session_id
                                            : a.start_ms < b.start_ms;
    });
    for (std::size_t i = 1; i < stages.size(); ++i) {
        const auto& prev = stages[i - 1];
        const auto& cur = stages[i];
        if (prev.session_id == cur.session_id && cur.start_ms < prev.end_ms) {
            throw ParseError("stages '" + prev.stage_label + "' and '" + cur.stage_label +
                             "' overlap in session '" + cur.session_id + "'");
        }
    }
    return stages;
}

void write_fixation_csv(std::ostream& out, std::span<const FixationRecord> records) {
    out << kFixationCsvHeader << '\n';
    for (const auto& rec : records) {
        out << csv::escape(rec.session_id) << ',' << csv::escape(rec.participant_id) << ','
            << to_string(rec.role) << ',' << rec.start_ms << ',' << rec.end_ms << ','
            << csv::escape(rec.object_id) << ','
            << (rec.kind == EventKind::Fixation ? "fixation" : "saccade") << '\n';
    }
}

void write_fixation_jsonl(std::ostream& out, std::span<const FixationRecord> records) {
    for (const auto& rec : records) {
        nlohmann::json obj;
        obj["session_id"] = rec.session_id;
        obj["participant_id"] = rec.participant_id;
        obj["role"] = std::string(to_string(rec.role));
        obj["start_ms"] = rec.start_ms;
        obj["end_ms"] = rec.end_ms;
        obj["object_id"] = rec.object_id;
        obj["kind"] = rec.kind == EventKind::Fixation ? "fixation" : "saccade";
        out << obj.dump() << '\n';
    }
}

void write_aoi_map(std::ostream& out, const AoiMap& map) {
    out << "aois: ";
    for (std::size_t i = 0; i < map.aoi_order.size(); ++i) {
        if (i) out << '|';
        out << map.aoi_order[i];
    }
    out << '\n';
    for (const auto& [object_id, label] : map.entries) {
        out << csv::escape(object_id) << ',' << csv::escape(label) << '\n';
    }
}

void write_stage_annotations(std::ostream& out, std::span<const StageAnnotation> stages) {
    out << "session_id,stage_label,start_ms,end_ms\n";
    for (const auto& st : stages) {
        out << csv::escape(st.session_id) << ',' << csv::escape(st.stage_label) << ','
            << st.start_ms << ',' << st.end_ms << '\n';
    }
}

}  // namespace tna
