#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tna {

/// The four standardized resuscitation roles. Role strings in input files
/// must match these spellings exactly; anything else is a parse error.
enum class Role { Airway, CPR, Defib, TeamLead };

Role parse_role(std::string_view text);  // throws ParseError on unknown role
std::string_view to_string(Role role);

/// All four roles in canonical (alphabetical-ish, enum) order.
std::span<const Role> all_roles();

enum class EventKind { Fixation, Saccade };

/// One raw eye-tracking event. Saccades are parsed and kept so record counts
/// can be audited, but they are dropped when sequences are built.
struct FixationRecord {
    std::string session_id;
    std::string participant_id;
    Role role = Role::Airway;
    std::int64_t start_ms = 0;  // non-negative; sub-millisecond input truncates
    std::int64_t end_ms = 0;    // >= start_ms
    std::string object_id;      // gazed 3D object; unmapped ids are legal
    EventKind kind = EventKind::Fixation;

    bool operator==(const FixationRecord&) const = default;
};

/// Maps scene object ids to AOI labels. aoi_order fixes the row/column order
/// of every matrix downstream; it must list at least two distinct labels and
/// cover every label used in entries.
struct AoiMap {
    std::vector<std::string> aoi_order;
    std::map<std::string, std::string, std::less<>> entries;  // object_id -> label

    /// AOI label for an object id, or nullopt if the object is unmapped.
    std::optional<std::string_view> label_for(std::string_view object_id) const;

    /// Index of a label within aoi_order; throws std::invalid_argument if absent.
    std::size_t index_of(std::string_view label) const;

    void validate() const;  // throws ParseError on a broken map
};

/// The seven AOI labels of the clinical VR scene, in canonical order.
/// Used as the default matrix alphabet and by the bundled generator presets.
const std::vector<std::string>& default_aoi_order();

struct StageAnnotation {
    std::string session_id;
    std::string stage_label;
    std::int64_t start_ms = 0;
    std::int64_t end_ms = 0;  // > start_ms; stages within a session must not overlap

    bool operator==(const StageAnnotation&) const = default;
};

enum class LogFormat { Csv, Jsonl };

/// Exact CSV header required for fixation logs.
inline constexpr std::string_view kFixationCsvHeader =
    "session_id,participant_id,role,start_ms,end_ms,object_id,kind";

/// Parses a fixation log. Records come back in file order with no filtering
/// beyond whitespace trimming. Malformed rows raise ParseError with the line
/// number and field name.
std::vector<FixationRecord> parse_fixation_log(std::istream& in, LogFormat format);

/// AOI map file: a first line "aois: <label1>|<label2>|..." declaring the
/// order, then CSV rows "object_id,aoi_label". Duplicate object ids with
/// conflicting labels and undeclared labels are errors.
AoiMap parse_aoi_map(std::istream& in);

/// Stage table CSV with header "session_id,stage_label,start_ms,end_ms".
/// Result is sorted by (session_id, start_ms). An empty input yields an
/// empty list (stage stratification disabled).
std::vector<StageAnnotation> parse_stage_annotations(std::istream& in);

// Writers mirror the parsers field-for-field, so parse -> write -> parse is
// the identity. The generator emits exactly this CSV schema.
void write_fixation_csv(std::ostream& out, std::span<const FixationRecord> records);
void write_fixation_jsonl(std::ostream& out, std::span<const FixationRecord> records);
void write_aoi_map(std::ostream& out, const AoiMap& map);
void write_stage_annotations(std::ostream& out, std::span<const StageAnnotation> stages);

}  // namespace tna
