#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tna/ingest.hpp"

namespace tna {

/// One dwell event: adjacent fixations on the same object fused together.
/// `aoi` holds the object id straight after merging and the AOI label once
/// build_aoi_sequence has applied the map; merging runs at object granularity
/// on purpose, so two consecutive dwells on different objects inside the same
/// AOI later appear as an AOI self-transition.
struct MergedFixation {
    std::string session_id;
    std::string participant_id;
    Role role = Role::Airway;
    std::string aoi;
    std::int64_t start_ms = 0;
    std::int64_t end_ms = 0;
    int merged_count = 1;  // raw fixations fused into this dwell

    bool operator==(const MergedFixation&) const = default;
};

/// Time-ordered AOI-labelled fixations for one participant-role, optionally
/// restricted to one scenario stage.
struct AoiSequence {
    std::string session_id;
    std::string participant_id;
    Role role = Role::Airway;
    std::optional<std::string> stage_label;
    std::vector<MergedFixation> fixations;
};

struct Transition {
    std::string from_aoi;
    std::string to_aoi;

    bool operator==(const Transition&) const = default;
};

/// Fuses consecutive fixations on the same object whose inter-fixation gap
/// (next.start_ms - prev.end_ms) is at most gap_ms. Fusion is transitive left
/// to right. Saccade records never enter the output and do not block a merge;
/// only the time gap matters. Input must come from a single participant and
/// be sorted by start_ms, otherwise std::invalid_argument is thrown.
std::vector<MergedFixation> merge_fixations(std::span<const FixationRecord> records,
                                             std::int64_t gap_ms = 300);

struct MappingResult {
    AoiSequence sequence;
    std::size_t dropped_unmapped = 0;  // fixations whose object id is not in the map
};

/// Replaces each dwell's object id with its AOI label, dropping fixations on
/// unmapped objects. Order is preserved; input must be time-sorted.
MappingResult build_aoi_sequence(std::vector<MergedFixation> merged, const AoiMap& map);

/// Splits a sequence into per-stage sequences using half-open [start, end)
/// windows; a fixation belongs to the stage containing its start_ms.
/// Annotations for other sessions are ignored. Returns one sequence per
/// stage of this session (possibly empty), in stage start order; with no
/// applicable stages the input comes back unchanged, stage_label absent.
std::vector<AoiSequence> segment_by_stage(const AoiSequence& seq,
                                          std::span<const StageAnnotation> stages);

/// Adjacent AOI pairs, in order: max(|fixations| - 1, 0) transitions.
std::vector<Transition> extract_transitions(const AoiSequence& seq);

}  // namespace tna
