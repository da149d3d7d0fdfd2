#include "tna/sequence.hpp"

#include <algorithm>
#include <stdexcept>

namespace tna {

std::vector<MergedFixation> merge_fixations(std::span<const FixationRecord> records,
                                             std::int64_t gap_ms) {
    std::vector<MergedFixation> merged;
    const FixationRecord* prev = nullptr;
    for (const auto& rec : records) {
        if (prev) {
            if (rec.participant_id != prev->participant_id) {
                throw std::invalid_argument(
                    "merge_fixations: records span multiple participants ('" +
                    prev->participant_id + "', '" + rec.participant_id + "')");
            }
            if (rec.start_ms < prev->start_ms) {
                throw std::invalid_argument(
                    "merge_fixations: input not sorted by start_ms (sort before merging)");
            }
        }
        prev = &rec;
        if (rec.kind == EventKind::Saccade) {
            continue;  // excluded from the sequence; the gap below spans it anyway
        }
        if (!merged.empty()) {
            MergedFixation& cur = merged.back();
            if (cur.aoi == rec.object_id && rec.start_ms - cur.end_ms <= gap_ms) {
                cur.end_ms = std::max(cur.end_ms, rec.end_ms);
                ++cur.merged_count;
                continue;
            }
        }
        merged.push_back(MergedFixation{rec.session_id, rec.participant_id, rec.role,
                                        rec.object_id, rec.start_ms, rec.end_ms, 1});
    }
    return merged;
}

MappingResult build_aoi_sequence(std::vector<MergedFixation> merged, const AoiMap& map) {
    for (std::size_t i = 1; i < merged.size(); ++i) {
        if (merged[i].start_ms < merged[i - 1].start_ms) {
            throw std::invalid_argument("build_aoi_sequence: input not time-sorted");
        }
    }
    MappingResult result;
    if (!merged.empty()) {
        result.sequence.session_id = merged.front().session_id;
        result.sequence.participant_id = merged.front().participant_id;
        result.sequence.role = merged.front().role;
    }
    for (auto& fx : merged) {
        auto label = map.label_for(fx.aoi);
        if (!label) {
            ++result.dropped_unmapped;
            continue;
        }
        fx.aoi.assign(*label);
        result.sequence.fixations.push_back(std::move(fx));
    }
    return result;
}

std::vector<AoiSequence> segment_by_stage(const AoiSequence& seq,
                                          std::span<const StageAnnotation> stages) {
    std::vector<StageAnnotation> applicable;
    for (const auto& st : stages) {
        if (st.session_id == seq.session_id) {
            applicable.push_back(st);
        }
    }
    if (applicable.empty()) {
        return {seq};
    }
    std::sort(applicable.begin(), applicable.end(),
              [](const auto& a, const auto& b) { return a.start_ms < b.start_ms; });
    for (std::size_t i = 1; i < applicable.size(); ++i) {
        if (applicable[i].start_ms < applicable[i - 1].end_ms) {
            throw std::invalid_argument("segment_by_stage: overlapping stages in session '" +
                                        seq.session_id + "'");
        }
    }

    std::vector<AoiSequence> out;
    out.reserve(applicable.size());
    for (const auto& st : applicable) {
        AoiSequence part;
        part.session_id = seq.session_id;
        part.participant_id = seq.participant_id;
        part.role = seq.role;
        part.stage_label = st.stage_label;
        for (const auto& fx : seq.fixations) {
            if (fx.start_ms >= st.start_ms && fx.start_ms < st.end_ms) {
                part.fixations.push_back(fx);
            }
        }
        out.push_back(std::move(part));
    }
    return out;
}

std::vector<Transition> extract_transitions(const AoiSequence& seq) {
    std::vector<Transition> out;
    if (seq.fixations.size() < 2) {
        return out;
    }
    out.reserve(seq.fixations.size() - 1);
    for (std::size_t i = 1; i < seq.fixations.size(); ++i) {
        out.push_back(Transition{seq.fixations[i - 1].aoi, seq.fixations[i].aoi});
    }
    return out;
}

}  // namespace tna
