#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "tna/ingest.hpp"

namespace tna {

/// Everything needed to synthesize a fixation log from a known Markov
/// transition structure. Serves as the estimation test oracle and as the
/// demo-data source. Generation is fully deterministic given the seed: all
/// randomness comes from one SplitMix64 stream, drawn in a fixed per-fixation
/// order (next AOI, object, dwell, gap).
struct GeneratorSpec {
    std::vector<std::string> aoi_order;
    std::vector<double> transition_probs;  // K*K row-major ground truth Q, row-stochastic

    struct Range {
        std::int64_t min = 0;
        std::int64_t max = 0;
    };
    Range dwell_ms{150, 400};  // uniform dwell duration
    Range gap_ms{100, 450};    // uniform inter-fixation gap
    int objects_per_aoi = 1;   // distinct object ids per AOI, exercises object-level merging
    std::int64_t length = 0;   // number of fixations to emit
    std::uint64_t seed = 0;

    // identity stamped onto the emitted records
    std::string session_id = "sim";
    std::string participant_id = "sim";
    Role role = Role::CPR;
    std::int64_t start_offset_ms = 0;

    std::size_t size() const { return aoi_order.size(); }
    double q(std::size_t from, std::size_t to) const {
        return transition_probs[from * size() + to];
    }

    void validate() const;  // throws std::invalid_argument on a broken spec
};

/// First AOI uniform, subsequent AOIs from Q, object uniform within the AOI,
/// timestamps advancing by dwell then gap. Emits kind=fixation records in
/// the ingest CSV schema's field set.
std::vector<FixationRecord> generate(const GeneratorSpec& spec);

/// Deterministic object id for the k-th object of an AOI ("patient-obj1").
std::string object_id_for(const std::string& aoi_label, int k);

/// AOI map covering every object id the spec can emit.
AoiMap aoi_map_for(const GeneratorSpec& spec);

/// Loads a generator spec from its JSON representation.
GeneratorSpec load_generator_spec(std::istream& in);
GeneratorSpec load_generator_spec_file(const std::filesystem::path& path);

/// Canonical preset name, e.g. "cpr-stage5".
std::string preset_name(Role role, const std::string& stage);

/// Loads the bundled ground-truth preset for a role/stage pair from
/// <presets_dir>/<role>-<stage>.json. The presets are data files shipped with
/// the repo; their matrices encode distinct per-role regimes (exploratory
/// high-entropy CPR, device-anchored Defib, monitor-anchored TeamLead whose
/// vitals self-probability rises from stage1 to stage5).
GeneratorSpec role_preset(Role role, const std::string& stage,
                          const std::filesystem::path& presets_dir);

/// The synthetic study corpus: 10 sessions x 4 roles, each participant
/// generated from its role's stage1 preset in [0, 200000) ms and stage5
/// preset from 300000 ms on, with matching stage annotations. Per-participant
/// generator seeds are drawn from SplitMix64(corpus_seed) in session-major
/// order, so one corpus seed pins the whole corpus.
struct DemoCorpus {
    std::vector<FixationRecord> fixations;
    AoiMap aoi_map;
    std::vector<StageAnnotation> stages;
};

DemoCorpus build_demo_corpus(std::uint64_t corpus_seed,
                             const std::filesystem::path& presets_dir);

/// Seed of the corpus shipped under data/demo/.
inline constexpr std::uint64_t kDemoCorpusSeed = 424242;

}  // namespace tna
