#include "tna/synth.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "tna/error.hpp"
#include "tna/rng.hpp"

namespace tna {

namespace {

std::string slug(const std::string& label) {
    std::string out;
    bool pending_dash = false;
    for (char c : label) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            if (pending_dash && !out.empty()) out.push_back('-');
            pending_dash = false;
            out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        } else {
            pending_dash = true;
        }
    }
    return out.empty() ? "aoi" : out;
}

// First index j with cumulative probability above u; falls back to the last
// positive entry so rounding at u ~ 1 cannot escape the row.
std::size_t sample_row(const GeneratorSpec& spec, std::size_t from, double u) {
    const std::size_t k = spec.size();
    double cum = 0.0;
    std::size_t last_positive = 0;
    bool any = false;
    for (std::size_t j = 0; j < k; ++j) {
        const double p = spec.q(from, j);
        if (p > 0.0) {
            last_positive = j;
            any = true;
        }
        cum += p;
        if (u < cum) {
            return j;
        }
    }
    return any ? last_positive : from;
}

}  // namespace

void GeneratorSpec::validate() const {
    const std::size_t k = size();
    if (k < 2) {
        throw std::invalid_argument("GeneratorSpec: need at least 2 AOIs");
    }
    if (transition_probs.size() != k * k) {
        throw std::invalid_argument("GeneratorSpec: transition_probs must be K*K");
    }
    for (std::size_t i = 0; i < k; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            const double p = q(i, j);
            if (!(p >= 0.0) || !std::isfinite(p)) {
                throw std::invalid_argument("GeneratorSpec: negative or non-finite probability");
            }
            row += p;
        }
        if (std::fabs(row - 1.0) > 1e-9) {
            throw std::invalid_argument("GeneratorSpec: row " + std::to_string(i) +
                                        " of Q sums to " + std::to_string(row));
        }
    }
    if (dwell_ms.min < 0 || dwell_ms.min > dwell_ms.max) {
        throw std::invalid_argument("GeneratorSpec: invalid dwell_ms range");
    }
    if (gap_ms.min < 0 || gap_ms.min > gap_ms.max) {
        throw std::invalid_argument("GeneratorSpec: invalid gap_ms range");
    }
    if (objects_per_aoi < 1) {
        throw std::invalid_argument("GeneratorSpec: objects_per_aoi must be >= 1");
    }
    if (length < 0) {
        throw std::invalid_argument("GeneratorSpec: length must be >= 0");
    }
    if (start_offset_ms < 0) {
        throw std::invalid_argument("GeneratorSpec: start_offset_ms must be >= 0");
    }
}

std::string object_id_for(const std::string& aoi_label, int k) {
    return slug(aoi_label) + "-obj" + std::to_string(k + 1);
}

AoiMap aoi_map_for(const GeneratorSpec& spec) {
    AoiMap map;
    map.aoi_order = spec.aoi_order;
    for (const auto& label : spec.aoi_order) {
        for (int k = 0; k < spec.objects_per_aoi; ++k) {
            map.entries.emplace(object_id_for(label, k), label);
        }
    }
    map.validate();
    return map;
}

std::vector<FixationRecord> generate(const GeneratorSpec& spec) {
    spec.validate();
    std::vector<FixationRecord> records;
    records.reserve(static_cast<std::size_t>(spec.length));
    SplitMix64 rng(spec.seed);
    std::int64_t t = spec.start_offset_ms;
    std::size_t aoi = 0;
    for (std::int64_t n = 0; n < spec.length; ++n) {
        if (n == 0) {
            aoi = static_cast<std::size_t>(rng.next_below(spec.size()));
        } else {
            aoi = sample_row(spec, aoi, rng.next_unit());
        }
        const int obj =
            spec.objects_per_aoi == 1
                ? 0
                : static_cast<int>(rng.next_below(static_cast<std::uint64_t>(spec.objects_per_aoi)));
        const std::int64_t dwell = rng.next_in_range(spec.dwell_ms.min, spec.dwell_ms.max);
        const std::int64_t gap = rng.next_in_range(spec.gap_ms.min, spec.gap_ms.max);
        records.push_back(FixationRecord{spec.session_id, spec.participant_id, spec.role, t,
                                         t + dwell, object_id_for(spec.aoi_order[aoi], obj),
                                         EventKind::Fixation});
        t += dwell + gap;
    }
    return records;
}

GeneratorSpec load_generator_spec(std::istream& in) {
    nlohmann::json obj;
    try {
        obj = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid generator spec JSON: ") + e.what());
    }
    if (obj.value("schema", std::string{}) != "tna-generator/1") {
        throw ParseError("unsupported generator schema: '" +
                         obj.value("schema", std::string{}) + "'");
    }
    GeneratorSpec spec;
    try {
        spec.aoi_order = obj.at("aoi_order").get<std::vector<std::string>>();
        const auto& rows = obj.at("transition_probs");
        for (const auto& row : rows) {
            for (const auto& v : row) {
                spec.transition_probs.push_back(v.get<double>());
            }
        }
        spec.dwell_ms.min = obj.at("dwell_ms").at("min").get<std::int64_t>();
        spec.dwell_ms.max = obj.at("dwell_ms").at("max").get<std::int64_t>();
        spec.gap_ms.min = obj.at("gap_ms").at("min").get<std::int64_t>();
        spec.gap_ms.max = obj.at("gap_ms").at("max").get<std::int64_t>();
        spec.objects_per_aoi = obj.at("objects_per_aoi").get<int>();
        spec.length = obj.at("length").get<std::int64_t>();
        spec.seed = obj.at("seed").get<std::uint64_t>();
        spec.session_id = obj.value("session_id", spec.session_id);
        spec.participant_id = obj.value("participant_id", spec.participant_id);
        if (obj.contains("role")) {
            spec.role = parse_role(obj.at("role").get<std::string>());
        }
        spec.start_offset_ms = obj.value("start_offset_ms", spec.start_offset_ms);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("generator spec: ") + e.what());
    }
    try {
        spec.validate();
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
    return spec;
}

GeneratorSpec load_generator_spec_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open generator spec: " + path.string());
    }
    return load_generator_spec(in);
}

std::string preset_name(Role role, const std::string& stage) {
    std::string name(to_string(role));
    std::transform(name.begin(), name.end(), name.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return name + "-" + stage;
}

GeneratorSpec role_preset(Role role, const std::string& stage,
                          const std::filesystem::path& presets_dir) {
    const std::filesystem::path path = presets_dir / (preset_name(role, stage) + ".json");
    if (!std::filesystem::exists(path)) {
        throw ParseError("unknown role/stage preset: no file " + path.string());
    }
    GeneratorSpec spec = load_generator_spec_file(path);
    spec.role = role;
    return spec;
}

DemoCorpus build_demo_corpus(std::uint64_t corpus_seed,
                             const std::filesystem::path& presets_dir) {
    constexpr int kSessions = 10;
    constexpr std::int64_t kStage1Start = 0;
    constexpr std::int64_t kStage1End = 200000;
    constexpr std::int64_t kStage5Start = 300000;
    constexpr std::int64_t kStage5End = 500000;
    const std::array<std::string, 2> stage_labels = {"stage1", "stage5"};
    const std::array<std::int64_t, 2> stage_starts = {kStage1Start, kStage5Start};

    DemoCorpus corpus;
    SplitMix64 seeder(corpus_seed);
    bool have_map = false;
    for (int s = 0; s < kSessions; ++s) {
        char session[8];
        std::snprintf(session, sizeof(session), "s%02d", s + 1);
        for (Role role : all_roles()) {
            std::string role_lower(to_string(role));
            std::transform(role_lower.begin(), role_lower.end(), role_lower.begin(),
                           [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
            const std::string participant = std::string(session) + "_" + role_lower;
            for (std::size_t stage_idx = 0; stage_idx < stage_labels.size(); ++stage_idx) {
                GeneratorSpec spec = role_preset(role, stage_labels[stage_idx], presets_dir);
                spec.seed = seeder.next();
                spec.session_id = session;
                spec.participant_id = participant;
                spec.start_offset_ms = stage_starts[stage_idx];
                if (!have_map) {
                    corpus.aoi_map = aoi_map_for(spec);
                    have_map = true;
                }
                auto records = generate(spec);
                corpus.fixations.insert(corpus.fixations.end(), records.begin(), records.end());
            }
        }
        corpus.stages.push_back(StageAnnotation{session, "stage1", kStage1Start, kStage1End});
        corpus.stages.push_back(StageAnnotation{session, "stage5", kStage5Start, kStage5End});
    }
    return corpus;
}

}  // namespace tna
