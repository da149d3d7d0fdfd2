#include <benchmark/benchmark.h>

#include <vector>

#include "tna/metrics.hpp"
#include "tna/network.hpp"
#include "tna/rng.hpp"
#include "tna/sequence.hpp"
#include "tna/synth.hpp"
#include "tna/transition.hpp"

namespace {

using namespace tna;

GeneratorSpec full_scale_spec(std::int64_t length) {
    GeneratorSpec spec;
    spec.aoi_order = default_aoi_order();
    const double diag = 0.4;
    const double off = (1.0 - diag) / 6.0;
    for (std::size_t i = 0; i < 7; ++i) {
        for (std::size_t j = 0; j < 7; ++j) {
            spec.transition_probs.push_back(i == j ? diag : off);
        }
    }
    spec.gap_ms = {100, 450};
    spec.objects_per_aoi = 3;
    spec.length = length;
    spec.seed = 7;
    return spec;
}

std::vector<FixationRecord> full_scale_records() {
    static const auto records = generate(full_scale_spec(20628));
    return records;
}

AoiSequence full_scale_sequence() {
    const auto spec = full_scale_spec(20628);
    auto mapped = build_aoi_sequence(merge_fixations(full_scale_records()), aoi_map_for(spec));
    return mapped.sequence;
}

void BM_MergeFixations(benchmark::State& state) {
    const auto records = full_scale_records();
    for (auto _ : state) {
        auto merged = merge_fixations(records);
        benchmark::DoNotOptimize(merged);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(records.size()));
}
BENCHMARK(BM_MergeFixations);

void BM_AnalyzeSequence(benchmark::State& state) {
    const AoiSequence seq = full_scale_sequence();
    const auto order = default_aoi_order();
    for (auto _ : state) {
        TnaMetrics m = analyze_sequence(seq, order, {});
        benchmark::DoNotOptimize(m);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(seq.fixations.size()));
}
BENCHMARK(BM_AnalyzeSequence);

void BM_SmoothAndNormalize(benchmark::State& state) {
    const AoiSequence seq = full_scale_sequence();
    const auto counts =
        count_transitions(extract_transitions(seq), seq, default_aoi_order());
    for (auto _ : state) {
        TransitionMatrix p = smooth_and_normalize(counts, {0.5, false});
        benchmark::DoNotOptimize(p);
    }
}
BENCHMARK(BM_SmoothAndNormalize);

void BM_BuildAndExportNetwork(benchmark::State& state) {
    const AoiSequence seq = full_scale_sequence();
    const auto counts =
        count_transitions(extract_transitions(seq), seq, default_aoi_order());
    const TransitionMatrix p = smooth_and_normalize(counts, {0.5, false});
    for (auto _ : state) {
        TnaNetwork net = build_network(p, counts, 0.0);
        std::string dot = export_dot(net);
        std::string json = export_json(net);
        benchmark::DoNotOptimize(dot);
        benchmark::DoNotOptimize(json);
    }
}
BENCHMARK(BM_BuildAndExportNetwork);

void BM_Generate(benchmark::State& state) {
    const auto spec = full_scale_spec(state.range(0));
    for (auto _ : state) {
        auto records = generate(spec);
        benchmark::DoNotOptimize(records);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Generate)->Arg(1000)->Arg(20628);

}  // namespace

BENCHMARK_MAIN();
