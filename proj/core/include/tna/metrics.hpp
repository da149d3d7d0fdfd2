#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tna/transition.hpp"

namespace tna {

/// Per-row Shannon entropy of outgoing transitions, self-transitions
/// excluded. With renormalize_offdiag (the default) the off-diagonal entries
/// of each row are rescaled to sum to 1 before the entropy is taken, which
/// keeps the bits interpretation and the log2(K-1) upper bound; without it
/// the raw smoothed probabilities enter the sum as-is. Rows without observed
/// outgoing transitions have no entropy; the mean averages the rows that do.
struct EntropyResult {
    std::vector<std::optional<double>> per_aoi;
    std::optional<double> mean;
};

EntropyResult transition_entropy(const TransitionMatrix& p, bool renormalize_offdiag = true);

/// Fixation-weighted self-loop rate: sum of w_i * P_ii over rows with
/// observed outgoing transitions, with w_i the share of merged fixations on
/// AOI i. cross_scan = 1 - self_loop. Throws std::invalid_argument on an
/// empty sequence (zero fixations).
struct SelfLoopResult {
    double self_loop = 0.0;
    double cross_scan = 1.0;
    std::vector<double> weights;
};

SelfLoopResult self_loop_rate(const TransitionMatrix& p, const TransitionCounts& c);

struct AnalysisConfig {
    SmoothingConfig smoothing;
    bool entropy_renormalize = true;
};

/// Everything the pipeline reports for one sequence (or one pooled cell).
struct TnaMetrics {
    std::optional<double> entropy;                     // mean over active rows, bits
    std::vector<std::optional<double>> per_aoi_entropy;
    double self_loop = 0.0;
    double cross_scan = 1.0;
    std::vector<double> weights;                       // w_i, sums to 1
    std::int64_t n_fixations = 0;
    std::int64_t n_transitions = 0;
    std::size_t n_active_aois = 0;                     // rows with outgoing transitions
};

/// Metrics from an already-pooled count matrix. Requires at least one
/// fixation.
TnaMetrics analyze_counts(const TransitionCounts& counts, const AnalysisConfig& cfg = {});

/// extract_transitions -> count_transitions -> smooth_and_normalize ->
/// entropy + self-loop, for a single sequence.
TnaMetrics analyze_sequence(const AoiSequence& seq, const std::vector<std::string>& aoi_order,
                            const AnalysisConfig& cfg = {});

}  // namespace tna
