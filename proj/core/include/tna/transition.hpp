#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tna/sequence.hpp"

namespace tna {

/// Raw transition tabulation over a fixed AOI alphabet: counts[i][j] is the
/// number of i -> j transitions, fixation_totals[i] the number of merged
/// fixations on AOI i.
struct TransitionCounts {
    std::vector<std::string> aoi_order;
    std::vector<std::int64_t> counts;           // K*K, row-major
    std::vector<std::int64_t> fixation_totals;  // length K

    std::size_t size() const { return aoi_order.size(); }
    std::int64_t at(std::size_t from, std::size_t to) const {
        return counts[from * size() + to];
    }
    std::int64_t& at(std::size_t from, std::size_t to) { return counts[from * size() + to]; }
    std::int64_t row_sum(std::size_t from) const;
    std::int64_t total_transitions() const;
    std::int64_t total_fixations() const;

    /// Element-wise accumulation for pooling independent sequences; both
    /// operands must share the same aoi_order.
    void add(const TransitionCounts& other);
};

TransitionCounts make_counts(const std::vector<std::string>& aoi_order);

/// Sums count matrices across sequences (pooling before smoothing).
TransitionCounts pool_counts(std::span<const TransitionCounts> parts);

struct SmoothingConfig {
    double alpha = 0.5;             // Laplace pseudo-count added per cell
    bool smooth_empty_rows = false; // default: only rows with observed outgoing transitions
};

/// Row-stochastic transition probability estimate. Rows whose raw outgoing
/// total (row_support) is zero stay all-zero sentinel rows unless
/// smooth_empty_rows was set, in which case they become uniform.
struct TransitionMatrix {
    std::vector<std::string> aoi_order;
    std::vector<double> probs;               // K*K, row-major
    std::vector<std::int64_t> row_support;   // raw outgoing totals per row
    double alpha = 0.5;                      // smoothing actually applied
    bool smooth_empty_rows = false;

    std::size_t size() const { return aoi_order.size(); }
    double at(std::size_t from, std::size_t to) const { return probs[from * size() + to]; }
    double& at(std::size_t from, std::size_t to) { return probs[from * size() + to]; }
};

/// Tabulates transitions and per-AOI fixation totals over the given order.
/// Any label outside the order raises std::invalid_argument.
TransitionCounts count_transitions(std::span<const Transition> transitions,
                                   const AoiSequence& fixations,
                                   const std::vector<std::string>& aoi_order);

/// probs[i][j] = (counts[i][j] + alpha) / (row_sum_i + K*alpha) for rows with
/// support; alpha = 0 reduces to plain maximum-likelihood row normalization.
TransitionMatrix smooth_and_normalize(const TransitionCounts& counts,
                                      const SmoothingConfig& cfg = {});

}  // namespace tna
