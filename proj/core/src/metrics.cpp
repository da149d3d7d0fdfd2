#include "tna/metrics.hpp"

#include <cmath>
#include <stdexcept>

#include "tna/sequence.hpp"

namespace tna {

EntropyResult transition_entropy(const TransitionMatrix& p, bool renormalize_offdiag) {
    const std::size_t k = p.size();
    EntropyResult result;
    result.per_aoi.assign(k, std::nullopt);
    double sum = 0.0;
    std::size_t active = 0;
    for (std::size_t i = 0; i < k; ++i) {
        if (p.row_support[i] <= 0) {
            continue;  // entropy undefined for unobserved rows
        }
        double h = 0.0;
        if (renormalize_offdiag) {
            double off_mass = 0.0;
            for (std::size_t j = 0; j < k; ++j) {
                if (j != i) off_mass += p.at(i, j);
            }
            if (off_mass > 0.0) {
                for (std::size_t j = 0; j < k; ++j) {
                    if (j == i) continue;
                    const double q = p.at(i, j) / off_mass;
                    if (q > 0.0) h -= q * std::log2(q);
                }
            }
            // off_mass == 0 (all mass on the diagonal, alpha = 0): h stays 0
        } else {
            for (std::size_t j = 0; j < k; ++j) {
                if (j == i) continue;
                const double q = p.at(i, j);
                if (q > 0.0) h -= q * std::log2(q);
            }
        }
        result.per_aoi[i] = h;
        sum += h;
        ++active;
    }
    if (active > 0) {
        result.mean = sum / static_cast<double>(active);
    }
    return result;
}

SelfLoopResult self_loop_rate(const TransitionMatrix& p, const TransitionCounts& c) {
    const std::int64_t total = c.total_fixations();
    if (total <= 0) {
        throw std::invalid_argument("self_loop_rate: empty sequence");
    }
    const std::size_t k = p.size();
    SelfLoopResult result;
    result.weights.resize(k);
    double self = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        result.weights[i] =
            static_cast<double>(c.fixation_totals[i]) / static_cast<double>(total);
        if (p.row_support[i] > 0) {
            self += result.weights[i] * p.at(i, i);
        }
        // rows without outgoing transitions contribute w_i * 0
    }
    result.self_loop = self;
    result.cross_scan = 1.0 - self;
    return result;
}

TnaMetrics analyze_counts(const TransitionCounts& counts, const AnalysisConfig& cfg) {
    if (counts.total_fixations() <= 0) {
        throw std::invalid_argument("analyze_counts: empty sequence");
    }
    const TransitionMatrix p = smooth_and_normalize(counts, cfg.smoothing);
    const EntropyResult ent = transition_entropy(p, cfg.entropy_renormalize);
    const SelfLoopResult sl = self_loop_rate(p, counts);

    TnaMetrics m;
    m.entropy = ent.mean;
    m.per_aoi_entropy = ent.per_aoi;
    m.self_loop = sl.self_loop;
    m.cross_scan = sl.cross_scan;
    m.weights = sl.weights;
    m.n_fixations = counts.total_fixations();
    m.n_transitions = counts.total_transitions();
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p.row_support[i] > 0) ++m.n_active_aois;
    }
    return m;
}

TnaMetrics analyze_sequence(const AoiSequence& seq, const std::vector<std::string>& aoi_order,
                            const AnalysisConfig& cfg) {
    const std::vector<Transition> transitions = extract_transitions(seq);
    const TransitionCounts counts = count_transitions(transitions, seq, aoi_order);
    return analyze_counts(counts, cfg);
}

}  // namespace tna
