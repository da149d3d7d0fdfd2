#include "tna/transition.hpp"

#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace tna {

std::int64_t TransitionCounts::row_sum(std::size_t from) const {
    const std::size_t k = size();
    std::int64_t sum = 0;
    for (std::size_t j = 0; j < k; ++j) {
        sum += counts[from * k + j];
    }
    return sum;
}

std::int64_t TransitionCounts::total_transitions() const {
    return std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
}

std::int64_t TransitionCounts::total_fixations() const {
    return std::accumulate(fixation_totals.begin(), fixation_totals.end(), std::int64_t{0});
}

void TransitionCounts::add(const TransitionCounts& other) {
    if (other.aoi_order != aoi_order) {
        throw std::invalid_argument("TransitionCounts::add: mismatched aoi_order");
    }
    for (std::size_t i = 0; i < counts.size(); ++i) {
        counts[i] += other.counts[i];
    }
    for (std::size_t i = 0; i < fixation_totals.size(); ++i) {
        fixation_totals[i] += other.fixation_totals[i];
    }
}

TransitionCounts make_counts(const std::vector<std::string>& aoi_order) {
    TransitionCounts c;
    c.aoi_order = aoi_order;
    c.counts.assign(aoi_order.size() * aoi_order.size(), 0);
    c.fixation_totals.assign(aoi_order.size(), 0);
    return c;
}

TransitionCounts pool_counts(std::span<const TransitionCounts> parts) {
    if (parts.empty()) {
        throw std::invalid_argument("pool_counts: no count matrices given");
    }
    TransitionCounts pooled = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) {
        pooled.add(parts[i]);
    }
    return pooled;
}

TransitionCounts count_transitions(std::span<const Transition> transitions,
                                   const AoiSequence& fixations,
                                   const std::vector<std::string>& aoi_order) {
    TransitionCounts out = make_counts(aoi_order);
    std::unordered_map<std::string_view, std::size_t> index;
    index.reserve(aoi_order.size());
    for (std::size_t i = 0; i < aoi_order.size(); ++i) {
        index.emplace(aoi_order[i], i);
    }
    auto lookup = [&](const std::string& label) {
        auto it = index.find(label);
        if (it == index.end()) {
            throw std::invalid_argument("count_transitions: label outside aoi_order: '" +
                                        label + "'");
        }
        return it->second;
    };
    for (const auto& t : transitions) {
        out.at(lookup(t.from_aoi), lookup(t.to_aoi)) += 1;
    }
    for (const auto& fx : fixations.fixations) {
        out.fixation_totals[lookup(fx.aoi)] += 1;
    }
    return out;
}

TransitionMatrix smooth_and_normalize(const TransitionCounts& counts,
                                      const SmoothingConfig& cfg) {
    if (cfg.alpha < 0) {
        throw std::invalid_argument("smooth_and_normalize: alpha must be non-negative");
    }
    const std::size_t k = counts.size();
    TransitionMatrix m;
    m.aoi_order = counts.aoi_order;
    m.probs.assign(k * k, 0.0);
    m.row_support.assign(k, 0);
    m.alpha = cfg.alpha;
    m.smooth_empty_rows = cfg.smooth_empty_rows;
    for (std::size_t i = 0; i < k; ++i) {
        const std::int64_t support = counts.row_sum(i);
        m.row_support[i] = support;
        const bool smooth_this_row = support > 0 || (cfg.smooth_empty_rows && cfg.alpha > 0);
        if (!smooth_this_row) {
            continue;  // all-zero sentinel row
        }
        const double denom =
            static_cast<double>(support) + static_cast<double>(k) * cfg.alpha;
        if (denom <= 0) {
            continue;  // support == 0 with alpha == 0
        }
        for (std::size_t j = 0; j < k; ++j) {
            m.at(i, j) = (static_cast<double>(counts.at(i, j)) + cfg.alpha) / denom;
        }
    }
    return m;
}

}  // namespace tna
