#pragma once

#include <string>
#include <vector>

#include "tna/rng.hpp"
#include "tna/sequence.hpp"

namespace testutil {

inline std::vector<std::string> alphabet(int k) {
    std::vector<std::string> labels;
    for (int i = 0; i < k; ++i) {
        labels.push_back("A" + std::to_string(i));
    }
    return labels;
}

/// AoiSequence over labels "A<i>" from integer codes; timestamps synthetic.
inline tna::AoiSequence sequence_from_codes(const std::vector<int>& codes, int k) {
    const auto labels = alphabet(k);
    tna::AoiSequence seq;
    seq.session_id = "s";
    seq.participant_id = "p";
    seq.role = tna::Role::CPR;
    std::int64_t t = 0;
    for (int c : codes) {
        seq.fixations.push_back(
            tna::MergedFixation{"s", "p", tna::Role::CPR, labels[c], t, t + 100, 1});
        t += 500;
    }
    return seq;
}

inline std::vector<int> random_codes(tna::SplitMix64& rng, int k, int length) {
    std::vector<int> codes;
    codes.reserve(length);
    for (int i = 0; i < length; ++i) {
        codes.push_back(static_cast<int>(rng.next_below(k)));
    }
    return codes;
}

}  // namespace testutil
