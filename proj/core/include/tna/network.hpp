#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tna/metrics.hpp"
#include "tna/transition.hpp"

namespace tna {

/// Which slice of the corpus a network was built from; empty components mean
/// "not restricted". Embedded in exports and used for deterministic file
/// naming.
struct NetworkScope {
    std::string participant_id;
    std::string role_label;
    std::string stage_label;

    bool operator==(const NetworkScope&) const = default;
};

struct TnaNode {
    std::string aoi;
    std::int64_t fixation_total = 0;
    double self_loop_prob = 0.0;  // raw P_ii of the smoothed matrix

    bool operator==(const TnaNode&) const = default;
};

struct TnaEdge {
    std::string from;
    std::string to;
    double probability = 0.0;
    std::int64_t raw_count = 0;

    bool operator==(const TnaEdge&) const = default;
};

/// Weighted directed graph view of a transition matrix, ready for export.
struct TnaNetwork {
    std::vector<TnaNode> nodes;  // AOIs with fixations or incident edges, in aoi_order
    std::vector<TnaEdge> edges;  // ordered by (from, to) position in aoi_order
    NetworkScope scope;
    double alpha = 0.5;
    double min_prob = 0.0;
    std::optional<double> entropy;  // mean transition entropy of this matrix
    double self_loop_rate = 0.0;
};

/// Turns a smoothed matrix plus its counts into an exportable network. Edges
/// with probability > 0 and >= min_prob are kept (self-loops follow the same
/// rule); every node additionally carries its raw self-loop probability
/// regardless of the threshold. When several participants feed one network,
/// pool their count matrices first (pool_counts) and smooth the pooled
/// counts - probabilities are never averaged.
TnaNetwork build_network(const TransitionMatrix& p, const TransitionCounts& c, double min_prob,
                         NetworkScope scope = {}, bool entropy_renormalize = true);

enum class MotifKind { Dyad, Triad };

std::string_view to_string(MotifKind kind);

/// A recurring attentional unit: a bidirectional AOI pair, or a three-node
/// directed cycle. min_edge_prob is the weakest edge of the qualifying
/// structure (for triads, of the strongest qualifying orientation).
struct Motif {
    MotifKind kind = MotifKind::Dyad;
    std::vector<std::string> members;  // 2 or 3 labels, in node order
    double min_edge_prob = 0.0;
};

/// Enumerates dyads (both directions >= threshold) and triads (a directed
/// 3-cycle in either orientation with all edges >= threshold; a triple is
/// reported once even if both orientations qualify). Self-loops never count.
/// Results are sorted by min_edge_prob descending. Requires 0 < threshold <= 1.
std::vector<Motif> find_motifs(const TnaNetwork& net, double threshold);

/// Graphviz DOT text: node width scales with fixation total, edge penwidth
/// with probability, self-loop edges red. Output is byte-stable: fixed
/// ordering and 6-significant-digit floats.
std::string export_dot(const TnaNetwork& net);

/// Canonical JSON (sorted keys, fixed float formatting, versioned "schema"
/// field). float_digits controls significant digits; 17 round-trips exactly.
std::string export_json(const TnaNetwork& net, int float_digits = 6);

/// Parses text produced by export_json (used for round-trip verification and
/// by downstream consumers of the schema).
TnaNetwork parse_network_json(const std::string& text);

}  // namespace tna
