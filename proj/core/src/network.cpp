#include "tna/network.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "internal/json_writer.hpp"
#include "tna/error.hpp"
#include "tna/format.hpp"

namespace tna {

namespace {

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

std::string dot_quote(const std::string& s) { return '"' + dot_escape(s) + '"'; }

std::string scope_comment(const NetworkScope& scope) {
    std::string out;
    if (!scope.participant_id.empty()) out += " participant=" + scope.participant_id;
    if (!scope.role_label.empty()) out += " role=" + scope.role_label;
    if (!scope.stage_label.empty()) out += " stage=" + scope.stage_label;
    return out.empty() ? " (unscoped)" : out;
}

}  // namespace

std::string_view to_string(MotifKind kind) {
    return kind == MotifKind::Dyad ? "dyad" : "triad";
}

TnaNetwork build_network(const TransitionMatrix& p, const TransitionCounts& c, double min_prob,
                         NetworkScope scope, bool entropy_renormalize) {
    if (!(min_prob >= 0.0 && min_prob < 1.0)) {
        throw std::invalid_argument("build_network: min_prob must be in [0, 1)");
    }
    if (p.aoi_order != c.aoi_order) {
        throw std::invalid_argument("build_network: matrix and counts disagree on aoi_order");
    }
    const std::size_t k = p.size();

    TnaNetwork net;
    net.scope = std::move(scope);
    net.alpha = p.alpha;
    net.min_prob = min_prob;

    std::vector<bool> incident(k, false);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            const double prob = p.at(i, j);
            if (prob > 0.0 && prob >= min_prob) {
                net.edges.push_back(TnaEdge{p.aoi_order[i], p.aoi_order[j], prob, c.at(i, j)});
                incident[i] = incident[j] = true;
            }
        }
    }
    for (std::size_t i = 0; i < k; ++i) {
        if (c.fixation_totals[i] > 0 || incident[i]) {
            net.nodes.push_back(TnaNode{p.aoi_order[i], c.fixation_totals[i], p.at(i, i)});
        }
    }

    if (c.total_fixations() > 0) {
        const EntropyResult ent = transition_entropy(p, entropy_renormalize);
        net.entropy = ent.mean;
        const SelfLoopResult sl = self_loop_rate(p, c);
        net.self_loop_rate = sl.self_loop;
    }
    return net;
}

std::vector<Motif> find_motifs(const TnaNetwork& net, double threshold) {
    if (!(threshold > 0.0 && threshold <= 1.0)) {
        throw std::invalid_argument("find_motifs: threshold must be in (0, 1]");
    }
    std::vector<std::string> labels;
    for (const auto& node : net.nodes) {
        labels.push_back(node.aoi);
    }
    std::map<std::pair<std::string, std::string>, double> prob;
    for (const auto& e : net.edges) {
        if (e.from != e.to) {
            prob[{e.from, e.to}] = e.probability;
        }
    }
    auto edge_at_least = [&](const std::string& a, const std::string& b,
                             double th) -> std::optional<double> {
        auto it = prob.find({a, b});
        if (it == prob.end() || it->second < th) return std::nullopt;
        return it->second;
    };

    std::vector<Motif> motifs;
    const std::size_t n = labels.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            auto fwd = edge_at_least(labels[i], labels[j], threshold);
            auto bwd = edge_at_least(labels[j], labels[i], threshold);
            if (fwd && bwd) {
                motifs.push_back(
                    Motif{MotifKind::Dyad, {labels[i], labels[j]}, std::min(*fwd, *bwd)});
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            for (std::size_t l = j + 1; l < n; ++l) {
                // two possible cycle orientations through {i, j, l}
                double best = -1.0;
                {
                    auto a = edge_at_least(labels[i], labels[j], threshold);
                    auto b = edge_at_least(labels[j], labels[l], threshold);
                    auto c = edge_at_least(labels[l], labels[i], threshold);
                    if (a && b && c) best = std::max(best, std::min({*a, *b, *c}));
                }
                {
                    auto a = edge_at_least(labels[i], labels[l], threshold);
                    auto b = edge_at_least(labels[l], labels[j], threshold);
                    auto c = edge_at_least(labels[j], labels[i], threshold);
                    if (a && b && c) best = std::max(best, std::min({*a, *b, *c}));
                }
                if (best >= 0.0) {
                    motifs.push_back(
                        Motif{MotifKind::Triad, {labels[i], labels[j], labels[l]}, best});
                }
            }
        }
    }
    std::sort(motifs.begin(), motifs.end(), [](const Motif& a, const Motif& b) {
        if (a.min_edge_prob != b.min_edge_prob) return a.min_edge_prob > b.min_edge_prob;
        if (a.kind != b.kind) return a.kind == MotifKind::Dyad;
        return a.members < b.members;
    });
    return motifs;
}

std::string export_dot(const TnaNetwork& net) {
    std::string out;
    out += "// tna transition network\n";
    out += "// scope:" + scope_comment(net.scope) + "\n";
    out += "// alpha=" + format_double(net.alpha) +
           " min_prob=" + format_double(net.min_prob) + "\n";
    if (net.nodes.empty() && net.edges.empty()) {
        out += "digraph tna {}\n";
        return out;
    }
    out += "digraph tna {\n";
    out += "  rankdir=LR;\n";
    out += "  node [shape=circle fixedsize=true];\n";

    std::int64_t max_fix = 0;
    for (const auto& node : net.nodes) {
        max_fix = std::max(max_fix, node.fixation_total);
    }
    for (const auto& node : net.nodes) {
        const double share =
            max_fix > 0 ? static_cast<double>(node.fixation_total) / static_cast<double>(max_fix)
                        : 0.0;
        const double width = 0.4 + 1.2 * share;
        // \n inside the label is Graphviz's line-break escape, kept verbatim
        out += "  " + dot_quote(node.aoi) + " [width=" + format_double(width) + " label=\"" +
               dot_escape(node.aoi) + "\\n" + std::to_string(node.fixation_total) + "\"];\n";
    }
    for (const auto& e : net.edges) {
        const double penwidth = 0.5 + 7.5 * e.probability;
        out += "  " + dot_quote(e.from) + " -> " + dot_quote(e.to) + " [penwidth=" +
               format_double(penwidth) + " label=" + dot_quote(format_double(e.probability));
        if (e.from == e.to) {
            out += " color=red";
        }
        out += "];\n";
    }
    out += "}\n";
    return out;
}

std::string export_json(const TnaNetwork& net, int float_digits) {
    internal::JsonWriter w(float_digits);
    w.raw("{");
    w.key("alpha");
    w.number(net.alpha);
    w.raw(",");
    w.key("edges");
    w.raw("[");
    for (std::size_t i = 0; i < net.edges.size(); ++i) {
        const auto& e = net.edges[i];
        if (i) w.raw(",");
        w.raw("{");
        w.key("count");
        w.integer(e.raw_count);
        w.raw(",");
        w.key("from");
        w.string(e.from);
        w.raw(",");
        w.key("probability");
        w.number(e.probability);
        w.raw(",");
        w.key("to");
        w.string(e.to);
        w.raw("}");
    }
    w.raw("],");
    w.key("entropy");
    if (net.entropy) {
        w.number(*net.entropy);
    } else {
        w.null();
    }
    w.raw(",");
    w.key("min_prob");
    w.number(net.min_prob);
    w.raw(",");
    w.key("nodes");
    w.raw("[");
    for (std::size_t i = 0; i < net.nodes.size(); ++i) {
        const auto& node = net.nodes[i];
        if (i) w.raw(",");
        w.raw("{");
        w.key("aoi");
        w.string(node.aoi);
        w.raw(",");
        w.key("fixation_total");
        w.integer(node.fixation_total);
        w.raw(",");
        w.key("self_loop_prob");
        w.number(node.self_loop_prob);
        w.raw("}");
    }
    w.raw("],");
    w.key("schema");
    w.string("tna-network/1");
    w.raw(",");
    w.key("scope");
    w.raw("{");
    w.key("participant");
    w.string(net.scope.participant_id);
    w.raw(",");
    w.key("role");
    w.string(net.scope.role_label);
    w.raw(",");
    w.key("stage");
    w.string(net.scope.stage_label);
    w.raw("},");
    w.key("self_loop_rate");
    w.number(net.self_loop_rate);
    w.raw("}");
    std::string out = std::move(w).str();
    out += "\n";
    return out;
}

TnaNetwork parse_network_json(const std::string& text) {
    nlohmann::json obj;
    try {
        obj = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid network JSON: ") + e.what());
    }
    if (obj.value("schema", std::string{}) != "tna-network/1") {
        throw ParseError("unsupported network schema: '" + obj.value("schema", std::string{}) +
                         "'");
    }
    TnaNetwork net;
    net.alpha = obj.at("alpha").get<double>();
    net.min_prob = obj.at("min_prob").get<double>();
    if (!obj.at("entropy").is_null()) {
        net.entropy = obj.at("entropy").get<double>();
    }
    net.self_loop_rate = obj.at("self_loop_rate").get<double>();
    const auto& scope = obj.at("scope");
    net.scope.participant_id = scope.at("participant").get<std::string>();
    net.scope.role_label = scope.at("role").get<std::string>();
    net.scope.stage_label = scope.at("stage").get<std::string>();
    for (const auto& n : obj.at("nodes")) {
        net.nodes.push_back(TnaNode{n.at("aoi").get<std::string>(),
                                    n.at("fixation_total").get<std::int64_t>(),
                                    n.at("self_loop_prob").get<double>()});
    }
    for (const auto& e : obj.at("edges")) {
        net.edges.push_back(TnaEdge{e.at("from").get<std::string>(),
                                    e.at("to").get<std::string>(),
                                    e.at("probability").get<double>(),
                                    e.at("count").get<std::int64_t>()});
    }
    return net;
}

}  // namespace tna
