#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "clickmodel/types.hpp"

namespace clickmodel {

/// Per-query document-position graph. Doc and position nodes are indexed in
/// sorted label order so downstream output is deterministic. Edge values are
/// natural-log CTRs (ctr in (0,1] so log_ctr <= 0).
struct BipartiteGraph {
    struct Edge {
        int doc = 0;       // index into docs
        int pos = 0;       // index into positions
        double log_ctr = 0.0;
        double weight_sq = 1.0;  // squared equation weight (impressions when weighted)
    };

    std::vector<std::string> docs;
    std::vector<int> positions;  // 1-based labels, sorted
    std::vector<Edge> edges;
    std::vector<std::vector<int>> doc_edges;  // doc index -> edge indices
    std::vector<std::vector<int>> pos_edges;

    int doc_count() const { return static_cast<int>(docs.size()); }
    int pos_count() const { return static_cast<int>(positions.size()); }
    /// Index of position label 1, or -1.
    int position_one() const;
    int find_edge(int doc, int pos) const;  // -1 if absent
};

/// Edges weighted by sqrt(impressions) when `weighted` (so weight_sq = m).
BipartiteGraph build_graph(const std::vector<Triple>& triples, bool weighted = false);

struct ComponentPartition {
    std::vector<int> doc_component;
    std::vector<int> pos_component;
    int n_components = 0;
    int anchored_component = -1;  // component containing position 1, or -1
};

ComponentPartition connected_components(const BipartiteGraph& graph);

/// Simple even cycle d1-j1-d2-j2-...-dk-jk-d1. Node lists hold graph
/// indices; edge_log_ctrs follow traversal order (d1,j1),(j1,d2),...,(jk,d1),
/// so even 0-based entries are the paper's "odd edges" (d_i, j_i).
struct Cycle {
    std::vector<int> doc_nodes;
    std::vector<int> pos_nodes;
    std::vector<double> edge_log_ctrs;

    int length() const { return static_cast<int>(edge_log_ctrs.size()); }
};

struct CycleEnumeration {
    std::vector<Cycle> cycles;
    bool truncated = false;
};

/// All simple cycles with length (edge count) in [4, max_length], each
/// reported once in canonical orientation: starts at the smallest doc node,
/// direction chosen so the second node is the smaller of the two neighbors.
/// Deterministic output order. Stops at max_count and sets `truncated`.
CycleEnumeration enumerate_cycles(const BipartiteGraph& graph, int max_length = 20,
                                  std::size_t max_count = 100000);

}  // namespace clickmodel
