#include "clickmodel/graph.hpp"

#include <algorithm>
#include <cmath>

namespace clickmodel {

int BipartiteGraph::position_one() const {
    auto it = std::lower_bound(positions.begin(), positions.end(), 1);
    if (it != positions.end() && *it == 1) return static_cast<int>(it - positions.begin());
    return -1;
}

int BipartiteGraph::find_edge(int doc, int pos) const {
    for (int e : doc_edges[static_cast<std::size_t>(doc)])
        if (edges[static_cast<std::size_t>(e)].pos == pos) return e;
    return -1;
}

BipartiteGraph build_graph(const std::vector<Triple>& triples, bool weighted) {
    BipartiteGraph g;
    for (const auto& t : triples) {
        g.docs.push_back(t.doc);
        g.positions.push_back(t.position);
    }
    std::sort(g.docs.begin(), g.docs.end());
    g.docs.erase(std::unique(g.docs.begin(), g.docs.end()), g.docs.end());
    std::sort(g.positions.begin(), g.positions.end());
    g.positions.erase(std::unique(g.positions.begin(), g.positions.end()), g.positions.end());

    g.doc_edges.resize(g.docs.size());
    g.pos_edges.resize(g.positions.size());
    for (const auto& t : triples) {
        double ctr = t.ctr();
        if (!(ctr > 0.0))
            throw DataError("zero-click triple for doc '" + t.doc +
                            "' reached graph construction; filter upstream");
        BipartiteGraph::Edge e;
        e.doc = static_cast<int>(std::lower_bound(g.docs.begin(), g.docs.end(), t.doc) - g.docs.begin());
        e.pos = static_cast<int>(
            std::lower_bound(g.positions.begin(), g.positions.end(), t.position) - g.positions.begin());
        if (g.find_edge(e.doc, e.pos) != -1)
            throw DataError("duplicate (doc, position) pair for doc '" + t.doc + "' position " +
                            std::to_string(t.position));
        e.log_ctr = std::log(ctr);
        e.weight_sq = weighted ? static_cast<double>(t.impressions) : 1.0;
        g.doc_edges[static_cast<std::size_t>(e.doc)].push_back(static_cast<int>(g.edges.size()));
        g.pos_edges[static_cast<std::size_t>(e.pos)].push_back(static_cast<int>(g.edges.size()));
        g.edges.push_back(e);
    }
    return g;
}

ComponentPartition connected_components(const BipartiteGraph& graph) {
    const int nd = graph.doc_count();
    const int np = graph.pos_count();
    ComponentPartition part;
    part.doc_component.assign(static_cast<std::size_t>(nd), -1);
    part.pos_component.assign(static_cast<std::size_t>(np), -1);

    std::vector<int> stack;
    int comp = 0;
    for (int start = 0; start < nd; ++start) {
        if (part.doc_component[static_cast<std::size_t>(start)] != -1) continue;
        part.doc_component[static_cast<std::size_t>(start)] = comp;
        stack.push_back(start);  // doc nodes as-is, positions offset by nd
        while (!stack.empty()) {
            int node = stack.back();
            stack.pop_back();
            if (node < nd) {
                for (int e : graph.doc_edges[static_cast<std::size_t>(node)]) {
                    int p = graph.edges[static_cast<std::size_t>(e)].pos;
                    if (part.pos_component[static_cast<std::size_t>(p)] == -1) {
                        part.pos_component[static_cast<std::size_t>(p)] = comp;
                        stack.push_back(nd + p);
                    }
                }
            } else {
                for (int e : graph.pos_edges[static_cast<std::size_t>(node - nd)]) {
                    int d = graph.edges[static_cast<std::size_t>(e)].doc;
                    if (part.doc_component[static_cast<std::size_t>(d)] == -1) {
                        part.doc_component[static_cast<std::size_t>(d)] = comp;
                        stack.push_back(d);
                    }
                }
            }
        }
        ++comp;
    }
    // Isolated position nodes cannot occur (nodes only enter via edges), but
    // keep the partition total if they ever do.
    for (int p = 0; p < np; ++p)
        if (part.pos_component[static_cast<std::size_t>(p)] == -1)
            part.pos_component[static_cast<std::size_t>(p)] = comp++;
    part.n_components = comp;

    int p1 = graph.position_one();
    if (p1 != -1) part.anchored_component = part.pos_component[static_cast<std::size_t>(p1)];
    return part;
}

namespace {

struct CycleSearch {
    const BipartiteGraph& graph;
    int max_nodes;
    std::size_t max_count;
    std::vector<std::vector<int>> adj;  // unified node ids: docs, then positions
    std::vector<int> path;
    std::vector<bool> on_path;
    CycleEnumeration out;

    explicit CycleSearch(const BipartiteGraph& g, int max_len, std::size_t cap)
        : graph(g), max_nodes(max_len), max_count(cap) {
        const int nd = g.doc_count();
        adj.resize(static_cast<std::size_t>(nd + g.pos_count()));
        for (const auto& e : g.edges) {
            adj[static_cast<std::size_t>(e.doc)].push_back(nd + e.pos);
            adj[static_cast<std::size_t>(nd + e.pos)].push_back(e.doc);
        }
        for (auto& a : adj) std::sort(a.begin(), a.end());
        on_path.assign(adj.size(), false);
    }

    void emit() {
        const int nd = graph.doc_count();
        Cycle c;
        const std::size_t len = path.size();
        for (std::size_t i = 0; i < len; i += 2) c.doc_nodes.push_back(path[i]);
        for (std::size_t i = 1; i < len; i += 2) c.pos_nodes.push_back(path[i] - nd);
        c.edge_log_ctrs.reserve(len);
        for (std::size_t t = 0; t < len; ++t) {
            int a = path[t];
            int b = path[(t + 1) % len];
            int doc = std::min(a, b);
            int pos = std::max(a, b) - nd;
            int e = graph.find_edge(doc, pos);
            c.edge_log_ctrs.push_back(graph.edges[static_cast<std::size_t>(e)].log_ctr);
        }
        out.cycles.push_back(std::move(c));
        if (out.cycles.size() >= max_count) out.truncated = true;
    }

    void dfs(int u, int root) {
        for (int v : adj[static_cast<std::size_t>(u)]) {
            if (out.truncated) return;
            if (v == root) {
                if (path.size() >= 4 && path[1] < path.back()) emit();
            } else if (v > root && !on_path[static_cast<std::size_t>(v)] &&
                       static_cast<int>(path.size()) < max_nodes) {
                on_path[static_cast<std::size_t>(v)] = true;
                path.push_back(v);
                dfs(v, root);
                path.pop_back();
                on_path[static_cast<std::size_t>(v)] = false;
            }
        }
    }

    void run() {
        // The smallest node of any cycle is a doc (docs precede positions in
        // the unified id space and every cycle touches a doc), so rooting the
        // search at docs finds each cycle exactly once.
        for (int root = 0; root < graph.doc_count() && !out.truncated; ++root) {
            on_path[static_cast<std::size_t>(root)] = true;
            path.assign(1, root);
            dfs(root, root);
            on_path[static_cast<std::size_t>(root)] = false;
        }
    }
};

}  // namespace

CycleEnumeration enumerate_cycles(const BipartiteGraph& graph, int max_length, std::size_t max_count) {
    if (max_length < 4 || max_length % 2 != 0)
        throw DataError("max_length must be even and >= 4");
    CycleSearch search(graph, max_length, max_count);
    search.run();
    return std::move(search.out);
}

}  // namespace clickmodel
