#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "propertrees/rng.hpp"

namespace propertrees {

// Edges are stored canonically as (min, max) pairs.
using Edge = std::pair<int, int>;

inline Edge make_edge(int u, int v) {
    return u < v ? Edge{u, v} : Edge{v, u};
}

// Vertex classes of a complete bipartite graph: X = 0..left-1, Y = left..left+right-1.
struct Bipartition {
    int left = 0;
    int right = 0;
};

// Undirected simple graph on vertices 0..n-1. Immutable after construction;
// safe to share across concurrent readers.
class Graph {
public:
    explicit Graph(int n) : n_(n), adj_(static_cast<std::size_t>(check_order(n))) {}

    Graph(int n, std::vector<Edge> edges, std::optional<Bipartition> bip = std::nullopt)
        : n_(check_order(n)), edges_(std::move(edges)), bipartition_(bip) {
        for (Edge& e : edges_) {
            if (e.first == e.second)
                throw std::invalid_argument("graph: self-loop at vertex " + std::to_string(e.first));
            if (e.first > e.second) std::swap(e.first, e.second);
            if (e.first < 0 || e.second >= n_)
                throw std::invalid_argument("graph: edge endpoint out of range");
        }
        std::sort(edges_.begin(), edges_.end());
        if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
            throw std::invalid_argument("graph: duplicate edge");
        adj_.assign(static_cast<std::size_t>(n_), {});
        for (const Edge& e : edges_) {
            adj_[static_cast<std::size_t>(e.first)].push_back(e.second);
            adj_[static_cast<std::size_t>(e.second)].push_back(e.first);
        }
        for (auto& nb : adj_) std::sort(nb.begin(), nb.end());
    }

    int vertex_count() const { return n_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<int>& neighbors(int v) const { return adj_.at(static_cast<std::size_t>(v)); }
    int degree(int v) const { return static_cast<int>(neighbors(v).size()); }

    bool has_edge(int u, int v) const {
        if (u == v || u < 0 || v < 0 || u >= n_ || v >= n_) return false;
        const auto& nb = adj_[static_cast<std::size_t>(u)];
        return std::binary_search(nb.begin(), nb.end(), v);
    }

    // Position of {u,v} in edges(), or -1 if absent.
    int edge_index(int u, int v) const {
        Edge e = make_edge(u, v);
        auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
        if (it == edges_.end() || *it != e) return -1;
        return static_cast<int>(it - edges_.begin());
    }

    const std::optional<Bipartition>& bipartition() const { return bipartition_; }

    bool operator==(const Graph& o) const { return n_ == o.n_ && edges_ == o.edges_; }

private:
    static int check_order(int n) {
        if (n < 1) throw std::invalid_argument("graph: vertex count must be >= 1");
        return n;
    }

    int n_;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> adj_;
    std::optional<Bipartition> bipartition_;
};

// Total edge coloring with color ids 1..num_colors. Adjacent edges may share
// a color. Colors are stored parallel to graph().edges().
class EdgeColoring {
public:
    EdgeColoring(Graph graph, int num_colors, std::vector<int> colors)
        : graph_(std::move(graph)), num_colors_(num_colors), colors_(std::move(colors)) {
        if (num_colors_ < 1) throw std::invalid_argument("coloring: need at least one color");
        if (colors_.size() != graph_.edges().size())
            throw std::invalid_argument("coloring: not a total assignment");
        for (int c : colors_)
            if (c < 1 || c > num_colors_)
                throw std::invalid_argument("coloring: color id out of range");
    }

    const Graph& graph() const { return graph_; }
    int num_colors() const { return num_colors_; }
    const std::vector<int>& colors() const { return colors_; }
    int color_at(int edge_idx) const { return colors_.at(static_cast<std::size_t>(edge_idx)); }

    int color(int u, int v) const {
        int idx = graph_.edge_index(u, v);
        if (idx < 0) throw std::invalid_argument("coloring: edge not in graph");
        return colors_[static_cast<std::size_t>(idx)];
    }

private:
    Graph graph_;
    int num_colors_;
    std::vector<int> colors_;
};

inline Graph complete_graph(int n) {
    if (n < 1) throw std::invalid_argument("complete_graph: n must be >= 1");
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) edges.emplace_back(u, v);
    return Graph(n, std::move(edges));
}

inline Graph complete_bipartite(int m, int n) {
    if (m < 1 || n < 1) throw std::invalid_argument("complete_bipartite: class sizes must be >= 1");
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(m) * static_cast<std::size_t>(n));
    for (int u = 0; u < m; ++u)
        for (int v = 0; v < n; ++v) edges.emplace_back(u, m + v);
    return Graph(m + n, std::move(edges), Bipartition{m, n});
}

inline Graph gnp_random(int n, double p, Seed seed) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("gnp_random: p must lie in [0,1]");
    Rng rng(seed);
    std::vector<Edge> edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (rng.next_double() < p) edges.emplace_back(u, v);
    return Graph(n, std::move(edges));
}

inline Graph complement(const Graph& g) {
    int n = g.vertex_count();
    std::vector<Edge> edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (!g.has_edge(u, v)) edges.emplace_back(u, v);
    return Graph(n, std::move(edges));
}

// Length of a shortest cycle; nullopt for forests.
// Per-vertex BFS, O(n*m): fine below a few thousand vertices.
inline std::optional<int> girth(const Graph& g) {
    int n = g.vertex_count();
    int best = -1;
    std::vector<int> dist(static_cast<std::size_t>(n));
    std::vector<int> parent(static_cast<std::size_t>(n));
    std::vector<int> queue;
    for (int root = 0; root < n; ++root) {
        std::fill(dist.begin(), dist.end(), -1);
        dist[static_cast<std::size_t>(root)] = 0;
        parent[static_cast<std::size_t>(root)] = -1;
        queue.assign(1, root);
        for (std::size_t qi = 0; qi < queue.size(); ++qi) {
            int u = queue[qi];
            // any cycle through root shorter than best must live within this radius
            if (best >= 0 && 2 * dist[static_cast<std::size_t>(u)] >= best) continue;
            for (int w : g.neighbors(u)) {
                if (dist[static_cast<std::size_t>(w)] < 0) {
                    dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(u)] + 1;
                    parent[static_cast<std::size_t>(w)] = u;
                    queue.push_back(w);
                } else if (w != parent[static_cast<std::size_t>(u)]) {
                    int len = dist[static_cast<std::size_t>(u)] + dist[static_cast<std::size_t>(w)] + 1;
                    if (best < 0 || len < best) best = len;
                }
            }
        }
    }
    if (best < 0) return std::nullopt;
    return best;
}

inline int min_degree(const Graph& g) {
    int best = g.vertex_count(); // degree < n always
    for (int v = 0; v < g.vertex_count(); ++v) best = std::min(best, g.degree(v));
    return best;
}

} // namespace propertrees
