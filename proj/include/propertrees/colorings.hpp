#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "propertrees/graph.hpp"
#include "propertrees/ham_decomp.hpp"

namespace propertrees {

inline constexpr int kRed = 1;
inline constexpr int kBlue = 2;

namespace detail {

class ColorBuilder {
public:
    explicit ColorBuilder(Graph g, int fill = 0)
        : graph_(std::move(g)), colors_(graph_.edges().size(), fill) {}

    void set(int u, int v, int c) {
        int idx = graph_.edge_index(u, v);
        if (idx < 0) throw std::logic_error("coloring builder: edge not in graph");
        colors_[static_cast<std::size_t>(idx)] = c;
    }

    int get(int u, int v) const {
        int idx = graph_.edge_index(u, v);
        if (idx < 0) throw std::logic_error("coloring builder: edge not in graph");
        return colors_[static_cast<std::size_t>(idx)];
    }

    EdgeColoring finish(int num_colors) && {
        return EdgeColoring(std::move(graph_), num_colors, std::move(colors_));
    }

private:
    Graph graph_;
    std::vector<int> colors_;
};

// Color consecutive edges of a sequence 1,2,1,2,... starting with `first`.
inline void alternate(ColorBuilder& b, const VertexSequence& seq, int first) {
    const auto& vs = seq.vertices;
    int c = first;
    for (std::size_t i = 0; i + 1 < vs.size(); ++i) {
        b.set(vs[i], vs[i + 1], c);
        c = 3 - c;
    }
    if (seq.closed && vs.size() > 2) b.set(vs.back(), vs.front(), c);
}

inline void rotate_to_front(VertexSequence& cycle, int v) {
    auto it = std::find(cycle.vertices.begin(), cycle.vertices.end(), v);
    if (it == cycle.vertices.end()) throw std::logic_error("rotate: vertex not on cycle");
    std::rotate(cycle.vertices.begin(), it, cycle.vertices.end());
}

} // namespace detail

// 2-coloring of K_n under which every 3-subset has two internally disjoint
// proper trees. Cycle 0,1,...,core-1 alternates colors starting with color 2;
// everything else is color 1. For odd n the extra vertex n-1 is joined to the
// even-order cycle with colors 1,2,1,2,... by cycle position parity.
inline EdgeColoring color_k3_l2(int n) {
    if (n < 4) throw std::invalid_argument("color_k3_l2: n must be >= 4");
    detail::ColorBuilder b(complete_graph(n), 1);
    int core = n % 2 == 0 ? n : n - 1;
    for (int j = 0; j < core; ++j)
        b.set(j, (j + 1) % core, j % 2 == 0 ? 2 : 1);
    if (n % 2 == 1)
        for (int j = 0; j < core; ++j)
            b.set(n - 1, j, j % 2 == 0 ? 1 : 2);
    return std::move(b).finish(2);
}

// 2-coloring of K_n under which every (n-1)-subset has two internally disjoint
// proper trees. Even n: each Hamiltonian path of the decomposition alternates
// starting with color 1. Odd n: each cycle is rotated to start at vertex 0 and
// alternates from there; odd cycle length makes both edges at vertex 0 color 1.
inline EdgeColoring color_kn1_l2(int n) {
    if (n < 4) throw std::invalid_argument("color_kn1_l2: n must be >= 4");
    detail::ColorBuilder b(complete_graph(n), 0);
    if (n % 2 == 0) {
        for (const auto& p : ham_path_decomposition(n)) detail::alternate(b, p, 1);
    } else {
        for (auto& c : ham_cycle_decomposition(n)) {
            detail::rotate_to_front(c, 0);
            detail::alternate(b, c, 1);
            if (b.get(c.vertices[0], c.vertices[1]) != b.get(c.vertices.back(), c.vertices[0]))
                throw std::logic_error("color_kn1_l2: vertex-0 edges disagree");
        }
    }
    return std::move(b).finish(2);
}

// The floor(n/2) Hamiltonian paths that color_spanning colors properly.
// For odd n each comes from a decomposition cycle with its closing edge dropped.
inline std::vector<VertexSequence> spanning_proper_path_support(int n) {
    if (n < 2) throw std::invalid_argument("spanning_proper_path_support: n must be >= 2");
    if (n == 2) return {VertexSequence{{0, 1}, false}};
    if (n % 2 == 0) return ham_path_decomposition(n);
    std::vector<VertexSequence> paths;
    for (auto& c : ham_cycle_decomposition(n)) {
        c.closed = false; // drop the closing edge back to the hub
        paths.push_back(std::move(c));
    }
    return paths;
}

// 2-coloring of K_n with floor(n/2) edge-disjoint spanning proper paths: every
// decomposition path alternates starting with color 1; leftover edges (for odd
// n, the final edge of each cycle) get color 1.
inline EdgeColoring color_spanning(int n) {
    if (n < 2) throw std::invalid_argument("color_spanning: n must be >= 2");
    detail::ColorBuilder b(complete_graph(n), 1);
    for (const auto& p : spanning_proper_path_support(n)) detail::alternate(b, p, 1);
    return std::move(b).finish(2);
}

inline EdgeColoring color_uniform_random(const Graph& g, int num_colors, Seed seed) {
    if (num_colors < 1) throw std::invalid_argument("color_uniform_random: need >= 1 color");
    Rng rng(seed);
    std::vector<int> colors(g.edges().size());
    for (auto& c : colors) c = 1 + rng.below_int(num_colors);
    return EdgeColoring(g, num_colors, std::move(colors));
}

// Coloring of K_n with E(h) red (color 1) and the complement blue (color 2).
inline EdgeColoring red_blue_from_subgraph(const Graph& h) {
    int n = h.vertex_count();
    Graph kn = complete_graph(n);
    std::vector<int> colors;
    colors.reserve(kn.edges().size());
    for (const Edge& e : kn.edges())
        colors.push_back(h.has_edge(e.first, e.second) ? kRed : kBlue);
    return EdgeColoring(std::move(kn), 2, std::move(colors));
}

} // namespace propertrees
