#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "propertrees/graph.hpp"
#include "propertrees/ham_decomp.hpp"

namespace propertrees {

struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Colored-graph text format:
//   optional comment  # bipartite <left> <right>
//   header            n m r          (r = 0 means uncolored)
//   m edge lines      u v [c]        with 0 <= u < v < n, 1 <= c <= r
inline void write_colored_graph(std::ostream& os, const Graph& g,
                                const EdgeColoring* coloring = nullptr) {
    if (g.bipartition())
        os << "# bipartite " << g.bipartition()->left << ' ' << g.bipartition()->right << '\n';
    int r = coloring ? coloring->num_colors() : 0;
    os << g.vertex_count() << ' ' << g.edge_count() << ' ' << r << '\n';
    const auto& edges = g.edges();
    for (std::size_t i = 0; i < edges.size(); ++i) {
        os << edges[i].first << ' ' << edges[i].second;
        if (coloring) os << ' ' << coloring->color_at(static_cast<int>(i));
        os << '\n';
    }
}

struct LoadedGraph {
    Graph graph;
    std::optional<EdgeColoring> coloring;
};

inline LoadedGraph read_colored_graph(std::istream& is) {
    std::optional<Bipartition> bip;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream hs(line.substr(1));
            std::string tag;
            if (hs >> tag && tag == "bipartite") {
                Bipartition b;
                if (!(hs >> b.left >> b.right) || b.left < 1 || b.right < 1)
                    throw FormatError("bad bipartite header");
                bip = b;
            }
            continue;
        }
        break;
    }
    std::istringstream header(line);
    int n = 0, m = 0, r = 0;
    if (!(header >> n >> m >> r)) throw FormatError("bad graph header (want: n m r)");
    if (n < 1 || m < 0 || r < 0) throw FormatError("bad graph header values");
    if (bip && bip->left + bip->right != n) throw FormatError("bipartite header disagrees with n");
    std::vector<Edge> edges;
    std::vector<int> colors;
    edges.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        if (!std::getline(is, line)) throw FormatError("truncated edge list");
        std::istringstream es(line);
        int u = 0, v = 0;
        if (!(es >> u >> v)) throw FormatError("bad edge line: " + line);
        edges.push_back(make_edge(u, v));
        if (r > 0) {
            int c = 0;
            if (!(es >> c)) throw FormatError("missing color on edge line: " + line);
            colors.push_back(c);
        }
    }
    Graph g(n, edges, bip); // validates ranges, loops, duplicates
    if (r == 0) return {std::move(g), std::nullopt};
    // colors were read in input order; realign to the canonical edge order
    std::vector<int> aligned(g.edges().size());
    for (std::size_t i = 0; i < edges.size(); ++i) {
        Edge e = make_edge(edges[i].first, edges[i].second);
        aligned[static_cast<std::size_t>(g.edge_index(e.first, e.second))] = colors[i];
    }
    EdgeColoring coloring(g, r, std::move(aligned)); // validates totals and ranges
    return {std::move(g), std::move(coloring)};
}

// One sequence per line: 'C' (cycle) or 'P' (path) then the vertex ids.
inline void write_decomposition(std::ostream& os, const std::vector<VertexSequence>& seqs) {
    for (const auto& s : seqs) {
        os << (s.closed ? 'C' : 'P');
        for (int v : s.vertices) os << ' ' << v;
        os << '\n';
    }
}

inline std::vector<VertexSequence> read_decomposition(std::istream& is) {
    std::vector<VertexSequence> out;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag != "C" && tag != "P") throw FormatError("bad sequence tag: " + tag);
        VertexSequence seq;
        seq.closed = tag == "C";
        int v = 0;
        while (ls >> v) seq.vertices.push_back(v);
        if (seq.vertices.empty()) throw FormatError("empty sequence line");
        out.push_back(std::move(seq));
    }
    return out;
}

} // namespace propertrees
