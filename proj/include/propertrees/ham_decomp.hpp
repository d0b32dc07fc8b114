#pragma once

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "propertrees/graph.hpp"

namespace propertrees {

// Open path or closed cycle, stored as the visiting order. For cycles the
// stored order fixes the clockwise direction used by segment().
struct VertexSequence {
    std::vector<int> vertices;
    bool closed = false;

    int edge_count() const {
        if (vertices.size() < 2) return 0;
        return static_cast<int>(vertices.size()) - (closed ? 0 : 1);
    }

    std::vector<Edge> edge_list() const {
        std::vector<Edge> out;
        for (std::size_t i = 0; i + 1 < vertices.size(); ++i)
            out.push_back(make_edge(vertices[i], vertices[i + 1]));
        if (closed && vertices.size() > 2)
            out.push_back(make_edge(vertices.back(), vertices.front()));
        return out;
    }
};

namespace detail {

// Walecki zig-zag ordering of 0..2m-1: 0, 1, 2m-1, 2, 2m-2, 3, ...
inline std::vector<int> walecki_zigzag(int two_m) {
    std::vector<int> seq;
    seq.reserve(static_cast<std::size_t>(two_m));
    seq.push_back(0);
    for (int i = 1; i < two_m; ++i)
        seq.push_back(i % 2 == 1 ? (i + 1) / 2 : two_m - i / 2);
    return seq;
}

inline void check_partition(int n, const std::vector<VertexSequence>& parts) {
    std::set<Edge> seen;
    for (const auto& part : parts) {
        std::vector<int> sorted = part.vertices;
        std::sort(sorted.begin(), sorted.end());
        std::vector<int> expect(static_cast<std::size_t>(n));
        std::iota(expect.begin(), expect.end(), 0);
        if (sorted != expect)
            throw std::logic_error("ham decomposition: member is not Hamiltonian");
        for (Edge e : part.edge_list())
            if (!seen.insert(e).second)
                throw std::logic_error("ham decomposition: repeated edge");
    }
    if (seen.size() != static_cast<std::size_t>(n) * (n - 1) / 2)
        throw std::logic_error("ham decomposition: edges do not cover K_n");
}

} // namespace detail

// Factor K_n (n even) into n/2 Hamiltonian paths: rotations of the zig-zag.
// Every vertex ends up an end-vertex of exactly one path.
inline std::vector<VertexSequence> ham_path_decomposition(int n) {
    if (n < 2 || n % 2 != 0)
        throw std::invalid_argument("ham_path_decomposition: n must be even and >= 2");
    std::vector<int> base = detail::walecki_zigzag(n);
    std::vector<VertexSequence> paths;
    for (int j = 0; j < n / 2; ++j) {
        VertexSequence p;
        p.closed = false;
        p.vertices.reserve(static_cast<std::size_t>(n));
        for (int v : base) p.vertices.push_back((v + j) % n);
        paths.push_back(std::move(p));
    }
    detail::check_partition(n, paths);
    std::vector<char> is_end(static_cast<std::size_t>(n), 0);
    for (const auto& p : paths) {
        is_end[static_cast<std::size_t>(p.vertices.front())] += 1;
        is_end[static_cast<std::size_t>(p.vertices.back())] += 1;
    }
    for (char c : is_end)
        if (c != 1) throw std::logic_error("ham_path_decomposition: end-vertex property failed");
    return paths;
}

// Factor K_n (n odd) into (n-1)/2 Hamiltonian cycles: hub vertex n-1 closes
// each zig-zag path over 0..n-2.
inline std::vector<VertexSequence> ham_cycle_decomposition(int n) {
    if (n < 3 || n % 2 != 1)
        throw std::invalid_argument("ham_cycle_decomposition: n must be odd and >= 3");
    int hub = n - 1;
    std::vector<int> base = detail::walecki_zigzag(n - 1);
    std::vector<VertexSequence> cycles;
    for (int j = 0; j < (n - 1) / 2; ++j) {
        VertexSequence c;
        c.closed = true;
        c.vertices.reserve(static_cast<std::size_t>(n));
        c.vertices.push_back(hub);
        for (int v : base) c.vertices.push_back((v + j) % (n - 1));
        cycles.push_back(std::move(c));
    }
    detail::check_partition(n, cycles);
    return cycles;
}

// The s..t stretch of a cycle following its stored orientation (wraps around).
// s == t yields the single-vertex sequence.
inline VertexSequence segment(const VertexSequence& cycle, int s, int t) {
    if (!cycle.closed) throw std::invalid_argument("segment: sequence is not a cycle");
    const auto& vs = cycle.vertices;
    auto find_pos = [&](int v) {
        auto it = std::find(vs.begin(), vs.end(), v);
        if (it == vs.end())
            throw std::invalid_argument("segment: vertex " + std::to_string(v) + " not on cycle");
        return static_cast<std::size_t>(it - vs.begin());
    };
    std::size_t ps = find_pos(s), pt = find_pos(t);
    VertexSequence out;
    out.closed = false;
    for (std::size_t i = ps;; i = (i + 1) % vs.size()) {
        out.vertices.push_back(vs[i]);
        if (i == pt) break;
    }
    return out;
}

} // namespace propertrees
