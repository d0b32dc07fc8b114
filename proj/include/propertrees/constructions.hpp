#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "propertrees/graph.hpp"
#include "propertrees/ham_decomp.hpp"
#include "propertrees/rng.hpp"
#include "propertrees/verifier.hpp"

namespace propertrees {

// Internally disjoint S-paths plus their shared terminal set.
struct PathFamily {
    std::vector<VertexSequence> paths;
    std::vector<int> terminal_set;

    std::vector<TreeWitness> witnesses() const {
        std::vector<TreeWitness> out;
        for (const auto& p : paths) out.push_back(TreeWitness::from_path(p.vertices, terminal_set));
        return out;
    }
};

struct GenerationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExtensionFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Smallest n with n >= 2 (delta^(g-1) - 1) / (delta - 1) - 1, exactly.
inline long long sauer_order_bound(int delta, int g) {
    if (delta < 3 || g < 3) throw std::invalid_argument("sauer_order_bound: need delta, g >= 3");
    unsigned __int128 power = 1;
    for (int i = 0; i < g - 1; ++i) {
        power *= static_cast<unsigned>(delta);
        if (power > (static_cast<unsigned __int128>(1) << 100))
            throw std::overflow_error("sauer_order_bound: parameters too large");
    }
    unsigned __int128 num = 2 * (power - 1);
    unsigned __int128 den = static_cast<unsigned>(delta - 1);
    unsigned __int128 ceil_q = (num + den - 1) / den;
    return static_cast<long long>(ceil_q) - 1;
}

// Order from which the explicit red/blue construction works:
// the Sauer bound at girth 5 and minimum degree ell(k-1) + k.
inline long long explicit_threshold(int k, int ell) {
    if (k < 3) throw std::invalid_argument("explicit_threshold: need k >= 3");
    if (ell < 1) throw std::invalid_argument("explicit_threshold: need ell >= 1");
    long long delta = static_cast<long long>(ell) * (k - 1) + k;
    if (delta > (1 << 24)) throw std::overflow_error("explicit_threshold: parameters too large");
    return sauer_order_bound(static_cast<int>(delta), 5);
}

// Order from which the random 2-coloring argument works:
// 2k(k + ell) ln(1 / (1 - (1/2)^(2k-3))).
inline double probabilistic_threshold(int k, int ell) {
    if (k < 3) throw std::invalid_argument("probabilistic_threshold: need k >= 3");
    if (ell < 1) throw std::invalid_argument("probabilistic_threshold: need ell >= 1");
    double p = std::ldexp(1.0, -(2 * k - 3));
    return 2.0 * k * (k + ell) * std::log(1.0 / (1.0 - p));
}

// a = 1 + 1 / (2^(2k-3) - 1); the log base in the random-graph threshold.
inline double base_a(int k) {
    if (k < 3) throw std::invalid_argument("base_a: need k >= 3");
    return 1.0 + 1.0 / (std::ldexp(1.0, 2 * k - 3) - 1.0);
}

// Smallest n where 2^(k-l+1) n^(k+l-1) (1-p2)^(floor((n-1)/(k-1)) - (l-1)) <= 1
// with p2 = 2^-(2k-2); solved numerically in log space. This is the order from
// which the bipartite random-coloring bound goes through; the source argument
// gives the inequality but no closed form.
inline long long bipartite_n2_bound(int k, int ell) {
    if (k < 3) throw std::invalid_argument("bipartite_n2_bound: need k >= 3");
    if (ell < 1) throw std::invalid_argument("bipartite_n2_bound: need ell >= 1");
    double log2_1mp2 = std::log2(1.0 - std::ldexp(1.0, -(2 * k - 2)));
    for (long long n = static_cast<long long>(k - 1) * ell + 1; n <= (1LL << 40); n = n + std::max<long long>(1, n / 256)) {
        double lhs = (k - ell + 1) + (k + ell - 1) * std::log2(static_cast<double>(n)) +
                     (static_cast<double>((n - 1) / (k - 1)) - (ell - 1)) * log2_1mp2;
        if (lhs <= 0.0) {
            // walk back to the smallest n satisfying it
            long long lo = n;
            while (lo > static_cast<long long>(k - 1) * ell + 1) {
                long long cand = lo - 1;
                double l2 = (k - ell + 1) + (k + ell - 1) * std::log2(static_cast<double>(cand)) +
                            (static_cast<double>((cand - 1) / (k - 1)) - (ell - 1)) * log2_1mp2;
                if (l2 > 0.0) break;
                lo = cand;
            }
            return lo;
        }
    }
    throw std::overflow_error("bipartite_n2_bound: no solution below 2^40");
}

// Petersen graph: 2-subsets of {0..4}, adjacent when disjoint.
inline Graph petersen_graph() {
    std::vector<std::pair<int, int>> subsets;
    for (int a = 0; a < 5; ++a)
        for (int b = a + 1; b < 5; ++b) subsets.emplace_back(a, b);
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < subsets.size(); ++i)
        for (std::size_t j = i + 1; j < subsets.size(); ++j) {
            auto [a, b] = subsets[i];
            auto [c, d] = subsets[j];
            if (a != c && a != d && b != c && b != d)
                edges.push_back(make_edge(static_cast<int>(i), static_cast<int>(j)));
        }
    return Graph(10, std::move(edges));
}

// 5-regular girth-5 graph on 30 vertices: three pentagon rows P_h and three
// pentagram rows Q_j of the classical 5x5 pentagon/pentagram incidence
// pattern (P_h,i ~ Q_j,k iff k = h*j + i mod 5). Dropping two rows of each
// kind removes exactly two cross-neighbours per remaining vertex.
inline Graph girth5_regular_30() {
    auto P = [](int h, int i) { return h * 5 + ((i % 5) + 5) % 5; };
    auto Q = [](int j, int i) { return 15 + j * 5 + ((i % 5) + 5) % 5; };
    std::set<Edge> edges;
    for (int h = 0; h < 3; ++h)
        for (int i = 0; i < 5; ++i) edges.insert(make_edge(P(h, i), P(h, i + 1)));
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 5; ++i) edges.insert(make_edge(Q(j, i), Q(j, i + 2)));
    for (int h = 0; h < 3; ++h)
        for (int j = 0; j < 3; ++j)
            for (int i = 0; i < 5; ++i) edges.insert(make_edge(P(h, i), Q(j, h * j + i)));
    Graph g(30, std::vector<Edge>(edges.begin(), edges.end()));
    if (girth(g).value_or(0) < 5 || min_degree(g) != 5)
        throw std::logic_error("girth5_regular_30: stored graph failed validation");
    return g;
}

namespace detail {

struct RepairGraph {
    std::vector<std::vector<int>> adj;
    std::vector<char> mark;
    std::vector<int> touched;

    explicit RepairGraph(int n) : adj(static_cast<std::size_t>(n)), mark(static_cast<std::size_t>(n), 0) {}

    bool contains(int u, int v) const {
        const auto& a = adj[static_cast<std::size_t>(u)];
        return std::find(a.begin(), a.end(), v) != a.end();
    }
    void add(int u, int v) {
        adj[static_cast<std::size_t>(u)].push_back(v);
        adj[static_cast<std::size_t>(v)].push_back(u);
    }
    void remove(int u, int v) {
        auto& au = adj[static_cast<std::size_t>(u)];
        au.erase(std::find(au.begin(), au.end(), v));
        auto& av = adj[static_cast<std::size_t>(v)];
        av.erase(std::find(av.begin(), av.end(), u));
    }

    // marks the radius-3 ball around v; caller reads mark[] then clear_marks()
    void mark_ball3(int v) {
        touched.assign(1, v);
        mark[static_cast<std::size_t>(v)] = 1;
        std::size_t lo = 0;
        for (int depth = 0; depth < 3; ++depth) {
            std::size_t hi = touched.size();
            for (std::size_t i = lo; i < hi; ++i)
                for (int w : adj[static_cast<std::size_t>(touched[i])])
                    if (!mark[static_cast<std::size_t>(w)]) {
                        mark[static_cast<std::size_t>(w)] = 1;
                        touched.push_back(w);
                    }
            lo = hi;
        }
    }
    void clear_marks() {
        for (int v : touched) mark[static_cast<std::size_t>(v)] = 0;
        touched.clear();
    }
    // distance(u, v) >= 4, so adding {u,v} creates no cycle shorter than 5
    bool far_apart(int u, int v) {
        mark_ball3(u);
        bool far = !mark[static_cast<std::size_t>(v)];
        clear_marks();
        return far;
    }

    // any cycle of length <= 4 through root (it lives within radius 2)
    std::vector<Edge> short_cycle_at(int root, std::vector<int>& via) {
        std::vector<Edge> found;
        std::vector<int> via_touched;
        for (int a : adj[static_cast<std::size_t>(root)]) {
            for (int b : adj[static_cast<std::size_t>(a)]) {
                if (b == root) continue;
                if (contains(b, root)) {
                    found = {make_edge(root, a), make_edge(a, b), make_edge(b, root)};
                    break;
                }
                int prev = via[static_cast<std::size_t>(b)];
                if (prev >= 0 && prev != a) {
                    found = {make_edge(root, prev), make_edge(prev, b), make_edge(b, a),
                             make_edge(a, root)};
                    break;
                }
                if (prev < 0) {
                    via[static_cast<std::size_t>(b)] = a;
                    via_touched.push_back(b);
                }
            }
            if (!found.empty()) break;
        }
        for (int b : via_touched) via[static_cast<std::size_t>(b)] = -1;
        return found;
    }
};

} // namespace detail

// Random graph with girth >= 5 and minimum degree >= delta. Two known tight
// instances (the Petersen graph; a 5-regular order-30 graph) are served from
// the built-in library. Otherwise: pairing-model multigraph, simplified, then
// repaired in two passes - degree deficits patched with edges between
// distance->=4 vertices, short cycles broken by degree-preserving double-edge
// swaps whose new edges are also long-range. Neither pass can create a new
// short cycle, so one sweep settles each. Girth and minimum degree are
// re-verified on the result; exhausting the retry budget signals parameters
// too tight for this generator, not a correctness bug.
inline Graph girth5_min_degree_graph(int n, int delta, Seed seed) {
    if (n < 1 || delta < 1) throw std::invalid_argument("girth5_min_degree_graph: bad parameters");
    for (const Graph& lib : {petersen_graph(), girth5_regular_30()}) {
        if (lib.vertex_count() == n && min_degree(lib) >= delta) {
            if (girth(lib).value_or(0) < 5 || min_degree(lib) < delta)
                throw std::logic_error("girth5_min_degree_graph: library graph failed verification");
            return lib;
        }
    }
    Rng rng(seed);
    const int restarts = 100;
    for (int attempt = 0; attempt < restarts; ++attempt) {
        detail::RepairGraph rg(n);
        std::vector<int> stubs;
        for (int v = 0; v < n; ++v)
            for (int i = 0; i < delta; ++i) stubs.push_back(v);
        if (stubs.size() % 2 != 0) stubs.push_back(0);
        for (std::size_t i = stubs.size(); i > 1; --i)
            std::swap(stubs[i - 1], stubs[rng.below(i)]);
        for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
            int u = stubs[i], v = stubs[i + 1];
            if (u == v || rg.contains(u, v)) continue; // drop loops and parallels
            rg.add(u, v);
        }
        bool attempt_ok = true;
        // pass 1: degree deficits
        for (int v = 0; v < n && attempt_ok; ++v) {
            while (static_cast<int>(rg.adj[static_cast<std::size_t>(v)].size()) < delta) {
                rg.mark_ball3(v);
                std::vector<int> far;
                for (int w = 0; w < n; ++w)
                    if (!rg.mark[static_cast<std::size_t>(w)]) far.push_back(w);
                rg.clear_marks();
                if (far.empty()) {
                    attempt_ok = false;
                    break;
                }
                rg.add(v, far[rng.below(far.size())]);
            }
        }
        // pass 2: short cycles
        std::vector<int> via(static_cast<std::size_t>(n), -1);
        for (int root = 0; root < n && attempt_ok; ++root) {
            while (attempt_ok) {
                std::vector<Edge> cyc = rg.short_cycle_at(root, via);
                if (cyc.empty()) break;
                Edge broken = cyc[rng.below(cyc.size())];
                bool swapped = false;
                for (int tries = 0; tries < 400 && !swapped; ++tries) {
                    int x = rng.below_int(n);
                    const auto& ax = rg.adj[static_cast<std::size_t>(x)];
                    if (ax.empty()) continue;
                    int y = ax[rng.below(ax.size())];
                    int u = broken.first, v = broken.second;
                    if (x == u || x == v || y == u || y == v) continue;
                    rg.remove(u, v);
                    rg.remove(x, y);
                    for (auto [p, q] : {std::pair{std::pair{u, x}, std::pair{v, y}},
                                        std::pair{std::pair{u, y}, std::pair{v, x}}}) {
                        if (rg.contains(p.first, p.second) || rg.contains(q.first, q.second))
                            continue;
                        if (!rg.far_apart(p.first, p.second)) continue;
                        rg.add(p.first, p.second);
                        if (rg.far_apart(q.first, q.second)) {
                            rg.add(q.first, q.second);
                            swapped = true;
                            break;
                        }
                        rg.remove(p.first, p.second);
                    }
                    if (!swapped) {
                        rg.add(u, v);
                        rg.add(x, y);
                    }
                }
                if (!swapped) attempt_ok = false;
            }
        }
        if (!attempt_ok) continue;
        std::vector<Edge> edges;
        for (int v = 0; v < n; ++v)
            for (int w : rg.adj[static_cast<std::size_t>(v)])
                if (v < w) edges.push_back({v, w});
        Graph g(n, std::move(edges));
        if (girth(g).value_or(0) >= 5 && min_degree(g) >= delta) return g;
    }
    throw GenerationFailure("girth5_min_degree_graph: retry budget exhausted for n=" +
                            std::to_string(n) + ", delta=" + std::to_string(delta));
}

// The explicit theorem's greedy: builds ell S-alternating proper paths
// v1 w1 v2 w2 ... w(k-1) vk through a red/blue coloring whose red graph has
// girth >= 5 and minimum degree >= ell(k-1) + k. Red edges leave S, blue
// edges re-enter it; girth 5 lets at most one fresh red neighbour of v_j be
// red-adjacent to v_{j+1}, so a usable one always remains.
inline PathFamily greedy_alternating_paths(const EdgeColoring& coloring,
                                           const std::vector<int>& terminals, int ell) {
    if (ell < 0) throw std::invalid_argument("greedy_alternating_paths: negative ell");
    const Graph& g = coloring.graph();
    std::vector<int> s = detail::checked_subset(g, terminals);
    int k = static_cast<int>(s.size());
    PathFamily family;
    family.terminal_set = s;
    if (ell == 0) return family;
    if (k < 3) throw std::invalid_argument("greedy_alternating_paths: need k >= 3");

    std::vector<char> in_s(static_cast<std::size_t>(g.vertex_count()), 0);
    for (int v : s) in_s[static_cast<std::size_t>(v)] = 1;
    std::vector<char> used(static_cast<std::size_t>(g.vertex_count()), 0);
    auto red = [&](int u, int v) { return g.has_edge(u, v) && coloring.color(u, v) == kRed; };

    for (int t = 0; t < ell; ++t) {
        VertexSequence path;
        path.vertices.push_back(s[0]);
        for (int j = 0; j + 1 < k; ++j) {
            int vj = s[static_cast<std::size_t>(j)];
            int vnext = s[static_cast<std::size_t>(j + 1)];
            int chosen = -1, red_to_next = 0;
            for (int w : g.neighbors(vj)) {
                if (coloring.color(vj, w) != kRed) continue;
                if (in_s[static_cast<std::size_t>(w)] || used[static_cast<std::size_t>(w)]) continue;
                if (red(w, vnext)) {
                    // girth 5 allows at most one such discard
                    if (++red_to_next > 1)
                        throw std::invalid_argument(
                            "greedy_alternating_paths: red graph has a 4-cycle (girth < 5)");
                    continue;
                }
                if (chosen < 0) chosen = w;
            }
            if (chosen < 0)
                throw ExtensionFailure("greedy_alternating_paths: no extension at path " +
                                       std::to_string(t) + ", step " + std::to_string(j) +
                                       " (precondition violated?)");
            used[static_cast<std::size_t>(chosen)] = 1;
            path.vertices.push_back(chosen);
            path.vertices.push_back(vnext);
        }
        family.paths.push_back(std::move(path));
    }
    for (const auto& w : family.witnesses())
        if (!is_proper_tree(coloring, w))
            throw std::logic_error("greedy_alternating_paths: produced an improper path");
    if (!are_internally_disjoint(family.witnesses()))
        throw std::logic_error("greedy_alternating_paths: paths not internally disjoint");
    return family;
}

// The probabilistic theorem's canonical family: the i-th path threads S
// through the i-th block of k-1 unused non-terminal vertices, ascending.
inline PathFamily canonical_path_family(int n, const std::vector<int>& terminals, int cap) {
    Graph host = complete_graph(n);
    std::vector<int> s = detail::checked_subset(host, terminals);
    int k = static_cast<int>(s.size());
    int max_cap = (n - k) / (k - 1);
    if (cap < 0 || cap > max_cap)
        throw std::invalid_argument("canonical_path_family: cap exceeds floor((n-k)/(k-1)) = " +
                                    std::to_string(max_cap));
    std::vector<int> pool;
    std::vector<char> in_s(static_cast<std::size_t>(n), 0);
    for (int v : s) in_s[static_cast<std::size_t>(v)] = 1;
    for (int v = 0; v < n; ++v)
        if (!in_s[static_cast<std::size_t>(v)]) pool.push_back(v);
    PathFamily family;
    family.terminal_set = s;
    for (int i = 0; i < cap; ++i) {
        VertexSequence p;
        for (int j = 0; j < k; ++j) {
            p.vertices.push_back(s[static_cast<std::size_t>(j)]);
            if (j + 1 < k)
                p.vertices.push_back(pool[static_cast<std::size_t>(i * (k - 1) + j)]);
        }
        family.paths.push_back(std::move(p));
    }
    if (!are_internally_disjoint(family.witnesses()))
        throw std::logic_error("canonical_path_family: family not internally disjoint");
    return family;
}

// Bipartite analogue. Terminals within one class: path of length 2k-2
// alternating through the other class. Terminals split r : k-r: path
// s1 y1 .. sr yr x1 s(r+1) x2 .. s(k-1) x(k-r) sk of length 2k-1. Every edge
// of every path is checked to cross the bipartition.
inline PathFamily bipartite_path_family(const Graph& g, const std::vector<int>& terminals,
                                        int cap) {
    if (!g.bipartition()) throw std::invalid_argument("bipartite_path_family: graph not bipartite");
    int m = g.bipartition()->left, nright = g.bipartition()->right;
    std::vector<int> s = detail::checked_subset(g, terminals);
    int k = static_cast<int>(s.size());
    auto in_x = [&](int v) { return v < m; };

    std::vector<int> sx, sy;
    for (int v : s) (in_x(v) ? sx : sy).push_back(v);
    std::vector<char> in_s(static_cast<std::size_t>(g.vertex_count()), 0);
    for (int v : s) in_s[static_cast<std::size_t>(v)] = 1;
    std::vector<int> pool_x, pool_y;
    for (int v = 0; v < m; ++v)
        if (!in_s[static_cast<std::size_t>(v)]) pool_x.push_back(v);
    for (int v = m; v < m + nright; ++v)
        if (!in_s[static_cast<std::size_t>(v)]) pool_y.push_back(v);

    PathFamily family;
    family.terminal_set = s;
    int r = static_cast<int>(sx.size());
    if (r == 0 || r == k) {
        // Case 1: S inside one class; thread through the other class
        const std::vector<int>& inside = r == 0 ? sy : sx;
        const std::vector<int>& other_pool = r == 0 ? pool_x : pool_y;
        int max_cap = static_cast<int>(other_pool.size()) / (k - 1);
        if (cap < 0 || cap > max_cap)
            throw std::invalid_argument("bipartite_path_family: cap exceeds t = " +
                                        std::to_string(max_cap));
        for (int i = 0; i < cap; ++i) {
            VertexSequence p;
            for (int j = 0; j < k; ++j) {
                p.vertices.push_back(inside[static_cast<std::size_t>(j)]);
                if (j + 1 < k)
                    p.vertices.push_back(other_pool[static_cast<std::size_t>(i * (k - 1) + j)]);
            }
            family.paths.push_back(std::move(p));
        }
    } else {
        // Case 2: r terminals in X, k-r in Y
        int tx = static_cast<int>(pool_x.size()) / (k - r); // k-r X-internals per path
        int ty = static_cast<int>(pool_y.size()) / r;       // r Y-internals per path
        int max_cap = std::min(tx, ty);
        if (cap < 0 || cap > max_cap)
            throw std::invalid_argument("bipartite_path_family: cap exceeds t = " +
                                        std::to_string(max_cap));
        for (int i = 0; i < cap; ++i) {
            VertexSequence p;
            auto x_at = [&](int j) { return pool_x[static_cast<std::size_t>(i * (k - r) + j)]; };
            auto y_at = [&](int j) { return pool_y[static_cast<std::size_t>(i * r + j)]; };
            for (int j = 0; j < r; ++j) {
                p.vertices.push_back(sx[static_cast<std::size_t>(j)]);
                p.vertices.push_back(y_at(j));
            }
            for (int j = 0; j < k - r; ++j) {
                p.vertices.push_back(x_at(j));
                p.vertices.push_back(sy[static_cast<std::size_t>(j)]);
            }
            family.paths.push_back(std::move(p));
        }
    }
    for (const auto& p : family.paths)
        for (std::size_t i = 0; i + 1 < p.vertices.size(); ++i) {
            int u = p.vertices[i], v = p.vertices[i + 1];
            if (in_x(u) == in_x(v) || !g.has_edge(u, v))
                throw std::logic_error(
                    "bipartite_path_family: pattern not bipartite-legal at r=" + std::to_string(r) +
                    ", k=" + std::to_string(k));
        }
    if (!are_internally_disjoint(family.witnesses()))
        throw std::logic_error("bipartite_path_family: family not internally disjoint");
    return family;
}

} // namespace propertrees
