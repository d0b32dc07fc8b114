#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <mutex>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "propertrees/graph.hpp"
#include "propertrees/rng.hpp"

namespace propertrees {

// A candidate S-tree: an edge set plus its terminal set.
struct TreeWitness {
    std::vector<Edge> edges;     // canonical, sorted
    std::vector<int> terminals;  // sorted

    static TreeWitness from_path(const std::vector<int>& path, std::vector<int> terminals) {
        TreeWitness w;
        for (std::size_t i = 0; i + 1 < path.size(); ++i)
            w.edges.push_back(make_edge(path[i], path[i + 1]));
        std::sort(w.edges.begin(), w.edges.end());
        std::sort(terminals.begin(), terminals.end());
        w.terminals = std::move(terminals);
        return w;
    }

    std::vector<int> vertex_set() const {
        std::vector<int> vs;
        for (const Edge& e : edges) {
            vs.push_back(e.first);
            vs.push_back(e.second);
        }
        std::sort(vs.begin(), vs.end());
        vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
        return vs;
    }
};

// True iff w's edges form a tree containing every terminal and no two edges
// sharing a vertex have the same color.
inline bool is_proper_tree(const EdgeColoring& coloring, const TreeWitness& w) {
    const Graph& g = coloring.graph();
    if (w.edges.empty()) return false;
    std::vector<std::vector<std::pair<int, int>>> inc; // vertex -> (other, color)
    std::vector<int> vs = w.vertex_set();
    auto local = [&](int v) {
        return static_cast<int>(std::lower_bound(vs.begin(), vs.end(), v) - vs.begin());
    };
    inc.resize(vs.size());
    for (const Edge& e : w.edges) {
        int idx = g.edge_index(e.first, e.second);
        if (idx < 0) throw std::invalid_argument("is_proper_tree: witness edge not in graph");
        int c = coloring.color_at(idx);
        inc[static_cast<std::size_t>(local(e.first))].emplace_back(e.second, c);
        inc[static_cast<std::size_t>(local(e.second))].emplace_back(e.first, c);
    }
    // tree check: connected + |E| = |V| - 1
    if (w.edges.size() + 1 != vs.size()) return false;
    std::vector<char> seen(vs.size(), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (auto [wv, c] : inc[static_cast<std::size_t>(u)]) {
            int lw = local(wv);
            if (!seen[static_cast<std::size_t>(lw)]) {
                seen[static_cast<std::size_t>(lw)] = 1;
                ++reached;
                stack.push_back(lw);
            }
        }
    }
    if (reached != vs.size()) return false;
    for (int t : w.terminals)
        if (!std::binary_search(vs.begin(), vs.end(), t)) return false;
    for (const auto& edges_at : inc)
        for (std::size_t i = 0; i < edges_at.size(); ++i)
            for (std::size_t j = i + 1; j < edges_at.size(); ++j)
                if (edges_at[i].second == edges_at[j].second) return false;
    return true;
}

// True iff the witnesses pairwise share no edges and share vertices exactly S.
inline bool are_internally_disjoint(const std::vector<TreeWitness>& ws) {
    if (ws.size() < 2) return true;
    for (std::size_t i = 1; i < ws.size(); ++i)
        if (ws[i].terminals != ws[0].terminals)
            throw std::invalid_argument("are_internally_disjoint: mismatched terminal sets");
    const std::vector<int>& s = ws[0].terminals;
    std::vector<std::vector<int>> vsets;
    for (const auto& w : ws) vsets.push_back(w.vertex_set());
    for (std::size_t i = 0; i < ws.size(); ++i) {
        for (std::size_t j = i + 1; j < ws.size(); ++j) {
            std::vector<Edge> einter;
            std::set_intersection(ws[i].edges.begin(), ws[i].edges.end(), ws[j].edges.begin(),
                                  ws[j].edges.end(), std::back_inserter(einter));
            if (!einter.empty()) return false;
            std::vector<int> vinter;
            std::set_intersection(vsets[i].begin(), vsets[i].end(), vsets[j].begin(),
                                  vsets[j].end(), std::back_inserter(vinter));
            if (vinter != s) return false;
        }
    }
    return true;
}

struct SearchBudget {
    std::uint64_t max_nodes = 10'000'000;
};

enum class SearchStatus { Exact, BudgetExhausted };

// Result of a packing search. `achieved` is the exact maximum (capped at the
// requested target) when status is Exact; with an exhausted budget it is only
// a lower bound and must not be read as a definite answer.
struct SearchOutcome {
    SearchStatus status = SearchStatus::Exact;
    int achieved = 0;
    std::vector<TreeWitness> witnesses;
    std::uint64_t nodes = 0;
};

enum class SearchStrategy { Auto, PathsOnly, GeneralTrees };

namespace detail {

struct BudgetExhausted {};

// Packing search for 2-colorings, where every proper tree is a path. Each
// level anchors on the smallest edge not yet used or excluded: either the
// next witness covers it, or no remaining witness ever does (exclude branch).
// That decomposition visits every packing exactly once.
class PathPackSearcher {
public:
    PathPackSearcher(const EdgeColoring& coloring, std::vector<int> s, int target,
                     const SearchBudget& budget)
        : col_(coloring), g_(coloring.graph()), n_(g_.vertex_count()),
          s_(std::move(s)), target_(target), max_nodes_(budget.max_nodes) {
        k_ = static_cast<int>(s_.size());
        in_s_.assign(static_cast<std::size_t>(n_), 0);
        s_pos_.assign(static_cast<std::size_t>(n_), -1);
        for (int i = 0; i < k_; ++i) {
            in_s_[static_cast<std::size_t>(s_[static_cast<std::size_t>(i)])] = 1;
            s_pos_[static_cast<std::size_t>(s_[static_cast<std::size_t>(i)])] = i;
        }
        adj_.resize(static_cast<std::size_t>(n_));
        const auto& edges = g_.edges();
        for (std::size_t i = 0; i < edges.size(); ++i) {
            int c = col_.color_at(static_cast<int>(i));
            adj_[static_cast<std::size_t>(edges[i].first)].push_back({edges[i].second, c, static_cast<int>(i)});
            adj_[static_cast<std::size_t>(edges[i].second)].push_back({edges[i].first, c, static_cast<int>(i)});
        }
        for (auto& a : adj_)
            std::sort(a.begin(), a.end(), [](const Half& x, const Half& y) { return x.to < y.to; });
        edge_used_.assign(edges.size(), 0);
        edge_forbidden_.assign(edges.size(), 0);
        vertex_used_.assign(static_cast<std::size_t>(n_), 0);
        in_path_.assign(static_cast<std::size_t>(n_), 0);
        avail_edges_ = static_cast<int>(edges.size());
    }

    SearchOutcome run() {
        SearchOutcome out;
        try {
            pack(0);
            out.status = SearchStatus::Exact;
        } catch (const BudgetExhausted&) {
            out.status = SearchStatus::BudgetExhausted;
        }
        out.achieved = best_;
        out.witnesses = best_witnesses_;
        out.nodes = nodes_;
        return out;
    }

private:
    struct Half {
        int to;
        int color;
        int edge_id;
    };

    void tick() {
        if (++nodes_ > max_nodes_) throw BudgetExhausted{};
    }

    // Available-degree analysis at the S vertices. Every one of the r
    // remaining paths visits each S vertex, spending two incident edges
    // unless the vertex is one of its ends; shortfalls force end slots.
    bool degree_state(int r, std::vector<int>& forced, int& slack) const {
        int sumforced = 0;
        for (int i = 0; i < k_; ++i) {
            int v = s_[static_cast<std::size_t>(i)];
            int avail = 0;
            for (const Half& h : adj_[static_cast<std::size_t>(v)])
                if (!edge_used_[static_cast<std::size_t>(h.edge_id)] &&
                    !edge_forbidden_[static_cast<std::size_t>(h.edge_id)])
                    ++avail;
            if (avail < r) return false;
            int f = std::max(0, 2 * r - avail);
            forced[static_cast<std::size_t>(i)] = f;
            sumforced += f;
        }
        if (sumforced > 2 * r) return false;
        slack = 2 * r - sumforced;
        return true;
    }

    bool end_ok(int v) const {
        if (slack_ > 0) return true;
        int p = s_pos_[static_cast<std::size_t>(v)];
        return p >= 0 && forced_[static_cast<std::size_t>(p)] > 0;
    }

    bool pack(int m) {
        if (m > best_) {
            best_ = m;
            best_witnesses_ = stack_;
        }
        if (m == target_) return true;
        int r = target_ - m;
        if (static_cast<long long>(r) * (k_ - 1) > avail_edges_) return false;
        std::vector<int> forced(static_cast<std::size_t>(k_));
        int slack = 0;
        if (!degree_state(r, forced, slack)) return false;
        std::vector<int> forbade_here;
        bool found = false;
        const auto& edges = g_.edges();
        for (std::size_t eid = 0; eid < edges.size(); ++eid) {
            if (edge_used_[eid] || edge_forbidden_[eid]) continue;
            tick();
            forced_ = forced;
            slack_ = slack;
            if (paths_through(static_cast<int>(eid), m)) {
                found = true;
                break;
            }
            edge_forbidden_[eid] = 1;
            forbade_here.push_back(static_cast<int>(eid));
            --avail_edges_;
            if (static_cast<long long>(r) * (k_ - 1) > avail_edges_ ||
                !degree_state(r, forced, slack)) {
                break;
            }
        }
        for (int eid : forbade_here) {
            edge_forbidden_[static_cast<std::size_t>(eid)] = 0;
            ++avail_edges_;
        }
        return found;
    }

    // Enumerate proper S-paths containing the anchor edge as two arms growing
    // away from its endpoints; recurse into pack(m+1) for each one found.
    bool paths_through(int anchor_id, int m) {
        const Edge& e = g_.edges()[static_cast<std::size_t>(anchor_id)];
        anchor_color_ = col_.color_at(anchor_id);
        m_ = m;
        arm_a_.assign(1, e.first);
        arm_b_.assign(1, e.second);
        in_path_[static_cast<std::size_t>(e.first)] = 1;
        in_path_[static_cast<std::size_t>(e.second)] = 1;
        covered_ = (in_s_[static_cast<std::size_t>(e.first)] ? 1 : 0) +
                   (in_s_[static_cast<std::size_t>(e.second)] ? 1 : 0);
        bool found = grow_arm_a();
        in_path_[static_cast<std::size_t>(e.first)] = 0;
        in_path_[static_cast<std::size_t>(e.second)] = 0;
        return found;
    }

    bool grow_arm_a() {
        tick();
        int cur = arm_a_.back();
        if (in_s_[static_cast<std::size_t>(cur)] && end_ok(cur)) {
            if (grow_arm_b()) return true;
        }
        int prev_color = arm_a_.size() >= 2
                             ? col_.color(arm_a_[arm_a_.size() - 2], cur)
                             : anchor_color_;
        for (const Half& h : adj_[static_cast<std::size_t>(cur)]) {
            if (h.color == prev_color) continue;
            if (!admissible(h)) continue;
            push(arm_a_, h.to);
            if (grow_arm_a()) return true;
            pop(arm_a_);
        }
        return false;
    }

    bool grow_arm_b() {
        tick();
        int cur = arm_b_.back();
        if (in_s_[static_cast<std::size_t>(cur)] && end_ok(cur) && covered_ == k_) {
            if (deliver()) return true;
        }
        int prev_color = arm_b_.size() >= 2
                             ? col_.color(arm_b_[arm_b_.size() - 2], cur)
                             : anchor_color_;
        for (const Half& h : adj_[static_cast<std::size_t>(cur)]) {
            if (h.color == prev_color) continue;
            if (!admissible(h)) continue;
            push(arm_b_, h.to);
            if (grow_arm_b()) return true;
            pop(arm_b_);
        }
        return false;
    }

    bool admissible(const Half& h) const {
        return !in_path_[static_cast<std::size_t>(h.to)] &&
               !vertex_used_[static_cast<std::size_t>(h.to)] &&
               !edge_used_[static_cast<std::size_t>(h.edge_id)] &&
               !edge_forbidden_[static_cast<std::size_t>(h.edge_id)];
    }

    void push(std::vector<int>& arm, int v) {
        arm.push_back(v);
        in_path_[static_cast<std::size_t>(v)] = 1;
        if (in_s_[static_cast<std::size_t>(v)]) ++covered_;
    }

    void pop(std::vector<int>& arm) {
        int v = arm.back();
        arm.pop_back();
        in_path_[static_cast<std::size_t>(v)] = 0;
        if (in_s_[static_cast<std::size_t>(v)]) --covered_;
    }

    // Commit the current two-arm path as a witness and recurse. The deeper
    // levels run their own enumerations through the same member state, so the
    // whole enumeration context is saved and rebuilt around the recursion.
    bool deliver() {
        std::vector<int> path(arm_a_.rbegin(), arm_a_.rend());
        path.insert(path.end(), arm_b_.begin(), arm_b_.end());
        std::vector<int> eids;
        eids.reserve(path.size() - 1);
        for (std::size_t i = 0; i + 1 < path.size(); ++i)
            eids.push_back(g_.edge_index(path[i], path[i + 1]));

        std::vector<int> arm_a_save = std::move(arm_a_), arm_b_save = std::move(arm_b_);
        std::vector<int> forced_save = forced_;
        int slack_save = slack_, anchor_color_save = anchor_color_, covered_save = covered_,
            m_save = m_;

        for (int v : path) in_path_[static_cast<std::size_t>(v)] = 0;
        for (int id : eids) edge_used_[static_cast<std::size_t>(id)] = 1;
        avail_edges_ -= static_cast<int>(eids.size());
        std::vector<int> internals;
        for (int v : path)
            if (!in_s_[static_cast<std::size_t>(v)]) {
                vertex_used_[static_cast<std::size_t>(v)] = 1;
                internals.push_back(v);
            }
        stack_.push_back(TreeWitness::from_path(path, s_));

        bool done = pack(m_save + 1);

        stack_.pop_back();
        for (int v : internals) vertex_used_[static_cast<std::size_t>(v)] = 0;
        for (int id : eids) edge_used_[static_cast<std::size_t>(id)] = 0;
        avail_edges_ += static_cast<int>(eids.size());
        for (int v : path) in_path_[static_cast<std::size_t>(v)] = 1;
        arm_a_ = std::move(arm_a_save);
        arm_b_ = std::move(arm_b_save);
        forced_ = std::move(forced_save);
        slack_ = slack_save;
        anchor_color_ = anchor_color_save;
        covered_ = covered_save;
        m_ = m_save;
        return done;
    }

    const EdgeColoring& col_;
    const Graph& g_;
    int n_;
    std::vector<int> s_;
    int k_ = 0;
    int target_;
    std::uint64_t max_nodes_;
    std::uint64_t nodes_ = 0;

    std::vector<char> in_s_;
    std::vector<int> s_pos_;
    std::vector<std::vector<Half>> adj_;
    std::vector<char> edge_used_, edge_forbidden_, vertex_used_, in_path_;
    int avail_edges_ = 0;

    std::vector<int> arm_a_, arm_b_;
    int anchor_color_ = 0, covered_ = 0, m_ = 0;
    std::vector<int> forced_;
    int slack_ = 0;

    int best_ = 0;
    std::vector<TreeWitness> stack_, best_witnesses_;
};

// Enumerates minimal S-trees (every leaf a terminal), optionally restricted to
// properly colored ones. Grows connected subtrees from the first terminal with
// include/exclude branching on the lowest admissible boundary edge, emitting
// each subtree exactly once at the moment its last edge is included.
class TreeEnumerator {
public:
    TreeEnumerator(const Graph& g, const EdgeColoring* coloring, const std::vector<int>& s,
                   std::uint64_t max_nodes, std::uint64_t& nodes)
        : g_(g), col_(coloring), s_(s), max_nodes_(max_nodes), nodes_(nodes) {
        int n = g_.vertex_count();
        in_s_.assign(static_cast<std::size_t>(n), 0);
        for (int v : s_) in_s_[static_cast<std::size_t>(v)] = 1;
        in_tree_.assign(static_cast<std::size_t>(n), 0);
        tree_deg_.assign(static_cast<std::size_t>(n), 0);
        tree_inc_.resize(static_cast<std::size_t>(n));
        forbidden_.assign(g_.edges().size(), 0);
        in_tree_[static_cast<std::size_t>(s_[0])] = 1;
        tree_vertices_.push_back(s_[0]);
        covered_ = 1;
    }

    std::vector<TreeWitness> run() {
        rec();
        return std::move(out_);
    }

private:
    void tick() {
        if (++nodes_ > max_nodes_) throw BudgetExhausted{};
    }

    int edge_color(int eid) const { return col_ ? col_->color_at(eid) : 0; }

    // colors already present on tree edges at v
    bool clashes(int v, int color) const {
        if (!col_) return false;
        for (const auto& [w, eid] : tree_inc_[static_cast<std::size_t>(v)])
            if (col_->color_at(eid) == color) return true;
        return false;
    }

    void rec() {
        tick();
        maybe_emit();
        // lowest admissible boundary edge
        int chosen = -1, cu = -1, cv = -1;
        const auto& edges = g_.edges();
        for (std::size_t eid = 0; eid < edges.size(); ++eid) {
            if (forbidden_[eid]) continue;
            int a = edges[eid].first, b = edges[eid].second;
            bool ia = in_tree_[static_cast<std::size_t>(a)], ib = in_tree_[static_cast<std::size_t>(b)];
            if (ia == ib) continue; // cycle-closing or detached: never joins this subtree
            int tv = ia ? a : b, nv = ia ? b : a;
            if (clashes(tv, edge_color(static_cast<int>(eid)))) continue; // permanent clash
            chosen = static_cast<int>(eid);
            cu = tv;
            cv = nv;
            break;
        }
        if (chosen < 0) return;
        // include
        include(chosen, cu, cv);
        rec();
        undo_include(chosen, cu, cv);
        // exclude
        forbidden_[static_cast<std::size_t>(chosen)] = 1;
        rec();
        forbidden_[static_cast<std::size_t>(chosen)] = 0;
    }

    void include(int eid, int tv, int nv) {
        in_tree_[static_cast<std::size_t>(nv)] = 1;
        tree_vertices_.push_back(nv);
        if (in_s_[static_cast<std::size_t>(nv)]) ++covered_;
        tree_inc_[static_cast<std::size_t>(tv)].push_back({nv, eid});
        tree_inc_[static_cast<std::size_t>(nv)].push_back({tv, eid});
        ++tree_deg_[static_cast<std::size_t>(tv)];
        ++tree_deg_[static_cast<std::size_t>(nv)];
        tree_edges_.push_back(eid);
    }

    void undo_include(int eid, int tv, int nv) {
        (void)eid;
        tree_edges_.pop_back();
        --tree_deg_[static_cast<std::size_t>(tv)];
        --tree_deg_[static_cast<std::size_t>(nv)];
        tree_inc_[static_cast<std::size_t>(tv)].pop_back();
        tree_inc_[static_cast<std::size_t>(nv)].pop_back();
        if (in_s_[static_cast<std::size_t>(nv)]) --covered_;
        tree_vertices_.pop_back();
        in_tree_[static_cast<std::size_t>(nv)] = 0;
    }

    void maybe_emit() {
        if (tree_edges_.empty() || covered_ != static_cast<int>(s_.size())) return;
        for (int v : tree_vertices_)
            if (tree_deg_[static_cast<std::size_t>(v)] == 1 && !in_s_[static_cast<std::size_t>(v)])
                return; // non-terminal leaf: not minimal
        TreeWitness w;
        for (int eid : tree_edges_) w.edges.push_back(g_.edges()[static_cast<std::size_t>(eid)]);
        std::sort(w.edges.begin(), w.edges.end());
        w.terminals = s_;
        out_.push_back(std::move(w));
    }

    const Graph& g_;
    const EdgeColoring* col_;
    std::vector<int> s_;
    std::uint64_t max_nodes_;
    std::uint64_t& nodes_;

    std::vector<char> in_s_, in_tree_;
    std::vector<int> tree_deg_;
    std::vector<char> forbidden_;
    std::vector<int> tree_vertices_;
    std::vector<int> tree_edges_;
    std::vector<std::vector<std::pair<int, int>>> tree_inc_; // vertex -> (other, edge id)
    int covered_ = 0;
    std::vector<TreeWitness> out_;
};

// Packing over a materialized witness list, same anchored include/exclude
// shape as the path searcher.
class TreePackSearcher {
public:
    TreePackSearcher(const Graph& g, const std::vector<int>& s,
                     const std::vector<TreeWitness>& witnesses, int target,
                     std::uint64_t max_nodes, std::uint64_t& nodes)
        : g_(g), s_(s), target_(target), max_nodes_(max_nodes), nodes_(nodes) {
        int n = g_.vertex_count();
        in_s_.assign(static_cast<std::size_t>(n), 0);
        for (int v : s_) in_s_[static_cast<std::size_t>(v)] = 1;
        edge_used_.assign(g_.edges().size(), 0);
        edge_forbidden_.assign(g_.edges().size(), 0);
        vertex_used_.assign(static_cast<std::size_t>(n), 0);
        avail_edges_ = static_cast<int>(g_.edges().size());
        for (const auto& w : witnesses) {
            Candidate c;
            for (const Edge& e : w.edges) c.edge_ids.push_back(g_.edge_index(e.first, e.second));
            for (int v : w.vertex_set())
                if (!in_s_[static_cast<std::size_t>(v)]) c.internals.push_back(v);
            c.witness = &w;
            candidates_.push_back(std::move(c));
        }
        by_edge_.resize(g_.edges().size());
        for (std::size_t i = 0; i < candidates_.size(); ++i)
            for (int eid : candidates_[i].edge_ids)
                by_edge_[static_cast<std::size_t>(eid)].push_back(static_cast<int>(i));
    }

    SearchOutcome run() {
        SearchOutcome out;
        try {
            pack(0);
            out.status = SearchStatus::Exact;
        } catch (const BudgetExhausted&) {
            out.status = SearchStatus::BudgetExhausted;
        }
        out.achieved = best_;
        out.witnesses = best_witnesses_;
        out.nodes = nodes_;
        return out;
    }

private:
    struct Candidate {
        std::vector<int> edge_ids;
        std::vector<int> internals;
        const TreeWitness* witness = nullptr;
    };

    void tick() {
        if (++nodes_ > max_nodes_) throw BudgetExhausted{};
    }

    bool degree_ok(int r) const {
        for (int v : s_) {
            int avail = 0;
            for (int w : g_.neighbors(v)) {
                int eid = g_.edge_index(v, w);
                if (!edge_used_[static_cast<std::size_t>(eid)] &&
                    !edge_forbidden_[static_cast<std::size_t>(eid)])
                    ++avail;
            }
            if (avail < r) return false; // each remaining tree needs an edge at v
        }
        return true;
    }

    bool compatible(const Candidate& c) const {
        for (int eid : c.edge_ids)
            if (edge_used_[static_cast<std::size_t>(eid)] ||
                edge_forbidden_[static_cast<std::size_t>(eid)])
                return false;
        for (int v : c.internals)
            if (vertex_used_[static_cast<std::size_t>(v)]) return false;
        return true;
    }

    bool pack(int m) {
        if (m > best_) {
            best_ = m;
            best_witnesses_ = stack_;
        }
        if (m == target_) return true;
        int r = target_ - m;
        int k = static_cast<int>(s_.size());
        if (static_cast<long long>(r) * (k - 1) > avail_edges_) return false;
        if (!degree_ok(r)) return false;
        std::vector<int> forbade_here;
        bool found = false;
        for (std::size_t eid = 0; eid < edge_used_.size(); ++eid) {
            if (edge_used_[eid] || edge_forbidden_[eid]) continue;
            tick();
            for (int ci : by_edge_[eid]) {
                const Candidate& c = candidates_[static_cast<std::size_t>(ci)];
                if (!compatible(c)) continue;
                apply(c);
                bool done = pack(m + 1);
                undo(c);
                if (done) {
                    found = true;
                    break;
                }
            }
            if (found) break;
            edge_forbidden_[eid] = 1;
            forbade_here.push_back(static_cast<int>(eid));
            --avail_edges_;
            if (static_cast<long long>(r) * (k - 1) > avail_edges_ || !degree_ok(r)) break;
        }
        for (int eid : forbade_here) {
            edge_forbidden_[static_cast<std::size_t>(eid)] = 0;
            ++avail_edges_;
        }
        return found;
    }

    void apply(const Candidate& c) {
        for (int eid : c.edge_ids) edge_used_[static_cast<std::size_t>(eid)] = 1;
        for (int v : c.internals) vertex_used_[static_cast<std::size_t>(v)] = 1;
        avail_edges_ -= static_cast<int>(c.edge_ids.size());
        stack_.push_back(*c.witness);
    }

    void undo(const Candidate& c) {
        stack_.pop_back();
        avail_edges_ += static_cast<int>(c.edge_ids.size());
        for (int v : c.internals) vertex_used_[static_cast<std::size_t>(v)] = 0;
        for (int eid : c.edge_ids) edge_used_[static_cast<std::size_t>(eid)] = 0;
    }

    const Graph& g_;
    std::vector<int> s_;
    int target_;
    std::uint64_t max_nodes_;
    std::uint64_t& nodes_;

    std::vector<char> in_s_, edge_used_, edge_forbidden_, vertex_used_;
    int avail_edges_ = 0;
    std::vector<Candidate> candidates_;
    std::vector<std::vector<int>> by_edge_;

    int best_ = 0;
    std::vector<TreeWitness> stack_, best_witnesses_;
};

inline std::vector<int> checked_subset(const Graph& g, std::vector<int> s) {
    std::sort(s.begin(), s.end());
    if (s.size() < 2) throw std::invalid_argument("terminal set needs at least 2 vertices");
    if (std::unique(s.begin(), s.end()) != s.end())
        throw std::invalid_argument("terminal set has repeated vertices");
    if (s.front() < 0 || s.back() >= g.vertex_count())
        throw std::invalid_argument("terminal set vertex out of range");
    return s;
}

} // namespace detail

// Maximum m <= target such that m internally disjoint proper S-trees exist.
// Exact within budget; an exhausted budget is reported as such, never passed
// off as a definite answer. For two colors only path-shaped witnesses are
// searched (a proper tree in two colors is a path; see
// two_color_tree_shape_oracle), unless a strategy override says otherwise.
inline SearchOutcome max_disjoint_proper_trees(const EdgeColoring& coloring,
                                               const std::vector<int>& terminals, int target,
                                               const SearchBudget& budget = {},
                                               SearchStrategy strategy = SearchStrategy::Auto) {
    std::vector<int> s = detail::checked_subset(coloring.graph(), terminals);
    if (target < 0) throw std::invalid_argument("max_disjoint_proper_trees: negative target");
    SearchOutcome out;
    if (target == 0) return out;
    bool use_paths = strategy == SearchStrategy::PathsOnly ||
                     (strategy == SearchStrategy::Auto && coloring.num_colors() == 2);
    if (use_paths) {
        detail::PathPackSearcher searcher(coloring, s, target, budget);
        out = searcher.run();
    } else {
        std::uint64_t nodes = 0;
        try {
            detail::TreeEnumerator en(coloring.graph(), &coloring, s, budget.max_nodes, nodes);
            std::vector<TreeWitness> all = en.run();
            detail::TreePackSearcher packer(coloring.graph(), s, all, target, budget.max_nodes,
                                            nodes);
            out = packer.run();
        } catch (const detail::BudgetExhausted&) {
            out.status = SearchStatus::BudgetExhausted;
            out.nodes = nodes;
        }
    }
    // soundness: never hand out an unchecked family
    for (const auto& w : out.witnesses)
        if (!is_proper_tree(coloring, w))
            throw std::logic_error("max_disjoint_proper_trees: improper witness produced");
    if (!are_internally_disjoint(out.witnesses))
        throw std::logic_error("max_disjoint_proper_trees: witnesses not internally disjoint");
    return out;
}

// Exact maximum number of internally disjoint S-trees, colors ignored.
inline SearchOutcome kappa_exact(const Graph& g, const std::vector<int>& terminals,
                                 const SearchBudget& budget = {}) {
    std::vector<int> s = detail::checked_subset(g, terminals);
    std::uint64_t nodes = 0;
    SearchOutcome best;
    try {
        detail::TreeEnumerator en(g, nullptr, s, budget.max_nodes, nodes);
        std::vector<TreeWitness> all = en.run();
        int upper = g.edge_count() / std::max(1, static_cast<int>(s.size()) - 1);
        for (int target = 1; target <= upper; ++target) {
            detail::TreePackSearcher packer(g, s, all, target, budget.max_nodes, nodes);
            SearchOutcome got = packer.run();
            if (got.status == SearchStatus::BudgetExhausted) {
                best.status = SearchStatus::BudgetExhausted;
                best.nodes = nodes;
                return best;
            }
            if (got.achieved < target) break;
            best = got;
        }
    } catch (const detail::BudgetExhausted&) {
        best.status = SearchStatus::BudgetExhausted;
    }
    best.nodes = nodes;
    return best;
}

// kappa_k(K_n) = n - ceil(k/2).
inline int kappa_complete_formula(int n, int k) {
    if (k < 2 || k > n) throw std::invalid_argument("kappa_complete_formula: need 2 <= k <= n");
    return n - (k + 1) / 2;
}

namespace detail {

inline std::vector<std::vector<Edge>> trees_from_prufer(int m) {
    // all labeled trees on m vertices via Prufer decoding
    std::vector<std::vector<Edge>> out;
    if (m == 1) return out;
    std::vector<int> code(static_cast<std::size_t>(std::max(0, m - 2)), 0);
    while (true) {
        std::vector<int> deg(static_cast<std::size_t>(m), 1);
        for (int c : code) ++deg[static_cast<std::size_t>(c)];
        std::vector<Edge> edges;
        std::vector<char> used(static_cast<std::size_t>(m), 0);
        std::vector<int> degc = deg;
        for (int c : code) {
            int leaf = -1;
            for (int v = 0; v < m; ++v)
                if (degc[static_cast<std::size_t>(v)] == 1 && !used[static_cast<std::size_t>(v)]) {
                    leaf = v;
                    break;
                }
            edges.push_back(make_edge(leaf, c));
            used[static_cast<std::size_t>(leaf)] = 1;
            --degc[static_cast<std::size_t>(c)];
        }
        std::vector<int> rest;
        for (int v = 0; v < m; ++v)
            if (!used[static_cast<std::size_t>(v)] && degc[static_cast<std::size_t>(v)] >= 1)
                rest.push_back(v);
        edges.push_back(make_edge(rest[0], rest[1]));
        out.push_back(std::move(edges));
        // next code
        int pos = static_cast<int>(code.size()) - 1;
        while (pos >= 0 && code[static_cast<std::size_t>(pos)] == m - 1) {
            code[static_cast<std::size_t>(pos)] = 0;
            --pos;
        }
        if (pos < 0) break;
        ++code[static_cast<std::size_t>(pos)];
    }
    return out;
}

} // namespace detail

// Enumerates every tree on 2..max_n vertices and every 2-coloring of its
// edges; true iff every properly colored instance has maximum degree <= 2,
// i.e. a proper tree in two colors must be a path.
inline bool two_color_tree_shape_oracle(int max_n) {
    if (max_n > 8) throw std::invalid_argument("two_color_tree_shape_oracle: capped at n = 8");
    for (int m = 2; m <= max_n; ++m) {
        for (const auto& edges : detail::trees_from_prufer(m)) {
            int num_edges = static_cast<int>(edges.size());
            int maxdeg = 0;
            std::vector<int> deg(static_cast<std::size_t>(m), 0);
            for (const Edge& e : edges) {
                maxdeg = std::max(maxdeg, ++deg[static_cast<std::size_t>(e.first)]);
                maxdeg = std::max(maxdeg, ++deg[static_cast<std::size_t>(e.second)]);
            }
            for (std::uint32_t mask = 0; mask < (1u << num_edges); ++mask) {
                bool proper = true;
                for (int i = 0; proper && i < num_edges; ++i)
                    for (int j = i + 1; proper && j < num_edges; ++j) {
                        bool adjacent = edges[static_cast<std::size_t>(i)].first == edges[static_cast<std::size_t>(j)].first ||
                                        edges[static_cast<std::size_t>(i)].first == edges[static_cast<std::size_t>(j)].second ||
                                        edges[static_cast<std::size_t>(i)].second == edges[static_cast<std::size_t>(j)].first ||
                                        edges[static_cast<std::size_t>(i)].second == edges[static_cast<std::size_t>(j)].second;
                        if (adjacent && ((mask >> i) & 1u) == ((mask >> j) & 1u)) proper = false;
                    }
                if (proper && maxdeg > 2) return false;
            }
        }
    }
    return true;
}

enum class SubsetMode { Exhaustive, Sampled };
enum class Verdict { Pass, Fail, Indeterminate };

struct VerifyOptions {
    int k = 2;
    int ell = 1;
    SubsetMode mode = SubsetMode::Exhaustive;
    int sample_count = 0;
    Seed seed{0};
    SearchBudget budget;
    bool keep_witnesses = false;
    int jobs = 1;
    std::string graph_id;
    std::string coloring_id;
};

struct SubsetOutcome {
    std::vector<int> subset;
    int achieved = 0;
};

struct VerificationReport {
    std::string graph_id, coloring_id;
    int k = 0, ell = 0;
    std::string mode;
    std::uint64_t subsets_checked = 0;
    std::vector<SubsetOutcome> failures;
    std::vector<std::vector<int>> indeterminate;
    std::vector<std::pair<std::vector<int>, std::vector<TreeWitness>>> witnesses;
    std::int64_t elapsed_ms = 0;
    std::string note;

    Verdict verdict() const {
        if (!failures.empty()) return Verdict::Fail;
        if (!indeterminate.empty()) return Verdict::Indeterminate;
        return Verdict::Pass;
    }
};

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        default: return "indeterminate";
    }
}

namespace detail {

inline std::vector<std::vector<int>> enumerate_subsets(int n, int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(static_cast<std::size_t>(k));
    std::iota(cur.begin(), cur.end(), 0);
    while (true) {
        out.push_back(cur);
        int i = k - 1;
        while (i >= 0 && cur[static_cast<std::size_t>(i)] == n - k + i) --i;
        if (i < 0) break;
        ++cur[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j)
            cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
    }
    return out;
}

inline double binomial_or_inf(int n, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) {
        r *= static_cast<double>(n - i) / (i + 1);
        if (r > 1e18) return 1e18;
    }
    return r;
}

inline std::vector<std::vector<int>> sample_subsets(int n, int k, int count, Seed seed) {
    if (binomial_or_inf(n, k) <= count) return enumerate_subsets(n, k);
    Rng rng(seed);
    std::set<std::vector<int>> seen;
    std::vector<std::vector<int>> out;
    while (static_cast<int>(out.size()) < count) {
        // Floyd's sampling of a k-subset
        std::set<int> pick;
        for (int j = n - k; j < n; ++j) {
            int t = rng.below_int(j + 1);
            if (!pick.insert(t).second) pick.insert(j);
        }
        std::vector<int> subset(pick.begin(), pick.end());
        if (seen.insert(subset).second) out.push_back(std::move(subset));
    }
    return out;
}

} // namespace detail

// Checks every (or a sampled family of) k-subset for ell internally disjoint
// proper S-trees. Budget exhaustion on a subset is reported as indeterminate,
// never as failure. Subsets are independent; `jobs` > 1 fans them out across
// threads with order-independent aggregation.
inline VerificationReport verify_coloring(const EdgeColoring& coloring, const VerifyOptions& opt) {
    const Graph& g = coloring.graph();
    int n = g.vertex_count();
    if (opt.k < 2 || opt.k > n) throw std::invalid_argument("verify_coloring: need 2 <= k <= n");
    if (opt.ell < 1) throw std::invalid_argument("verify_coloring: need ell >= 1");
    if (opt.mode == SubsetMode::Exhaustive && detail::binomial_or_inf(n, opt.k) > 4e6)
        throw std::invalid_argument("verify_coloring: too many subsets for exhaustive mode; sample");
    if (opt.mode == SubsetMode::Sampled && opt.sample_count < 1)
        throw std::invalid_argument("verify_coloring: sampled mode needs a positive count");
    auto t0 = std::chrono::steady_clock::now();

    std::vector<std::vector<int>> subsets =
        opt.mode == SubsetMode::Exhaustive
            ? detail::enumerate_subsets(n, opt.k)
            : detail::sample_subsets(n, opt.k, opt.sample_count, opt.seed);

    struct Cell {
        SearchOutcome outcome;
    };
    std::vector<Cell> cells(subsets.size());
    int jobs = std::max(1, opt.jobs);
    if (jobs == 1) {
        for (std::size_t i = 0; i < subsets.size(); ++i)
            cells[i].outcome = max_disjoint_proper_trees(coloring, subsets[i], opt.ell, opt.budget);
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr first_error;
        std::mutex error_mutex;
        auto worker = [&]() {
            while (true) {
                std::size_t i = next.fetch_add(1);
                if (i >= subsets.size()) break;
                try {
                    cells[i].outcome =
                        max_disjoint_proper_trees(coloring, subsets[i], opt.ell, opt.budget);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    next.store(subsets.size());
                    break;
                }
            }
        };
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
        if (first_error) std::rethrow_exception(first_error);
    }

    VerificationReport report;
    report.graph_id = opt.graph_id;
    report.coloring_id = opt.coloring_id;
    report.k = opt.k;
    report.ell = opt.ell;
    report.mode = opt.mode == SubsetMode::Exhaustive
                      ? "exhaustive"
                      : "sampled:" + std::to_string(opt.sample_count);
    report.subsets_checked = subsets.size();
    for (std::size_t i = 0; i < subsets.size(); ++i) {
        const SearchOutcome& oc = cells[i].outcome;
        if (oc.achieved >= opt.ell) {
            if (opt.keep_witnesses) report.witnesses.emplace_back(subsets[i], oc.witnesses);
        } else if (oc.status == SearchStatus::BudgetExhausted) {
            report.indeterminate.push_back(subsets[i]);
        } else {
            report.failures.push_back({subsets[i], oc.achieved});
        }
    }
    // The definition restricts ell <= kappa_k; beyond that no coloring can
    // pass, which the search reports as plain failure. Flag it for the reader.
    if (!report.failures.empty() &&
        g.edge_count() == static_cast<int>(static_cast<long long>(n) * (n - 1) / 2) &&
        opt.ell > kappa_complete_formula(n, opt.k)) {
        report.note = "ell exceeds kappa_k(K_n) = n - ceil(k/2); no coloring can satisfy this";
    }
    report.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
    return report;
}

} // namespace propertrees
