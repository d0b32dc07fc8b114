#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "propertrees/colorings.hpp"
#include "propertrees/constructions.hpp"
#include "propertrees/graph.hpp"
#include "propertrees/rng.hpp"
#include "propertrees/verifier.hpp"

namespace propertrees {

struct ConfidenceInterval {
    double low = 0.0;
    double high = 0.0;
};

namespace detail {

inline double binomial_cdf(int x, int n, double p) {
    // exact sum of the pmf; used only for small n
    double total = 0.0;
    double term = std::pow(1.0 - p, n); // P(X = 0)
    for (int i = 0; i <= x; ++i) {
        total += term;
        term *= (static_cast<double>(n - i) / (i + 1)) * (p / (1.0 - p));
    }
    return std::min(1.0, total);
}

} // namespace detail

// 95% binomial interval: normal approximation from 30 trials up,
// exact Clopper-Pearson below.
inline ConfidenceInterval binomial_ci95(int successes, int trials) {
    if (trials < 1) throw std::invalid_argument("binomial_ci95: need trials >= 1");
    double phat = static_cast<double>(successes) / trials;
    if (trials >= 30) {
        double half = 1.959963985 * std::sqrt(phat * (1.0 - phat) / trials);
        return {std::max(0.0, phat - half), std::min(1.0, phat + half)};
    }
    const double alpha = 0.05;
    ConfidenceInterval ci{0.0, 1.0};
    if (successes > 0) {
        double lo = 0.0, hi = phat;
        for (int it = 0; it < 200; ++it) {
            double mid = (lo + hi) / 2;
            // P(X >= successes | mid) <= alpha/2 means mid is still too small
            (1.0 - detail::binomial_cdf(successes - 1, trials, mid) <= alpha / 2 ? lo : hi) = mid;
        }
        ci.low = lo;
    }
    if (successes < trials) {
        double lo = phat, hi = 1.0;
        for (int it = 0; it < 200; ++it) {
            double mid = (lo + hi) / 2;
            (detail::binomial_cdf(successes, trials, mid) <= alpha / 2 ? hi : lo) = mid;
        }
        ci.high = hi;
    }
    return ci;
}

struct ExperimentConfig {
    enum class Family { Complete, Bipartite, Gnp };
    Family family = Family::Complete;
    int n = 0;            // order (complete, gnp) or right class size (bipartite)
    int m_left = 0;       // bipartite left class size; 0 means n
    double p = 0.5;       // gnp edge probability
    int k = 3;
    int ell = 1;
    std::string scheme = "random"; // random | k3l2 | kn1l2 | spanning
    int colors = 2;
    int trials = 1;
    SubsetMode subset_mode = SubsetMode::Exhaustive;
    int subset_count = 0;
    Seed seed{0};
    SearchBudget budget;
    int jobs = 1;
};

struct ExperimentResult {
    int trials = 0;
    int successes = 0;
    int failures = 0;
    int indeterminates = 0;
    double success_fraction = 0.0;
    double indeterminate_fraction = 0.0;
    ConfidenceInterval ci;
    std::int64_t elapsed_ms = 0;
};

namespace detail {

inline EdgeColoring build_trial_coloring(const ExperimentConfig& cfg, std::uint64_t trial) {
    Seed graph_seed = Rng::derive(cfg.seed, trial * 4);
    Seed color_seed = Rng::derive(cfg.seed, trial * 4 + 1);
    Graph g = [&] {
        switch (cfg.family) {
            case ExperimentConfig::Family::Complete: return complete_graph(cfg.n);
            case ExperimentConfig::Family::Bipartite:
                return complete_bipartite(cfg.m_left > 0 ? cfg.m_left : cfg.n, cfg.n);
            default: return gnp_random(cfg.n, cfg.p, graph_seed);
        }
    }();
    if (cfg.scheme == "random") return color_uniform_random(g, cfg.colors, color_seed);
    if (cfg.family != ExperimentConfig::Family::Complete)
        throw std::invalid_argument("experiment: scheme '" + cfg.scheme +
                                    "' is a complete-graph construction");
    if (cfg.scheme == "k3l2") return color_k3_l2(cfg.n);
    if (cfg.scheme == "kn1l2") return color_kn1_l2(cfg.n);
    if (cfg.scheme == "spanning") return color_spanning(cfg.n);
    throw std::invalid_argument("experiment: unknown scheme '" + cfg.scheme + "'");
}

} // namespace detail

// Fraction of trials whose (graph, coloring) pair passes verify_coloring,
// with a 95% binomial interval. Indeterminate verifier verdicts are counted
// separately and never as successes. Trials derive independent seeds from the
// master seed, so parallel and serial runs agree.
inline ExperimentResult monte_carlo_success(const ExperimentConfig& cfg) {
    if (cfg.trials < 1) throw std::invalid_argument("monte_carlo_success: need trials >= 1");
    auto t0 = std::chrono::steady_clock::now();
    std::vector<Verdict> verdicts(static_cast<std::size_t>(cfg.trials));
    auto run_trial = [&](int t) {
        EdgeColoring coloring = detail::build_trial_coloring(cfg, static_cast<std::uint64_t>(t));
        VerifyOptions vo;
        vo.k = cfg.k;
        vo.ell = cfg.ell;
        vo.mode = cfg.subset_mode;
        vo.sample_count = cfg.subset_count;
        vo.seed = Rng::derive(cfg.seed, static_cast<std::uint64_t>(t) * 4 + 2);
        vo.budget = cfg.budget;
        verdicts[static_cast<std::size_t>(t)] = verify_coloring(coloring, vo).verdict();
    };
    int jobs = std::max(1, cfg.jobs);
    if (jobs == 1) {
        for (int t = 0; t < cfg.trials; ++t) run_trial(t);
    } else {
        std::atomic<int> next{0};
        std::exception_ptr first_error;
        std::mutex error_mutex;
        auto worker = [&]() {
            while (true) {
                int t = next.fetch_add(1);
                if (t >= cfg.trials) break;
                try {
                    run_trial(t);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    next.store(cfg.trials);
                    break;
                }
            }
        };
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
        if (first_error) std::rethrow_exception(first_error);
    }
    ExperimentResult res;
    res.trials = cfg.trials;
    for (Verdict v : verdicts) {
        if (v == Verdict::Pass) ++res.successes;
        else if (v == Verdict::Fail) ++res.failures;
        else ++res.indeterminates;
    }
    res.success_fraction = static_cast<double>(res.successes) / res.trials;
    res.indeterminate_fraction = static_cast<double>(res.indeterminates) / res.trials;
    res.ci = binomial_ci95(res.successes, res.trials);
    res.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
    return res;
}

// Empirical probability that a uniformly 2-colored path of path_len edges is
// proper, i.e. no two consecutive edges share a color: 2 / 2^path_len.
inline double path_properness_rate(int path_len, long long trials, Seed seed) {
    if (path_len < 1) throw std::invalid_argument("path_properness_rate: need path_len >= 1");
    if (trials < 1) throw std::invalid_argument("path_properness_rate: need trials >= 1");
    Rng rng(seed);
    long long proper = 0;
    for (long long t = 0; t < trials; ++t) {
        int prev = -1;
        bool ok = true;
        for (int i = 0; i < path_len; ++i) {
            int c = static_cast<int>(rng.next_u64() & 1u);
            if (c == prev) {
                ok = false;
                break;
            }
            prev = c;
        }
        if (ok) ++proper;
    }
    return static_cast<double>(proper) / static_cast<double>(trials);
}

struct CommonNeighborStats {
    int n = 0, k = 0;
    double p = 0.0;
    int samples = 0;
    int min_count = 0;
    double mean_count = 0.0;
    double threshold = 0.0;        // 2 k^2 log_a n
    double fraction_meeting = 0.0; // subsets with count >= threshold
    double analytic_mean = 0.0;    // (n-k) p^k
};

// Common-neighbour counts of sampled k-subsets of one sampled G(n, p).
inline CommonNeighborStats common_neighbor_stats(int n, double p, int k, int samples, Seed seed) {
    if (samples < 1) throw std::invalid_argument("common_neighbor_stats: need samples >= 1");
    if (k < 3 || k > n) throw std::invalid_argument("common_neighbor_stats: need 3 <= k <= n");
    Graph g = gnp_random(n, p, Rng::derive(seed, 0));
    std::vector<std::vector<int>> subsets = detail::sample_subsets(n, k, samples, Rng::derive(seed, 1));
    CommonNeighborStats st;
    st.n = n;
    st.k = k;
    st.p = p;
    st.samples = static_cast<int>(subsets.size());
    st.threshold = 2.0 * k * k * std::log(static_cast<double>(n)) / std::log(base_a(k));
    st.analytic_mean = (n - k) * std::pow(p, k);
    long long total = 0;
    int meeting = 0;
    st.min_count = n;
    for (const auto& s : subsets) {
        std::vector<int> common = g.neighbors(s[0]);
        for (std::size_t i = 1; i < s.size() && !common.empty(); ++i) {
            std::vector<int> next;
            const auto& nb = g.neighbors(s[i]);
            std::set_intersection(common.begin(), common.end(), nb.begin(), nb.end(),
                                  std::back_inserter(next));
            common = std::move(next);
        }
        int count = 0;
        for (int w : common)
            if (std::find(s.begin(), s.end(), w) == s.end()) ++count;
        total += count;
        st.min_count = std::min(st.min_count, count);
        if (count >= st.threshold) ++meeting;
    }
    st.mean_count = static_cast<double>(total) / st.samples;
    st.fraction_meeting = static_cast<double>(meeting) / st.samples;
    return st;
}

struct SweepRow {
    int n = 0;
    double p = 0.0;      // min(1, c (log_a n / n)^(1/k))
    bool saturated = false;
    bool skipped = false; // graph too large for the in-memory budget
    bool contrast = false;
    ExperimentResult result;
};

struct SweepOptions {
    int k = 3;
    int ell = 1;
    double c = 5.0;
    std::vector<int> n_values;
    int trials = 1;
    int subset_count = 50;
    Seed seed{0};
    SearchBudget budget;
    int jobs = 1;
    std::size_t max_graph_edges = 2'000'000;
    bool include_contrast = false; // extra rows at p/2, no theorem attached
};

// Random-graph threshold sweep: for each n evaluate the theorem's p(n), flag
// saturation where the formula exceeds 1, and where the graph fits the memory
// budget run the Monte Carlo verification at that p.
inline std::vector<SweepRow> gnp_threshold_sweep(const SweepOptions& opt) {
    if (opt.c < 5.0) throw std::invalid_argument("gnp_threshold_sweep: theorem needs c >= 5");
    if (opt.k < 3) throw std::invalid_argument("gnp_threshold_sweep: need k >= 3");
    std::vector<SweepRow> rows;
    double a = base_a(opt.k);
    for (std::size_t idx = 0; idx < opt.n_values.size(); ++idx) {
        int n = opt.n_values[idx];
        if (n < 2) throw std::invalid_argument("gnp_threshold_sweep: need n >= 2");
        double log_a_n = std::log(static_cast<double>(n)) / std::log(a);
        double p_raw = opt.c * std::pow(log_a_n / n, 1.0 / opt.k);
        SweepRow row;
        row.n = n;
        row.saturated = p_raw >= 1.0;
        row.p = std::min(1.0, p_raw);
        double expected_edges = row.p * n * (n - 1.0) / 2.0;
        if (expected_edges > static_cast<double>(opt.max_graph_edges)) {
            row.skipped = true;
        } else {
            ExperimentConfig cfg;
            cfg.family = ExperimentConfig::Family::Gnp;
            cfg.n = n;
            cfg.p = row.p;
            cfg.k = opt.k;
            cfg.ell = opt.ell;
            cfg.scheme = "random";
            cfg.trials = opt.trials;
            cfg.subset_mode = SubsetMode::Sampled;
            cfg.subset_count = opt.subset_count;
            cfg.seed = Rng::derive(opt.seed, idx * 2);
            cfg.budget = opt.budget;
            cfg.jobs = opt.jobs;
            row.result = monte_carlo_success(cfg);
        }
        rows.push_back(row);
        if (opt.include_contrast) {
            SweepRow cr = row;
            cr.contrast = true;
            cr.saturated = false;
            cr.p = row.p / 2.0;
            cr.result = {};
            double contrast_edges = cr.p * n * (n - 1.0) / 2.0;
            cr.skipped = contrast_edges > static_cast<double>(opt.max_graph_edges);
            if (!cr.skipped) {
                ExperimentConfig cfg;
                cfg.family = ExperimentConfig::Family::Gnp;
                cfg.n = n;
                cfg.p = cr.p;
                cfg.k = opt.k;
                cfg.ell = opt.ell;
                cfg.scheme = "random";
                cfg.trials = opt.trials;
                cfg.subset_mode = SubsetMode::Sampled;
                cfg.subset_count = opt.subset_count;
                cfg.seed = Rng::derive(opt.seed, idx * 2 + 1);
                cfg.budget = opt.budget;
                cfg.jobs = opt.jobs;
                cr.result = monte_carlo_success(cfg);
            }
            rows.push_back(cr);
        }
    }
    return rows;
}

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows, int k, int ell) {
    os << "n,p,k,l,trials,success_fraction,ci_low,ci_high,indeterminate_fraction,elapsed_ms\n";
    os << std::fixed << std::setprecision(6);
    for (const auto& r : rows) {
        os << r.n << ',' << r.p << ',' << k << ',' << ell << ',' << r.result.trials << ','
           << r.result.success_fraction << ',' << r.result.ci.low << ',' << r.result.ci.high << ','
           << r.result.indeterminate_fraction << ',' << r.result.elapsed_ms << '\n';
    }
}

} // namespace propertrees
