#pragma once

#include <json.hpp>

#include "propertrees/experiments.hpp"
#include "propertrees/verifier.hpp"

namespace propertrees {

using json = nlohmann::ordered_json;

inline json to_json(const VerificationReport& r) {
    json j;
    j["params"] = {{"graph", r.graph_id}, {"coloring", r.coloring_id}, {"k", r.k},
                   {"l", r.ell},          {"mode", r.mode}};
    j["verdict"] = to_string(r.verdict());
    j["subsets_checked"] = r.subsets_checked;
    j["failures"] = json::array();
    for (const auto& f : r.failures)
        j["failures"].push_back({{"S", f.subset}, {"achieved", f.achieved}});
    j["indeterminate"] = json::array();
    for (const auto& s : r.indeterminate) j["indeterminate"].push_back(s);
    j["elapsed_ms"] = r.elapsed_ms;
    if (!r.note.empty()) j["note"] = r.note;
    if (!r.witnesses.empty()) {
        json w = json::array();
        for (const auto& [subset, family] : r.witnesses) {
            json trees = json::array();
            for (const auto& t : family) {
                json edges = json::array();
                for (const Edge& e : t.edges) edges.push_back({e.first, e.second});
                trees.push_back(edges);
            }
            w.push_back({{"S", subset}, {"trees", trees}});
        }
        j["witnesses"] = w;
    }
    return j;
}

inline json to_json(const ExperimentResult& r) {
    return json{{"trials", r.trials},
                {"successes", r.successes},
                {"failures", r.failures},
                {"indeterminates", r.indeterminates},
                {"success_fraction", r.success_fraction},
                {"ci_low", r.ci.low},
                {"ci_high", r.ci.high},
                {"indeterminate_fraction", r.indeterminate_fraction},
                {"failure_fraction",
                 1.0 - r.success_fraction - r.indeterminate_fraction},
                {"elapsed_ms", r.elapsed_ms}};
}

inline json to_json(const CommonNeighborStats& st) {
    return json{{"n", st.n},
                {"k", st.k},
                {"p", st.p},
                {"samples", st.samples},
                {"min_count", st.min_count},
                {"mean_count", st.mean_count},
                {"threshold", st.threshold},
                {"fraction_meeting", st.fraction_meeting},
                {"analytic_mean", st.analytic_mean}};
}

inline json to_json(const SweepRow& row, int k, int ell) {
    json j{{"n", row.n},         {"p", row.p},           {"k", k},
           {"l", ell},           {"saturated", row.saturated}, {"skipped", row.skipped},
           {"contrast", row.contrast}};
    if (!row.skipped) j["result"] = to_json(row.result);
    return j;
}

} // namespace propertrees
