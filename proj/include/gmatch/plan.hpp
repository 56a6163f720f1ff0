#ifndef GMATCH_PLAN_HPP
#define GMATCH_PLAN_HPP

#include "gmatch/graph.hpp"

#include <vector>

namespace gmatch {

// Per-query-vertex candidate sets, indexed by query vertex id, each a sorted
// list of data vertex ids.
struct CandidateSets {
    std::vector<std::vector<VertexId>> sets;

    bool any_empty() const {
        for (const auto& s : sets)
            if (s.empty()) return true;
        return false;
    }
};

// Connected matching order. order[i] = original query vertex at position i;
// position[u] inverts it.
struct MatchingOrder {
    std::vector<VertexId> order;
    std::vector<VertexId> position;
};

// C(u) = { v : label(v) = label(u) and deg(v) >= deg(u) }.
CandidateSets ldf_filter(const Graph& query, const Graph& data);

// Keeps v in C(u) iff v's neighbor label histogram dominates u's.
CandidateSets nlf_filter(const Graph& query, const Graph& data, const CandidateSets& c);

// Fixpoint refinement: v stays in C(u) iff every query neighbor of u has a
// candidate adjacent to v, and the pooled adjacent candidates can host
// |N(u)| distinct images. Alternating forward/backward sweeps, capped.
CandidateSets dp_refine(const Graph& query, const Graph& data, const CandidateSets& c,
                        int max_sweeps = 10);

// Greedy connected order: start at the smallest candidate set, then repeatedly
// take the frontier vertex minimizing |C(u)| / (1 + ordered neighbors), ties
// to the smaller vertex id. Throws GraphError on a disconnected query.
MatchingOrder build_matching_order(const Graph& query, const CandidateSets& c);

} // namespace gmatch

#endif
