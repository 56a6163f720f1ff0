#ifndef GMATCH_CANDIDATE_SPACE_HPP
#define GMATCH_CANDIDATE_SPACE_HPP

#include "gmatch/graph.hpp"
#include "gmatch/mask.hpp"
#include "gmatch/nogood.hpp"
#include "gmatch/plan.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace gmatch {

// One reservation guard per candidate vertex: a small set of data vertices
// that every subembedding rooted there must use. The trivial guard {v}
// coincides with the plain injectivity check and is skipped during search.
struct ReservationGuard {
    std::vector<VertexId> vertices; // sorted
    bool trivial = true;
};

// Candidate edges of one query edge (src < dst in matching-order positions):
// for candidate position p of src, targets[offsets[p]..offsets[p+1]) are the
// positions within cand[dst] adjacent to it, ascending.
struct CandidateEdges {
    std::uint32_t src = 0;
    std::uint32_t dst = 0;
    bool in_two_core = false;
    std::vector<std::uint32_t> offsets;
    std::vector<std::uint32_t> targets;

    std::span<const std::uint32_t> targets_of(std::uint32_t src_pos) const {
        return {targets.data() + offsets[src_pos], targets.data() + offsets[src_pos + 1]};
    }
};

// Guarded candidate space: the query renumbered by matching order, candidate
// sets per position, candidate edges per query edge, reservation guards, and
// the shape of the nogood-guard stores. Immutable during search; nogood slots
// live in a per-search NogoodStore so threads never share them.
struct CandidateSpace {
    Graph query;                 // renumbered: vertex i = position i
    MatchingOrder order;         // order.order[i] = original query vertex
    VertexId data_vertex_count = 0;

    std::vector<std::vector<VertexId>> cand;      // per position, sorted data ids
    std::vector<Mask> inv_mask;                   // per data vertex: positions holding it
    std::vector<std::vector<std::uint32_t>> fwd;  // per position: forward neighbors, ascending
    std::vector<std::vector<std::uint32_t>> bwd;  // per position: backward neighbors, ascending
    std::vector<CandidateEdges> edges;            // one per query edge
    std::vector<std::vector<std::uint32_t>> edge_of_fwd; // edge index aligned with fwd
    std::vector<std::vector<std::uint32_t>> edge_of_bwd; // edge index aligned with bwd
    std::vector<char> core;                       // 2-core flag per position

    std::vector<std::vector<ReservationGuard>> reservation; // per (position, cand index)

    std::uint64_t candidate_count() const {
        std::uint64_t n = 0;
        for (const auto& s : cand) n += s.size();
        return n;
    }
    // Index of v within cand[pos]; cand.size() if absent.
    std::uint32_t cand_index(std::uint32_t pos, VertexId v) const;
};

// Thread-local nogood stores, shaped after a CandidateSpace: one vertex slot
// per candidate vertex, one edge slot per candidate edge in the 2-core.
struct NogoodStore {
    std::vector<std::vector<NogoodRecord>> nv; // [position][cand index]
    std::vector<std::vector<NogoodRecord>> ne; // [edge index][target entry]; empty outside 2-core

    explicit NogoodStore(const CandidateSpace& cs);
};

// Assembles the candidate space from filtered candidate sets and a connected
// order. Guard slots start trivial/absent.
CandidateSpace build_candidate_space(const Graph& query, const Graph& data,
                                     const CandidateSets& c, const MatchingOrder& order);

} // namespace gmatch

#endif
