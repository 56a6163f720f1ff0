#ifndef GMATCH_RESERVATION_HPP
#define GMATCH_RESERVATION_HPP

#include "gmatch/candidate_space.hpp"

#include <optional>
#include <span>
#include <vector>

namespace gmatch {

// Pairs (v', w) with v' a forward-adjacent candidate and w a vertex of its
// reservation guard minus the root vertex. A vertex cover of this edge set
// is a reservation of the root candidate.
struct ReservationEdgeSet {
    std::vector<std::pair<VertexId, VertexId>> edges;
};

// False when no partial embedding of length `pos` can have all of S in its
// image: either some member is a candidate of no earlier query vertex, or a
// subset of S outnumbers the earlier positions that could host it. Exhaustive
// over subsets; callers keep |S| small.
bool is_matchable(std::span<const VertexId> s, std::uint32_t pos,
                  const std::vector<Mask>& inv_mask);

// Unfolds the guards of the candidates adjacent to (u_i, v) through forward
// neighbor u_j into a cover instance.
ReservationEdgeSet build_reservation_edges(const CandidateSpace& cs, std::uint32_t i,
                                           std::uint32_t cand_idx, std::uint32_t j);

// Greedy 2-approximate vertex cover constrained to stay matchable at `pos`
// and within `size_limit`. Prefers covering an edge with the single endpoint
// that covers more remaining edges. No result when the constraints cannot be
// met.
std::optional<std::vector<VertexId>> approx_vertex_cover(const ReservationEdgeSet& er,
                                                         std::uint32_t size_limit,
                                                         std::uint32_t pos,
                                                         const std::vector<Mask>& inv_mask);

// Fills every reservation slot, processing query positions in reverse so
// forward guards exist first. Keeps the smallest cover found across forward
// neighbors; falls back to the trivial guard. size_limit == 0 leaves all
// guards trivial.
void generate_reservation_guards(CandidateSpace& cs, std::uint32_t size_limit);

// True iff every guard vertex is already in the image of the partial
// embedding, i.e. extending with the guarded candidate is futile.
bool matches_reservation(const ReservationGuard& guard,
                         std::span<const std::int32_t> assigned_pos_of);

} // namespace gmatch

#endif
