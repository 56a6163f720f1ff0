#include "gmatch/reservation.hpp"

#include <algorithm>

namespace gmatch {

bool is_matchable(std::span<const VertexId> s, std::uint32_t pos,
                  const std::vector<Mask>& inv_mask) {
    const std::size_t n = s.size();
    if (n == 0) return true;
    std::vector<Mask> below(n);
    for (std::size_t i = 0; i < n; ++i) below[i] = inv_mask[s[i]].below(pos);

    // Hall-type test over all nonempty subsets; covers the single-vertex
    // emptiness condition via singletons.
    for (std::uint32_t sub = 1; sub < (1u << n); ++sub) {
        Mask hosts{};
        unsigned size = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (sub & (1u << i)) {
                hosts |= below[i];
                ++size;
            }
        }
        if (hosts.count() < size) return false;
    }
    return true;
}

ReservationEdgeSet build_reservation_edges(const CandidateSpace& cs, std::uint32_t i,
                                           std::uint32_t cand_idx, std::uint32_t j) {
    const VertexId v = cs.cand[i][cand_idx];
    ReservationEdgeSet er;

    // Locate the edge block for (i, j); j is a forward neighbor of i.
    const auto& fwd = cs.fwd[i];
    auto it = std::lower_bound(fwd.begin(), fwd.end(), j);
    const CandidateEdges& ce = cs.edges[cs.edge_of_fwd[i][it - fwd.begin()]];

    for (std::uint32_t tpos : ce.targets_of(cand_idx)) {
        VertexId vp = cs.cand[j][tpos];
        for (VertexId w : cs.reservation[j][tpos].vertices)
            if (w != v) er.edges.emplace_back(vp, w);
    }
    return er;
}

std::optional<std::vector<VertexId>> approx_vertex_cover(const ReservationEdgeSet& er,
                                                         std::uint32_t size_limit,
                                                         std::uint32_t pos,
                                                         const std::vector<Mask>& inv_mask) {
    std::vector<VertexId> cover;
    std::vector<char> done(er.edges.size(), 0);

    auto in_cover = [&](VertexId x) {
        return std::find(cover.begin(), cover.end(), x) != cover.end();
    };
    auto remaining_covered_by = [&](VertexId x) {
        std::uint32_t n = 0;
        for (std::size_t e = 0; e < er.edges.size(); ++e)
            if (!done[e] && (er.edges[e].first == x || er.edges[e].second == x)) ++n;
        return n;
    };
    auto try_add = [&](VertexId x) {
        if (cover.size() + 1 > size_limit) return false;
        cover.push_back(x);
        if (is_matchable(cover, pos, inv_mask)) return true;
        cover.pop_back();
        return false;
    };
    auto mark_covered = [&](VertexId x) {
        for (std::size_t e = 0; e < er.edges.size(); ++e)
            if (!done[e] && (er.edges[e].first == x || er.edges[e].second == x)) done[e] = 1;
    };

    for (std::size_t e = 0; e < er.edges.size(); ++e) {
        if (done[e]) continue;
        auto [a, b] = er.edges[e];
        if (in_cover(a) || in_cover(b)) { // already-picked vertices cover later edges
            mark_covered(in_cover(a) ? a : b);
            continue;
        }
        VertexId first = a, second = b;
        if (a != b && remaining_covered_by(b) > remaining_covered_by(a)) std::swap(first, second);

        if (try_add(first)) {
            mark_covered(first);
        } else if (first != second && try_add(second)) {
            mark_covered(second);
        } else if (first != second && cover.size() + 2 <= size_limit) {
            // Single endpoints break matchability; try the classic both-ends step.
            cover.push_back(first);
            cover.push_back(second);
            if (!is_matchable(cover, pos, inv_mask)) return std::nullopt;
            mark_covered(first);
            mark_covered(second);
        } else {
            return std::nullopt;
        }
    }
    std::sort(cover.begin(), cover.end());
    return cover;
}

void generate_reservation_guards(CandidateSpace& cs, std::uint32_t size_limit) {
    if (size_limit == 0) return; // trivial guards only
    const std::uint32_t nq = cs.query.vertex_count();
    for (std::uint32_t step = 0; step < nq; ++step) {
        std::uint32_t i = nq - 1 - step;
        for (std::uint32_t p = 0; p < cs.cand[i].size(); ++p) {
            std::optional<std::vector<VertexId>> best;
            for (std::uint32_t j : cs.fwd[i]) {
                ReservationEdgeSet er = build_reservation_edges(cs, i, p, j);
                auto s = approx_vertex_cover(er, size_limit, i, cs.inv_mask);
                if (s && (!best || s->size() < best->size())) best = std::move(s);
            }
            if (best) {
                cs.reservation[i][p].vertices = std::move(*best);
                cs.reservation[i][p].trivial = false;
            }
        }
    }
}

bool matches_reservation(const ReservationGuard& guard,
                         std::span<const std::int32_t> assigned_pos_of) {
    for (VertexId w : guard.vertices)
        if (assigned_pos_of[w] < 0) return false;
    return true;
}

} // namespace gmatch
