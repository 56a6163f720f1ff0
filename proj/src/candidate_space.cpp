#include "gmatch/candidate_space.hpp"

#include <algorithm>

namespace gmatch {

std::uint32_t CandidateSpace::cand_index(std::uint32_t pos, VertexId v) const {
    const auto& s = cand[pos];
    auto it = std::lower_bound(s.begin(), s.end(), v);
    if (it == s.end() || *it != v) return static_cast<std::uint32_t>(s.size());
    return static_cast<std::uint32_t>(it - s.begin());
}

NogoodStore::NogoodStore(const CandidateSpace& cs) {
    nv.resize(cs.cand.size());
    for (std::size_t i = 0; i < cs.cand.size(); ++i) nv[i].resize(cs.cand[i].size());
    ne.resize(cs.edges.size());
    for (std::size_t e = 0; e < cs.edges.size(); ++e)
        if (cs.edges[e].in_two_core) ne[e].resize(cs.edges[e].targets.size());
}

CandidateSpace build_candidate_space(const Graph& query, const Graph& data,
                                     const CandidateSets& c, const MatchingOrder& order) {
    const VertexId nq = query.vertex_count();
    CandidateSpace cs;
    cs.order = order;
    cs.data_vertex_count = data.vertex_count();

    // Renumber the query so that vertex i is the i-th in the matching order.
    {
        std::vector<Label> labels(nq);
        std::vector<std::pair<VertexId, VertexId>> edges;
        for (VertexId u = 0; u < nq; ++u) {
            labels[order.position[u]] = query.label(u);
            for (VertexId w : query.neighbors(u))
                if (u < w) edges.emplace_back(order.position[u], order.position[w]);
        }
        cs.query = Graph(std::move(labels), edges);
    }

    cs.cand.resize(nq);
    for (VertexId u = 0; u < nq; ++u) cs.cand[order.position[u]] = c.sets[u];

    cs.inv_mask.assign(data.vertex_count(), Mask{});
    for (std::uint32_t i = 0; i < nq; ++i)
        for (VertexId v : cs.cand[i]) cs.inv_mask[v].set(i);

    cs.core = two_core(cs.query);

    cs.fwd.resize(nq);
    cs.bwd.resize(nq);
    cs.edge_of_fwd.resize(nq);
    cs.edge_of_bwd.resize(nq);

    // Position of each data vertex within cand[j], for edge materialization.
    std::vector<std::uint32_t> pos_in(data.vertex_count(), 0);

    for (std::uint32_t i = 0; i < nq; ++i) {
        for (VertexId j : cs.query.neighbors(i)) {
            if (j < i) continue;
            CandidateEdges ce;
            ce.src = i;
            ce.dst = j;
            ce.in_two_core = cs.core[i] && cs.core[j];
            ce.offsets.reserve(cs.cand[i].size() + 1);
            ce.offsets.push_back(0);

            for (std::uint32_t p = 0; p < cs.cand[j].size(); ++p) pos_in[cs.cand[j][p]] = p + 1;
            for (VertexId v : cs.cand[i]) {
                for (VertexId w : data.neighbors(v))
                    if (std::uint32_t p = pos_in[w]; p != 0) ce.targets.push_back(p - 1);
                std::sort(ce.targets.begin() + ce.offsets.back(), ce.targets.end());
                ce.offsets.push_back(static_cast<std::uint32_t>(ce.targets.size()));
            }
            for (VertexId w : cs.cand[j]) pos_in[w] = 0;

            std::uint32_t idx = static_cast<std::uint32_t>(cs.edges.size());
            cs.edges.push_back(std::move(ce));
            cs.fwd[i].push_back(j);
            cs.edge_of_fwd[i].push_back(idx);
            cs.bwd[j].push_back(i);
            cs.edge_of_bwd[j].push_back(idx);
        }
    }

    cs.reservation.resize(nq);
    for (std::uint32_t i = 0; i < nq; ++i) {
        cs.reservation[i].resize(cs.cand[i].size());
        for (std::uint32_t p = 0; p < cs.cand[i].size(); ++p)
            cs.reservation[i][p].vertices = {cs.cand[i][p]};
    }
    return cs;
}

} // namespace gmatch
