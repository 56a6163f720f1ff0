#include "gmatch/plan.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>

namespace gmatch {

CandidateSets ldf_filter(const Graph& query, const Graph& data) {
    // Bucket data vertices by label once.
    std::unordered_map<Label, std::vector<VertexId>> by_label;
    for (VertexId v = 0; v < data.vertex_count(); ++v) by_label[data.label(v)].push_back(v);

    CandidateSets c;
    c.sets.resize(query.vertex_count());
    for (VertexId u = 0; u < query.vertex_count(); ++u) {
        auto it = by_label.find(query.label(u));
        if (it == by_label.end()) continue;
        for (VertexId v : it->second)
            if (data.degree(v) >= query.degree(u)) c.sets[u].push_back(v);
    }
    return c;
}

CandidateSets nlf_filter(const Graph& query, const Graph& data, const CandidateSets& c) {
    CandidateSets out;
    out.sets.resize(c.sets.size());
    for (VertexId u = 0; u < query.vertex_count(); ++u) {
        NlfSignature qsig = nlf_signature(query, u);
        for (VertexId v : c.sets[u])
            if (nlf_signature(data, v).dominates(qsig)) out.sets[u].push_back(v);
    }
    return out;
}

CandidateSets dp_refine(const Graph& query, const Graph& data, const CandidateSets& c,
                        int max_sweeps) {
    const VertexId nq = query.vertex_count();
    CandidateSets cur = c;

    // Membership bitmaps, one row per query vertex.
    std::vector<std::vector<char>> member(nq, std::vector<char>(data.vertex_count(), 0));
    for (VertexId u = 0; u < nq; ++u)
        for (VertexId v : cur.sets[u]) member[u][v] = 1;

    // Stamp buffer for the distinctness bound below.
    std::vector<std::uint32_t> stamp(data.vertex_count(), 0);
    std::uint32_t stamp_gen = 0;

    auto keeps = [&](VertexId u, VertexId v) {
        // every query neighbor needs a candidate adjacent to v ...
        for (VertexId uj : query.neighbors(u)) {
            bool hit = false;
            for (VertexId w : data.neighbors(v)) {
                if (member[uj][w]) {
                    hit = true;
                    break;
                }
            }
            if (!hit) return false;
        }
        // ... and the neighbors' images must be |N(u)| distinct vertices,
        // so the pooled candidates adjacent to v cannot number fewer.
        ++stamp_gen;
        std::uint32_t pool = 0;
        for (VertexId uj : query.neighbors(u)) {
            for (VertexId w : data.neighbors(v)) {
                if (member[uj][w] && stamp[w] != stamp_gen) {
                    stamp[w] = stamp_gen;
                    ++pool;
                }
            }
        }
        return pool >= query.degree(u);
    };

    auto sweep = [&](bool forward) {
        bool changed = false;
        for (VertexId k = 0; k < nq; ++k) {
            VertexId u = forward ? k : nq - 1 - k;
            auto& set = cur.sets[u];
            std::size_t kept = 0;
            for (std::size_t i = 0; i < set.size(); ++i) {
                if (keeps(u, set[i])) {
                    set[kept++] = set[i];
                } else {
                    member[u][set[i]] = 0;
                    changed = true;
                }
            }
            set.resize(kept);
        }
        return changed;
    };

    for (int pass = 0; pass < max_sweeps; ++pass)
        if (!sweep(pass % 2 == 0)) break;
    return cur;
}

MatchingOrder build_matching_order(const Graph& query, const CandidateSets& c) {
    const VertexId nq = query.vertex_count();
    if (nq == 0) throw GraphError("empty query graph");
    if (!query.is_connected()) throw GraphError("query graph is disconnected");

    std::vector<char> placed(nq, 0);
    std::vector<std::uint32_t> ordered_nbrs(nq, 0);

    VertexId first = 0;
    for (VertexId u = 1; u < nq; ++u)
        if (c.sets[u].size() < c.sets[first].size()) first = u;

    MatchingOrder mo;
    mo.order.reserve(nq);
    mo.position.assign(nq, 0);

    auto place = [&](VertexId u) {
        mo.position[u] = static_cast<VertexId>(mo.order.size());
        mo.order.push_back(u);
        placed[u] = 1;
        for (VertexId w : query.neighbors(u)) ++ordered_nbrs[w];
    };
    place(first);

    while (mo.order.size() < nq) {
        // Minimize |C(u)| / (1 + ordered neighbors) over the frontier,
        // compared exactly via cross-multiplication.
        VertexId best = std::numeric_limits<VertexId>::max();
        for (VertexId u = 0; u < nq; ++u) {
            if (placed[u] || ordered_nbrs[u] == 0) continue;
            if (best == std::numeric_limits<VertexId>::max()) {
                best = u;
                continue;
            }
            std::uint64_t lhs = static_cast<std::uint64_t>(c.sets[u].size()) * (1 + ordered_nbrs[best]);
            std::uint64_t rhs = static_cast<std::uint64_t>(c.sets[best].size()) * (1 + ordered_nbrs[u]);
            if (lhs < rhs) best = u;
        }
        place(best);
    }
    return mo;
}

} // namespace gmatch
