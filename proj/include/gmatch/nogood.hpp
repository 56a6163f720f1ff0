#ifndef GMATCH_NOGOOD_HPP
#define GMATCH_NOGOOD_HPP

#include "gmatch/mask.hpp"

#include <cstdint>
#include <span>

namespace gmatch {

// A recorded nogood in search-node encoding: `dom` is the set of query
// positions whose assignments form the nogood, `len` the length of the
// minimum superset embedding (max position in dom, plus one), `id` that
// prefix's search-node id. An absent slot never matches.
struct NogoodRecord {
    static constexpr std::uint32_t kAbsent = 0xffffffffu;

    std::uint64_t id = 0;
    std::uint32_t len = kAbsent;
    Mask dom{};

    bool present() const { return len != kAbsent; }
};

// Subset test against the current partial embedding in O(1): the rounded-up
// prefix must be an ancestor of the current search node.
inline bool matches_record(const NogoodRecord& rec, std::span<const std::uint64_t> anc,
                           std::uint32_t depth) {
    return rec.present() && rec.len <= depth && anc[rec.len] == rec.id;
}

// Rounds the nogood with domain `dom` (a subset of the current embedding's
// positions) up to its minimum superset embedding. Empty domains encode as
// (root id, 0, {}), which matches every partial embedding.
inline NogoodRecord encode_nogood(const Mask& dom, std::span<const std::uint64_t> anc) {
    int last = dom.max_pos();
    NogoodRecord rec;
    rec.len = static_cast<std::uint32_t>(last + 1);
    rec.id = anc[rec.len];
    rec.dom = dom;
    return rec;
}

} // namespace gmatch

#endif
