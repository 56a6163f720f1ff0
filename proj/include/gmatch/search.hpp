#ifndef GMATCH_SEARCH_HPP
#define GMATCH_SEARCH_HPP

#include "gmatch/candidate_space.hpp"
#include "gmatch/graph.hpp"
#include "gmatch/plan.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace gmatch {

enum class Termination { kComplete, kEmbeddingLimit, kTimeLimit };

const char* to_string(Termination t);

struct MatchStats {
    std::uint64_t recursions = 0;
    std::uint64_t embeddings = 0;
    std::uint64_t pruned_injectivity = 0;
    std::uint64_t pruned_reservation = 0;
    std::uint64_t pruned_nv = 0;
    std::uint64_t pruned_ne = 0;
    std::uint64_t backjumps = 0;

    MatchStats& operator+=(const MatchStats& o);
};

// Write/match notifications for the nogood stores, used by verification
// harnesses. `assignment` pairs are (query position, data vertex) in
// matching-order positions. Only supported single-threaded.
struct NogoodAudit {
    struct SlotKey {
        bool is_edge = false;
        std::uint32_t i = 0;      // guarded position
        VertexId v = 0;           // guarded data vertex
        std::uint32_t j = 0;      // edge targets (is_edge only)
        VertexId v2 = 0;
        auto operator<=>(const SlotKey&) const = default;
    };
    using Assignments = std::vector<std::pair<std::uint32_t, VertexId>>;

    // record: slot overwritten with a nogood decoding to `decoded`; the slot's
    // own assignments are implicit via the key.
    std::function<void(const SlotKey&, const Assignments& decoded)> on_record;
    // match: slot matched against the current partial embedding.
    std::function<void(const SlotKey&, const Assignments& embedding)> on_match;
};

struct MatchConfig {
    std::uint64_t embedding_limit = 0;   // 0 = unlimited
    double time_limit_sec = 0;           // 0 = none
    std::uint32_t reservation_size = 3;  // 0 disables non-trivial guards
    bool use_nv = true;
    bool use_ne = true;
    bool use_backjump = true;
    std::uint32_t threads = 1;
    bool collect_embeddings = false;
    int dp_sweeps = 10;
    NogoodAudit audit;

    void validate() const; // throws std::invalid_argument
};

// Streaming consumer; must tolerate concurrent calls when threads > 1.
class EmbeddingSink {
public:
    virtual ~EmbeddingSink() = default;
    // `embedding[i]` = data vertex of query position i (matching order).
    virtual void accept(std::span<const VertexId> embedding) = 0;
};

struct MatchResult {
    MatchStats stats;
    Termination termination = Termination::kComplete;
    std::uint64_t embedding_count = 0;
    // Present when collect_embeddings; rows indexed by ORIGINAL query vertex.
    std::vector<std::vector<VertexId>> embeddings;
    MatchingOrder order;
    double filter_sec = 0;
    double build_sec = 0;       // candidate-space assembly
    double reservation_sec = 0;
    double search_sec = 0;
};

// Runs the guarded backtracking over a prebuilt candidate space. Embeddings
// reported to the sink / collected rows are in matching-order positions.
// When `store` is null an internal one is used.
struct SpaceSearchResult {
    MatchStats stats;
    Termination termination = Termination::kComplete;
    std::uint64_t embedding_count = 0;
    std::vector<std::vector<VertexId>> embeddings; // position-indexed
};
SpaceSearchResult search_space(const CandidateSpace& cs, const MatchConfig& cfg,
                               NogoodStore* store = nullptr, EmbeddingSink* sink = nullptr);

// Full pipeline: filtering, ordering, space construction, guard generation,
// search. Uses cfg.threads workers with work stealing when threads > 1.
MatchResult match_query(const Graph& query, const Graph& data, const MatchConfig& cfg,
                        EmbeddingSink* sink = nullptr);

// Builds the candidate space without searching; used for build-time scaling
// measurements and by match_query itself.
struct BuiltSpace {
    CandidateSpace space;
    bool empty_candidates = false;
    double filter_sec = 0;
    double build_sec = 0;
    double reservation_sec = 0;
};
BuiltSpace build_space_pipeline(const Graph& query, const Graph& data, const MatchConfig& cfg);

} // namespace gmatch

#endif
