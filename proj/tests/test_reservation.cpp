#include "gmatch/reservation.hpp"

#include "gmatch/oracle.hpp"
#include "gmatch/plan.hpp"
#include "gmatch/search.hpp"

#include <doctest.h>

#include "fixtures.hpp"
#include "subembed.hpp"

#include <algorithm>

using namespace gmatch;

namespace {

std::vector<VertexId> guard_of(const CandidateSpace& cs, std::uint32_t i, VertexId v) {
    return cs.reservation[i][cs.cand_index(i, v)].vertices;
}
bool trivial_of(const CandidateSpace& cs, std::uint32_t i, VertexId v) {
    return cs.reservation[i][cs.cand_index(i, v)].trivial;
}

} // namespace

TEST_CASE("matchability on the example space") {
    auto cs = fixtures::example_space();

    SUBCASE("{v0,v1} cannot be matched before position 1") {
        // both are candidates only of u0 among earlier vertices, so a
        // two-element set cannot fit
        std::vector<VertexId> s{0, 1};
        CHECK_FALSE(is_matchable(s, 1, cs.inv_mask));
        CHECK(is_matchable(std::vector<VertexId>{0}, 1, cs.inv_mask));
    }
    SUBCASE("v13 is matchable nowhere before position 4") {
        std::vector<VertexId> s{13};
        CHECK_FALSE(is_matchable(s, 2, cs.inv_mask));
        CHECK_FALSE(is_matchable(s, 4, cs.inv_mask));
    }
    SUBCASE("the empty set is vacuously matchable") {
        CHECK(is_matchable(std::vector<VertexId>{}, 0, cs.inv_mask));
        CHECK(is_matchable(std::vector<VertexId>{}, 3, cs.inv_mask));
    }
}

TEST_CASE("reservation edge sets") {
    auto cs = fixtures::example_space();

    SUBCASE("trivial forward guards unfold to self-pairs") {
        // (u3, v9) regarding u4: forward candidates {v0}, all trivial
        auto er = build_reservation_edges(cs, 3, cs.cand_index(3, 9), 4);
        REQUIRE(er.edges.size() == 1);
        CHECK(er.edges[0] == std::pair<VertexId, VertexId>{0, 0});
    }
    SUBCASE("no adjacent forward candidates means no edges") {
        // v13 has no neighbor in C(u3), so (u3,.) never reaches it; take a
        // candidate pair with an empty intersection instead: (u1, v4) has
        // only v7 in C(u2), so regarding u2 from (u1, v2): {v6, v7}
        auto er = build_reservation_edges(cs, 1, cs.cand_index(1, 4), 2);
        // v4's only C(u2)-neighbor is v7 whose guard is {v0}
        REQUIRE(er.edges.size() == 1);
        CHECK(er.edges[0].first == 7);
    }
}

TEST_CASE("approximate vertex cover honors matchability and the preference rule") {
    auto cs = fixtures::example_space();

    SUBCASE("single edge picks an endpoint that stays matchable") {
        ReservationEdgeSet er;
        er.edges = {{9, 0}}; // v9 is matchable nowhere early; v0 is
        auto s = approx_vertex_cover(er, 3, 2, cs.inv_mask);
        REQUIRE(s);
        CHECK(*s == std::vector<VertexId>{0});
    }
    SUBCASE("coverage tie prefers the first endpoint") {
        ReservationEdgeSet er;
        er.edges = {{0, 1}};
        auto s = approx_vertex_cover(er, 3, 4, cs.inv_mask); // both matchable at 4
        REQUIRE(s);
        CHECK(*s == std::vector<VertexId>{0});
    }
    SUBCASE("higher-coverage endpoint wins") {
        ReservationEdgeSet er;
        er.edges = {{5, 0}, {6, 0}};
        auto s = approx_vertex_cover(er, 3, 4, cs.inv_mask);
        REQUIRE(s);
        CHECK(*s == std::vector<VertexId>{0});
    }
    SUBCASE("empty edge set covers with the empty set") {
        ReservationEdgeSet er;
        auto s = approx_vertex_cover(er, 3, 2, cs.inv_mask);
        REQUIRE(s);
        CHECK(s->empty());
    }
    SUBCASE("unmatchable instance aborts") {
        ReservationEdgeSet er;
        er.edges = {{13, 13}};
        CHECK_FALSE(approx_vertex_cover(er, 3, 2, cs.inv_mask));
    }
    SUBCASE("size limit aborts") {
        ReservationEdgeSet er;
        er.edges = {{5, 6}, {7, 8}}; // disjoint pairs need two vertices
        CHECK_FALSE(approx_vertex_cover(er, 1, 4, cs.inv_mask));
    }
}

TEST_CASE("guard generation on the example space") {
    auto cs = fixtures::example_space();
    generate_reservation_guards(cs, 3);

    // leaves of the order keep trivial guards
    CHECK(trivial_of(cs, 4, 0));
    CHECK(guard_of(cs, 4, 0) == std::vector<VertexId>{0});
    CHECK(trivial_of(cs, 4, 13));

    // propagated guards
    CHECK(guard_of(cs, 3, 9) == std::vector<VertexId>{0});
    CHECK(guard_of(cs, 3, 10) == std::vector<VertexId>{0});
    CHECK(guard_of(cs, 3, 11) == std::vector<VertexId>{1});
    CHECK(guard_of(cs, 2, 5) == std::vector<VertexId>{0});
    CHECK_FALSE(trivial_of(cs, 2, 5));
    CHECK(guard_of(cs, 2, 7) == std::vector<VertexId>{0});
    CHECK(guard_of(cs, 2, 8) == std::vector<VertexId>{1});

    // (u1, v3): {v0,v1} would be needed but is unmatchable, so trivial
    CHECK(trivial_of(cs, 1, 3));
    // (u1, v4) reserves v0 through v7's guard
    CHECK(guard_of(cs, 1, 4) == std::vector<VertexId>{0});

    // nothing can be reserved before position 0
    CHECK(trivial_of(cs, 0, 0));
    CHECK(trivial_of(cs, 0, 1));
}

TEST_CASE("the example's rooted subembeddings are exactly the four known ones") {
    auto cs = fixtures::example_space();
    Graph data = fixtures::data_graph();
    auto subs = testutil::rooted_subembeddings(cs, 1, cs.cand_index(1, 3), data);
    CHECK(subs.members == std::vector<std::uint32_t>{1, 2, 3, 4});
    std::vector<std::vector<VertexId>> want = {
        {3, 5, 9, 0}, {3, 7, 10, 0}, {3, 8, 11, 1}, {3, 8, 12, 1}};
    std::sort(subs.embeddings.begin(), subs.embeddings.end());
    std::sort(want.begin(), want.end());
    CHECK(subs.embeddings == want);
    // all of them hit {v0, v1}
    CHECK(testutil::is_reservation(cs, 1, cs.cand_index(1, 3), {0, 1}, data));
}

TEST_CASE("generated guards are reservations, matchable, and within the size cap") {
    Graph data = fixtures::data_graph();
    auto cs = fixtures::example_space();
    const std::uint32_t r = 3;
    generate_reservation_guards(cs, r);
    for (std::uint32_t i = 0; i < cs.cand.size(); ++i) {
        for (std::uint32_t p = 0; p < cs.cand[i].size(); ++p) {
            const auto& g = cs.reservation[i][p];
            CHECK(testutil::is_reservation(cs, i, p, g.vertices, data));
            if (!g.trivial) {
                CHECK(g.vertices.size() <= r);
                CHECK(is_matchable(g.vertices, i, cs.inv_mask));
            }
        }
    }
}

TEST_CASE("guard soundness on random instances") {
    std::uint64_t seed = 77;
    int done = 0;
    for (int rep = 0; rep < 60 && done < 25; ++rep) {
        Graph data = random_labeled_graph(14, 30, 2, seed + rep);
        Graph query;
        try {
            query = random_walk_query(data, 5, seed * 7 + rep);
        } catch (const GraphError&) {
            continue;
        }
        ++done;
        auto c = dp_refine(query, data, nlf_filter(query, data, ldf_filter(query, data)));
        auto mo = build_matching_order(query, c);
        auto cs = build_candidate_space(query, data, c, mo);
        generate_reservation_guards(cs, 3);
        for (std::uint32_t i = 0; i < cs.cand.size(); ++i)
            for (std::uint32_t p = 0; p < cs.cand[i].size(); ++p) {
                const auto& g = cs.reservation[i][p];
                CHECK(testutil::is_reservation(cs, i, p, g.vertices, data));
                if (!g.trivial) CHECK(is_matchable(g.vertices, i, cs.inv_mask));
            }
    }
    CHECK(done > 0);
}

TEST_CASE("matches_reservation is a subset test on the image") {
    std::vector<std::int32_t> assigned(20, -1);
    assigned[0] = 0;
    assigned[3] = 1;
    ReservationGuard g01{{0}, false};
    CHECK(matches_reservation(g01, assigned));
    ReservationGuard g2{{0, 1}, false};
    CHECK_FALSE(matches_reservation(g2, assigned));
    assigned[1] = 2;
    CHECK(matches_reservation(g2, assigned));
    ReservationGuard empty{{}, false};
    CHECK(matches_reservation(empty, assigned)); // matches everything
}
