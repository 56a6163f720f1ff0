#ifndef GMATCH_TESTS_FIXTURES_HPP
#define GMATCH_TESTS_FIXTURES_HPP

#include "gmatch/candidate_space.hpp"
#include "gmatch/graph.hpp"
#include "gmatch/plan.hpp"

#include <string>

namespace fixtures {

// A 5-vertex query and a 14-vertex data graph with exactly one embedding:
// (u0,v1) (u1,v4) (u2,v7) (u3,v10) (u4,v0). Labels: 0=A 1=B 2=C 3=D.
// The query is its own 2-core (every vertex has degree >= 2).
inline const char* kQueryText = R"(# 5-vertex query
t 5 6
v 0 0 2
v 1 1 2
v 2 2 4
v 3 3 2
v 4 0 2
e 0 1
e 0 2
e 1 2
e 2 3
e 2 4
e 3 4
)";

inline const char* kDataText = R"(# 14-vertex data graph
t 14 27
v 0 0 8
v 1 0 5
v 2 1 3
v 3 1 5
v 4 1 3
v 5 2 4
v 6 2 4
v 7 2 6
v 8 2 5
v 9 3 2
v 10 3 2
v 11 3 3
v 12 3 2
v 13 0 2
e 0 2
e 0 3
e 0 4
e 1 4
e 0 5
e 0 6
e 0 7
e 1 7
e 1 8
e 5 13
e 8 13
e 2 6
e 2 7
e 3 5
e 3 6
e 3 7
e 3 8
e 4 7
e 5 9
e 6 11
e 7 10
e 8 11
e 8 12
e 0 9
e 0 10
e 1 11
e 1 12
)";

inline gmatch::Graph query_graph() { return gmatch::parse_graph(std::string(kQueryText)); }
inline gmatch::Graph data_graph() { return gmatch::parse_graph(std::string(kDataText)); }

// Candidate sets matching the worked example: label-only candidacy except
// v13 dropped from C(u0) by its missing label-B neighbor.
inline gmatch::CandidateSets example_candidates() {
    gmatch::CandidateSets c;
    c.sets = {
        {0, 1},          // u0
        {2, 3, 4},       // u1
        {5, 6, 7, 8},    // u2
        {9, 10, 11, 12}, // u3
        {0, 1, 13},      // u4
    };
    return c;
}

inline gmatch::MatchingOrder identity_order(std::uint32_t n) {
    gmatch::MatchingOrder mo;
    for (std::uint32_t i = 0; i < n; ++i) {
        mo.order.push_back(i);
        mo.position.push_back(i);
    }
    return mo;
}

// Candidate space over the example candidate sets with the identity order, so
// positions coincide with the query ids used throughout these tests.
inline gmatch::CandidateSpace example_space() {
    auto q = query_graph();
    auto g = data_graph();
    return gmatch::build_candidate_space(q, g, example_candidates(), identity_order(5));
}

} // namespace fixtures

#endif
