#ifndef GMATCH_ORACLE_HPP
#define GMATCH_ORACLE_HPP

#include "gmatch/graph.hpp"
#include "gmatch/search.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace gmatch {

// Ground-truth enumeration by plain depth-first search over label-compatible
// data vertices, checking only the label, adjacency, and injectivity
// constraints. Shares nothing with the engine beyond the graph type.
struct OracleResult {
    std::vector<std::vector<VertexId>> embeddings; // indexed by query vertex id
    bool truncated = false;
};
OracleResult brute_force_enumerate(const Graph& query, const Graph& data,
                                   std::uint64_t cap = 0);

// Deterministic bounded-int sampling so identical seeds give identical
// results on every platform.
std::uint64_t rng_below(std::uint64_t& state, std::uint64_t n);
std::uint64_t rng_seed(std::uint64_t seed);

// Uniform simple graph with exactly m edges and labels uniform over
// label_count. Throws on infeasible m.
Graph random_labeled_graph(std::uint32_t n, std::uint64_t m, std::uint32_t label_count,
                           std::uint64_t seed);

// Subgraph induced by the first n distinct vertices of a random walk, labels
// carried over; vertex ids remapped ascending by original id. Throws when n
// distinct vertices cannot be collected within the restart budget.
Graph random_walk_query(const Graph& data, std::uint32_t n, std::uint64_t seed);

struct WorkloadQuery {
    std::string file;
    Graph graph;
    bool dense = false; // average degree >= 3
};
struct Workload {
    std::uint64_t seed = 0;
    std::string data_path;
    std::vector<WorkloadQuery> queries;
};

Workload generate_workload(const Graph& data, const std::vector<std::uint32_t>& sizes,
                           std::uint32_t count_per_size, std::uint64_t seed);
void write_workload(const Workload& w, const std::string& dir);
Workload read_workload(const std::string& dir);

// Engine-vs-oracle comparison across configurations.
struct ComparisonRun {
    std::string config_name;
    std::uint64_t engine_count = 0;
    std::uint64_t recursions = 0;
    bool set_equal = false;
};
struct ComparisonReport {
    std::uint64_t oracle_count = 0;
    std::vector<ComparisonRun> runs;
    bool all_equal = true;
};
ComparisonReport compare_runs(const Graph& query, const Graph& data,
                              const std::vector<std::pair<std::string, MatchConfig>>& configs);

} // namespace gmatch

#endif
