#ifndef GMATCH_GRAPH_HPP
#define GMATCH_GRAPH_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gmatch {

using VertexId = std::uint32_t;
using Label = std::uint32_t;

class GraphError : public std::runtime_error {
public:
    GraphError(std::string msg, std::size_t line = 0)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + std::move(msg)
                                  : std::move(msg)),
          line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// Immutable vertex-labeled simple undirected graph in compressed
// sorted-adjacency form. Used for both query and data graphs.
class Graph {
public:
    Graph() = default;

    // Builds from an edge list; duplicates are merged, self-loops rejected.
    Graph(std::vector<Label> labels, const std::vector<std::pair<VertexId, VertexId>>& edges);

    VertexId vertex_count() const { return static_cast<VertexId>(labels_.size()); }
    std::uint64_t edge_count() const { return edge_count_; }

    Label label(VertexId v) const { return labels_[v]; }
    const std::vector<Label>& labels() const { return labels_; }

    std::uint32_t degree(VertexId v) const { return offsets_[v + 1] - offsets_[v]; }

    std::span<const VertexId> neighbors(VertexId v) const {
        return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
    }

    // O(log degree) membership test on the sorted neighbor list.
    bool has_edge(VertexId a, VertexId b) const;

    // Distinct labels present, ascending.
    std::vector<Label> label_universe() const;

    bool is_connected() const;

private:
    std::vector<Label> labels_;
    std::vector<std::uint32_t> offsets_;
    std::vector<VertexId> adjacency_;
    std::uint64_t edge_count_ = 0;
};

struct ParseOptions {
    // Validate the per-vertex degree field against the edge list.
    bool strict_degrees = false;
};

// Text format:
//   t <vertex_count> <edge_count>
//   v <id> <label> <degree>     (one per vertex)
//   e <src> <dst>               (one per undirected edge)
// Lines starting with '#' are ignored.
Graph parse_graph(std::istream& in, const ParseOptions& opts = {});
Graph parse_graph(const std::string& text, const ParseOptions& opts = {});
Graph load_graph(const std::string& path, const ParseOptions& opts = {});

void serialize_graph(const Graph& g, std::ostream& out);
std::string serialize_graph(const Graph& g);

// Neighbor label histogram of one vertex: (label, count) pairs sorted by
// label, zero counts omitted.
struct NlfSignature {
    std::vector<std::pair<Label, std::uint32_t>> entries;

    std::uint32_t count(Label l) const {
        for (const auto& [lab, c] : entries)
            if (lab == l) return c;
        return 0;
    }
    // True when this signature has at least `other`'s count for every label.
    bool dominates(const NlfSignature& other) const;
};

NlfSignature nlf_signature(const Graph& g, VertexId v);

// Maximal induced subgraph of minimum degree >= 2, by iterative peeling of
// degree <= 1 vertices. flags[v] == 1 iff v is in the 2-core; an edge is in
// the 2-core iff both endpoints are. Forests yield an all-zero vector.
std::vector<char> two_core(const Graph& g);

} // namespace gmatch

#endif
