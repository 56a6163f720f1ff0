#include "gmatch/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace gmatch {

Graph::Graph(std::vector<Label> labels, const std::vector<std::pair<VertexId, VertexId>>& edges)
    : labels_(std::move(labels)) {
    const auto n = static_cast<VertexId>(labels_.size());
    std::vector<std::pair<VertexId, VertexId>> dir;
    dir.reserve(edges.size() * 2);
    for (auto [a, b] : edges) {
        if (a >= n || b >= n) throw GraphError("edge endpoint out of range");
        if (a == b) throw GraphError("self-loop on vertex " + std::to_string(a));
        dir.emplace_back(a, b);
        dir.emplace_back(b, a);
    }
    std::sort(dir.begin(), dir.end());
    dir.erase(std::unique(dir.begin(), dir.end()), dir.end());

    offsets_.assign(n + 1, 0);
    adjacency_.reserve(dir.size());
    for (auto [a, b] : dir) {
        ++offsets_[a + 1];
        adjacency_.push_back(b);
    }
    for (VertexId v = 0; v < n; ++v) offsets_[v + 1] += offsets_[v];
    edge_count_ = dir.size() / 2;
}

bool Graph::has_edge(VertexId a, VertexId b) const {
    auto nb = neighbors(a);
    return std::binary_search(nb.begin(), nb.end(), b);
}

std::vector<Label> Graph::label_universe() const {
    std::vector<Label> u(labels_);
    std::sort(u.begin(), u.end());
    u.erase(std::unique(u.begin(), u.end()), u.end());
    return u;
}

bool Graph::is_connected() const {
    const VertexId n = vertex_count();
    if (n == 0) return true;
    std::vector<char> seen(n, 0);
    std::vector<VertexId> stack{0};
    seen[0] = 1;
    VertexId reached = 1;
    while (!stack.empty()) {
        VertexId v = stack.back();
        stack.pop_back();
        for (VertexId w : neighbors(v)) {
            if (!seen[w]) {
                seen[w] = 1;
                ++reached;
                stack.push_back(w);
            }
        }
    }
    return reached == n;
}

namespace {

struct LineReader {
    std::istream& in;
    std::size_t lineno = 0;

    // Returns false at EOF; skips comments and blank lines.
    bool next(std::istringstream& out) {
        std::string line;
        while (std::getline(in, line)) {
            ++lineno;
            std::size_t i = line.find_first_not_of(" \t\r");
            if (i == std::string::npos || line[i] == '#') continue;
            out.clear();
            out.str(line);
            return true;
        }
        return false;
    }
};

} // namespace

Graph parse_graph(std::istream& in, const ParseOptions& opts) {
    LineReader rd{in};
    std::istringstream ls;

    if (!rd.next(ls)) throw GraphError("empty input");
    char tag = 0;
    std::int64_t n = -1, m = -1;
    if (!(ls >> tag >> n >> m) || tag != 't' || n < 0 || m < 0)
        throw GraphError("malformed header, expected 't <vertices> <edges>'", rd.lineno);

    std::vector<Label> labels(static_cast<std::size_t>(n), 0);
    std::vector<std::int64_t> declared_degree(static_cast<std::size_t>(n), -1);
    for (std::int64_t i = 0; i < n; ++i) {
        if (!rd.next(ls)) throw GraphError("unexpected end of input in vertex section", rd.lineno);
        std::int64_t id = -1, lab = -1, deg = -1;
        if (!(ls >> tag >> id >> lab >> deg) || tag != 'v' || lab < 0 || deg < 0)
            throw GraphError("malformed vertex line", rd.lineno);
        if (id < 0 || id >= n) throw GraphError("vertex id out of range", rd.lineno);
        if (declared_degree[id] >= 0) throw GraphError("duplicate vertex id", rd.lineno);
        labels[id] = static_cast<Label>(lab);
        declared_degree[id] = deg;
    }

    std::vector<std::pair<VertexId, VertexId>> edges;
    edges.reserve(static_cast<std::size_t>(m));
    for (std::int64_t i = 0; i < m; ++i) {
        if (!rd.next(ls)) throw GraphError("unexpected end of input in edge section", rd.lineno);
        std::int64_t a = -1, b = -1;
        if (!(ls >> tag >> a >> b) || tag != 'e')
            throw GraphError("malformed edge line", rd.lineno);
        if (a < 0 || a >= n || b < 0 || b >= n)
            throw GraphError("vertex id out of range", rd.lineno);
        if (a == b) throw GraphError("self-loop on vertex " + std::to_string(a), rd.lineno);
        edges.emplace_back(static_cast<VertexId>(a), static_cast<VertexId>(b));
    }

    Graph g(std::move(labels), edges);
    if (opts.strict_degrees) {
        for (VertexId v = 0; v < g.vertex_count(); ++v) {
            if (declared_degree[v] != g.degree(v))
                throw GraphError("declared degree of vertex " + std::to_string(v) + " is " +
                                 std::to_string(declared_degree[v]) + ", actual " +
                                 std::to_string(g.degree(v)));
        }
    }
    return g;
}

Graph parse_graph(const std::string& text, const ParseOptions& opts) {
    std::istringstream in(text);
    return parse_graph(in, opts);
}

Graph load_graph(const std::string& path, const ParseOptions& opts) {
    std::ifstream in(path);
    if (!in) throw GraphError("cannot open '" + path + "'");
    return parse_graph(in, opts);
}

void serialize_graph(const Graph& g, std::ostream& out) {
    out << "t " << g.vertex_count() << ' ' << g.edge_count() << '\n';
    for (VertexId v = 0; v < g.vertex_count(); ++v)
        out << "v " << v << ' ' << g.label(v) << ' ' << g.degree(v) << '\n';
    for (VertexId v = 0; v < g.vertex_count(); ++v)
        for (VertexId w : g.neighbors(v))
            if (v < w) out << "e " << v << ' ' << w << '\n';
}

std::string serialize_graph(const Graph& g) {
    std::ostringstream out;
    serialize_graph(g, out);
    return out.str();
}

bool NlfSignature::dominates(const NlfSignature& other) const {
    for (const auto& [lab, c] : other.entries)
        if (count(lab) < c) return false;
    return true;
}

NlfSignature nlf_signature(const Graph& g, VertexId v) {
    NlfSignature sig;
    for (VertexId w : g.neighbors(v)) {
        Label l = g.label(w);
        bool found = false;
        for (auto& [lab, c] : sig.entries) {
            if (lab == l) {
                ++c;
                found = true;
                break;
            }
        }
        if (!found) sig.entries.emplace_back(l, 1);
    }
    std::sort(sig.entries.begin(), sig.entries.end());
    return sig;
}

std::vector<char> two_core(const Graph& g) {
    const VertexId n = g.vertex_count();
    std::vector<std::uint32_t> deg(n);
    std::vector<VertexId> peel;
    for (VertexId v = 0; v < n; ++v) {
        deg[v] = g.degree(v);
        if (deg[v] <= 1) peel.push_back(v);
    }
    std::vector<char> in_core(n, 1);
    for (VertexId v : peel) in_core[v] = 0;
    while (!peel.empty()) {
        VertexId v = peel.back();
        peel.pop_back();
        for (VertexId w : g.neighbors(v)) {
            if (in_core[w] && --deg[w] <= 1) {
                in_core[w] = 0;
                peel.push_back(w);
            }
        }
    }
    return in_core;
}

} // namespace gmatch
