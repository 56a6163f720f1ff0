#include "gmatch/oracle.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace gmatch {

namespace {

// BFS order from vertex 0; any connected order works for the oracle, this one
// is fixed for determinism. Falls through remaining components if the query
// is disconnected.
std::vector<VertexId> bfs_order(const Graph& q) {
    const VertexId n = q.vertex_count();
    std::vector<VertexId> order;
    std::vector<char> seen(n, 0);
    for (VertexId s = 0; s < n; ++s) {
        if (seen[s]) continue;
        seen[s] = 1;
        std::size_t head = order.size();
        order.push_back(s);
        while (head < order.size()) {
            VertexId v = order[head++];
            for (VertexId w : q.neighbors(v)) {
                if (!seen[w]) {
                    seen[w] = 1;
                    order.push_back(w);
                }
            }
        }
    }
    return order;
}

} // namespace

OracleResult brute_force_enumerate(const Graph& query, const Graph& data, std::uint64_t cap) {
    OracleResult res;
    const VertexId nq = query.vertex_count();
    if (nq == 0) return res;

    std::vector<VertexId> order = bfs_order(query);
    std::unordered_map<Label, std::vector<VertexId>> by_label;
    for (VertexId v = 0; v < data.vertex_count(); ++v) by_label[data.label(v)].push_back(v);

    std::vector<VertexId> image(nq, 0);
    std::vector<char> used(data.vertex_count(), 0);

    auto recurse = [&](auto&& self, std::uint32_t depth) -> bool {
        if (depth == nq) {
            if (cap && res.embeddings.size() >= cap) {
                res.truncated = true;
                return false;
            }
            res.embeddings.push_back(image);
            return true;
        }
        VertexId u = order[depth];
        auto it = by_label.find(query.label(u));
        if (it == by_label.end()) return true;
        for (VertexId v : it->second) {
            if (used[v]) continue;
            bool ok = true;
            for (VertexId w : query.neighbors(u)) {
                // only already-assigned query neighbors constrain v
                for (std::uint32_t d = 0; d < depth; ++d) {
                    if (order[d] == w && !data.has_edge(image[w], v)) {
                        ok = false;
                        break;
                    }
                }
                if (!ok) break;
            }
            if (!ok) continue;
            image[u] = v;
            used[v] = 1;
            bool keep_going = self(self, depth + 1);
            used[v] = 0;
            if (!keep_going) return false;
        }
        return true;
    };
    recurse(recurse, 0);
    return res;
}

std::uint64_t rng_seed(std::uint64_t seed) {
    // splitmix64 scramble so nearby seeds diverge
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

static std::uint64_t rng_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::uint64_t rng_below(std::uint64_t& state, std::uint64_t n) {
    return n ? rng_next(state) % n : 0;
}

Graph random_labeled_graph(std::uint32_t n, std::uint64_t m, std::uint32_t label_count,
                           std::uint64_t seed) {
    const std::uint64_t max_edges = static_cast<std::uint64_t>(n) * (n - 1) / 2;
    if (m > max_edges) throw GraphError("requested edge count exceeds n(n-1)/2");
    std::uint64_t state = rng_seed(seed);

    std::vector<Label> labels(n);
    for (auto& l : labels) l = static_cast<Label>(rng_below(state, label_count));

    // Partial Fisher-Yates over the edge universe, indexed arithmetically.
    std::unordered_map<std::uint64_t, std::uint64_t> moved;
    auto at = [&](std::uint64_t i) {
        auto it = moved.find(i);
        return it == moved.end() ? i : it->second;
    };
    std::vector<std::pair<VertexId, VertexId>> edges;
    edges.reserve(m);
    for (std::uint64_t i = 0; i < m; ++i) {
        std::uint64_t j = i + rng_below(state, max_edges - i);
        std::uint64_t pick = at(j);
        moved[j] = at(i);
        // decode pick -> (a, b), a < b
        std::uint64_t a = 0, before = 0;
        while (before + (n - 1 - a) <= pick) before += n - 1 - a++;
        std::uint64_t b = a + 1 + (pick - before);
        edges.emplace_back(static_cast<VertexId>(a), static_cast<VertexId>(b));
    }
    return Graph(std::move(labels), edges);
}

Graph random_walk_query(const Graph& data, std::uint32_t n, std::uint64_t seed) {
    if (n == 0 || n > data.vertex_count())
        throw GraphError("walk size out of range for this data graph");
    std::uint64_t state = rng_seed(seed);

    const int max_restarts = 100;
    for (int restart = 0; restart < max_restarts; ++restart) {
        VertexId cur = static_cast<VertexId>(rng_below(state, data.vertex_count()));
        std::vector<VertexId> visited{cur};
        std::vector<char> in(data.vertex_count(), 0);
        in[cur] = 1;
        std::uint64_t stalled = 0;
        const std::uint64_t stall_budget = 10ull * n;
        while (visited.size() < n && stalled < stall_budget) {
            auto nb = data.neighbors(cur);
            if (nb.empty()) break;
            cur = nb[rng_below(state, nb.size())];
            if (!in[cur]) {
                in[cur] = 1;
                visited.push_back(cur);
                stalled = 0;
            } else {
                ++stalled;
            }
        }
        if (visited.size() < n) continue;

        std::sort(visited.begin(), visited.end());
        std::vector<Label> labels(n);
        std::unordered_map<VertexId, VertexId> remap;
        for (std::uint32_t i = 0; i < n; ++i) {
            remap[visited[i]] = i;
            labels[i] = data.label(visited[i]);
        }
        std::vector<std::pair<VertexId, VertexId>> edges;
        for (VertexId v : visited)
            for (VertexId w : data.neighbors(v))
                if (v < w && in[w]) edges.emplace_back(remap[v], remap[w]);
        return Graph(std::move(labels), edges);
    }
    throw GraphError("random walk failed to collect " + std::to_string(n) +
                     " distinct vertices");
}

Workload generate_workload(const Graph& data, const std::vector<std::uint32_t>& sizes,
                           std::uint32_t count_per_size, std::uint64_t seed) {
    Workload w;
    w.seed = seed;
    std::uint64_t sub = 0;
    for (std::uint32_t size : sizes) {
        for (std::uint32_t i = 0; i < count_per_size; ++i) {
            Graph q = random_walk_query(data, size, rng_seed(seed) ^ (++sub));
            WorkloadQuery wq;
            wq.graph = std::move(q);
            wq.dense = 2.0 * wq.graph.edge_count() >= 3.0 * wq.graph.vertex_count();
            std::ostringstream name;
            name << "q" << size << (wq.dense ? "D" : "S") << "_" << i << ".graph";
            wq.file = name.str();
            w.queries.push_back(std::move(wq));
        }
    }
    return w;
}

void write_workload(const Workload& w, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    std::ofstream manifest(fs::path(dir) / "manifest.txt");
    manifest << "# workload manifest\n";
    manifest << "seed " << w.seed << '\n';
    manifest << "data " << w.data_path << '\n';
    manifest << "count " << w.queries.size() << '\n';
    for (const auto& q : w.queries) {
        std::ofstream f(fs::path(dir) / q.file);
        serialize_graph(q.graph, f);
        manifest << q.file << ' ' << q.graph.vertex_count() << ' ' << q.graph.edge_count()
                 << ' ' << (q.dense ? "dense" : "sparse") << '\n';
    }
}

Workload read_workload(const std::string& dir) {
    namespace fs = std::filesystem;
    std::ifstream manifest(fs::path(dir) / "manifest.txt");
    if (!manifest) throw GraphError("cannot open manifest in '" + dir + "'");
    Workload w;
    std::string line;
    while (std::getline(manifest, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string head;
        ls >> head;
        if (head == "seed") {
            ls >> w.seed;
        } else if (head == "data") {
            ls >> w.data_path;
        } else if (head == "count") {
            continue;
        } else {
            WorkloadQuery q;
            q.file = head;
            std::uint32_t n;
            std::uint64_t m;
            std::string cls;
            ls >> n >> m >> cls;
            q.dense = cls == "dense";
            q.graph = load_graph((fs::path(dir) / q.file).string());
            w.queries.push_back(std::move(q));
        }
    }
    return w;
}

ComparisonReport compare_runs(const Graph& query, const Graph& data,
                              const std::vector<std::pair<std::string, MatchConfig>>& configs) {
    ComparisonReport rep;
    OracleResult oracle = brute_force_enumerate(query, data);
    rep.oracle_count = oracle.embeddings.size();
    std::sort(oracle.embeddings.begin(), oracle.embeddings.end());

    for (const auto& [name, cfg] : configs) {
        MatchConfig c = cfg;
        c.collect_embeddings = true;
        MatchResult r = match_query(query, data, c);
        std::sort(r.embeddings.begin(), r.embeddings.end());
        ComparisonRun run;
        run.config_name = name;
        run.engine_count = r.embedding_count;
        run.recursions = r.stats.recursions;
        run.set_equal = r.embeddings == oracle.embeddings;
        rep.all_equal = rep.all_equal && run.set_equal;
        rep.runs.push_back(std::move(run));
    }
    return rep;
}

} // namespace gmatch
