#include "gmatch/cli.hpp"

#include "gmatch/graph.hpp"
#include "gmatch/oracle.hpp"
#include "gmatch/search.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <ostream>
#include <sstream>

namespace gmatch {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

struct MatchArgs {
    std::string data_path, query_path;
    std::uint64_t limit = 100000;
    double time_limit = 0;
    std::uint32_t reservation_size = 3;
    bool no_reservation = false;
    bool no_nv = false;
    bool no_ne = false;
    bool no_backjump = false;
    std::uint32_t threads = 1;
    bool json_out = false;
    bool strict_degrees = false;
    std::uint64_t seed = 0;
    std::string emit_path;
};

MatchConfig to_config(const MatchArgs& a) {
    MatchConfig cfg;
    cfg.embedding_limit = a.limit;
    cfg.time_limit_sec = a.time_limit;
    cfg.reservation_size = a.no_reservation ? 0 : a.reservation_size;
    cfg.use_nv = !a.no_nv;
    cfg.use_ne = !a.no_ne;
    cfg.use_backjump = !a.no_backjump;
    cfg.threads = a.threads;
    return cfg;
}

void add_match_flags(CLI::App* cmd, MatchArgs& a) {
    cmd->add_option("-d,--data", a.data_path, "data graph file")->required();
    cmd->add_option("-q,--query", a.query_path, "query graph file")->required();
    cmd->add_option("--limit", a.limit, "stop after this many embeddings (0 = unlimited)");
    cmd->add_option("--time-limit", a.time_limit, "per-run time limit in seconds");
    cmd->add_option("--reservation-size", a.reservation_size, "reservation guard size limit");
    cmd->add_flag("--no-reservation", a.no_reservation, "trivial reservation guards only");
    cmd->add_flag("--no-nv", a.no_nv, "disable vertex nogood guards");
    cmd->add_flag("--no-ne", a.no_ne, "disable edge nogood guards");
    cmd->add_flag("--no-backjump", a.no_backjump, "disable backjumping");
    cmd->add_option("--threads", a.threads, "worker threads");
    cmd->add_option("--seed", a.seed, "seed for randomized components");
    cmd->add_flag("--strict-degrees", a.strict_degrees, "validate declared vertex degrees");
}

json report_json(const MatchArgs& a, const MatchConfig& cfg, const MatchResult& r,
                 double wall_sec) {
    return json{{"data", a.data_path},
                {"query", a.query_path},
                {"config",
                 {{"limit", cfg.embedding_limit},
                  {"time_limit_sec", cfg.time_limit_sec},
                  {"reservation_size", cfg.reservation_size},
                  {"nv", cfg.use_nv},
                  {"ne", cfg.use_ne},
                  {"backjump", cfg.use_backjump},
                  {"threads", cfg.threads}}},
                {"embeddings", r.embedding_count},
                {"termination", to_string(r.termination)},
                {"wall_sec", wall_sec},
                {"recursions", r.stats.recursions},
                {"pruned_injectivity", r.stats.pruned_injectivity},
                {"pruned_reservation", r.stats.pruned_reservation},
                {"pruned_nv", r.stats.pruned_nv},
                {"pruned_ne", r.stats.pruned_ne},
                {"backjumps", r.stats.backjumps},
                {"filter_sec", r.filter_sec},
                {"build_sec", r.build_sec},
                {"reservation_sec", r.reservation_sec},
                {"search_sec", r.search_sec}};
}

// Embedding dump: one line per embedding, data-vertex ids in query-vertex
// order.
class FileSink : public EmbeddingSink {
public:
    FileSink(const std::string& path, const MatchingOrder& order)
        : out_(path), order_(order) {
        if (!out_) throw GraphError("cannot open '" + path + "' for writing");
    }
    void accept(std::span<const VertexId> emb) override {
        row_.assign(emb.size(), 0);
        for (std::size_t i = 0; i < emb.size(); ++i) row_[order_.order[i]] = emb[i];
        for (std::size_t i = 0; i < row_.size(); ++i) {
            if (i) out_ << ' ';
            out_ << row_[i];
        }
        out_ << '\n';
    }

private:
    std::ofstream out_;
    const MatchingOrder& order_;
    std::vector<VertexId> row_;
};

int cmd_match(const MatchArgs& a, std::ostream& out, std::ostream& err) {
    Graph data = load_graph(a.data_path, {a.strict_degrees});
    Graph query = load_graph(a.query_path, {a.strict_degrees});
    MatchConfig cfg = to_config(a);

    auto t0 = Clock::now();
    MatchResult r;
    if (!a.emit_path.empty()) {
        // Build first so the sink can map positions back to query ids.
        BuiltSpace built = build_space_pipeline(query, data, cfg);
        FileSink sink(a.emit_path, built.space.order);
        SpaceSearchResult sr = search_space(built.space, cfg, nullptr, &sink);
        r.stats = sr.stats;
        r.termination = sr.termination;
        r.embedding_count = sr.embedding_count;
        r.order = built.space.order;
        r.filter_sec = built.filter_sec;
        r.build_sec = built.build_sec;
        r.reservation_sec = built.reservation_sec;
    } else {
        r = match_query(query, data, cfg);
    }
    double wall = std::chrono::duration<double>(Clock::now() - t0).count();

    if (a.json_out) {
        out << report_json(a, cfg, r, wall).dump() << '\n';
    } else {
        out << "embeddings   " << r.embedding_count << '\n'
            << "termination  " << to_string(r.termination) << '\n'
            << "recursions   " << r.stats.recursions << '\n'
            << "pruned       injectivity=" << r.stats.pruned_injectivity
            << " reservation=" << r.stats.pruned_reservation << " nv=" << r.stats.pruned_nv
            << " ne=" << r.stats.pruned_ne << '\n'
            << "backjumps    " << r.stats.backjumps << '\n'
            << "build        filter=" << r.filter_sec << "s space=" << r.build_sec
            << "s reservation=" << r.reservation_sec << "s\n"
            << "search       " << r.search_sec << "s (wall " << wall << "s)\n";
    }
    (void)err;
    return r.termination == Termination::kComplete ? 0 : 2;
}

int cmd_verify(const std::string& data_path, const std::string& query_path, bool force,
               std::ostream& out, std::ostream& err) {
    Graph data = load_graph(data_path);
    Graph query = load_graph(query_path);

    if (!force) {
        if (data.vertex_count() > 40 || query.vertex_count() > 8 ||
            data.label_universe().size() > 6) {
            err << "instance outside the oracle envelope (data <= 40 vertices, query <= 8, "
                   "<= 6 labels); pass --force to run anyway\n";
            return 1;
        }
    }

    MatchConfig cfg;
    cfg.collect_embeddings = true;
    MatchResult r = match_query(query, data, cfg);
    OracleResult o = brute_force_enumerate(query, data);

    auto engine = r.embeddings;
    auto oracle = o.embeddings;
    std::sort(engine.begin(), engine.end());
    std::sort(oracle.begin(), oracle.end());
    if (engine == oracle) {
        out << "ok: " << engine.size() << " embeddings\n";
        return 0;
    }
    err << "MISMATCH: engine " << engine.size() << " vs oracle " << oracle.size() << '\n';
    // first differing embedding, one side or the other
    std::size_t i = 0;
    while (i < engine.size() && i < oracle.size() && engine[i] == oracle[i]) ++i;
    auto dump = [&](const char* who, const std::vector<std::vector<VertexId>>& v) {
        if (i < v.size()) {
            err << who << ":";
            for (VertexId x : v[i]) err << ' ' << x;
            err << '\n';
        }
    };
    dump("engine", engine);
    dump("oracle", oracle);
    return 3;
}

int cmd_gen(const std::string& data_path, const std::string& out_dir, const std::string& sizes_s,
            std::uint32_t count, std::uint64_t seed, std::ostream& out) {
    Graph data = load_graph(data_path);
    std::vector<std::uint32_t> sizes;
    std::stringstream ss(sizes_s);
    for (std::string tok; std::getline(ss, tok, ',');)
        if (!tok.empty()) sizes.push_back(static_cast<std::uint32_t>(std::stoul(tok)));
    if (sizes.empty()) throw GraphError("--sizes is empty");

    Workload w = generate_workload(data, sizes, count, seed);
    w.data_path = data_path;
    write_workload(w, out_dir);
    out << "wrote " << w.queries.size() << " queries to " << out_dir << '\n';
    return 0;
}

// Toggle-config tokens: "all", "none", or comma-separated key=value with keys
// r, nv, ne, bj (e.g. "r=0,nv=off").
MatchConfig parse_bench_config(const std::string& spec) {
    MatchConfig cfg;
    if (spec == "all" || spec.empty()) return cfg;
    if (spec == "none") {
        cfg.reservation_size = 0;
        cfg.use_nv = cfg.use_ne = cfg.use_backjump = false;
        return cfg;
    }
    std::stringstream ss(spec);
    for (std::string tok; std::getline(ss, tok, ',');) {
        auto eq = tok.find('=');
        if (eq == std::string::npos) throw GraphError("bad config token '" + tok + "'");
        std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
        bool on = val == "on" || val == "1" || val == "true";
        if (key == "r")
            cfg.reservation_size = static_cast<std::uint32_t>(std::stoul(val));
        else if (key == "nv")
            cfg.use_nv = on;
        else if (key == "ne")
            cfg.use_ne = on;
        else if (key == "bj")
            cfg.use_backjump = on;
        else
            throw GraphError("unknown config key '" + key + "'");
    }
    return cfg;
}

struct BenchArgs {
    std::string data_path, workload_dir, out_path;
    std::vector<std::string> configs;
    std::uint64_t limit = 100000;
    double per_query_time_limit = 0;
    std::uint32_t subgroup_limit = 0;
    double subgroup_time = 0;
    std::uint32_t threads = 1;
};

int cmd_bench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
    Graph data = load_graph(a.data_path);
    Workload w = read_workload(a.workload_dir);
    std::vector<std::string> config_names = a.configs;
    if (config_names.empty()) config_names.push_back("all");

    std::ofstream file_out;
    std::ostream* rows = &out;
    if (!a.out_path.empty()) {
        file_out.open(a.out_path);
        if (!file_out) throw GraphError("cannot open '" + a.out_path + "'");
        rows = &file_out;
    }

    std::uint64_t over_1s = 0, over_1min = 0, over_1hr = 0, errors = 0;
    bool dnf = false;
    double subgroup_sec = 0;
    std::uint32_t in_subgroup = 0;

    for (std::size_t qi = 0; qi < w.queries.size() && !dnf; ++qi) {
        const auto& q = w.queries[qi];
        for (const auto& cname : config_names) {
            MatchConfig cfg = parse_bench_config(cname);
            cfg.embedding_limit = a.limit;
            cfg.time_limit_sec = a.per_query_time_limit;
            cfg.threads = a.threads;

            json row{{"query", q.file}, {"config", cname}, {"class", q.dense ? "dense" : "sparse"}};
            auto t0 = Clock::now();
            try {
                MatchResult r = match_query(q.graph, data, cfg);
                double sec = std::chrono::duration<double>(Clock::now() - t0).count();
                row["embeddings"] = r.embedding_count;
                row["recursions"] = r.stats.recursions;
                row["termination"] = to_string(r.termination);
                row["time_sec"] = sec;
                row["pruned_reservation"] = r.stats.pruned_reservation;
                row["pruned_nv"] = r.stats.pruned_nv;
                row["pruned_ne"] = r.stats.pruned_ne;
                row["backjumps"] = r.stats.backjumps;
                row["status"] = "ok";
                if (sec > 1.0) ++over_1s;
                if (sec > 60.0) ++over_1min;
                if (sec > 3600.0 || r.termination == Termination::kTimeLimit) ++over_1hr;
                subgroup_sec += sec;
            } catch (const std::exception& e) {
                row["status"] = "error";
                row["message"] = e.what();
                ++errors;
            }
            (*rows) << row.dump() << '\n';
        }
        if (a.subgroup_limit && ++in_subgroup == a.subgroup_limit) {
            if (a.subgroup_time > 0 && subgroup_sec > a.subgroup_time) dnf = true;
            in_subgroup = 0;
            subgroup_sec = 0;
        }
    }

    json summary{{"type", "summary"},  {"queries", w.queries.size()},
                 {"configs", config_names.size()}, {"over_1s", over_1s},
                 {"over_1min", over_1min},         {"over_1hr", over_1hr},
                 {"errors", errors},               {"dnf", dnf}};
    (*rows) << summary.dump() << '\n';
    err << "bench done: " << w.queries.size() << " queries, dnf=" << (dnf ? "yes" : "no")
        << '\n';
    return 0;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"subgraph-isomorphism embedding enumerator with guard-based pruning"};
    app.require_subcommand(1);

    MatchArgs ma;
    auto* match = app.add_subcommand("match", "enumerate embeddings of a query in a data graph");
    add_match_flags(match, ma);
    match->add_flag("--json", ma.json_out, "machine-readable report");
    match->add_option("--emit-embeddings", ma.emit_path, "write embeddings to this file");

    std::string v_data, v_query;
    bool v_force = false;
    auto* verify = app.add_subcommand("verify", "compare the engine against the brute-force oracle");
    verify->add_option("-d,--data", v_data)->required();
    verify->add_option("-q,--query", v_query)->required();
    verify->add_flag("--force", v_force, "run even outside the oracle envelope");

    std::string g_data, g_out = "workload", g_sizes = "8";
    std::uint32_t g_count = 10;
    std::uint64_t g_seed = 1;
    auto* gen = app.add_subcommand("gen", "generate a random-walk query workload");
    gen->add_option("-d,--data", g_data)->required();
    gen->add_option("-o,--out", g_out, "output directory");
    gen->add_option("--sizes", g_sizes, "comma-separated query sizes");
    gen->add_option("--count", g_count, "queries per size");
    gen->add_option("--seed", g_seed);

    BenchArgs ba;
    auto* bench = app.add_subcommand("bench", "run a workload under one or more guard configs");
    bench->add_option("-d,--data", ba.data_path)->required();
    bench->add_option("-w,--workload", ba.workload_dir)->required();
    bench->add_option("--config", ba.configs, "all | none | r=..,nv=..,ne=..,bj=..")
        ->take_all();
    bench->add_option("--limit", ba.limit);
    bench->add_option("--per-query-time-limit", ba.per_query_time_limit);
    bench->add_option("--subgroup-limit", ba.subgroup_limit);
    bench->add_option("--subgroup-time", ba.subgroup_time);
    bench->add_option("--threads", ba.threads);
    bench->add_option("--out", ba.out_path, "write result rows to this file");

    std::vector<std::string> argv(args);
    try {
        std::reverse(argv.begin(), argv.end());
        app.parse(std::move(argv));
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << e.what() << '\n';
        return 1;
    }

    try {
        if (*match) return cmd_match(ma, out, err);
        if (*verify) return cmd_verify(v_data, v_query, v_force, out, err);
        if (*gen) return cmd_gen(g_data, g_out, g_sizes, g_count, g_seed, out);
        if (*bench) return cmd_bench(ba, out, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

} // namespace gmatch
