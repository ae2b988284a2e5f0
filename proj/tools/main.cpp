#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sinkpop/cycle_popper.hpp"
#include "sinkpop/exact.hpp"
#include "sinkpop/graph_io.hpp"
#include "sinkpop/harness.hpp"
#include "sinkpop/multigraph.hpp"
#include "sinkpop/popper.hpp"

namespace {

using namespace sinkpop;

constexpr int kExitParse = 1;
constexpr int kExitNotInClassS = 2;
constexpr int kExitPopCap = 3;
constexpr int kExitTooLarge = 4;
constexpr int kExitUnknownExperiment = 5;
constexpr int kExitVerifyFailed = 10;

int exit_code_for(const Error& e) {
    switch (e.code()) {
        case ErrorCode::NotInClassS: return kExitNotInClassS;
        case ErrorCode::PopCapExceeded: return kExitPopCap;
        case ErrorCode::TooLarge: return kExitTooLarge;
        case ErrorCode::UnknownExperiment: return kExitUnknownExperiment;
        default: return kExitParse;
    }
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("SINKPOP_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            std::cerr << "warning: ignoring non-numeric SINKPOP_SEED\n";
        }
    }
    return 1;
}

struct CommonOpts {
    std::uint64_t seed = default_seed();
    std::string format = "json";
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--seed", opts.seed, "random seed (64-bit decimal)");
    cmd->add_option("--format", opts.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}));
}

ChoiceRule parse_rule(const std::string& name) {
    auto rule = rule_from_string(name);
    if (!rule)
        throw Error(ErrorCode::ParseError, "unknown choice rule `" + name + "`");
    return *rule;
}

Digraph load_digraph(const std::string& path_or_spec, bool bidirect) {
    if (bidirect) return Digraph::bidirect(load_graph(path_or_spec));
    std::ifstream in(path_or_spec);
    if (!in)
        throw Error(ErrorCode::ParseError,
                    "cannot open arc list `" + path_or_spec + "`");
    return read_arc_list(in);
}

void emit_stats_line(std::ostream& out, const std::string& format,
                     std::uint64_t replicate, const PopResult& r) {
    if (format == "json") {
        nlohmann::ordered_json j;
        j["replicate"] = replicate;
        j["tau"] = r.tau;
        j["pop_work"] = r.pop_work;
        j["q"] = r.q;
        out << j.dump() << '\n';
    } else {
        out << replicate << ',' << r.tau << ',' << r.pop_work;
        for (std::uint64_t qv : r.q) out << ',' << qv;
        out << '\n';
    }
}

void emit_report(std::ostream& out, const std::string& format,
                 const ExperimentReport& report) {
    if (format == "json")
        out << report.to_json().dump() << '\n';
    else
        out << report.to_csv_row() << '\n';
}

int cmd_generate(const std::string& spec, const std::string& out_path) {
    Multigraph g = load_graph(spec);
    if (out_path.empty() || out_path == "-") {
        write_edge_list(std::cout, g);
    } else {
        std::ofstream out(out_path);
        if (!out)
            throw Error(ErrorCode::ParseError, "cannot write `" + out_path + "`");
        write_edge_list(out, g);
    }
    return 0;
}

struct SampleOpts {
    CommonOpts common;
    std::string graph;
    std::string rule = "queue-fifo";
    std::uint64_t count = 1;
    std::string stats_path;
    std::string out_prefix;
    std::optional<std::uint64_t> max_pops;
    bool tree = false;
    bool bidirect = false;
    int root = 0;
};

int cmd_sample(const SampleOpts& opt) {
    std::optional<std::ofstream> stats_file;
    std::ostream* stats = nullptr;
    if (!opt.stats_path.empty()) {
        if (opt.stats_path == "-") {
            stats = &std::cout;
        } else {
            stats_file.emplace(opt.stats_path);
            if (!*stats_file)
                throw Error(ErrorCode::ParseError,
                            "cannot write `" + opt.stats_path + "`");
            stats = &*stats_file;
        }
    }
    const bool emit_primary =
        !(stats == &std::cout) || !opt.out_prefix.empty();
    auto open_out = [&](std::uint64_t i) -> std::optional<std::ofstream> {
        if (opt.out_prefix.empty()) return std::nullopt;
        std::ostringstream name;
        name << opt.out_prefix << '_' << i << ".txt";
        std::ofstream f(name.str());
        if (!f)
            throw Error(ErrorCode::ParseError, "cannot write `" + name.str() + "`");
        return f;
    };

    if (opt.tree) {
        Digraph h = load_digraph(opt.graph, opt.bidirect);
        CyclePopConfig cfg;
        cfg.max_pops = opt.max_pops;
        for (std::uint64_t i = 0; i < opt.count; ++i) {
            DstResult r = sample_dst(h, opt.root,
                                     replicate_seed(opt.common.seed, i), cfg);
            if (auto f = open_out(i))
                write_tree(*f, r.tree);
            else if (emit_primary)
                write_tree(std::cout, r.tree);
        }
        return 0;
    }

    Multigraph g = load_graph(opt.graph);
    if (stats && opt.common.format == "csv") {
        *stats << "replicate,tau,pop_work";
        for (int v = 0; v < g.vertex_count(); ++v) *stats << ",q" << v;
        *stats << '\n';
    }
    ChoiceRule rule = parse_rule(opt.rule);
    PopperConfig cfg;
    cfg.max_pops = opt.max_pops;
    for (std::uint64_t i = 0; i < opt.count; ++i) {
        PopResult r =
            sample_fast(g, replicate_seed(opt.common.seed, i), rule, cfg);
        if (auto f = open_out(i))
            write_orientation(*f, g, r.sfo);
        else if (emit_primary)
            write_orientation(std::cout, g, r.sfo);
        if (stats) emit_stats_line(*stats, opt.common.format, i, r);
    }
    return 0;
}

struct EnumerateOpts {
    CommonOpts common;
    std::string graph;
    bool members = false;
    bool exact = false;
    bool trees = false;
    bool bidirect = false;
    int root = 0;
};

std::string rational_string(const Rational& r) {
    std::ostringstream out;
    out << r;
    return out.str();
}

/// Exact-chain report: census size, E tau, per-vertex E Q, and the
/// absorption/tau-distribution summaries.
nlohmann::ordered_json exact_report(const Multigraph& g) {
    ExactChain chain(g);
    nlohmann::ordered_json j;
    j["sfo_count"] = chain.absorbing_states().size();
    ExactScalar tau = chain.expected_tau();
    j["expected_tau"] = {{"value", tau.value}};
    if (tau.exact) j["expected_tau"]["exact"] = rational_string(*tau.exact);

    auto per_q = nlohmann::ordered_json::array();
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        ExactScalar q = chain.expected_q(v);
        nlohmann::ordered_json entry{{"v", v}, {"value", q.value}};
        if (q.exact) entry["exact"] = rational_string(*q.exact);
        per_q.push_back(entry);
    }
    j["per_vertex_q"] = per_q;

    auto dist = chain.absorption_distribution();
    const double uniform = 1.0 / static_cast<double>(dist.size());
    double worst = 0.0;
    bool exactly_uniform = chain.rational_mode();
    for (const auto& p : dist) {
        worst = std::max(worst, std::abs(p.value - uniform));
        if (p.exact &&
            *p.exact != Rational(BigInt(1), BigInt(dist.size())))
            exactly_uniform = false;
    }
    j["absorption"] = {{"per_sfo", uniform},
                       {"max_abs_deviation", worst},
                       {"exactly_uniform",
                        chain.rational_mode() ? nlohmann::json(exactly_uniform)
                                              : nlohmann::json()}};

    TauDistribution td = chain.tau_distribution();
    double mean = 0.0;
    for (std::size_t k = 0; k < td.p.size(); ++k)
        mean += static_cast<double>(k) * td.p[k];
    j["tau_distribution"] = {{"mean", mean},
                             {"horizon", td.p.size() - 1},
                             {"tail", td.tail},
                             {"p0", td.p.empty() ? 0.0 : td.p[0]}};
    return j;
}

int cmd_enumerate(const EnumerateOpts& opt) {
    if (opt.trees) {
        Digraph h = load_digraph(opt.graph, opt.bidirect);
        auto trees = enumerate_dsts(h, opt.root);
        if (opt.common.format == "json") {
            nlohmann::ordered_json j;
            j["tree_count"] = trees.size();
            if (opt.members) {
                auto arr = nlohmann::ordered_json::array();
                for (const auto& t : trees) arr.push_back(t.parent_arc);
                j["trees"] = arr;
            }
            std::cout << j.dump() << '\n';
        } else {
            std::cout << "tree_count," << trees.size() << '\n';
        }
        return 0;
    }
    Multigraph g = load_graph(opt.graph);
    if (opt.exact) {
        std::cout << exact_report(g).dump() << '\n';
        return 0;
    }
    SfoCensus census = enumerate_sfos(g);
    if (opt.common.format == "json") {
        nlohmann::ordered_json j;
        j["sfo_count"] = census.count;
        if (opt.members) {
            auto arr = nlohmann::ordered_json::array();
            for (const Orientation& o : census.members) {
                std::ostringstream line;
                write_orientation(line, g, o);
                arr.push_back(line.str());
            }
            j["members"] = arr;
        }
        std::cout << j.dump() << '\n';
    } else {
        std::cout << "sfo_count," << census.count << '\n';
    }
    return 0;
}

struct VerifyOpts {
    CommonOpts common;
    std::string graph;
    std::uint64_t samples = 100000;
    double alpha = 1e-3;
    std::uint64_t diamond_runs = 500;
    std::uint64_t mono_runs = 200;
};

int cmd_verify(const VerifyOpts& opt) {
    Multigraph g = load_graph(opt.graph);
    require_class_s(g, "verify");
    if (g.free_edge_count() > ExactChain::kMaxFreeEdges)
        throw Error(ErrorCode::TooLarge,
                    "verify needs the census; graph exceeds 2^20 states");

    std::vector<ExperimentReport> reports;
    reports.push_back(
        run_uniformity_experiment(g, opt.samples, opt.common.seed, opt.alpha));
    reports.push_back(run_strong_uniform_time_experiment(
        g, opt.samples, replicate_seed(opt.common.seed, 1), opt.alpha));
    reports.push_back(run_diamond_experiment(
        g, opt.diamond_runs, replicate_seed(opt.common.seed, 2)));
    reports.push_back(run_mean_tau_experiment(
        g, opt.samples, replicate_seed(opt.common.seed, 3)));
    reports.push_back(run_q_bound_experiment(
        g, opt.samples, replicate_seed(opt.common.seed, 4)));

    // monotonicity coupling against the graph with its first non-loop edge
    // doubled (h = g sits inside that supergraph)
    EdgeId doubled = -1;
    for (EdgeId e = 0; e < g.edge_count() && doubled < 0; ++e)
        if (!g.edge(e).is_self_loop()) doubled = e;
    if (doubled >= 0) {
        std::vector<std::pair<int, int>> edges;
        for (const Edge& e : g.edges()) edges.emplace_back(e.a, e.b);
        edges.emplace_back(g.edge(doubled).a, g.edge(doubled).b);
        Multigraph super = Multigraph::build(g.vertex_count(), edges);
        reports.push_back(run_monotonicity_experiment(
            super, g, opt.mono_runs, replicate_seed(opt.common.seed, 5)));
    }

    if (opt.common.format == "csv")
        std::cout << ExperimentReport::csv_header() << '\n';
    bool all_pass = true;
    for (const auto& r : reports) {
        emit_report(std::cout, opt.common.format, r);
        all_pass = all_pass && r.passed();
    }
    return all_pass ? 0 : kExitVerifyFailed;
}

struct ExperimentOpts {
    CommonOpts common;
    std::string name;
    std::string hist_out;
    std::string graph = "theta:3";
    int n = 6;
    int j = 1;
    std::uint64_t samples = 100000;
    std::uint64_t runs = 500;
    double alpha = 1e-3;
    std::string family = "cycle";
    std::vector<int> sizes = {100, 200, 400};
};

int cmd_experiment(const ExperimentOpts& opt) {
    ExperimentReport report;
    if (opt.name == "uniformity") {
        report = run_uniformity_experiment(load_graph(opt.graph), opt.samples,
                                           opt.common.seed, opt.alpha);
    } else if (opt.name == "strong-uniform-time") {
        report = run_strong_uniform_time_experiment(
            load_graph(opt.graph), opt.samples, opt.common.seed, opt.alpha);
    } else if (opt.name == "mean-tau") {
        report = run_mean_tau_experiment(load_graph(opt.graph), opt.samples,
                                         opt.common.seed);
    } else if (opt.name == "q-bound") {
        report = run_q_bound_experiment(load_graph(opt.graph), opt.samples,
                                        opt.common.seed);
    } else if (opt.name == "conditional-cycle") {
        report = run_conditional_cycle_experiment(opt.n, opt.j, opt.samples,
                                                  opt.common.seed);
    } else if (opt.name == "equality") {
        report = run_distribution_equality_experiment(
            opt.n, opt.samples, opt.common.seed, opt.alpha);
    } else if (opt.name == "extremal") {
        report = run_extremal_conditional_experiment(opt.n);
    } else if (opt.name == "scaling") {
        ScalingFamily family = opt.family == "complete"
                                   ? ScalingFamily::Complete
                                   : ScalingFamily::Cycle;
        report = run_scaling_benchmark(family, opt.sizes, opt.samples,
                                       opt.common.seed);
    } else if (opt.name == "walk") {
        report = run_walk_experiment(opt.n, opt.samples, opt.common.seed,
                                     opt.alpha);
    } else if (opt.name == "diamond") {
        report = run_diamond_experiment(load_graph(opt.graph), opt.runs,
                                        opt.common.seed);
    } else {
        throw Error(ErrorCode::UnknownExperiment,
                    "unknown experiment `" + opt.name + "`");
    }
    if (!opt.hist_out.empty()) {
        for (auto& [key, value] : report.details.items()) {
            if (key.size() < 5 || key.substr(key.size() - 5) != "_hist")
                continue;
            const std::string path = opt.hist_out + "_" + key + ".csv";
            std::ofstream out(path);
            if (!out)
                throw Error(ErrorCode::ParseError, "cannot write `" + path + "`");
            std::uint64_t bucket = 0;
            for (const auto& count : value)
                out << bucket++ << ',' << count.get<std::uint64_t>() << '\n';
        }
    }
    if (opt.common.format == "csv")
        std::cout << ExperimentReport::csv_header() << '\n';
    emit_report(std::cout, opt.common.format, report);
    return report.passed() ? 0 : kExitVerifyFailed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sinkpop: exact sampling of sink-free orientations by sink "
                 "popping, with exact small-instance oracles and an "
                 "experiment harness"};
    app.require_subcommand(1);

    std::string gen_spec, gen_out;
    auto* generate = app.add_subcommand(
        "generate", "write a named graph as an edge list");
    generate->add_option("spec", gen_spec,
                         "cycle:N | lollipop:N | theta:K | complete:N | "
                         "random:N:M:SEED | path to copy")
        ->required();
    generate->add_option("-o,--out", gen_out, "output file (default stdout)");

    SampleOpts sample_opts;
    auto* sample = app.add_subcommand(
        "sample", "draw uniform sink-free orientations (or spanning trees)");
    sample->add_option("graph", sample_opts.graph,
                       "edge-list file or pseudo-file like cycle:12")
        ->required();
    add_common(sample, sample_opts.common);
    sample->add_option("--rule", sample_opts.rule,
                       "queue-fifo | min-vertex-id | lifo-stack | "
                       "uniform-random-sink");
    sample->add_option("--count", sample_opts.count, "number of samples");
    sample->add_option("--stats", sample_opts.stats_path,
                       "stats stream path ('-' for stdout)");
    sample->add_option("--out", sample_opts.out_prefix,
                       "write each sample to PREFIX_<i>.txt");
    sample->add_option("--max-pops", sample_opts.max_pops,
                       "abort (exit 3) past this many pops");
    sample->add_flag("--tree", sample_opts.tree,
                     "sample a directed spanning tree by cycle popping");
    sample->add_flag("--bidirect", sample_opts.bidirect,
                     "treat the input as undirected and bidirect it");
    sample->add_option("--root", sample_opts.root, "tree root (with --tree)");

    EnumerateOpts enum_opts;
    auto* enumerate = app.add_subcommand(
        "enumerate", "exhaustively list sink-free orientations or trees");
    enumerate->add_option("graph", enum_opts.graph, "graph file or pseudo-file")
        ->required();
    add_common(enumerate, enum_opts.common);
    enumerate->add_flag("--members", enum_opts.members, "list every member");
    enumerate->add_flag("--exact", enum_opts.exact,
                        "emit the exact-chain report (E tau, E Q, absorption)");
    enumerate->add_flag("--trees", enum_opts.trees,
                        "enumerate directed spanning trees instead");
    enumerate->add_flag("--bidirect", enum_opts.bidirect,
                        "bidirect an undirected input (with --trees)");
    enumerate->add_option("--root", enum_opts.root, "tree root (with --trees)");

    VerifyOpts verify_opts;
    auto* verify = app.add_subcommand(
        "verify", "uniformity, diamond and monotonicity suites on one graph");
    verify->add_option("graph", verify_opts.graph, "graph file or pseudo-file")
        ->required();
    add_common(verify, verify_opts.common);
    verify->add_option("--samples", verify_opts.samples, "samples per test");
    verify->add_option("--alpha", verify_opts.alpha, "significance level");
    verify->add_option("--diamond-runs", verify_opts.diamond_runs,
                       "stack realizations for the diamond check");
    verify->add_option("--mono-runs", verify_opts.mono_runs,
                       "coupled runs for the monotonicity check");

    ExperimentOpts exp_opts;
    auto* experiment =
        app.add_subcommand("experiment", "run a named experiment");
    experiment->add_option("name", exp_opts.name,
                           "uniformity | strong-uniform-time | mean-tau | "
                           "q-bound | conditional-cycle | equality | extremal "
                           "| scaling | walk | diamond")
        ->required();
    add_common(experiment, exp_opts.common);
    experiment->add_option("--graph", exp_opts.graph, "graph for graph-based experiments");
    experiment->add_option("--n", exp_opts.n, "size parameter");
    experiment->add_option("--j", exp_opts.j, "initial clockwise edges");
    experiment->add_option("--samples", exp_opts.samples, "sample count");
    experiment->add_option("--runs", exp_opts.runs, "replication count");
    experiment->add_option("--alpha", exp_opts.alpha, "significance level");
    experiment->add_option("--family", exp_opts.family, "cycle | complete");
    experiment->add_option("--sizes", exp_opts.sizes, "sizes for scaling")
        ->delimiter(',');
    experiment->add_option("--hist-out", exp_opts.hist_out,
                           "write tau histograms as PREFIX_<name>.csv");

    ExperimentOpts bench_opts;
    bench_opts.samples = 1000;
    auto* bench = app.add_subcommand(
        "bench", "pop-work scaling benchmark (O(nm) claim)");
    add_common(bench, bench_opts.common);
    bench->add_option("--family", bench_opts.family, "cycle | complete");
    bench->add_option("--sizes", bench_opts.sizes, "comma-separated sizes")
        ->delimiter(',');
    bench->add_option("--samples", bench_opts.samples, "runs per size");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitParse;
    }

    try {
        if (generate->parsed()) return cmd_generate(gen_spec, gen_out);
        if (sample->parsed()) return cmd_sample(sample_opts);
        if (enumerate->parsed()) return cmd_enumerate(enum_opts);
        if (verify->parsed()) return cmd_verify(verify_opts);
        if (experiment->parsed()) return cmd_experiment(exp_opts);
        if (bench->parsed()) {
            bench_opts.name = "scaling";
            return cmd_experiment(bench_opts);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParse;
    }
    return 0;
}
