#include "sinkpop/multigraph.hpp"

#include <algorithm>
#include <queue>
#include <random>
#include <sstream>

namespace sinkpop {

Multigraph Multigraph::build(int vertex_count,
                             std::span<const std::pair<int, int>> edges) {
    if (vertex_count < 0)
        throw Error(ErrorCode::IndexOutOfRange, "negative vertex count");

    Multigraph g;
    g.n_ = vertex_count;
    g.incident_.resize(vertex_count);
    g.has_loop_.assign(vertex_count, false);
    g.edges_.reserve(edges.size());

    for (std::size_t i = 0; i < edges.size(); ++i) {
        auto [a, b] = edges[i];
        if (a < 0 || a >= vertex_count || b < 0 || b >= vertex_count) {
            std::ostringstream msg;
            msg << "edge " << i << " = (" << a << "," << b
                << ") out of range for n=" << vertex_count;
            throw Error(ErrorCode::IndexOutOfRange, msg.str());
        }
        EdgeId id = static_cast<EdgeId>(g.edges_.size());
        if (a == b) {
            if (g.has_loop_[a]) {
                std::ostringstream msg;
                msg << "vertex " << a << " already has a self-loop";
                throw Error(ErrorCode::DuplicateSelfLoop, msg.str());
            }
            g.has_loop_[a] = true;
            g.incident_[a].push_back(id);
        } else {
            g.incident_[a].push_back(id);
            g.incident_[b].push_back(id);
            ++g.m0_;
        }
        g.edges_.push_back(Edge{a, b});
    }
    return g;
}

GraphClassReport classify(const Multigraph& g) {
    const int n = g.vertex_count();
    std::vector<int> comp(n, -1);
    int comp_count = 0;
    for (VertexId start = 0; start < n; ++start) {
        if (comp[start] != -1) continue;
        int c = comp_count++;
        std::queue<VertexId> bfs;
        bfs.push(start);
        comp[start] = c;
        while (!bfs.empty()) {
            VertexId v = bfs.front();
            bfs.pop();
            for (EdgeId e : g.incident(v)) {
                VertexId u = g.edge(e).other(v);
                if (comp[u] == -1) {
                    comp[u] = c;
                    bfs.push(u);
                }
            }
        }
    }

    std::vector<int> vtx_count(comp_count, 0), edge_count(comp_count, 0);
    for (VertexId v = 0; v < n; ++v) ++vtx_count[comp[v]];
    for (EdgeId e = 0; e < g.edge_count(); ++e) ++edge_count[comp[g.edge(e).a]];

    GraphClassReport report;
    std::vector<bool> is_tree(comp_count);
    for (int c = 0; c < comp_count; ++c)
        is_tree[c] = (edge_count[c] == vtx_count[c] - 1);
    for (int c = 0; c < comp_count; ++c) {
        if (!is_tree[c]) continue;
        std::vector<VertexId> members;
        for (VertexId v = 0; v < n; ++v)
            if (comp[v] == c) members.push_back(v);
        report.tree_components.push_back(std::move(members));
    }
    report.in_class_s = report.tree_components.empty();
    return report;
}

void require_class_s(const Multigraph& g, const std::string& who) {
    GraphClassReport report = classify(g);
    if (report.in_class_s) return;
    std::ostringstream msg;
    msg << who << ": graph has no sink-free orientation; tree component(s):";
    for (const auto& members : report.tree_components) {
        msg << " {";
        for (std::size_t i = 0; i < members.size(); ++i)
            msg << (i ? " " : "") << members[i];
        msg << "}";
    }
    throw NotInClassSError(msg.str(), std::move(report.tree_components));
}

std::vector<int> out_degrees(const Multigraph& g, const Orientation& o) {
    std::vector<int> out(g.vertex_count(), 0);
    for (EdgeId e = 0; e < g.edge_count(); ++e) ++out[o.tail(g, e)];
    return out;
}

bool is_sink(const Multigraph& g, const Orientation& o, VertexId v) {
    if (g.degree(v) == 0 || g.has_self_loop(v)) return false;
    for (EdgeId e : g.incident(v))
        if (o.tail(g, e) == v) return false;
    return true;
}

bool is_source(const Multigraph& g, const Orientation& o, VertexId v) {
    if (g.degree(v) == 0 || g.has_self_loop(v)) return false;
    for (EdgeId e : g.incident(v))
        if (o.head(g, e) == v) return false;
    return true;
}

bool is_sfo(const Multigraph& g, const Orientation& o) {
    std::vector<int> out = out_degrees(g, o);
    for (VertexId v = 0; v < g.vertex_count(); ++v)
        if (g.degree(v) > 0 && out[v] == 0) return false;
    return true;
}

std::vector<VertexId> sinks(const Multigraph& g, const Orientation& o) {
    std::vector<VertexId> result;
    std::vector<int> out = out_degrees(g, o);
    for (VertexId v = 0; v < g.vertex_count(); ++v)
        if (g.degree(v) > 0 && out[v] == 0) result.push_back(v);
    return result;
}

std::vector<VertexId> sources(const Multigraph& g, const Orientation& o) {
    std::vector<VertexId> result;
    for (VertexId v = 0; v < g.vertex_count(); ++v)
        if (is_source(g, o, v)) result.push_back(v);
    return result;
}

Multigraph make_cycle(int n) {
    if (n < 1) throw Error(ErrorCode::IndexOutOfRange, "cycle needs n >= 1");
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
    return Multigraph::build(n, edges);
}

Multigraph make_lollipop(int n) {
    if (n < 1) throw Error(ErrorCode::IndexOutOfRange, "lollipop needs n >= 1");
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
    edges.emplace_back(n - 1, n - 1);
    return Multigraph::build(n, edges);
}

Multigraph make_theta(int k) {
    if (k < 2) throw Error(ErrorCode::IndexOutOfRange, "theta needs k >= 2");
    std::vector<std::pair<int, int>> edges(k, {0, 1});
    return Multigraph::build(2, edges);
}

Multigraph make_complete(int n) {
    if (n < 3) throw Error(ErrorCode::IndexOutOfRange, "complete needs n >= 3");
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
    return Multigraph::build(n, edges);
}

Multigraph make_random(int n, int m, std::uint64_t seed) {
    if (n < 1 || m < 0)
        throw Error(ErrorCode::IndexOutOfRange, "random graph needs n >= 1, m >= 0");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, n - 1);
    const int max_attempts = 1000;
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        std::vector<std::pair<int, int>> edges;
        std::vector<bool> has_loop(n, false);
        bool ok = true;
        for (int i = 0; i < m; ++i) {
            int tries = 0;
            for (;;) {
                int u = pick(rng), v = pick(rng);
                if (u == v && has_loop[u]) {
                    if (++tries > 64) { ok = false; break; }
                    continue;
                }
                if (u == v) has_loop[u] = true;
                edges.emplace_back(std::min(u, v), std::max(u, v));
                break;
            }
            if (!ok) break;
        }
        if (!ok) continue;
        Multigraph g = Multigraph::build(n, edges);
        if (classify(g).in_class_s) return g;
    }
    throw Error(ErrorCode::GenerationFailed,
                "could not draw a class-S graph; raise m or change seed");
}

} // namespace sinkpop
