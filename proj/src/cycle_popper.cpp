#include "sinkpop/cycle_popper.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <ostream>
#include <queue>
#include <sstream>

#include "sinkpop/stacks.hpp"

namespace sinkpop {

Digraph Digraph::build(int vertex_count,
                       std::span<const std::pair<int, int>> arcs) {
    if (vertex_count < 0)
        throw Error(ErrorCode::IndexOutOfRange, "negative vertex count");
    Digraph h;
    h.n_ = vertex_count;
    h.out_.resize(vertex_count);
    h.arcs_.reserve(arcs.size());
    for (std::size_t i = 0; i < arcs.size(); ++i) {
        auto [from, to] = arcs[i];
        if (from < 0 || from >= vertex_count || to < 0 || to >= vertex_count) {
            std::ostringstream msg;
            msg << "arc " << i << " = (" << from << "," << to
                << ") out of range for n=" << vertex_count;
            throw Error(ErrorCode::IndexOutOfRange, msg.str());
        }
        h.out_[from].push_back(static_cast<ArcId>(h.arcs_.size()));
        h.arcs_.push_back(Arc{from, to});
    }
    return h;
}

Digraph Digraph::bidirect(const Multigraph& g) {
    std::vector<std::pair<int, int>> arcs;
    for (const Edge& e : g.edges()) {
        arcs.emplace_back(e.a, e.b);
        if (!e.is_self_loop()) arcs.emplace_back(e.b, e.a);
    }
    return build(g.vertex_count(), arcs);
}

bool is_directed_spanning_tree(const Digraph& h, const DirectedSpanningTree& t) {
    const int n = h.vertex_count();
    if (static_cast<int>(t.parent_arc.size()) != n) return false;
    if (t.root < 0 || t.root >= n || t.parent_arc[t.root] != -1) return false;
    for (VertexId v = 0; v < n; ++v) {
        if (v == t.root) continue;
        ArcId a = t.parent_arc[v];
        if (a < 0 || a >= h.arc_count() || h.arc(a).from != v) return false;
    }
    // follow the chosen arcs from every vertex: must reach the root
    for (VertexId v = 0; v < n; ++v) {
        VertexId w = v;
        for (int steps = 0; w != t.root; ++steps) {
            if (steps > n) return false; // trapped in a cycle
            w = h.arc(t.parent_arc[w]).to;
        }
    }
    return true;
}

namespace {

/// Uniform out-arc of w at stack depth k: a pure function of (seed, w, k),
/// rejection sampled to kill modulo bias.
ArcId arc_at(const Digraph& h, std::uint64_t seed, VertexId w, std::uint32_t k) {
    const auto arcs = h.out_arcs(w);
    const std::uint64_t d = arcs.size();
    const std::uint64_t limit = (std::numeric_limits<std::uint64_t>::max() / d) * d;
    for (std::uint64_t attempt = 0;; ++attempt) {
        std::uint64_t r = prf_word(seed, static_cast<std::uint64_t>(w), k, attempt + 1);
        if (r < limit) return arcs[static_cast<std::size_t>(r % d)];
    }
}

void check_reaches_root(const Digraph& h, VertexId root) {
    const int n = h.vertex_count();
    if (root < 0 || root >= n)
        throw Error(ErrorCode::IndexOutOfRange, "root out of range");
    std::vector<std::vector<VertexId>> radj(n);
    for (ArcId a = 0; a < h.arc_count(); ++a)
        radj[h.arc(a).to].push_back(h.arc(a).from);
    std::vector<bool> seen(n, false);
    std::queue<VertexId> bfs;
    seen[root] = true;
    bfs.push(root);
    while (!bfs.empty()) {
        VertexId v = bfs.front();
        bfs.pop();
        for (VertexId u : radj[v])
            if (!seen[u]) {
                seen[u] = true;
                bfs.push(u);
            }
    }
    std::vector<VertexId> stuck;
    for (VertexId v = 0; v < n; ++v)
        if (!seen[v]) stuck.push_back(v);
    if (!stuck.empty()) {
        std::ostringstream msg;
        msg << "no directed spanning tree: vertices";
        for (VertexId v : stuck) msg << ' ' << v;
        msg << " cannot reach root " << root;
        throw Error(ErrorCode::NoSpanningTree, msg.str());
    }
}

} // namespace

DstResult sample_dst(const Digraph& h, VertexId root, std::uint64_t seed,
                     const CyclePopConfig& cfg) {
    check_reaches_root(h, root);
    const int n = h.vertex_count();

    std::vector<std::uint32_t> depth(n, 0);
    std::vector<ArcId> choice(n, -1);
    for (VertexId v = 0; v < n; ++v)
        if (v != root) choice[v] = arc_at(h, seed, v, 0);

    enum : std::uint8_t { kUnknown, kOnPath, kInTree };
    std::vector<std::uint8_t> state(n, kUnknown);
    std::vector<int> pos(n, -1);
    state[root] = kInTree;

    DstResult result;
    if (cfg.record_cycles) result.cycles.emplace();
    const std::uint64_t cap = cfg.max_pops.value_or(1ULL << 22);

    std::vector<VertexId> path;
    for (int i = 0; i < n; ++i) {
        VertexId start = cfg.sweep == CycleSweep::AscendingVertex ? i : n - 1 - i;
        if (state[start] != kUnknown) continue;
        path.clear();
        VertexId w = start;
        while (state[w] != kInTree) {
            if (state[w] == kOnPath) {
                // the walk closed a cycle: pop path[pos[w]..end]
                if (++result.cycles_popped > cap)
                    throw Error(ErrorCode::PopCapExceeded,
                                "cycle pop cap exceeded; no sample produced");
                PoppedCycle cycle;
                const std::size_t cut = static_cast<std::size_t>(pos[w]);
                for (std::size_t j = cut; j < path.size(); ++j) {
                    VertexId u = path[j];
                    cycle.emplace_back(u, depth[u]);
                    choice[u] = arc_at(h, seed, u, ++depth[u]);
                    state[u] = kUnknown;
                    pos[u] = -1;
                }
                path.resize(cut);
                if (result.cycles) {
                    std::sort(cycle.begin(), cycle.end());
                    result.cycles->push_back(std::move(cycle));
                }
                continue;
            }
            state[w] = kOnPath;
            pos[w] = static_cast<int>(path.size());
            path.push_back(w);
            w = h.arc(choice[w]).to;
        }
        for (VertexId u : path) state[u] = kInTree;
    }

    result.tree.root = root;
    result.tree.parent_arc.assign(n, -1);
    for (VertexId v = 0; v < n; ++v)
        if (v != root) result.tree.parent_arc[v] = choice[v];
    return result;
}

Digraph read_arc_list(std::istream& in) {
    int n = 0, m = 0;
    if (!(in >> n >> m))
        throw Error(ErrorCode::ParseError, "arc list: expected header `n m`");
    std::vector<std::pair<int, int>> arcs;
    arcs.reserve(m);
    for (int i = 0; i < m; ++i) {
        int from = 0, to = 0;
        if (!(in >> from >> to))
            throw Error(ErrorCode::ParseError, "arc list: fewer arcs than header");
        arcs.emplace_back(from, to);
    }
    return Digraph::build(n, arcs);
}

void write_arc_list(std::ostream& out, const Digraph& h) {
    out << h.vertex_count() << ' ' << h.arc_count() << '\n';
    for (ArcId a = 0; a < h.arc_count(); ++a)
        out << h.arc(a).from << ' ' << h.arc(a).to << '\n';
}

void write_tree(std::ostream& out, const DirectedSpanningTree& t) {
    for (VertexId v = 0; v < static_cast<VertexId>(t.parent_arc.size()); ++v)
        if (v != t.root) out << v << ' ' << t.parent_arc[v] << '\n';
}

} // namespace sinkpop
