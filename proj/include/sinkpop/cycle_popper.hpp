#ifndef SINKPOP_CYCLE_POPPER_HPP
#define SINKPOP_CYCLE_POPPER_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "sinkpop/multigraph.hpp"

namespace sinkpop {

struct Arc {
    VertexId from;
    VertexId to;
};

using ArcId = int;

/// Directed multigraph; parallel arcs and self-arcs are allowed and sampled
/// among uniformly.
class Digraph {
public:
    static Digraph build(int vertex_count, std::span<const std::pair<int, int>> arcs);
    /// Every undirected edge becomes a pair of opposite arcs (self-loops one).
    static Digraph bidirect(const Multigraph& g);

    int vertex_count() const { return n_; }
    int arc_count() const { return static_cast<int>(arcs_.size()); }
    const Arc& arc(ArcId a) const { return arcs_[a]; }
    std::span<const ArcId> out_arcs(VertexId v) const {
        return {out_[v].data(), out_[v].size()};
    }
    int out_degree(VertexId v) const { return static_cast<int>(out_[v].size()); }

private:
    int n_ = 0;
    std::vector<Arc> arcs_;
    std::vector<std::vector<ArcId>> out_;
};

/// One out-arc per non-root vertex, acyclic, spanning: every vertex other
/// than the root has out-degree 1 and the root has out-degree 0.
struct DirectedSpanningTree {
    VertexId root = 0;
    std::vector<ArcId> parent_arc; // size n; -1 at the root
};

bool is_directed_spanning_tree(const Digraph& h, const DirectedSpanningTree& t);

/// A popped cycle, identified by the (vertex, stack depth) pairs consumed,
/// sorted by vertex. Fixed stacks yield the same multiset of these whatever
/// order cycles are popped in.
using PoppedCycle = std::vector<std::pair<VertexId, std::uint32_t>>;

enum class CycleSweep { AscendingVertex, DescendingVertex };

struct CyclePopConfig {
    std::optional<std::uint64_t> max_pops;
    bool record_cycles = false;
    CycleSweep sweep = CycleSweep::AscendingVertex;
};

struct DstResult {
    DirectedSpanningTree tree;
    std::uint64_t cycles_popped = 0;
    std::optional<std::vector<PoppedCycle>> cycles;
};

/// Wilson's cycle popping: per-vertex stacks of uniform out-arcs; pop cycles
/// in the currently selected arcs until a directed spanning tree remains.
/// Output is uniform over the directed spanning trees of (h, root).
DstResult sample_dst(const Digraph& h, VertexId root, std::uint64_t seed,
                     const CyclePopConfig& cfg = {});

/// Arc-list text format: first line `n m`, then m lines `from to`.
Digraph read_arc_list(std::istream& in);
void write_arc_list(std::ostream& out, const Digraph& h);
/// Tree format: one `vertex parent_arc` line per non-root vertex.
void write_tree(std::ostream& out, const DirectedSpanningTree& t);

} // namespace sinkpop

#endif
