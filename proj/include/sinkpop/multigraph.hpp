#ifndef SINKPOP_MULTIGRAPH_HPP
#define SINKPOP_MULTIGRAPH_HPP

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sinkpop/errors.hpp"

namespace sinkpop {

using VertexId = int;
using EdgeId = int;

struct Edge {
    VertexId a;
    VertexId b;

    bool is_self_loop() const { return a == b; }
    VertexId other(VertexId v) const { return v == a ? b : a; }
};

/// Undirected multigraph with parallel edges and at most one self-loop per
/// vertex. Edge ids 0..m-1 follow construction order and are stable; every
/// other module refers to edges by id.
class Multigraph {
public:
    static Multigraph build(int vertex_count,
                            std::span<const std::pair<int, int>> edges);

    int vertex_count() const { return n_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    /// Number of non-self-loop edges (the orientation degrees of freedom).
    int free_edge_count() const { return m0_; }

    const Edge& edge(EdgeId e) const { return edges_[e]; }
    const std::vector<Edge>& edges() const { return edges_; }

    /// Incident edge ids in id order; a self-loop appears once.
    std::span<const EdgeId> incident(VertexId v) const {
        return {incident_[v].data(), incident_[v].size()};
    }

    /// degree counts a self-loop once.
    int degree(VertexId v) const { return static_cast<int>(incident_[v].size()); }
    /// degree not counting self-loops.
    int deg0(VertexId v) const { return degree(v) - (has_loop_[v] ? 1 : 0); }
    bool has_self_loop(VertexId v) const { return has_loop_[v]; }

private:
    int n_ = 0;
    int m0_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<EdgeId>> incident_;
    std::vector<bool> has_loop_;
};

/// Per-edge direction bit: 0 means the head is endpoint a, 1 means the head
/// is endpoint b. Self-loops are pinned to 0 (they have a single orientation).
class Orientation {
public:
    Orientation() = default;
    explicit Orientation(int edge_count) : bits_(edge_count, 0) {}

    int size() const { return static_cast<int>(bits_.size()); }
    std::uint8_t bit(EdgeId e) const { return bits_[e]; }
    void set_bit(EdgeId e, std::uint8_t value) { bits_[e] = value; }

    VertexId head(const Multigraph& g, EdgeId e) const {
        const Edge& ed = g.edge(e);
        return bits_[e] ? ed.b : ed.a;
    }
    VertexId tail(const Multigraph& g, EdgeId e) const {
        const Edge& ed = g.edge(e);
        return bits_[e] ? ed.a : ed.b;
    }

    bool operator==(const Orientation&) const = default;

private:
    std::vector<std::uint8_t> bits_;
};

struct GraphClassReport {
    bool in_class_s = false;
    /// Vertex sets of components that are trees (self-loops count as edges).
    std::vector<std::vector<VertexId>> tree_components;
};

/// A component with k vertices and k-1 edges is a tree; graphs admit a
/// sink-free orientation exactly when no component is a tree.
GraphClassReport classify(const Multigraph& g);

/// Throws NotInClassSError when g has a tree component.
void require_class_s(const Multigraph& g, const std::string& who);

std::vector<int> out_degrees(const Multigraph& g, const Orientation& o);
bool is_sink(const Multigraph& g, const Orientation& o, VertexId v);
bool is_source(const Multigraph& g, const Orientation& o, VertexId v);
bool is_sfo(const Multigraph& g, const Orientation& o);
std::vector<VertexId> sinks(const Multigraph& g, const Orientation& o);
std::vector<VertexId> sources(const Multigraph& g, const Orientation& o);

/// Named generators. Cycle edge i joins v_i and v_{i+1 mod n}; a 1-cycle is a
/// vertex with a self-loop. Lollipop vertex 0 is the leaf and vertex n-1
/// carries the self-loop. Theta is k parallel edges on two vertices.
Multigraph make_cycle(int n);
Multigraph make_lollipop(int n);
Multigraph make_theta(int k);
Multigraph make_complete(int n);
/// Uniform-ish random multigraph retried until it lands in class S.
Multigraph make_random(int n, int m, std::uint64_t seed);

} // namespace sinkpop

#endif
