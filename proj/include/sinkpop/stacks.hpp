#ifndef SINKPOP_STACKS_HPP
#define SINKPOP_STACKS_HPP

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "sinkpop/multigraph.hpp"

namespace sinkpop {

namespace detail {

inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
}

} // namespace detail

/// Counter-based pseudorandom word keyed by (seed, lane, counter, stream):
/// random access at any address, no stored state.
inline std::uint64_t prf_word(std::uint64_t seed, std::uint64_t lane,
                              std::uint64_t counter, std::uint64_t stream = 0) {
    std::uint64_t h = detail::mix64(seed ^ (lane * 0x9e3779b97f4a7c15ULL));
    h = detail::mix64(h ^ (counter * 0xc2b2ae3d27d4eb4fULL));
    if (stream) h = detail::mix64(h ^ (stream * 0x165667b19e3779f9ULL));
    return h;
}

/// Address-indexed supply of per-edge orientation stacks: the bit under edge
/// e at depth k is a pure function of (seed, e, k), so different choice rules
/// can replay identical randomness. Individual cells can be overridden, which
/// is how tests script stacks and how experiments condition on the initial
/// orientation without touching deeper entries.
class StackSource {
public:
    explicit StackSource(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    /// Depth-k orientation bit for edge e; self-loops always report 0.
    int orientation_at(const Multigraph& g, EdgeId e, std::uint32_t k) const {
        if (g.edge(e).is_self_loop()) return 0;
        return raw_bit(e, k);
    }

    /// Stack cell without the self-loop mask; callers that pin loops
    /// themselves (the popping loop, subgraph couplings) use this.
    int raw_bit(EdgeId e, std::uint32_t k) const {
        if (!overrides_.empty()) {
            auto it = overrides_.find(key(e, k));
            if (it != overrides_.end()) return it->second;
        }
        return static_cast<int>(prf_word(seed_, static_cast<std::uint64_t>(e), k) >> 63);
    }

    void set_override(EdgeId e, std::uint32_t k, int bit) {
        overrides_[key(e, k)] = static_cast<std::uint8_t>(bit & 1);
    }

    /// Pins every X_{e,0} to the given orientation; deeper entries stay random.
    void override_depth0(const Multigraph& g, const Orientation& o) {
        for (EdgeId e = 0; e < g.edge_count(); ++e)
            if (!g.edge(e).is_self_loop()) set_override(e, 0, o.bit(e));
    }

private:
    static std::uint64_t key(EdgeId e, std::uint32_t k) {
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(e)) << 32) | k;
    }

    std::uint64_t seed_;
    std::unordered_map<std::uint64_t, std::uint8_t> overrides_;
};

/// Current stack depth per edge: f(e) starts at 0 and increments exactly for
/// the edges incident to a popped sink.
class StackPointer {
public:
    explicit StackPointer(const Multigraph& g)
        : depth_(g.edge_count(), 0) {}

    std::uint32_t depth(EdgeId e) const { return depth_[e]; }

    /// Advances one edge's stack; returns the new depth.
    std::uint32_t advance(EdgeId e) { return ++depth_[e]; }

    /// Advances the stacks under every edge incident to the popped sink.
    void pop_at(const Multigraph& g, VertexId v) {
        for (EdgeId e : g.incident(v)) ++depth_[e];
    }

private:
    std::vector<std::uint32_t> depth_;
};

/// The orientation currently on top of the stacks.
Orientation current_orientation(const StackSource& src, const StackPointer& ptr,
                                const Multigraph& g);

} // namespace sinkpop

#endif
