#ifndef SINKPOP_EXACT_HPP
#define SINKPOP_EXACT_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "sinkpop/cycle_popper.hpp"
#include "sinkpop/multigraph.hpp"
#include "sinkpop/rational_linalg.hpp"

namespace sinkpop {

struct SfoCensus {
    std::uint64_t count = 0;
    std::vector<Orientation> members; // ascending packed-state order
};

/// Exhaustive sink-free-orientation census over all 2^m0 orientations.
/// Refuses graphs with more than 20 free edges.
SfoCensus enumerate_sfos(const Multigraph& g);

/// Sink selectors that are functions of the current orientation alone; queue
/// disciplines (FIFO/LIFO) carry history and cannot drive a state chain, but
/// every expectation below is rule-invariant anyway, which the tests check by
/// comparing these two.
enum class ExactRule { MinSink, MaxSink };

struct ExactScalar {
    double value = 0.0;
    std::optional<Rational> exact; // present on the rational path
    double residual = 0.0;         // iteration residual on the floating path
};

struct TauDistribution {
    std::vector<double> p;          // P(tau = k) for k = 0..K
    std::vector<Rational> p_exact;  // rational path only
    double tail = 0.0;              // transient mass beyond K
    std::optional<Rational> tail_exact;
    bool is_exact = false;
};

/// Absorbing Markov chain over the 2^m0 orientation states: from a
/// non-absorbing state the selected sink's deg0(v) edges are re-randomized
/// (2^deg0(v) equiprobable successors); the sink-free orientations absorb.
/// Up to 12 free edges everything is solved in exact rational arithmetic;
/// 13..20 free edges use sparse floating iteration with a residual bound.
class ExactChain {
public:
    static constexpr int kMaxFreeEdgesRational = 12;
    static constexpr int kMaxFreeEdges = 20;

    explicit ExactChain(const Multigraph& g, ExactRule rule = ExactRule::MinSink,
                        bool force_float = false);
    ~ExactChain();
    ExactChain(ExactChain&&) noexcept;
    ExactChain& operator=(ExactChain&&) noexcept;

    const Multigraph& graph() const;
    ExactRule rule() const;
    int free_edge_count() const;
    bool rational_mode() const;
    std::uint32_t state_count() const;

    std::uint32_t pack(const Orientation& o) const;
    Orientation unpack(std::uint32_t state) const;
    bool is_absorbing(std::uint32_t state) const;
    /// Vertex the rule pops from this state, or -1 when absorbing.
    VertexId popped_vertex(std::uint32_t state) const;

    /// E[tau] from the uniform initial orientation.
    ExactScalar expected_tau();
    /// E[tau | initial orientation].
    ExactScalar expected_tau_given(const Orientation& init);
    ExactScalar expected_tau_at(std::uint32_t state);

    /// E[Q(v)] from the uniform initial orientation.
    ExactScalar expected_q(VertexId v);
    ExactScalar expected_q_given(VertexId v, const Orientation& init);
    ExactScalar expected_q_at(VertexId v, std::uint32_t state);

    /// Absorption probabilities from the uniform initial orientation, in
    /// ascending packed-state order (aligned with absorbing_states()).
    std::vector<ExactScalar> absorption_distribution();
    const std::vector<std::uint32_t>& absorbing_states() const;

    TauDistribution tau_distribution(double tail_bound = 1e-12,
                                     std::uint64_t max_steps = 1u << 20);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

ExactScalar exact_expected_tau(const Multigraph& g,
                               ExactRule rule = ExactRule::MinSink);
ExactScalar exact_expected_tau(const Multigraph& g, const Orientation& init,
                               ExactRule rule = ExactRule::MinSink);
ExactScalar exact_expected_q(const Multigraph& g, VertexId v,
                             ExactRule rule = ExactRule::MinSink);
ExactScalar exact_expected_q(const Multigraph& g, VertexId v,
                             const Orientation& init,
                             ExactRule rule = ExactRule::MinSink);
std::vector<std::pair<Orientation, ExactScalar>> exact_absorption_distribution(
    const Multigraph& g, ExactRule rule = ExactRule::MinSink);
TauDistribution exact_tau_distribution(const Multigraph& g,
                                       double tail_bound = 1e-12,
                                       ExactRule rule = ExactRule::MinSink);

/// Exhaustive directed-spanning-tree oracle: iterates every out-arc choice
/// vector and keeps the acyclic spanning ones. Refuses instances whose
/// choice-vector count exceeds 10^6.
std::vector<DirectedSpanningTree> enumerate_dsts(const Digraph& h, VertexId root);

} // namespace sinkpop

#endif
